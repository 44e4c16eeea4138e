"""Exact scalar arithmetic: parsing/formatting, dyadic sampling, and certified
rational enclosures of e, ln, and log2.

All geometric quantities in this package are ``fractions.Fraction`` values.
The only places where transcendental numbers appear (volume bounds of the
form e*v*ln(1/v)**k, the rho formula) go through the directed enclosures
below: each returns a pair (lo, hi) of rationals with lo <= true <= hi and
hi - lo <= 2**-bits, so callers can round outward and stay sound.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# parsing / formatting ("num/den" decimal strings, bit-exact round trip)


def parse_scalar(text) -> Fraction:
    """Parse an exact scalar from "num/den", "num", or a decimal string.

    Integers and Fractions pass through unchanged; floats are rejected
    (a float already lost exactness before it got here).
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"refusing inexact float {text!r}; pass a string like '1/3'")
    if not isinstance(text, str):
        raise ValueError(f"cannot parse scalar from {type(text).__name__}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar {text!r}") from exc


def format_scalar(x: Fraction) -> str:
    """Format as "num/den" ("num" when the denominator is 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def floor_div(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil_div(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def ceil_log2(x: Fraction) -> int:
    """Smallest integer n with 2**n >= x, for x > 0.  Exact."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ceil_log2 needs x > 0")
    num, den = x.numerator, x.denominator
    n = num.bit_length() - den.bit_length()
    # now 2**n is within a factor of 2 of x; fix up exactly
    while not (den << max(n, 0)) >= (num << max(-n, 0)):
        n += 1
    while n > 0 and (den << (n - 1)) >= num:
        n -= 1
    while n < 0 and den >= (num << (-n + 1)):
        n -= 1
    # invariant check is cheap and this function guards soundness elsewhere
    assert (den << max(n, 0)) >= (num << max(-n, 0))
    assert n == 0 or not (den << max(n - 1, 0)) >= (num << max(-(n - 1), 0))
    return n


# ---------------------------------------------------------------------------
# dyadic sampling (deterministic given a seed; 64 fractional bits)

DYADIC_BITS = 64


def dyadic_unit(rng: random.Random) -> Fraction:
    """A uniform dyadic rational in [0, 1) with 64 fractional bits."""
    return Fraction(rng.getrandbits(DYADIC_BITS), 1 << DYADIC_BITS)


def dyadic_in(rng: random.Random, lo: Fraction, hi: Fraction) -> Fraction:
    """A uniform dyadic sample in [lo, hi)."""
    return lo + dyadic_unit(rng) * (hi - lo)


# ---------------------------------------------------------------------------
# directed rounding helpers


def round_down(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic with denominator 2**bits that is <= x."""
    scaled = x * (1 << bits)
    return Fraction(floor_div(scaled), 1 << bits)


def round_up(x: Fraction, bits: int) -> Fraction:
    scaled = x * (1 << bits)
    return Fraction(ceil_div(scaled), 1 << bits)


# ---------------------------------------------------------------------------
# certified enclosures


def e_bounds(bits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational lo <= e <= hi with hi - lo <= 2**-bits.

    Partial sums of sum 1/k! underestimate e; the tail after the K-th term
    is below 2/(K+1)!, which is added to the upper bound.
    """
    target = Fraction(1, 1 << (bits + 2))
    total = Fraction(0)
    term = Fraction(1)
    k = 0
    while True:
        total += term
        k += 1
        term /= k
        if 2 * term <= target:
            break
    lo = round_down(total, bits + 2)
    hi = round_up(total + 2 * term, bits + 2)
    return lo, hi


def _atanh_times_2(y: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # 2*atanh(y) = 2*sum y^(2i+1)/(2i+1) for 0 <= y < 1; positive terms, so
    # partial sums are lower bounds.  Tail <= 2*y^(2N+1)/((2N+1)*(1-y^2)).
    assert 0 <= y < 1
    target = Fraction(1, 1 << (bits + 2))
    y2 = y * y
    power = y
    total = Fraction(0)
    i = 0
    while True:
        total += 2 * power / (2 * i + 1)
        power *= y2
        i += 1
        tail = 2 * power / ((2 * i + 1) * (1 - y2))
        if tail <= target:
            break
    return total, total + tail


_LN2_CACHE: dict[int, tuple[Fraction, Fraction]] = {}


def ln2_bounds(bits: int = 30) -> tuple[Fraction, Fraction]:
    """Enclosure of ln 2 via 2*atanh(1/3)."""
    if bits not in _LN2_CACHE:
        lo, hi = _atanh_times_2(Fraction(1, 3), bits + 4)
        _LN2_CACHE[bits] = (round_down(lo, bits + 4), round_up(hi, bits + 4))
    return _LN2_CACHE[bits]


def ln_bounds(x: Fraction, bits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ln x for x > 0, width <= 2**-bits."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("ln needs x > 0")
    if x == 1:
        return ZERO, ZERO
    if x < 1:
        lo, hi = ln_bounds(1 / x, bits)
        return -hi, -lo
    # write x = 2**e * m with m in [1, 2)
    e = ceil_log2(x)
    if (1 << max(e, 0)) * x.denominator != x.numerator << max(-e, 0):
        e -= 1  # 2**e <= x < 2**(e+1) unless x is an exact power of two
    m = x / Fraction(2) ** e
    assert 1 <= m < 2
    # working precision: the e*ln2 term scales the ln2 error by |e|
    work = bits + 4 + max(e, 1).bit_length()
    l2lo, l2hi = ln2_bounds(work)
    y = (m - 1) / (m + 1)  # in [0, 1/3)
    mlo, mhi = _atanh_times_2(y, work)
    lo = e * l2lo + mlo
    hi = e * l2hi + mhi
    return round_down(lo, bits + 2), round_up(hi, bits + 2)


def log2_bounds(x: Fraction, bits: int = 30) -> tuple[Fraction, Fraction]:
    """Rational enclosure of log2(x) for x > 0."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log2 needs x > 0")
    if x == 1:
        return ZERO, ZERO
    num = x.numerator
    if x.denominator == 1 and num & (num - 1) == 0:
        exact = Fraction(num.bit_length() - 1)
        return exact, exact
    work = bits + 6
    nlo, nhi = ln_bounds(x, work)
    dlo, dhi = ln2_bounds(work)
    if nlo >= 0:
        lo, hi = nlo / dhi, nhi / dlo
    else:
        lo, hi = nlo / dlo, nhi / dhi
    return round_down(lo, bits + 2), round_up(hi, bits + 2)


def certified_at_most_inverse_e(v: Fraction, bits: int = 30):
    """Three-way check of v <= 1/e: True / False / None (too close to call).

    None only happens when v sits inside the enclosure's uncertainty band,
    in which case callers must treat the hypothesis as unverified.
    """
    v = Fraction(v)
    elo, ehi = e_bounds(bits)
    if v * ehi <= 1:
        return True
    if v * elo > 1:
        return False
    return None


def frexp_fraction(x: Fraction) -> float:
    """Lossy float view of a Fraction that may overflow float range.

    Used only for human-facing reports (never for decisions).
    """
    try:
        return float(x)
    except OverflowError:
        return math.inf if x > 0 else -math.inf
