"""Ackermann hierarchy with exact inverses, interval-chain stabbing with an
exact small-scale optimizer, and the two reductions between weak nets on the
diagonal and stabbing families.

Everything involving the Ackermann function runs behind a bit-length guard:
the values either fit comfortably or explode past any cap within a handful
of steps, so the guard trips fast instead of hanging.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import check_guard
from .geometry import Point, PointSet
from .grid import Diagonal
from .rational import Scalar, ceil_log2, log2_bounds, parse_scalar

_ACKERMANN_BITS = 1 << 20
_STABBING_CAP = 10**6


# ---------------------------------------------------------------------------
# Ackermann hierarchy


def _guard_bits(value: int) -> int:
    check_guard(
        "ACKERMANN_BITS", value.bit_length(), _ACKERMANN_BITS, "result bit length"
    )
    return value


def ackermann_A(k: int, n: int) -> int:
    """A_1(n) = 2n; A_k(n) = A_{k-1} applied n times to 1."""
    if k < 1:
        raise ValueError("need k >= 1")
    if n < 0:
        raise ValueError("need n >= 0")
    if k == 1:
        return _guard_bits(2 * n)
    if k == 2:
        check_guard("ACKERMANN_BITS", n + 1, _ACKERMANN_BITS, "result bit length")
        return 1 << n
    value = 1
    for _ in range(n):
        value = ackermann_A(k - 1, value)
        _guard_bits(value)
    return value


def ackermann(n: int) -> int:
    """A(n) = A_n(3); 6, 8, 16, 65536, then past any feasible guard."""
    if n < 1:
        raise ValueError("need n >= 1")
    return ackermann_A(n, 3)


def alpha_k(k: int, x: Scalar) -> int:
    """k-th inverse level: α_1 = ⌈x/2⌉, and for k ≥ 2 the number of times
    α_{k-1} must be applied to reach a value ≤ 1."""
    if k < 1:
        raise ValueError("need k >= 1")
    x = parse_scalar(x)
    if x < 0:
        raise ValueError("need x >= 0")
    if k == 1:
        return math.ceil(x / 2)
    if k == 2:
        # counting halvings-with-ceiling is exactly the ceiling of log2
        return ceil_log2(x) if x > 1 else 0
    count = 0
    while x > 1:
        x = alpha_k(k - 1, x)
        count += 1
    return count


def alpha(x: Scalar) -> int:
    """Inverse Ackermann: least k with α_k(x) ≤ 3."""
    x = parse_scalar(x)
    if x < 0:
        raise ValueError("need x >= 0")
    k = 1
    while alpha_k(k, x) > 3:
        k += 1
    return k


def beta_d(d: int, r: Scalar) -> Fraction:
    """Growth scale of the diagonal net lower bounds in dimension d: with
    t = ⌊d/2⌋ - 1 and a = α(r), (1/t!)·a^t for even d and
    (1/t!)·a^t·log₂ a for odd d.  The log factor is exact when a is a power
    of two and a certified lower enclosure otherwise (rounded down, so the
    reported bound never overstates)."""
    if d < 3:
        raise ValueError("need d >= 3")
    r = parse_scalar(r)
    if r < 1:
        raise ValueError("need r >= 1")
    a = alpha(r)
    t = d // 2 - 1
    base = Fraction(a) ** t / math.factorial(t)
    if d % 2 == 0:
        return base
    lo, _ = log2_bounds(Fraction(a))
    return base * lo


def check_lemma10(x: Scalar) -> bool:
    """Exact comparison α_{α(x)-3}(x) > A(α(x)-2); requires α(x) ≥ 4."""
    x = parse_scalar(x)
    a = alpha(x)
    if a < 4:
        raise ValueError(f"need alpha(x) >= 4, got {a}")
    return alpha_k(a - 3, x) > ackermann(a - 2)


# ---------------------------------------------------------------------------
# interval chains and stabbing


@dataclass(frozen=True)
class IntervalChain:
    """k consecutive, disjoint, nonempty integer intervals, encoded by
    breakpoints a_1 ≤ a_2 < a_3 < ... < a_{k+1}: the intervals are
    [a_1, a_2], [a_2+1, a_3], ..., [a_k+1, a_{k+1}]."""

    breakpoints: tuple[int, ...]

    def __post_init__(self) -> None:
        a = self.breakpoints
        if len(a) < 2:
            raise ValueError("need at least two breakpoints")
        if a[0] > a[1]:
            raise ValueError("first interval empty")
        if any(x >= y for x, y in zip(a[1:], a[2:])):
            raise ValueError("breakpoints after the second must strictly increase")

    @property
    def k(self) -> int:
        return len(self.breakpoints) - 1

    def intervals(self) -> list[tuple[int, int]]:
        a = self.breakpoints
        out = [(a[0], a[1])]
        out.extend((a[i] + 1, a[i + 1]) for i in range(1, len(a) - 1))
        return out

    def interval_index(self, p: int) -> Optional[int]:
        for i, (lo, hi) in enumerate(self.intervals()):
            if lo <= p <= hi:
                return i
        return None


@dataclass(frozen=True)
class StabTuple:
    p: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.p:
            raise ValueError("empty tuple")
        if any(x >= y for x, y in zip(self.p, self.p[1:])):
            raise ValueError("tuple entries must strictly increase")

    @property
    def j(self) -> int:
        return len(self.p)


@dataclass(frozen=True)
class StabFamily:
    j: int
    n: int
    tuples: tuple[StabTuple, ...]

    def __post_init__(self) -> None:
        for t in self.tuples:
            if t.j != self.j:
                raise ValueError("mixed tuple sizes in family")
            if t.p[0] < 1 or t.p[-1] > self.n:
                raise ValueError("tuple outside [1, n]")

    def to_json(self) -> dict:
        return {"j": self.j, "n": self.n, "tuples": [list(t.p) for t in self.tuples]}


def enumerate_chains(k: int, n: int) -> list[IntervalChain]:
    """All k-chains within [1, n] (empty when n < k)."""
    if k < 1:
        raise ValueError("need k >= 1")
    if n < 0:
        raise ValueError("need n >= 0")
    out = []
    for rest in combinations(range(1, n + 1), k):
        for a1 in range(1, rest[0] + 1):
            out.append(IntervalChain((a1,) + rest))
    return out


def stabs(z: StabTuple, c: IntervalChain) -> bool:
    """True iff every entry lands in an interval and no interval is used
    twice (entries increase, so indices must strictly increase)."""
    prev = -1
    for p in z.p:
        idx = c.interval_index(p)
        if idx is None or idx <= prev:
            return False
        prev = idx
    return True


def min_stabbing(j: int, k: int, n: int) -> tuple[int, StabFamily]:
    """Exact minimum number of j-tuples stabbing every k-chain in [1, n],
    with an optimal family, by branch-and-bound set cover."""
    if j < 1:
        raise ValueError("need j >= 1")
    chains = enumerate_chains(k, n)
    if not chains:
        return 0, StabFamily(j, n, ())
    if j > k:
        raise ValueError(f"a {j}-tuple cannot stab a {k}-chain: every entry needs its own interval")
    check_guard("STABBING_CAP", math.comb(n, j), _STABBING_CAP, "candidate tuples")
    cand = [StabTuple(c) for c in combinations(range(1, n + 1), j)]
    cover = []
    for t in cand:
        mask = 0
        for ci, c in enumerate(chains):
            if stabs(t, c):
                mask |= 1 << ci
        cover.append(mask)
    full = (1 << len(chains)) - 1
    union = 0
    for m in cover:
        union |= m
    if union != full:
        raise ValueError("some chain cannot be stabbed by any tuple")

    # greedy upper bound
    covered = 0
    greedy: list[int] = []
    while covered != full:
        best_i = max(range(len(cand)), key=lambda i: bin(cover[i] & ~covered).count("1"))
        greedy.append(best_i)
        covered |= cover[best_i]
    best_size = len(greedy)
    best_pick = list(greedy)

    chain_coverers: list[list[int]] = [[] for _ in chains]
    for i, m in enumerate(cover):
        mm = m
        while mm:
            b = (mm & -mm).bit_length() - 1
            chain_coverers[b].append(i)
            mm &= mm - 1

    # conflict[c] = chains sharing at least one coverer with chain c; any
    # set of pairwise non-conflicting chains needs one tuple each, giving
    # a lower bound for pruning
    conflict = [0] * len(chains)
    for m in cover:
        mm = m
        while mm:
            b = (mm & -mm).bit_length() - 1
            conflict[b] |= m
            mm &= mm - 1

    def branch(covered: int, picked: list[int]) -> None:
        nonlocal best_size, best_pick
        if covered == full:
            if len(picked) < best_size:
                best_size = len(picked)
                best_pick = list(picked)
            return
        scan = full & ~covered
        lb = 0
        while scan:
            b = (scan & -scan).bit_length() - 1
            lb += 1
            scan &= ~conflict[b]
        if len(picked) + lb >= best_size:
            # even a perfectly disjoint completion cannot beat the incumbent
            return
        # most-constrained uncovered chain
        rem = full & ~covered
        target = None
        target_opts = None
        mm = rem
        while mm:
            b = (mm & -mm).bit_length() - 1
            opts = [i for i in chain_coverers[b] if cover[i] & ~covered]
            if target is None or len(opts) < len(target_opts):
                target, target_opts = b, opts
                if len(opts) <= 1:
                    break
            mm &= mm - 1
        for i in sorted(target_opts, key=lambda i: -bin(cover[i] & ~covered).count("1")):
            picked.append(i)
            branch(covered | cover[i], picked)
            picked.pop()

    branch(0, [])
    fam = StabFamily(j, n, tuple(sorted((cand[i] for i in best_pick), key=lambda t: t.p)))
    return best_size, fam


def q3(m: int) -> int:
    """Chain-length threshold below which 3-tuple stabbing costs keep
    growing: 2m + 1."""
    if m < 3:
        raise ValueError("need m >= 3")
    return 2 * m + 1


def p3(m: int) -> int:
    """Chain-length threshold above which 3-tuple stabbing costs level
    off: 2m."""
    if m < 3:
        raise ValueError("need m >= 3")
    return 2 * m


# ---------------------------------------------------------------------------
# diagonal nets <-> stabbing families


def _block_layout(n: int, ell: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Split indices 0..n-1 into ell blocks with a 2-point separator pair
    between consecutive blocks; the leftover after floor-sizing goes to the
    last block.  Returns (blocks, separator pairs) as index ranges."""
    avail = n - 2 * (ell - 1)
    if ell < 1 or avail < ell:
        raise ValueError("not enough points for the requested block partition")
    base = avail // ell
    blocks = []
    seps = []
    pos = 0
    for b in range(ell):
        size = base if b < ell - 1 else avail - base * (ell - 1)
        blocks.append((pos, pos + size))
        pos += size
        if b < ell - 1:
            seps.append((pos, pos + 2))
            pos += 2
    assert pos == n
    return blocks, seps


def diag_net_from_stabbing(
    D: Diagonal, r: Scalar, ell: int, Z: StabFamily
) -> PointSet:
    """Turn a stabbing family of d-tuples on the separators into a weak
    1/r-net for the diagonal: each tuple entry picks a separator pair, and
    the output point takes, per coordinate, the midpoint of that pair's
    coordinates."""
    r = parse_scalar(r)
    if r < 1:
        raise ValueError("need r >= 1")
    d = D.spec.d
    pts = list(D.points)
    n = len(pts)
    k = math.floor(ell / r)
    ch = k - 1
    if ch < 1:
        raise ValueError("chain size floor(ell/r) - 1 must be at least 1")
    blocks, seps = _block_layout(n, ell)
    if Z.j != d:
        raise ValueError(f"need {d}-tuples, family has {Z.j}-tuples")
    if Z.n != ell - 1:
        raise ValueError(f"family range must be the {ell - 1} separators")
    for c in enumerate_chains(ch, ell - 1):
        if not any(stabs(t, c) for t in Z.tuples):
            raise ValueError("family fails to stab some chain on the separators")
    out = []
    for t in Z.tuples:
        coords = []
        for i in range(d):
            lo, _hi = seps[t.p[i] - 1]
            y, y2 = pts[lo], pts[lo + 1]
            coords.append((y[i] + y2[i]) / 2)
        out.append(Point(tuple(coords)))
    return PointSet.of(out, dim=d) if out else PointSet((), d)


@dataclass(frozen=True)
class NetToStabbingResult:
    family: StabFamily
    clamped: bool
    degenerate: tuple[tuple[int, ...], ...]


def net_to_stabbing(D: Diagonal, N: PointSet, r: Scalar) -> NetToStabbingResult:
    """The reverse reduction: mark the diagonal points surrounding each net
    point per coordinate as bad, partition into 4dℓ blocks, keep the first
    2dℓ good ones, and read off each net point's d-tuple of separator
    indices.  Tuples that fall outside the separator range are clamped (and
    flagged); tuples that fail to strictly increase are returned separately
    instead of silently dropped."""
    r = parse_scalar(r)
    if r < 1:
        raise ValueError("need r >= 1")
    d = D.spec.d
    pts = list(D.points)
    n = len(pts)
    ell = len(N)
    if ell < 1:
        raise ValueError("empty net")
    n_blocks = 4 * d * ell
    if n // n_blocks < 1:
        raise ValueError("diagonal too short for the 4·d·|N| block partition")
    base = n // n_blocks
    blocks = [
        (b * base, (b + 1) * base if b < n_blocks - 1 else n)
        for b in range(n_blocks)
    ]

    clamped = False
    bad: set[int] = set()
    coord_vals = [[p[j] for p in pts] for j in range(d)]
    for x in N:
        if x.dim != d:
            raise ValueError("net point dimension mismatch")
        for j in range(d):
            vals = coord_vals[j]
            pos = bisect_left(vals, x[j])
            if pos < n and vals[pos] == x[j]:
                bad.add(pos)
                continue
            if pos == 0 or pos == n:
                clamped = True
                bad.add(0 if pos == 0 else n - 1)
            else:
                bad.add(pos - 1)
                bad.add(pos)

    good = [
        (lo, hi)
        for lo, hi in blocks
        if not any(lo <= b < hi for b in bad)
    ][: 2 * d * ell]
    n_sep = 2 * d * ell - 1

    valid: list[StabTuple] = []
    degenerate: list[tuple[int, ...]] = []
    for x in N:
        entry = []
        for j in range(d):
            below = sum(1 for lo, hi in good if pts[hi - 1][j] < x[j])
            a = below
            if a < 1:
                a = 1
                clamped = True
            elif a > n_sep:
                a = n_sep
                clamped = True
            entry.append(a)
        if all(p < q for p, q in zip(entry, entry[1:])):
            valid.append(StabTuple(tuple(entry)))
        else:
            degenerate.append(tuple(entry))
    fam = StabFamily(d, n_sep, tuple(valid))
    return NetToStabbingResult(fam, clamped, tuple(degenerate))
