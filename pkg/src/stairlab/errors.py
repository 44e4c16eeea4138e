"""Shared error types and resource-guard plumbing.

Every potentially explosive computation in this package sits behind a guard
with a default cap that can be raised (or lowered) through an environment
variable, never silently.  Guard trips raise :class:`GuardError`, which the
service maps to HTTP 422 and the CLI maps to exit code 3; plain ``ValueError``
is reserved for usage/precondition problems (HTTP 400, exit code 2).
"""

from __future__ import annotations

import os

_ENV_PREFIX = "STAIRLAB_"


class GuardError(RuntimeError):
    """A resource guard refused to run a computation at the requested size."""


def guard_cap(name: str, default: int) -> int:
    """Return the integer cap for guard ``name``.

    Overridable via the environment variable ``STAIRLAB_<NAME>``.
    """
    raw = os.environ.get(_ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"bad value for {_ENV_PREFIX}{name.upper()}: {raw!r}") from exc


def check_guard(name: str, value: int, default_cap: int, what: str) -> None:
    """Raise :class:`GuardError` when ``value`` exceeds the configured cap."""
    cap = guard_cap(name, default_cap)
    if value > cap:
        # value can itself be astronomical (iterated-exponential sizes);
        # never stringify it in full.
        shown = str(value) if value.bit_length() <= 64 else f"about 2^{value.bit_length() - 1}"
        raise GuardError(
            f"{what} needs {shown}, above the cap {cap} "
            f"(override with {_ENV_PREFIX}{name.upper()})"
        )
