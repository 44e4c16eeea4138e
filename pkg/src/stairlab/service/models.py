"""Request models.  Exact scalars travel as strings (or ints); floats are
rejected at the boundary so no precision is lost silently.  Structured
geometry (point sets, box unions, grids) travels in the same JSON shapes
the core types serialize to, and is validated by their constructors."""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, StrictBool, StrictInt, StrictStr

ScalarIn = Union[StrictStr, StrictInt]
PointIn = list[ScalarIn]


class _Req(BaseModel):
    model_config = ConfigDict(extra="forbid")


# --- stair core ---


class PairIn(_Req):
    a: PointIn
    b: PointIn


class MemberIn(_Req):
    X: dict
    x: PointIn


class SetsIn(_Req):
    P: dict
    Q: dict


class RegionIn(_Req):
    S: dict


class ErodeIn(_Req):
    S: dict
    delta: ScalarIn


class GridCountIn(_Req):
    S: dict
    m: StrictInt


# --- grid ---


class GridBuildIn(_Req):
    d: StrictInt
    m: StrictInt


class GridMakeIn(_Req):
    d: StrictInt
    m: StrictInt
    X: list[list[ScalarIn]]


class GridPointPairIn(_Req):
    grid: dict
    p: PointIn
    q: PointIn


class GridPointIn(_Req):
    grid: dict
    p: PointIn


class DiagonalIn(_Req):
    grid: dict
    n: StrictInt


class CurvePositionIn(_Req):
    points: dict


# --- nets ---


class RefuteIn(_Req):
    N: dict
    trials: StrictInt = 200
    seed: StrictInt = 0


class HammersleyIn(_Req):
    s: StrictInt
    d: StrictInt


class EmptyBoxIn(_Req):
    N: dict


class VolumeBoundIn(_Req):
    v: ScalarIn
    d: StrictInt


class CertifyIn(_Req):
    N: dict
    eps: ScalarIn


class NetBuildIn(_Req):
    r: ScalarIn
    d: StrictInt


class TransferIn(_Req):
    grid: dict
    N: dict
    eps: ScalarIn
    direction: StrictStr  # "to_cube" or "to_grid"


class WeakCheckIn(_Req):
    X: dict
    N: dict
    r: ScalarIn


# --- chains ---


class AckermannIn(_Req):
    n: StrictInt
    k: Optional[StrictInt] = None


class AlphaIn(_Req):
    x: ScalarIn
    k: Optional[StrictInt] = None


class BetaIn(_Req):
    d: StrictInt
    r: ScalarIn


class Lemma10In(_Req):
    x: ScalarIn


class ChainsIn(_Req):
    k: StrictInt
    n: StrictInt


class StabbingIn(_Req):
    j: StrictInt
    k: StrictInt
    n: StrictInt


class Bounds3In(_Req):
    m: StrictInt


class FamilyIn(_Req):
    j: StrictInt
    n: StrictInt
    tuples: list[list[StrictInt]]


class DiagNetIn(_Req):
    grid: dict
    n: StrictInt
    r: ScalarIn
    ell: StrictInt
    family: FamilyIn


class NetToStabbingIn(_Req):
    grid: dict
    n: StrictInt
    N: dict
    r: ScalarIn


# --- triangles ---


class RhoIn(_Req):
    n: StrictInt
    t: StrictInt
    C: ScalarIn = 1


class TriangleGenIn(_Req):
    grid: dict
    rho: ScalarIn


class TriangleProbeIn(_Req):
    family: dict
    q: PointIn
    per_class: StrictBool = False


class ClassCountIn(_Req):
    family: dict
    q: PointIn
    dims: list[StrictInt]


class TypeClassesIn(_Req):
    q: PointIn
    X: dict


class SimplicesIn(_Req):
    q: PointIn
    X: dict
    only_far_apart: StrictBool = False
    grid: Optional[dict] = None
