"""The compute service.  Every route is a thin wrapper: decode exact
inputs, call one core function, encode the result.  Domain errors
(ValueError) come back as 400; resource-guard trips as 422 with
kind="guard" so clients can distinguish "bad request" from "request too
big for the configured caps"."""

from __future__ import annotations

import math
import sys
import warnings

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import chains, grid, nets, stair, triangles
from ..errors import GuardError
from ..geometry import BoxUnion, Point, PointSet
from ..rational import format_scalar, parse_scalar
from . import models


def _point(data) -> Point:
    return Point.from_json(data)


def _pointset(data) -> PointSet:
    return PointSet.from_json(data)


def _boxunion(data) -> BoxUnion:
    return BoxUnion.from_json(data)


def _grid(data) -> grid.GridSpec:
    return grid.GridSpec.from_json(data)


def _family(data: models.FamilyIn) -> chains.StabFamily:
    return chains.StabFamily(
        data.j, data.n, tuple(chains.StabTuple(tuple(t)) for t in data.tuples)
    )


def create_app() -> FastAPI:
    # Tower-function outputs under the bit guard can exceed the default
    # int<->str conversion limit; raise it to a still-bounded ceiling.
    if sys.get_int_max_str_digits() < 2_000_000:
        sys.set_int_max_str_digits(2_000_000)
    app = FastAPI(title="stairlab", docs_url=None, redoc_url=None)

    @app.exception_handler(GuardError)
    async def _guard_handler(request: Request, exc: GuardError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"kind": "guard", "message": str(exc)}},
        )

    @app.exception_handler(ValueError)
    async def _value_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"kind": "value", "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz():
        return {"ok": True}

    # ------------------------------------------------------------------
    # stair core

    @app.post("/stair/path")
    def stair_path_route(req: models.PairIn):
        path = stair.stair_path(Point.of(req.a), Point.of(req.b))
        return {"path": path.to_json(), "segments": len(path.segments())}

    @app.post("/stair/point_types")
    def point_types_route(req: models.PairIn):
        types = stair.point_types(Point.of(req.b), Point.of(req.a))
        return {"types": sorted(types)}

    @app.post("/stair/sconv_contains")
    def sconv_contains_route(req: models.MemberIn):
        return {"contains": stair.sconv_contains(_pointset(req.X), Point.of(req.x))}

    @app.post("/stair/sconv_intersects")
    def sconv_intersects_route(req: models.SetsIn):
        P, Q = _pointset(req.P), _pointset(req.Q)
        w = stair.sconv_intersection_witness(P, Q)
        return {"intersects": w is not None, "witness": None if w is None else w.to_json()}

    @app.post("/stair/conv_contains")
    def conv_contains_route(req: models.MemberIn):
        return {"contains": stair.conv_contains(_pointset(req.X), Point.of(req.x))}

    @app.post("/stair/conv_intersects")
    def conv_intersects_route(req: models.SetsIn):
        return {"intersects": stair.conv_intersects(_pointset(req.P), _pointset(req.Q))}

    @app.post("/stair/is_stair_convex")
    def is_stair_convex_route(req: models.RegionIn):
        return {"stair_convex": stair.is_stair_convex(_boxunion(req.S))}

    @app.post("/stair/erode")
    def erode_route(req: models.ErodeIn):
        out = stair.erode(_boxunion(req.S), parse_scalar(req.delta))
        return {"S": out.to_json()}

    @app.post("/stair/volume")
    def volume_route(req: models.RegionIn):
        return {"volume": format_scalar(stair.volume(_boxunion(req.S)))}

    @app.post("/stair/grid_count")
    def grid_count_route(req: models.GridCountIn):
        return {"count": stair.grid_count(_boxunion(req.S), req.m)}

    # ------------------------------------------------------------------
    # stretched grid

    @app.post("/grid/build")
    def grid_build_route(req: models.GridBuildIn):
        return grid.build_grid(req.d, req.m).to_json()

    @app.post("/grid/make")
    def grid_make_route(req: models.GridMakeIn):
        cols = [[parse_scalar(x) for x in col] for col in req.X]
        return grid.make_grid(req.d, req.m, cols).to_json()

    @app.post("/grid/far_apart")
    def far_apart_route(req: models.GridPointPairIn):
        spec = _grid(req.grid)
        return {"far": grid.far_apart(Point.of(req.p), Point.of(req.q), spec)}

    @app.post("/grid/pi")
    def pi_route(req: models.GridPointIn):
        return {"u": grid.pi_map(Point.of(req.p), _grid(req.grid)).to_json()}

    @app.post("/grid/pi_inverse")
    def pi_inverse_route(req: models.GridPointIn):
        return {"p": grid.pi_inverse(Point.of(req.p), _grid(req.grid)).to_json()}

    @app.post("/grid/diagonal")
    def diagonal_route(req: models.DiagonalIn):
        D = grid.diagonal(_grid(req.grid), req.n)
        return D.to_json()

    @app.post("/grid/curve_position")
    def curve_position_route(req: models.CurvePositionIn):
        return {"ok": grid.check_curve_position(_pointset(req.points))}

    # ------------------------------------------------------------------
    # nets

    @app.post("/net/refute")
    def refute_route(req: models.RefuteIn):
        N = _pointset(req.N)
        res = nets.refute_net(N, trials=req.trials, seed=req.seed)
        if res is None:
            k = nets.choose_k(len(N), N.dim)
            T = math.comb(k - 1, N.dim - 1)
            return {"witness": None, "n": len(N), "k": k, "T": T}
        return {"witness": res.to_json(), "n": len(N), "k": res.k, "T": res.T}

    @app.post("/net/hammersley")
    def hammersley_route(req: models.HammersleyIn):
        return nets.hammersley(req.s, req.d).to_json()

    @app.post("/net/empty_box")
    def empty_box_route(req: models.EmptyBoxIn):
        res = nets.largest_empty_box(_pointset(req.N))
        return {"box": res.box.to_json(), "volume": format_scalar(res.v)}

    @app.post("/net/volume_bound")
    def volume_bound_route(req: models.VolumeBoundIn):
        b = nets.stair_volume_bound(parse_scalar(req.v), req.d)
        return {"bound": format_scalar(b)}

    @app.post("/net/certify")
    def certify_route(req: models.CertifyIn):
        cert = nets.certify_stair_net(_pointset(req.N), parse_scalar(req.eps))
        return {"certificate": None if cert is None else cert.to_json()}

    @app.post("/net/build")
    def net_build_route(req: models.NetBuildIn):
        N, cert, size = nets.build_stair_net_report(parse_scalar(req.r), req.d)
        return {"N": N.to_json(), "certificate": cert.to_json(), "size": size}

    @app.post("/net/transfer")
    def transfer_route(req: models.TransferIn):
        spec = _grid(req.grid)
        N = _pointset(req.N)
        eps = parse_scalar(req.eps)
        if req.direction == "to_cube":
            out, eps2 = nets.transfer_from_weak_net(N, eps, spec)
        elif req.direction == "to_grid":
            out, eps2 = nets.transfer_to_weak_net(N, eps, spec)
        else:
            raise ValueError("direction must be 'to_cube' or 'to_grid'")
        return {"N": out.to_json(), "eps": format_scalar(eps2)}

    @app.post("/net/weak_check")
    def weak_check_route(req: models.WeakCheckIn):
        ok = nets.brute_force_weak_net_check(
            _pointset(req.X), _pointset(req.N), parse_scalar(req.r)
        )
        return {"ok": ok}

    # ------------------------------------------------------------------
    # chains / Ackermann

    @app.post("/chains/ackermann")
    def ackermann_route(req: models.AckermannIn):
        if req.k is None:
            return {"value": chains.ackermann(req.n)}
        return {"value": chains.ackermann_A(req.k, req.n)}

    @app.post("/chains/alpha")
    def alpha_route(req: models.AlphaIn):
        x = parse_scalar(req.x)
        if req.k is None:
            return {"value": chains.alpha(x)}
        return {"value": chains.alpha_k(req.k, x)}

    @app.post("/chains/beta")
    def beta_route(req: models.BetaIn):
        return {"value": format_scalar(chains.beta_d(req.d, parse_scalar(req.r)))}

    @app.post("/chains/lemma10")
    def lemma10_route(req: models.Lemma10In):
        return {"holds": chains.check_lemma10(parse_scalar(req.x))}

    @app.post("/chains/enumerate")
    def enumerate_route(req: models.ChainsIn):
        out = chains.enumerate_chains(req.k, req.n)
        return {"chains": [list(c.breakpoints) for c in out]}

    @app.post("/chains/z")
    def z_route(req: models.StabbingIn):
        value, fam = chains.min_stabbing(req.j, req.k, req.n)
        return {"value": value, "family": fam.to_json()}

    @app.post("/chains/bounds3")
    def bounds3_route(req: models.Bounds3In):
        return {"q3": chains.q3(req.m), "p3": chains.p3(req.m)}

    @app.post("/chains/diag_net")
    def diag_net_route(req: models.DiagNetIn):
        D = grid.diagonal(_grid(req.grid), req.n)
        N = chains.diag_net_from_stabbing(D, parse_scalar(req.r), req.ell, _family(req.family))
        return {"N": N.to_json()}

    @app.post("/chains/net_to_stabbing")
    def net_to_stabbing_route(req: models.NetToStabbingIn):
        D = grid.diagonal(_grid(req.grid), req.n)
        res = chains.net_to_stabbing(D, _pointset(req.N), parse_scalar(req.r))
        return {
            "family": res.family.to_json(),
            "clamped": res.clamped,
            "degenerate": [list(t) for t in res.degenerate],
        }

    # ------------------------------------------------------------------
    # triangles

    @app.post("/triangles/rho")
    def rho_route(req: models.RhoIn):
        return {"rho": format_scalar(triangles.rho_for(req.n, req.t, parse_scalar(req.C)))}

    @app.post("/triangles/gen")
    def gen_route(req: models.TriangleGenIn):
        fam = triangles.gen_thin_triangles(_grid(req.grid), parse_scalar(req.rho))
        return fam.to_json()

    @app.post("/triangles/probe")
    def probe_route(req: models.TriangleProbeIn):
        fam = triangles.TriangleFamily.from_json(req.family)
        rep = triangles.probe_report(Point.of(req.q), fam)
        out = {
            "total": rep.total,
            "worst_class": None if rep.worst_class is None else list(rep.worst_class),
            "worst_count": rep.worst_count,
            "worst_bound": rep.worst_bound,
        }
        if req.per_class:
            out["per_class"] = [
                {"dims": list(dims), "count": c} for dims, c in sorted(rep.per_class.items())
            ]
        return out

    @app.post("/triangles/count")
    def count_route(req: models.TriangleProbeIn):
        fam = triangles.TriangleFamily.from_json(req.family)
        return {"count": triangles.count_containing(Point.of(req.q), fam)}

    @app.post("/triangles/class_count")
    def class_count_route(req: models.ClassCountIn):
        fam = triangles.TriangleFamily.from_json(req.family)
        count, bound = triangles.class_count_bound(
            Point.of(req.q), fam, tuple(req.dims)
        )
        return {"count": count, "bound": bound}

    @app.post("/triangles/type_classes")
    def type_classes_route(req: models.TypeClassesIn):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            sizes = triangles.type_class_sizes(Point.of(req.q), _pointset(req.X))
        return {"sizes": list(sizes), "warned": bool(caught)}

    @app.post("/triangles/simplices")
    def simplices_route(req: models.SimplicesIn):
        spec = None if req.grid is None else _grid(req.grid)
        count = triangles.count_simplices_containing(
            Point.of(req.q), _pointset(req.X), req.only_far_apart, spec
        )
        return {"count": count}

    return app
