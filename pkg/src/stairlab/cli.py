"""Command-line front end.

Every compute command is a thin client over the service (in-process by
default, --server URL to hit a running instance).  Figure commands render
locally.  Exit codes: 0 ok, 2 usage/domain error, 3 resource-guard trip.

Artifacts are deterministic: JSON is written sorted with two-space indent,
CSV with a fixed column order, SVG with a constant banner.  Randomized
commands require an explicit --seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from .client import ServiceClient
from .errors import GuardError

_CACHE_ENV = "STAIRLAB_CACHE_DIR"


# ---------------------------------------------------------------------------
# small plumbing


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out: Optional[str]) -> None:
    text = _dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _point_arg(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty point {text!r}")
    return parts


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def _cache_dir() -> Path:
    root = os.environ.get(_CACHE_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "stairlab"


def _grid_json(client: ServiceClient, d: int, m: int) -> dict:
    """The --grid d,m flag: build once, cache on disk, reuse."""
    cache = _cache_dir() / f"grid_{d}_{m}.json"
    if cache.exists():
        return json.loads(cache.read_text())
    spec = client.post("/grid/build", {"d": d, "m": m})
    cache.parent.mkdir(parents=True, exist_ok=True)
    cache.write_text(_dumps(spec))
    return spec


def _grid_flag(text: str) -> tuple[int, int]:
    try:
        d, m = (int(p) for p in text.split(","))
    except Exception:
        raise ValueError(f"--grid expects 'd,m', got {text!r}") from None
    return d, m


def _write_csv(path: Optional[str], header: list[str], rows: list[list]) -> None:
    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)

    if path:
        with open(path, "w", newline="") as fh:
            write(fh)
    else:
        write(sys.stdout)


# ---------------------------------------------------------------------------
# grid


def _cmd_grid_build(client, args) -> int:
    spec = _grid_json(client, args.d, args.m)
    _emit(spec, args.out)
    return 0


def _cmd_grid_diagonal(client, args) -> int:
    d, m = args.grid
    res = client.post(
        "/grid/diagonal", {"grid": _grid_json(client, d, m), "n": args.n}
    )
    _emit(res, args.out)
    return 0


def _cmd_grid_pi(client, args) -> int:
    d, m = args.grid
    route = "/grid/pi_inverse" if args.inverse else "/grid/pi"
    res = client.post(route, {"grid": _grid_json(client, d, m), "p": args.p})
    _emit(res, None)
    return 0


def _cmd_grid_far(client, args) -> int:
    d, m = args.grid
    res = client.post(
        "/grid/far_apart",
        {"grid": _grid_json(client, d, m), "p": args.p, "q": args.q},
    )
    _emit(res, None)
    return 0


def _cmd_grid_curve(client, args) -> int:
    data = _load_json(args.infile)
    points = data["points"] if "points" in data and "dim" not in data else data
    res = client.post("/grid/curve_position", {"points": points})
    _emit(res, None)
    return 0


# ---------------------------------------------------------------------------
# net


def _cmd_net_refute(client, args) -> int:
    res = client.post(
        "/net/refute",
        {"N": _load_json(args.infile), "trials": args.trials, "seed": args.seed},
    )
    _emit(res["witness"] if args.out else res, args.out)
    return 0


def _cmd_net_certify(client, args) -> int:
    res = client.post(
        "/net/certify", {"N": _load_json(args.infile), "eps": args.eps}
    )
    _emit(res, args.out)
    return 0


def _cmd_net_build(client, args) -> int:
    res = client.post("/net/build", {"r": args.r, "d": args.d})
    _emit(res, args.out)
    return 0


def _cmd_net_hammersley(client, args) -> int:
    res = client.post("/net/hammersley", {"s": args.s, "d": args.d})
    _emit(res, args.out)
    return 0


def _cmd_net_empty_box(client, args) -> int:
    res = client.post("/net/empty_box", {"N": _load_json(args.infile)})
    _emit(res, args.out)
    return 0


def _cmd_net_volume_bound(client, args) -> int:
    res = client.post("/net/volume_bound", {"v": args.v, "d": args.d})
    _emit(res, None)
    return 0


def _cmd_net_weak_check(client, args) -> int:
    res = client.post(
        "/net/weak_check",
        {"X": _load_json(args.x), "N": _load_json(args.net), "r": args.r},
    )
    _emit(res, None)
    return 0


def _cmd_net_transfer(client, args) -> int:
    d, m = args.grid
    res = client.post(
        "/net/transfer",
        {
            "grid": _grid_json(client, d, m),
            "N": _load_json(args.infile),
            "eps": args.eps,
            "direction": args.direction,
        },
    )
    _emit(res, args.out)
    return 0


# ---------------------------------------------------------------------------
# chains


def _cmd_chains_z(client, args) -> int:
    res = client.post("/chains/z", {"j": args.j, "k": args.k, "n": args.n})
    print(res["value"])
    tuples = res["family"]["tuples"]
    print("{" + ",".join("(" + ",".join(str(v) for v in t) + ")" for t in tuples) + "}")
    return 0


def _cmd_chains_ackermann(client, args) -> int:
    res = client.post("/chains/ackermann", {"n": args.n, "k": args.k})
    print(res["value"])
    return 0


def _cmd_chains_alpha(client, args) -> int:
    res = client.post("/chains/alpha", {"x": args.x, "k": args.k})
    print(res["value"])
    return 0


def _cmd_chains_beta(client, args) -> int:
    res = client.post("/chains/beta", {"d": args.d, "r": args.r})
    print(res["value"])
    return 0


def _cmd_chains_lemma10(client, args) -> int:
    res = client.post("/chains/lemma10", {"x": args.x})
    print("true" if res["holds"] else "false")
    return 0


def _cmd_chains_enumerate(client, args) -> int:
    res = client.post("/chains/enumerate", {"k": args.k, "n": args.n})
    _emit(res, args.out)
    return 0


def _cmd_chains_bounds3(client, args) -> int:
    res = client.post("/chains/bounds3", {"m": args.m})
    _emit(res, None)
    return 0


def _cmd_chains_diag_net(client, args) -> int:
    d, m = args.grid
    res = client.post(
        "/chains/diag_net",
        {
            "grid": _grid_json(client, d, m),
            "n": args.n,
            "r": args.r,
            "ell": args.ell,
            "family": _load_json(args.family),
        },
    )
    _emit(res, args.out)
    return 0


def _cmd_chains_to_stabbing(client, args) -> int:
    d, m = args.grid
    res = client.post(
        "/chains/net_to_stabbing",
        {
            "grid": _grid_json(client, d, m),
            "n": args.n,
            "N": _load_json(args.infile),
            "r": args.r,
        },
    )
    _emit(res, args.out)
    return 0


# ---------------------------------------------------------------------------
# triangles


def _cmd_triangles_rho(client, args) -> int:
    res = client.post("/triangles/rho", {"n": args.n, "t": args.t, "C": args.C})
    print(res["rho"])
    return 0


def _cmd_triangles_gen(client, args) -> int:
    if args.grid is not None:
        d, m = args.grid
    else:
        d, m = 2, args.m
    if d != 2:
        raise ValueError("triangle families need a two-axis grid")
    if m is None:
        raise ValueError("pass --m or --grid d,m")
    res = client.post(
        "/triangles/gen", {"grid": _grid_json(client, d, m), "rho": args.rho}
    )
    _emit(res, args.out)
    return 0


def _cmd_triangles_probe(client, args) -> int:
    fam = _load_json(args.fam)
    probes = _load_json(args.points)["points"]

    def run(item):
        i, q = item
        rep = client.post("/triangles/probe", {"family": fam, "q": q})
        return i, q, rep

    items = list(enumerate(probes))
    if args.jobs and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, items))
    else:
        results = [run(item) for item in items]
    results.sort(key=lambda r: r[0])

    if args.report == "json":
        _emit([{"i": i, "q": q, **rep} for i, q, rep in results], args.out)
        return 0
    header = ["i", "qx", "qy", "total", "worst_class", "worst_count", "worst_bound"]
    rows = []
    for i, q, rep in results:
        wc = rep["worst_class"]
        rows.append(
            [
                i,
                q[0],
                q[1],
                rep["total"],
                "" if wc is None else ":".join(str(v) for v in wc),
                rep["worst_count"],
                rep["worst_bound"],
            ]
        )
    _write_csv(args.out, header, rows)
    return 0


def _cmd_triangles_count(client, args) -> int:
    res = client.post(
        "/triangles/count", {"family": _load_json(args.fam), "q": args.q}
    )
    print(res["count"])
    return 0


def _cmd_triangles_class_count(client, args) -> int:
    res = client.post(
        "/triangles/class_count",
        {"family": _load_json(args.fam), "q": args.q, "dims": args.dims},
    )
    _emit(res, None)
    return 0


def _cmd_triangles_classes(client, args) -> int:
    res = client.post(
        "/triangles/type_classes", {"q": args.q, "X": _load_json(args.infile)}
    )
    _emit(res, None)
    return 0


def _cmd_triangles_simplices(client, args) -> int:
    payload = {
        "q": args.q,
        "X": _load_json(args.infile),
        "only_far_apart": args.far,
    }
    if args.far:
        if args.grid is None:
            raise ValueError("--far needs --grid d,m")
        d, m = args.grid
        payload["grid"] = _grid_json(client, d, m)
    res = client.post("/triangles/simplices", payload)
    print(res["count"])
    return 0


# ---------------------------------------------------------------------------
# viz (local rendering)


def _cmd_viz_stairpath(client, args) -> int:
    from .geometry import StairPath
    from .svg import render_stair_path

    res = client.post("/stair/path", {"a": args.a, "b": args.b})
    Path(args.out).write_text(render_stair_path(StairPath.from_json(res["path"])))
    return 0


def _cmd_viz_points(client, args) -> int:
    from .geometry import PointSet
    from .svg import render_points

    Path(args.out).write_text(
        render_points(PointSet.from_json(_load_json(args.infile)))
    )
    return 0


def _cmd_viz_boxes(client, args) -> int:
    from .geometry import BoxUnion
    from .svg import render_box_union

    Path(args.out).write_text(
        render_box_union(BoxUnion.from_json(_load_json(args.infile)))
    )
    return 0


def _cmd_viz_hull(client, args) -> int:
    from .geometry import PointSet
    from .svg import render_stair_hull

    Path(args.out).write_text(
        render_stair_hull(
            PointSet.from_json(_load_json(args.infile)), resolution=args.resolution
        )
    )
    return 0


# ---------------------------------------------------------------------------
# bench


def _cmd_bench_refuter(client, args) -> int:
    def run(n: int):
        pts = client.post("/net/hammersley", {"s": n, "d": args.d})
        res = client.post(
            "/net/refute", {"N": pts, "trials": args.trials, "seed": args.seed}
        )
        w = res["witness"]
        if w is None:
            return [n, res["k"], res["T"], "", ""]
        return [n, w["k"], w["T"], w["count"], w["vol_lb"]]

    if args.jobs and args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(run, args.sizes))
    else:
        rows = [run(n) for n in args.sizes]
    rows.sort(key=lambda r: r[0])
    _write_csv(args.out, ["n", "k", "T", "best_count", "vol_lb"], rows)
    return 0


# ---------------------------------------------------------------------------
# serve


def _cmd_serve(client, args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="stairlab")
    top.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = top.add_subparsers(dest="command", required=True)

    # grid
    grid = sub.add_parser("grid", help="stretched grids").add_subparsers(
        dest="sub", required=True
    )
    p = grid.add_parser("build")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_grid_build)
    p = grid.add_parser("diagonal")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_grid_diagonal)
    p = grid.add_parser("pi")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--p", type=_point_arg, required=True)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=_cmd_grid_pi)
    p = grid.add_parser("far")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--p", type=_point_arg, required=True)
    p.add_argument("--q", type=_point_arg, required=True)
    p.set_defaults(func=_cmd_grid_far)
    p = grid.add_parser("curve")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_grid_curve)

    # net
    net = sub.add_parser("net", help="weak nets and refutation").add_subparsers(
        dest="sub", required=True
    )
    p = net.add_parser("refute")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_refute)
    p = net.add_parser("certify")
    p.add_argument("--eps", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_certify)
    p = net.add_parser("build")
    p.add_argument("--r", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_build)
    p = net.add_parser("hammersley")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_hammersley)
    p = net.add_parser("empty-box")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_empty_box)
    p = net.add_parser("volume-bound")
    p.add_argument("--v", required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=_cmd_net_volume_bound)
    p = net.add_parser("weak-check")
    p.add_argument("--x", required=True)
    p.add_argument("--net", required=True)
    p.add_argument("--r", required=True)
    p.set_defaults(func=_cmd_net_weak_check)
    p = net.add_parser("transfer")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--direction", choices=["to_cube", "to_grid"], required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_net_transfer)

    # chains
    chains = sub.add_parser("chains", help="interval chains and inverses").add_subparsers(
        dest="sub", required=True
    )
    p = chains.add_parser("z")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=_cmd_chains_z)
    p = chains.add_parser("ackermann")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=_cmd_chains_ackermann)
    p = chains.add_parser("alpha")
    p.add_argument("--x", required=True)
    p.add_argument("--k", type=int)
    p.set_defaults(func=_cmd_chains_alpha)
    p = chains.add_parser("beta")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--r", required=True)
    p.set_defaults(func=_cmd_chains_beta)
    p = chains.add_parser("lemma10")
    p.add_argument("--x", required=True)
    p.set_defaults(func=_cmd_chains_lemma10)
    p = chains.add_parser("enumerate")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_chains_enumerate)
    p = chains.add_parser("bounds3")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=_cmd_chains_bounds3)
    p = chains.add_parser("diag-net")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_chains_diag_net)
    p = chains.add_parser("to-stabbing")
    p.add_argument("--grid", type=_grid_flag, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_chains_to_stabbing)

    # triangles
    tri = sub.add_parser("triangles", help="thin triangle families").add_subparsers(
        dest="sub", required=True
    )
    p = tri.add_parser("rho")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--C", default="1")
    p.set_defaults(func=_cmd_triangles_rho)
    p = tri.add_parser("gen")
    p.add_argument("--m", type=int)
    p.add_argument("--grid", type=_grid_flag)
    p.add_argument("--rho", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_triangles_gen)
    p = tri.add_parser("probe")
    p.add_argument("--fam", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--report", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_triangles_probe)
    p = tri.add_parser("count")
    p.add_argument("--fam", required=True)
    p.add_argument("--q", type=_point_arg, required=True)
    p.set_defaults(func=_cmd_triangles_count)
    p = tri.add_parser("class-count")
    p.add_argument("--fam", required=True)
    p.add_argument("--q", type=_point_arg, required=True)
    p.add_argument("--dims", type=_int_list, required=True)
    p.set_defaults(func=_cmd_triangles_class_count)
    p = tri.add_parser("classes")
    p.add_argument("--q", type=_point_arg, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_triangles_classes)
    p = tri.add_parser("simplices")
    p.add_argument("--q", type=_point_arg, required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--far", action="store_true")
    p.add_argument("--grid", type=_grid_flag)
    p.set_defaults(func=_cmd_triangles_simplices)

    # viz
    viz = sub.add_parser("viz", help="SVG figures").add_subparsers(
        dest="sub", required=True
    )
    p = viz.add_parser("stairpath")
    p.add_argument("--a", type=_point_arg, required=True)
    p.add_argument("--b", type=_point_arg, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_viz_stairpath)
    p = viz.add_parser("points")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_viz_points)
    p = viz.add_parser("boxes")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_viz_boxes)
    p = viz.add_parser("hull")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--resolution", type=int, default=64)
    p.set_defaults(func=_cmd_viz_hull)

    # bench
    bench = sub.add_parser("bench", help="experiment harness").add_subparsers(
        dest="sub", required=True
    )
    p = bench.add_parser("refuter")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bench_refuter)

    # serve
    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return top


def main(argv=None) -> int:
    # Tower-function outputs under the bit guard can exceed the default
    # int<->str conversion limit; raise it to a still-bounded ceiling.
    if sys.get_int_max_str_digits() < 2_000_000:
        sys.set_int_max_str_digits(2_000_000)
    args = build_parser().parse_args(argv)
    client = ServiceClient(server=args.server)
    try:
        return args.func(client, args)
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
