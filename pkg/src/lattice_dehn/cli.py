"""Command-line interface: ``lattice-dehn <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .config import DEFAULT_COLUMN_CAPACITY, DEFAULT_PRECISION, DEFAULT_SAMPLES, DEFAULT_ZERO_TOLERANCE, Config, \
    format_decimal
from .dehn import DehnStatus, dehn_invariant, dehn_report, find_angle_relations, reduce
from .ehrhart import dilation_profile, fit_odd_cubic
from .geometry import GeometryError, LatticePolytope, as_rat, convex_hull, dilate, minkowski_sum, \
    polytope_from_json, polytope_to_json
from .invariants import CapacityExceeded, invariants_report
from .tiling import SampleDegeneracy, TileSet, obstruction_report, orthoscheme_cube_tiling, verify_multitile

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def load_polytope(spec: str, n: int | None = None) -> LatticePolytope:
    """``catalog:<name>`` or ``file:<path>`` (a bare path is read as a file)."""
    if spec.startswith("catalog:"):
        try:
            return catalog.lookup(spec[len("catalog:"):], n).polytope
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    path = spec[len("file:"):] if spec.startswith("file:") else spec
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    P = polytope_from_json(text)
    if P.name is None:
        P = P.renamed(Path(path).stem)
    return P


def _decimal(x, cfg: Config) -> str:
    return format_decimal(x, cfg.precision_bits)


def _facets_json(P: LatticePolytope) -> list:
    return [{"normal": list(f.halfspace.normal), "offset": str(f.halfspace.offset), "vertices": list(f.vertices)}
            for f in P.facets]


def cmd_hull(args, cfg):
    P = load_polytope(args.polytope, args.n)
    out = polytope_to_json(P)
    out.update({"dim": P.dim, "num_vertices": len(P.vertices), "num_edges": len(P.edges),
                "num_facets": len(P.facets), "facets": _facets_json(P),
                "edges": [list(e.vertices) for e in P.edges], "degenerate": P.is_degenerate,
                "lattice": P.is_lattice})
    return out, EXIT_OK


def cmd_volume(args, cfg):
    P = load_polytope(args.polytope, args.n)
    v = P.volume
    return {"polytope": P.name or "", "vol": str(v)}, EXIT_OK


def _inv(args, cfg):
    P = load_polytope(args.polytope, args.n)
    return invariants_report(P, cfg.precision_bits, cfg.zero_tolerance, cfg.column_capacity)


def cmd_chi(args, cfg):
    r = _inv(args, cfg)
    keys = ("polytope", "num_lattice_points", "chi", "chi_closed_form", "vol")
    return {k: r[k] for k in keys}, EXIT_OK


def cmd_defect(args, cfg):
    return _inv(args, cfg), EXIT_OK


def cmd_dehn(args, cfg):
    P = load_polytope(args.polytope, args.n)
    D = dehn_invariant(P, cfg.precision_bits)
    Dr = reduce(D)
    classes = list(dict.fromkeys(D.classes + Dr.classes))
    R = find_angle_relations(classes, cfg.precision_bits, args.method) if len(classes) <= args.max_classes \
        else None
    out = {"polytope": P.name or "", "unreduced": D.to_json(cfg.precision_bits)}
    out.update(dehn_report(Dr, R, cfg.precision_bits))
    code = EXIT_CAPACITY if out["is_zero"] == DehnStatus.UNKNOWN.value else EXIT_OK
    return out, code


def cmd_minkowski(args, cfg):
    polys = [load_polytope(s, args.n) for s in args.polytopes]
    weights = [as_rat(w) for w in args.weights] if args.weights else [Fraction(1)] * len(polys)
    if len(weights) != len(polys):
        raise UsageError("--weights needs one factor per polytope")
    S = minkowski_sum(*(dilate(P, w) for P, w in zip(polys, weights)), name=args.name)
    return polytope_to_json(S), EXIT_OK


def cmd_dilate(args, cfg):
    P = load_polytope(args.polytope, args.n)
    Q = dilate(P, as_rat(args.factor))
    out = polytope_to_json(Q)
    out["vol"] = str(Q.volume)
    return out, EXIT_OK


def cmd_ehrhart(args, cfg):
    P = load_polytope(args.polytope, args.n)
    prof = dilation_profile(P, args.t_max, cfg.column_capacity)
    fit = fit_odd_cubic(prof, cfg.precision_bits)
    out = {
        "polytope": P.name or "",
        "profile": [{"t": e.t, "chi": _decimal(e.chi.value(cfg.precision_bits), cfg), "vol": str(e.vol)}
                    for e in prof.entries],
        "fit": {name: _decimal(v, cfg) for name, v in zip(("c3", "c2", "c1", "c0"), fit.coefficients())},
        "fit_closed_form": {name: str(c.reduced(cfg.precision_bits)) for name, c in
                            zip(("c3", "c2", "c1", "c0"), fit.exact)},
        "residual": _decimal(fit.residual, cfg),
        "odd": fit.odd_exact,
    }
    return out, EXIT_OK


def cmd_obstruction(args, cfg):
    P = load_polytope(args.polytope, args.n)
    rep = obstruction_report(P, cfg.precision_bits, cfg.zero_tolerance, cfg.column_capacity)
    code = EXIT_CAPACITY if rep.verdict == "unknown" else EXIT_OK
    return rep.to_json(cfg.precision_bits), code


def cmd_verify_tiling(args, cfg):
    if args.tiles in ("catalog:orthoscheme", "catalog:orthoscheme-cube"):
        ts = orthoscheme_cube_tiling()
    else:
        path = args.tiles[len("file:"):] if args.tiles.startswith("file:") else args.tiles
        try:
            ts = TileSet.from_json(Path(path).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    region = load_polytope(args.region) if args.region else ts.region
    if region is None:
        raise UsageError("no region given (use --region or include it in the tile set)")
    res = verify_multitile(region, ts, cfg.sample_count, cfg.seed)
    return res.to_json(), EXIT_OK if res.verified else EXIT_FAIL


def cmd_catalog(args, cfg):
    if args.name is None:
        return {"names": catalog.names()}, EXIT_OK
    try:
        entry = catalog.lookup(args.name, args.n)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return polytope_to_json(entry.polytope), EXIT_OK


def cmd_reproduce(args, cfg):
    from .reproduce import run_all

    checks = run_all(cfg.precision_bits, cfg.sample_count, cfg.seed, cfg.column_capacity, args.big_n)
    ok = all(c.passed for c in checks)
    out = {"checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks], "passed": ok}
    if cfg.output == "text":
        return "\n".join(c.line() for c in checks) + f"\n{'ALL PASSED' if ok else 'FAILED'}", \
            EXIT_OK if ok else EXIT_FAIL
    return out, EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "hull": cmd_hull, "volume": cmd_volume, "chi": cmd_chi, "defect": cmd_defect, "dehn": cmd_dehn,
    "minkowski": cmd_minkowski, "dilate": cmd_dilate, "ehrhart": cmd_ehrhart, "obstruction": cmd_obstruction,
    "verify-tiling": cmd_verify_tiling, "catalog": cmd_catalog, "reproduce-paper": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=argparse.SUPPRESS,
                        help=f"working precision in bits (default {DEFAULT_PRECISION})")
    common.add_argument("--tolerance", default=argparse.SUPPRESS,
                        help=f"zero tolerance for the defect (default {DEFAULT_ZERO_TOLERANCE})")
    common.add_argument("--samples", type=int, default=argparse.SUPPRESS,
                        help=f"sample points for tiling checks (default {DEFAULT_SAMPLES})")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--output", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--capacity", type=int, default=argparse.SUPPRESS,
                        help=f"maximum lattice columns to scan (default {DEFAULT_COLUMN_CAPACITY})")

    p = argparse.ArgumentParser(prog="lattice-dehn", parents=[common],
                                description="Exact discrete volume, volume defect and Dehn invariants "
                                            "of 3D lattice polytopes.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def poly_cmd(name, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("polytope", help="catalog:<name> or file:<path>")
        s.add_argument("--n", type=int, help="size parameter for catalog families")
        return s

    poly_cmd("hull", "convex hull and face structure of a polytope or point set")
    poly_cmd("volume", "exact volume")
    poly_cmd("chi", "discrete (solid-angle) volume")
    poly_cmd("defect", "volume defect chi - vol")
    s = poly_cmd("dehn", "Dehn invariant, angle relations and zero test")
    s.add_argument("--method", choices=("exact", "numeric"), default="exact", help="relation search method")
    s.add_argument("--max-classes", type=int, default=200, help="skip the relation listing above this many classes")
    s = sub.add_parser("minkowski", parents=[common], help="Minkowski sum of polytopes")
    s.add_argument("polytopes", nargs="+")
    s.add_argument("--weights", nargs="+", help="dilation factor per summand")
    s.add_argument("--name")
    s.add_argument("--n", type=int)
    s = poly_cmd("dilate", "dilate by a rational factor")
    s.add_argument("factor")
    s = poly_cmd("ehrhart", "dilation profile of chi and its cubic fit")
    s.add_argument("--t-max", type=int, default=4)
    poly_cmd("obstruction", "multitiling obstruction report")
    s = sub.add_parser("verify-tiling", parents=[common], help="check a finite (multi)tiling")
    s.add_argument("tiles", help="file:<tileset.json> or catalog:orthoscheme")
    s.add_argument("--region", help="region polytope, if not stored in the tile set")
    s = sub.add_parser("catalog", parents=[common], help="print a catalog polytope")
    s.add_argument("name", nargs="?")
    s.add_argument("--n", type=int)
    s = sub.add_parser("reproduce-paper", parents=[common], help="run the full reproduction checks")
    s.add_argument("--big-n", type=int, default=100)
    return p


def make_config(args) -> Config:
    kw = {}
    for flag, key in (("precision", "precision_bits"), ("tolerance", "zero_tolerance"),
                      ("samples", "sample_count"), ("seed", "seed"), ("output", "output"),
                      ("capacity", "column_capacity")):
        if hasattr(args, flag):
            kw[key] = getattr(args, flag)
    return Config(**kw)


def _emit(out, cfg: Config, stream) -> None:
    if isinstance(out, str):
        stream.write(out + "\n")
    elif cfg.output == "json":
        stream.write(json.dumps(out, indent=2) + "\n")
    else:
        width = max((len(k) for k in out), default=0)
        for k, v in out.items():
            if not isinstance(v, (str, int, float, bool)) and v is not None:
                v = json.dumps(v)
            stream.write(f"{k.ljust(width)}  {v}\n")


def run(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        out, code = COMMANDS[args.command](args, cfg)
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, GeometryError, SampleDegeneracy, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(out, cfg, stream)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
