"""Command-line entry point: ``gposet <verb> ...``.

JSON goes to stdout (or ``-o FILE``); figures, when requested with
``--figures DIR``, are written as PNG files and listed on stderr.
Exit codes: 0 success, 1 verification failed, 2 invalid input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness
from . import serialize as ser
from .certificates import check_report
from .complexes import (
    MAX_SIMPLICES,
    boxtimes,
    e_space,
    face_poset,
    ind_upper,
    ind_zero,
    order_complex,
    subdivide,
    validate_complex,
)
from .crossindex import MAX_SEARCH_ORBITS, build_counterexample, xind, xind_zero
from .errors import GPosetError, InvalidInputError
from .groups import describe
from .posets import GPoset, product, q_poset, validate_gposet

log = logging.getLogger("gposet")

EXIT_OK, EXIT_FAILED = 0, 1


def _emit(args, obj) -> None:
    text = ser.dumps(obj)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figure_dir(args) -> Path | None:
    if not getattr(args, "figures", None):
        return None
    d = Path(args.figures)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _note_figure(path) -> None:
    print(f"figure: {path}", file=sys.stderr)


def _verdict_code(report: dict) -> int:
    return EXIT_OK if report.get("verdict") == "pass" else EXIT_FAILED


# --- group / poset ----------------------------------------------------------

def cmd_group_info(args):
    _emit(args, describe(ser.load_group(args.group)))
    return EXIT_OK


def cmd_poset_validate(args):
    # load without validating so the report can name the designated diagnostic
    P = ser.poset_from_json(ser.read_json(args.file), Path(args.file).parent, validate=False)
    rep = validate_gposet(P)
    out = {"valid": rep.ok, "code": rep.code, "message": rep.message, "size": P.size}
    if rep.ok:
        out["orbits"] = len(P.orbit_data)
        out["relations"] = int(P.less.sum())
    _emit(args, out)
    return EXIT_OK if rep.ok else InvalidInputError.exit_code


def cmd_poset_xind(args):
    P = ser.load_poset(args.file)
    res = xind(P, max_orbits=args.max_orbits)
    out = {
        "value": res.value,
        "witness": ser.witness_to_json(res.witness),
        "assignment": [list(a) for a in res.assignment],
        "lower_certificate": (ser.path_to_json(res.lower_certificate)
                              if res.lower_certificate is not None else None),
        "search_nodes": res.nodes,
    }
    _emit(args, out)
    return EXIT_OK


def cmd_poset_xind_zero(args):
    P = ser.load_poset(args.file)
    zero, certificate = xind_zero(P)
    if zero:
        out = {"xind_zero": True, "witness": ser.witness_to_json(certificate)}
    else:
        out = {"xind_zero": False, "certificate": ser.path_to_json(certificate)}
    _emit(args, out)
    return EXIT_OK


def cmd_poset_product(args):
    _emit(args, ser.poset_to_json(product(ser.load_poset(args.first), ser.load_poset(args.second))))
    return EXIT_OK


def cmd_poset_q(args):
    _emit(args, ser.poset_to_json(q_poset(ser.load_group(args.group), args.n)))
    return EXIT_OK


def cmd_counterexample(args):
    G = ser.load_group(args.group)
    report = harness.counterexample_report(G)
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        pair = build_counterexample(G)
        ser.write_json(d / "P1.json", ser.poset_to_json(pair.P1))
        ser.write_json(d / "P2.json", ser.poset_to_json(pair.P2))
    figdir = _figure_dir(args)
    if figdir:
        _counterexample_figure(G, figdir)
    _emit(args, report)
    return _verdict_code(report)


def _counterexample_figure(G, figdir: Path) -> None:
    from .plotting import counterexample_figure

    pair = build_counterexample(G)
    _note_figure(counterexample_figure(pair.P1, pair.P2, pair.h1, pair.h2,
                                       figdir / f"counterexample_{G.name}.png"))


# --- complexes --------------------------------------------------------------

def _load_complex_arg(path):
    """A complex file, or a poset file (its order complex is used)."""
    obj = ser.load_poset_or_complex(path)
    return order_complex(obj) if isinstance(obj, GPoset) else obj


def cmd_complex_order(args):
    _emit(args, ser.complex_to_json(order_complex(ser.load_poset(args.file))))
    return EXIT_OK


def cmd_complex_face_poset(args):
    _emit(args, ser.poset_to_json(face_poset(ser.load_complex(args.file))))
    return EXIT_OK


def cmd_complex_subdivide(args):
    K = subdivide(ser.load_complex(args.file), args.r, max_simplices=args.max_simplices)
    _emit(args, ser.complex_to_json(K))
    return EXIT_OK


def cmd_complex_boxtimes(args):
    _emit(args, ser.complex_to_json(boxtimes(ser.load_complex(args.first),
                                             ser.load_complex(args.second))))
    return EXIT_OK


def cmd_complex_e_space(args):
    _emit(args, ser.complex_to_json(e_space(ser.load_group(args.group), args.n)))
    return EXIT_OK


def cmd_complex_validate(args):
    K = ser.load_complex(args.file)
    rep = validate_complex(K)
    _emit(args, {"valid": rep.ok, "code": rep.code, "vertices": K.n_vertices,
                 "facets": len(K.facets), "dim": K.dim})
    return EXIT_OK


def cmd_complex_ind_zero(args):
    K = _load_complex_arg(args.file)
    zero, certificate = ind_zero(K)
    if zero:
        out = {"ind_zero": True, "map": list(certificate.map)}
    else:
        out = {"ind_zero": False, "certificate": ser.path_to_json(certificate)}
    _emit(args, out)
    return EXIT_OK


def cmd_complex_ind_upper(args):
    K = _load_complex_arg(args.file)
    rep = ind_upper(K, args.rmax, max_orbits=args.max_orbits, max_simplices=args.max_simplices)
    out = {"u": rep.values, "best": rep.best, "decreasing": rep.is_decreasing(),
           "truncated": rep.truncated,
           "witnesses": [ser.witness_to_json(r.witness) for r in rep.results]}
    _emit(args, out)
    return EXIT_OK


# --- harness ----------------------------------------------------------------

def cmd_verify_thm_main(args):
    G = ser.load_group(args.group)
    report = harness.verify_theorem_main(G)
    figdir = _figure_dir(args)
    if figdir:
        _counterexample_figure(G, figdir)
    _emit(args, report)
    return _verdict_code(report)


def cmd_verify_hcx1(args):
    G = ser.load_group(args.group)
    report = harness.verify_hcx1(G, trials=args.trials, seed=args.seed,
                                 max_orbit_count=args.orbits)
    _emit(args, report)
    return _verdict_code(report)


def cmd_experiment_gap(args):
    G = ser.load_group(args.group)
    report = harness.experiment_gap_search(G, args.orbits, args.trials, args.rmax,
                                           seed=args.seed, density=args.density,
                                           max_orbits=args.max_orbits)
    figdir = _figure_dir(args)
    if figdir:
        from .plotting import sequence_figure

        done = [i for i in report["quantities"]["instances"] if "u" in i]
        series = {i["poset"]: i["u"] for i in done}
        ref = {i["poset"]: i["n"] for i in done}
        _note_figure(sequence_figure(series, figdir / f"gap_search_{G.name}.png", ref,
                                     title=f"gap search over {G.name}"))
    _emit(args, report)
    return _verdict_code(report)


def cmd_experiment_subdivision(args):
    obj = ser.load_poset_or_complex(args.file)
    report = harness.experiment_subdivision(obj, args.rmax, max_orbits=args.max_orbits)
    figdir = _figure_dir(args)
    if figdir:
        from .plotting import sequence_figure

        name = Path(args.file).stem
        _note_figure(sequence_figure({name: report["quantities"]["u"]},
                                     figdir / f"subdivision_{name}.png",
                                     title=f"subdivision sequence: {name}"))
    _emit(args, report)
    return _verdict_code(report)


def cmd_check(args):
    res = check_report(ser.read_json(args.report))
    _emit(args, res.to_json())
    return EXIT_OK if res.ok else EXIT_FAILED


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write JSON here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--max-orbits", type=int, default=MAX_SEARCH_ORBITS,
                        help="refuse exhaustive searches above this many orbits "
                             "(default %(default)s; 0 disables the guard)")

    sizes = argparse.ArgumentParser(add_help=False)
    sizes.add_argument("--max-simplices", type=int, default=MAX_SIMPLICES,
                       help="subdivision size guard (default %(default)s)")

    figs = argparse.ArgumentParser(add_help=False)
    figs.add_argument("--figures", metavar="DIR", help="also render PNG figures into DIR")

    p = argparse.ArgumentParser(prog="gposet", description=__doc__.splitlines()[0])
    verbs = p.add_subparsers(dest="verb", required=True)

    def sub(parent, name, func, parents=(), help=None):
        sp = parent.add_parser(name, parents=[common, *parents], help=help)
        sp.set_defaults(func=func)
        return sp

    # group
    grp = verbs.add_parser("group", help="finite groups").add_subparsers(dest="action", required=True)
    sp = sub(grp, "info", cmd_group_info, help="orders, inverses, minimal subgroups, niceness")
    sp.add_argument("group", help="catalog name (Z6, Z2x2, D8, Q8, S3) or group file")

    # poset
    pos = verbs.add_parser("poset", help="free G-posets").add_subparsers(dest="action", required=True)
    sp = sub(pos, "validate", cmd_poset_validate, help="check a poset file")
    sp.add_argument("file")
    sp = sub(pos, "xind", cmd_poset_xind, [solver], help="exact cross-index with witness")
    sp.add_argument("file")
    sp = sub(pos, "xind-zero", cmd_poset_xind_zero, help="decide cross-index zero")
    sp.add_argument("file")
    sp = sub(pos, "product", cmd_poset_product, help="product with diagonal action")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = sub(pos, "q-poset", cmd_poset_q, help="the poset Q_n G")
    sp.add_argument("group")
    sp.add_argument("n", type=int)

    sp = verbs.add_parser("counterexample", parents=[common, figs],
                          help="the non-nice counterexample pair with certificates")
    sp.set_defaults(func=cmd_counterexample)
    sp.add_argument("group")
    sp.add_argument("--out-dir", help="also write P1.json and P2.json here")

    # complex
    cx = verbs.add_parser("complex", help="G-simplicial complexes").add_subparsers(
        dest="action", required=True)
    sp = sub(cx, "order-complex", cmd_complex_order, help="chains of a poset")
    sp.add_argument("file")
    sp = sub(cx, "face-poset", cmd_complex_face_poset, help="simplices ordered by inclusion")
    sp.add_argument("file")
    sp = sub(cx, "subdivide", cmd_complex_subdivide, [sizes], help="r-fold barycentric subdivision")
    sp.add_argument("file")
    sp.add_argument("--r", type=int, default=1)
    sp = sub(cx, "boxtimes", cmd_complex_boxtimes, help="simplicial product")
    sp.add_argument("first")
    sp.add_argument("second")
    sp = sub(cx, "e-space", cmd_complex_e_space, help="the join E_n G")
    sp.add_argument("group")
    sp.add_argument("n", type=int)
    sp = sub(cx, "validate", cmd_complex_validate, help="check a complex file")
    sp.add_argument("file")
    sp = sub(cx, "ind-zero", cmd_complex_ind_zero, help="decide mapping index zero")
    sp.add_argument("file", help="complex file, or poset file (order complex)")
    sp = sub(cx, "ind-upper", cmd_complex_ind_upper, [solver, sizes],
             help="upper bounds u_r = xind F(sd^r K)")
    sp.add_argument("file", help="complex file, or poset file (order complex)")
    sp.add_argument("--rmax", type=int, default=1)

    # verify
    ver = verbs.add_parser("verify", help="theorem checks").add_subparsers(dest="action", required=True)
    sp = sub(ver, "thm-main", cmd_verify_thm_main, [figs],
             help="index-1 factors with index-0 product (non-nice group)")
    sp.add_argument("group")
    sp = sub(ver, "hcx1", cmd_verify_hcx1, help="cross-index 1 survives products (nice group)")
    sp.add_argument("group")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--orbits", type=int, default=3, help="largest orbit count per factor")

    # experiments
    exp = verbs.add_parser("experiment", help="open-question probes").add_subparsers(
        dest="action", required=True)
    sp = sub(exp, "gap-search", cmd_experiment_gap, [solver, figs],
             help="search for min u_r < xind")
    sp.add_argument("group")
    sp.add_argument("--orbits", type=int, default=3)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--rmax", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--density", type=float, default=None,
                    help="fixed relation density (default: drawn per trial)")
    sp = sub(exp, "subdivision", cmd_experiment_subdivision, [solver, figs],
             help="the sequence r -> xind F(sd^r K)")
    sp.add_argument("file", help="poset or complex file")
    sp.add_argument("--rmax", type=int, default=2)

    sp = verbs.add_parser("check", parents=[common], help="re-validate a report offline")
    sp.set_defaults(func=cmd_check)
    sp.add_argument("report")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "max_orbits", None) == 0:
        args.max_orbits = None
    try:
        return args.func(args)
    except GPosetError as exc:
        print(f"gposet: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
