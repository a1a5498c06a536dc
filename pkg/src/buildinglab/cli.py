"""Command-line front end.

Every subcommand prints one JSON report on standard output and a short
prose summary on standard error, and exits 0 when all checks passed,
1 when a check failed, and 2 on usage errors.  A single --seed governs
all randomness, so reports are reproducible byte for byte apart from the
wall-time field.

    buildinglab coxeter --matrix FILE [--poincare]
    buildinglab field classify --field SPEC
    buildinglab field eval --field SPEC --expr LITERAL
    buildinglab projline hua --field SPEC --x LIT --y LIT
    buildinglab projline recover --field SPEC --samples N
    buildinglab building verify|cells|coords --geometry SPEC
    buildinglab moufang check --geometry SPEC [--mu] [--commutators]
    buildinglab moufang filtration --field SPEC --from K --to K
    buildinglab bt tree --field SPEC --radius R [--dot FILE]
    buildinglab bt iwasawa --field SPEC --samples N
    buildinglab bt boundary --field SPEC --depth D
    buildinglab all [--profile quick|full]
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .btree import (
    boundary_transitivity_check,
    build_tree_ball,
    cone_correspondence_report,
    iwasawa_report,
)
from .chambers import (
    build_flag_building,
    cell_decomposition_report,
    verify_building_axioms,
)
from .coxeter import CoxeterElement, build_coxeter_system, parse_coxeter_matrix
from .errors import BuildinglabError, InvalidSpec, NotFound, NotUnique
from .localfield import (
    INFINITY,
    classify,
    finite_field,
    parse_element,
    parse_field_spec,
)
from .moufang import (
    MoufangFrame,
    commutator_containment_check,
    filtration_indices,
    fit_parametrization,
    moufang_transitivity_check,
    mu_element,
    orbit_labeling_check,
    product_stabilizer_check,
    quadrangle_identity_check,
)
from .projline import (
    format_point,
    hua_triple_product,
    is_inf,
    parse_point,
    recovery_check,
)

SCHEMA = "buildinglab-report/1"
DEFAULT_SEED = 1


def _val_json(v):
    return "inf" if v == INFINITY else int(v)


def _check(checks: list, cid: str, ok: bool, witness=None) -> bool:
    entry = {"id": cid, "ok": bool(ok)}
    if witness is not None and not ok:
        entry["witness"] = witness
    checks.append(entry)
    return bool(ok)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (results, checks)

def cmd_coxeter(args):
    with open(args.matrix) as fh:
        matrix = parse_coxeter_matrix(fh.read())
    system = build_coxeter_system(matrix)
    results = {
        "rank": system.rank,
        "order": system.order,
        "longest_length": system.longest_element.length,
        "decomposable": system.is_decomposable(),
    }
    checks = []
    _check(checks, "system_enumerated", system.order > 0)
    if args.poincare:
        poincare = system.poincare_polynomial()
        results["poincare"] = poincare
        _check(checks, "poincare_palindromic",
               poincare == poincare[::-1], {"poincare": poincare})
        _check(checks, "poincare_counts_elements",
               sum(poincare) == system.order,
               {"sum": sum(poincare), "order": system.order})
    return results, checks


def cmd_field(args):
    field = parse_field_spec(args.field)
    checks = []
    if args.action == "classify":
        results = {"classification": classify(field)}
        _check(checks, "classified", True)
        return results, checks
    element = parse_element(field, args.expr)
    results = {
        "field": field.describe(),
        "expr": args.expr,
        "element": field.element_json(element),
        "formatted": field.format_element(element),
        "valuation": _val_json(field.valuation(element)),
    }
    _check(checks, "parsed", True)
    return results, checks


def cmd_projline(args):
    field = parse_field_spec(args.field)
    checks = []
    if args.action == "hua":
        x = parse_point(field, args.x)
        y = parse_point(field, args.y)
        value = hua_triple_product(field, x, y)
        results = {
            "field": field.describe(),
            "x": format_point(field, x),
            "y": format_point(field, y),
            "triple_product": format_point(field, value),
        }
        if not is_inf(x) and not is_inf(y):
            direct = field.mul(field.mul(x, y), x)
            results["direct_product"] = format_point(field, direct)
            agree = (not is_inf(value)) and field.eq(value, direct)
            _check(checks, "identity_matches_product", agree, results)
        else:
            _check(checks, "computed", True)
        return results, checks
    report = recovery_check(field, args.samples, args.seed)
    results = {
        "recovery": report,
        "checked": report["pairs_compared"],
        "failures": report["failures"],
    }
    _check(checks, "recovered_operations_match", report["ok"],
           {"failures": report["failures"]})
    return results, checks


def cmd_building(args):
    cx = build_flag_building(args.geometry)
    checks = []
    results = {"geometry": args.geometry, "chambers": cx.size}
    if args.action == "verify":
        report = verify_building_axioms(cx)
        results["axiom_report"] = report
        _check(checks, "B3_thickness", report["B3_thickness"]["ok"],
               report["B3_thickness"])
        _check(checks, "B2_w_consistency", report["B2_w_consistency"]["ok"],
               report["B2_w_consistency"])
        _check(checks, "B1_apartments", report["B1_apartments"]["ok"],
               report["B1_apartments"])
        return results, checks
    if args.action == "cells":
        report = cell_decomposition_report(cx, args.base)
        results["cells"] = {
            "".join(map(str, row["word"])) or "e": row["size"]
            for row in report["cells"]}
        results["cell_report"] = report
        _check(checks, "size_law", report["size_law_ok"], report["cells"])
        _check(checks, "partition_covers", report["covers_all_chambers"],
               {"total": report["total"], "chambers": cx.size})
        _check(checks, "every_cell_nonempty", report["every_w_nonempty"])
        return results, checks
    W = cx.coxeter
    if args.word:
        letters = tuple(int(tok) for tok in args.word.split(",") if tok != "")
        targets = [W.element_from_word(letters)]
    else:
        targets = [CoxeterElement(W, i) for i in range(W.order)]
    rows = []
    all_ok = True
    for w in targets:
        row = cx.schubert_coordinates(args.base, w).verify()
        rows.append(row)
        all_ok = all_ok and row["bijective"]
    results["coordinates"] = rows
    _check(checks, "coordinates_roundtrip", all_ok,
           [r for r in rows if not r["bijective"]])
    return results, checks


def _moufang_mu_block(frame, checks, label):
    F = finite_field(frame.q)
    unique = True
    witness = None
    for u in frame.root_group(1):
        if u == frame.identity:
            continue
        try:
            mu_element(frame, u, 1)
        except (NotFound, NotUnique) as exc:
            unique = False
            witness = str(exc)
    _check(checks, f"mu_unique:{label}", unique, witness)
    try:
        fit = fit_parametrization(frame, F, 1)
        labels = orbit_labeling_check(frame, fit["x"], 1)
        formula_ok = labels["ok"]
        info = {"mu_unique": unique, "formula_ok": True,
                "orbit_labels": labels["labels"]}
    except (NotFound, NotUnique) as exc:
        formula_ok = False
        info = {"mu_unique": unique, "formula_ok": False, "error": str(exc)}
    _check(checks, f"mu_product_formula:{label}", formula_ok, info)
    return info


def _moufang_commutator_block(frame, checks, label):
    n = frame.n
    stab_rows = []
    stabs_ok = True
    for j in range(0, n - 2):
        for i in range(1, n - j + 1):
            row = product_stabilizer_check(frame, i, j)
            stab_rows.append(row)
            stabs_ok = stabs_ok and row["ok"]
    _check(checks, f"product_stabilizers:{label}", stabs_ok,
           [r for r in stab_rows if not r["ok"]])
    containment = commutator_containment_check(frame)
    _check(checks, f"commutator_containments:{label}", containment["ok"],
           containment["pairs"])
    info = {"stabilizers": stab_rows, "containments": containment}
    if n == 4:
        quad = quadrangle_identity_check(frame, finite_field(frame.q))
        info["quadrangle_identity"] = quad
        _check(checks, f"quadrangle_identity:{label}", quad["ok"], quad)
    return info


def cmd_moufang(args):
    checks = []
    if args.action == "filtration":
        field = parse_field_spec(args.field)
        report = filtration_indices(field, args.k_lo, args.k_hi,
                                    seed=args.seed)
        results = {"filtration": report, "indices": report["indices"]}
        _check(checks, "filtration_indices", report["ok"], report["levels"])
        return results, checks
    cx = build_flag_building(args.geometry)
    trans = moufang_transitivity_check(cx, exhaustive=True)
    results = {
        "geometry": args.geometry,
        "transitivity": trans,
        "roots_checked": trans["roots_checked"],
        "orbit_counts": trans["apartments_per_root"],
    }
    _check(checks, "moufang_transitivity", trans["ok"],
           trans["failures"])
    frame = MoufangFrame(cx)
    if args.mu:
        results["mu"] = _moufang_mu_block(frame, checks, args.geometry)
    if args.commutators:
        results["commutators"] = _moufang_commutator_block(
            frame, checks, args.geometry)
    return results, checks


def cmd_bt(args):
    field = parse_field_spec(args.field)
    checks = []
    if args.action == "tree":
        ball = build_tree_ball(field, args.radius)
        report = ball.report()
        results = {"tree": report}
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(ball.dot())
            results["dot_file"] = args.dot
        _check(checks, "ball_shape", report["ok"], report)
        return results, checks
    if args.action == "iwasawa":
        report = iwasawa_report(field, args.samples, args.seed)
        results = {"iwasawa": report}
        _check(checks, "iwasawa_decompositions", report["ok"],
               report["failures"])
        return results, checks
    report = boundary_transitivity_check(field, args.depth)
    results = {"boundary": report}
    _check(checks, "boundary_single_orbit", report["ok"], report)
    return results, checks


# ---------------------------------------------------------------------------
# the acceptance bundle

def run_all(profile: str, seed: int):
    samples = 100 if profile == "quick" else 1000
    checks: list = []
    results: dict = {"profile": profile, "sample_cap": samples}

    cells = {}
    for spec, total in (("PG2:q=2", 21), ("PG2:q=3", 52), ("W:q=2", 45)):
        cx = build_flag_building(spec)
        report = cell_decomposition_report(cx, 0)
        coord_fail = []
        for widx in range(cx.coxeter.order):
            w = CoxeterElement(cx.coxeter, widx)
            row = cx.schubert_coordinates(0, w).verify()
            if not row["bijective"]:
                coord_fail.append(row)
        ok = (cx.size == total and report["size_law_ok"]
              and report["covers_all_chambers"]
              and report["every_w_nonempty"] and not coord_fail)
        cells[spec] = {"chambers": cx.size, "expected": total,
                       "size_law_ok": report["size_law_ok"],
                       "coordinate_failures": coord_fail}
        _check(checks, f"schubert:{spec}", ok, cells[spec])
    results["schubert"] = cells

    recovery = {}
    for spec in ("F7", "F4", "Qp:p=5,prec=8", "Laurent:q=3,prec=8"):
        field = parse_field_spec(spec)
        report = recovery_check(field, samples, seed)
        recovery[spec] = report
        _check(checks, f"hua_recovery:{spec}", report["ok"], report)
    results["hua_recovery"] = recovery

    moufang = {}
    for spec in ("PG2:q=2", "PG2:q=3", "W:q=2"):
        cx = build_flag_building(spec)
        block = {}
        trans = moufang_transitivity_check(cx, exhaustive=True)
        block["transitivity"] = trans
        _check(checks, f"moufang_transitivity:{spec}", trans["ok"],
               trans["failures"])
        frame = MoufangFrame(cx)
        block["mu"] = _moufang_mu_block(frame, checks, spec) \
            if spec.startswith("PG2") else None
        block["commutators"] = _moufang_commutator_block(frame, checks, spec)
        moufang[spec] = block
    results["moufang"] = moufang

    filtration = {}
    for spec in ("Qp:p=2,prec=8", "Qp:p=5,prec=8", "Laurent:q=3,prec=8"):
        field = parse_field_spec(spec)
        report = filtration_indices(field, 0, 3, seed=seed)
        filtration[spec] = report
        _check(checks, f"filtration:{spec}", report["ok"], report["levels"])
    results["filtration"] = filtration

    q5 = parse_field_spec("Qp:p=5,prec=8")
    iwasawa = iwasawa_report(q5, samples, seed)
    results["iwasawa"] = iwasawa
    _check(checks, "iwasawa:Q5", iwasawa["ok"], iwasawa["failures"])

    boundary = {}
    for p in (2, 3, 5):
        field = parse_field_spec(f"Qp:p={p},prec=8")
        rows = []
        ok = True
        for depth in (1, 2, 3, 4):
            report = boundary_transitivity_check(field, depth)
            rows.append(report)
            ok = ok and report["ok"]
        boundary[f"q={p}"] = rows
        _check(checks, f"boundary_transitivity:q={p}", ok,
               [r for r in rows if not r["ok"]])
    results["boundary_transitivity"] = boundary

    trees = {}
    for p in (2, 3):
        field = parse_field_spec(f"Qp:p={p},prec=8")
        ball_rows = [build_tree_ball(field, r).report() for r in range(5)]
        cone = cone_correspondence_report(field, depth=4,
                                          pairs=min(samples, 200), seed=seed)
        trees[f"q={p}"] = {"balls": ball_rows, "cone": cone}
        _check(checks, f"tree_balls:q={p}", all(b["ok"] for b in ball_rows),
               [b for b in ball_rows if not b["ok"]])
        _check(checks, f"cone_correspondence:q={p}", cone["ok"], cone)
    results["tree_geometry"] = trees

    return results, checks


def cmd_all(args):
    return run_all(args.profile, args.seed)


# ---------------------------------------------------------------------------
# parser and dispatch

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for all randomness (default 1)")
    common.add_argument("--json-only", action="store_true",
                        help="suppress the prose summary on stderr")

    parser = argparse.ArgumentParser(
        prog="buildinglab",
        description="Spherical buildings, Moufang root groups, local "
                    "fields, and Bruhat-Tits trees, with JSON reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coxeter", parents=[common],
                       help="enumerate a Coxeter system from a matrix file")
    p.add_argument("--matrix", required=True,
                   help="file with one space-separated matrix row per line")
    p.add_argument("--poincare", action="store_true",
                   help="include the length generating polynomial")
    p.set_defaults(handler=cmd_coxeter)

    p = sub.add_parser("field", parents=[common],
                       help="inspect a finite or local field")
    p.add_argument("action", choices=["classify", "eval"])
    p.add_argument("--field", required=True, help="field spec, e.g. F9, "
                   "Qp:p=5,prec=8, Laurent:q=3,prec=8")
    p.add_argument("--expr", help="element literal (for eval)")
    p.set_defaults(handler=cmd_field)

    p = sub.add_parser("projline", parents=[common],
                       help="projective-line identities and field recovery")
    p.add_argument("action", choices=["hua", "recover"])
    p.add_argument("--field", required=True)
    p.add_argument("--x", help="point literal (hua)")
    p.add_argument("--y", help="point literal (hua)")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(handler=cmd_projline)

    p = sub.add_parser("building", parents=[common],
                       help="chamber complexes of flag geometries")
    p.add_argument("action", choices=["verify", "cells", "coords"])
    p.add_argument("--geometry", required=True,
                   help="PG2:q=<n> | W:q=<n> | Aflags:n=<k>,q=<n>")
    p.add_argument("--base", type=int, default=0,
                   help="base chamber index")
    p.add_argument("--word", help="comma-separated reduced word (coords)")
    p.set_defaults(handler=cmd_building)

    p = sub.add_parser("moufang", parents=[common],
                       help="root groups, mu elements, filtrations")
    p.add_argument("action", choices=["check", "filtration"])
    p.add_argument("--geometry", help="rank-2 geometry spec (check)")
    p.add_argument("--field", help="local field spec (filtration)")
    p.add_argument("--mu", action="store_true",
                   help="fit parametrizations and verify the mu formula")
    p.add_argument("--commutators", action="store_true",
                   help="product stabilizers and commutator containments")
    p.add_argument("--from", dest="k_lo", type=int, default=0,
                   help="first filtration level")
    p.add_argument("--to", dest="k_hi", type=int, default=3,
                   help="last filtration level")
    p.set_defaults(handler=cmd_moufang)

    p = sub.add_parser("bt", parents=[common],
                       help="Bruhat-Tits tree over a local field")
    p.add_argument("action", choices=["tree", "iwasawa", "boundary"])
    p.add_argument("--field", required=True)
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--dot", help="write the ball as graphviz to this file")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(handler=cmd_bt)

    p = sub.add_parser("all", parents=[common],
                       help="run the full acceptance bundle")
    p.add_argument("--profile", choices=["quick", "full"], default="quick")
    p.set_defaults(handler=cmd_all)

    return parser


def _validate(args) -> None:
    if args.command == "field" and args.action == "eval" and not args.expr:
        raise InvalidSpec("field eval needs --expr")
    if args.command == "projline" and args.action == "hua" \
            and (args.x is None or args.y is None):
        raise InvalidSpec("projline hua needs --x and --y")
    if args.command == "moufang":
        if args.action == "check" and not args.geometry:
            raise InvalidSpec("moufang check needs --geometry")
        if args.action == "filtration" and not args.field:
            raise InvalidSpec("moufang filtration needs --field")


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        _validate(args)
        results, checks = args.handler(args)
    except BuildinglabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = [c for c in checks if not c["ok"]]
    report = {
        "schema": SCHEMA,
        "command": " ".join(argv),
        "seed": args.seed,
        "checks_run": len(checks),
        "checks_passed": len(checks) - len(failed),
        "checks_failed": len(failed),
        "checks": checks,
        "failures": failed,
        "results": results,
        "wall_time_seconds": round(time.perf_counter() - started, 6),
    }
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    if not args.json_only:
        status = "ok" if not failed else "FAILED"
        print(f"buildinglab {args.command}: "
              f"{report['checks_passed']}/{report['checks_run']} checks "
              f"passed ({status}, {report['wall_time_seconds']}s)",
              file=sys.stderr)
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
