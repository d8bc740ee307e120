"""Command line front end.  Every command prints one report and exits with

    0  all checks pass       1  a counterexample was found
    2  invalid input         3  some verdicts are Unknown, none failed
"""

import argparse
import json
import os
import sys

from . import coherator as co
from . import globset as gs
from . import homotopy as ho
from . import models as md
from . import pushout as po
from . import theta0 as t0
from . import theory as th

EXIT = {"pass": 0, "fail": 1, "invalid": 2, "unknown": 3}


class ValidationError(ValueError):
    pass


INPUT_ERRORS = (ValidationError, th.ParseError, t0.TableError, gs.GlobularSetError, md.ModelError,
                th.TheoryError, co.LevelUnsupported, co.IndexOrder, json.JSONDecodeError, OSError)


def parse_input(path, kind):
    """Read a file (or, for tables, a literal like ``(1,0,1)``) into a domain value."""
    if kind == "table":
        text = path
        if os.path.exists(path):
            with open(path) as fh:
                text = fh.read().strip()
        try:
            return t0.parse_table(text)
        except t0.ZigZagViolation as e:
            raise ValidationError(f"table {text}: zig-zag rule violated at position {e.index} "
                                  "(each valley must be strictly below its neighbouring peaks)") from None
        except t0.TableError as e:
            raise ValidationError(f"table {text}: {e}") from None
    with open(path) as fh:
        text = fh.read()
    if kind == "globset":
        try:
            return gs.validate_globular_set(json.loads(text))
        except json.JSONDecodeError as e:
            raise th.ParseError(f"{path}: {e.msg}", e.lineno, e.colno) from None
        except gs.GlobularSetError as e:
            raise ValidationError(f"{path}: {e}") from None
    if kind == "model":
        try:
            raw = md.parse_model(text)
            return md.validate_model(raw)
        except md.ModelError as e:
            raise ValidationError(f"{path}: {e}") from None
    if kind == "theory":
        return th.parse_theory(text)
    if kind == "map":
        try:
            spec = json.loads(text)
            dom, cod, pairs = spec["dom"], spec["cod"], spec["cells"]
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ValidationError(f"{path}: a map file needs dom, cod and cells ({e})") from None
        here = os.path.dirname(os.path.abspath(path))
        A = parse_input(os.path.join(here, dom), "model")
        B = parse_input(os.path.join(here, cod), "model")
        try:
            cells = {A.find(a): B.find(b) for a, b in pairs.items()}
        except KeyError as e:
            raise ValidationError(f"{path}: unknown cell {e}") from None
        return md.ModelMap(A, B, cells)
    raise ValueError(f"unknown input kind {kind}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield f"{prefix}: {obj if not isinstance(obj, list) else ', '.join(map(str, obj))}"


def emit_report(report, fmt="json") -> bytes:
    if fmt == "json":
        return (json.dumps(report, sort_keys=True, indent=2, default=str) + "\n").encode()
    return ("\n".join(_flatten(report)) + "\n").encode()


def _budget(args):
    return th.Budget(max_table_len=args.max_table_len, max_entry=args.max_entry, max_depth=args.depth,
                     seed=args.seed)


def _verdict_of(report):
    return report.get("verdict", "pass")


# -- commands ----------------------------------------------------------------------


def cmd_globset_validate(args):
    X = parse_input(args.path, "globset")
    return {"verdict": "pass", "counts": list(X.counts), "dim": X.dim}


def cmd_theta_hom(args):
    p, q = parse_input(args.dom, "table"), parse_input(args.cod, "table")
    homs = t0.hom_set(p, q)
    return {"verdict": "pass", "dom": str(p), "cod": str(q), "count": len(homs),
            "morphisms": [str(m) for m in homs]}


def cmd_tower_build(args):
    b = _budget(args)
    stages = co.build_tower(args.depth, b)
    return {"verdict": "pass", "budget": b.to_dict(), "stages": [s.summary() for s in stages]}


def cmd_chain_build(args):
    b = _budget(args)
    stages, quot = co.build_truncated_chain(args.n, b)
    return {"verdict": "pass", "budget": b.to_dict(), "stages": [s.summary() for s in stages + [quot]]}


def cmd_law_check(args):
    b = _budget(args)
    laws = co.LAWS if args.law == "all" else [args.law]
    if args.law not in co.LAWS and args.law != "all":
        raise ValidationError(f"unknown law {args.law!r}; choose from {', '.join(co.LAWS)} or all")
    picked = [x for x in (args.i, args.j, args.k) if x is not None]
    if args.n is not None:
        picked = [args.n]
    reports = []
    for law in laws:
        idx = tuple(picked) if picked and args.law != "all" else None
        reports.append(co.check_law(law, idx, b, mutation=args.mutation, composite=args.composite).to_dict())
    verdicts = {r["verdict"] for r in reports}
    verdict = "fail" if "fail" in verdicts else "unknown" if "unknown" in verdicts else "pass"
    return {"verdict": verdict, "budget": b.to_dict(), "reports": reports}


def cmd_model_validate(args):
    M = parse_input(args.path, "model")
    if args.level is not None and M.level != args.level:
        raise ValidationError(f"model has level {M.level}, expected {args.level}")
    return {"verdict": "pass", **M.signature()}


def cmd_homotopy(args):
    if args.what == "we":
        f = parse_input(args.path, "map")
        rep = ho.is_weak_equivalence(f)
        v = {"WeakEquivalence": "pass", "Not": "fail", "Unknown": "unknown"}[rep.verdict]
        return {**rep.to_dict(), "verdict": v, "result": rep.verdict}
    M = parse_input(args.path, "model")
    if args.what == "pi0":
        return {"verdict": "pass", "components": [list(c) for c in ho.pi0(M)]}
    k = args.k if args.k is not None else 1
    xs = [args.x] if args.x else [M.label(c) for c in M.cells(0)]
    if args.x and args.x not in {M.label(c) for c in M.cells(0)}:
        raise ValidationError(f"{args.x} is not an object of the model")
    groups = []
    for x in xs:
        G = ho.pi_k(M, k, x)
        groups.append({"basepoint": x, "order": G.order, "abelian": G.is_abelian(), "elements": list(G.names)})
    return {"verdict": "pass", "k": k, "groups": groups}


def cmd_pushout_sweep(args):
    if args.level != 1:
        raise co.LevelUnsupported(f"the pushout sweep runs at level 1, not {args.level}")
    ks = (0, 1, 2)
    if args.model:
        M = parse_input(args.model, "model")
        rep = po.check_pushout_condition(M, ks, name=os.path.basename(args.model))
    else:
        rep = po.pushout_sweep(args.max_objects, args.max_morphisms, ks)
    rows = rep["rows"]
    summary = {}
    for r in rows:
        summary[r["verdict"]] = summary.get(r["verdict"], 0) + 1
    out = {"verdict": rep["verdict"], "vacuous": rep["vacuous"], "summary": summary,
           "max_objects": args.max_objects, "max_morphisms": args.max_morphisms}
    out["rows"] = rows if args.rows else [r for r in rows if r["verdict"] != "WeakEquivalence"]
    return out


def cmd_free_pushout(args):
    if args.level != 1:
        raise co.LevelUnsupported(f"the free pushout experiment runs at level 1, not {args.level}")
    if args.model:
        Xs = [md.model_to_groupoid(parse_input(args.model, "model"), os.path.basename(args.model))]
    else:
        Xs = po.corpus()
    rows = []
    for X in Xs:
        rows += po.check_free_pushout_condition(X, args.k, sat_depth=args.sat_depth, mutation=args.mutation)["rows"]
    verdicts = {r["verdict"] for r in rows}
    verdict = "fail" if "fail" in verdicts else "unknown" if "unknown" in verdicts else "pass"
    out = {"verdict": verdict, "vacuous": not rows, "k": args.k, "sat_depth": args.sat_depth,
           "mutation": args.mutation, "rows": rows}
    if verdict == "fail" and args.mutation is None:
        out["flag"] = "counterexample to the free pushout condition; rerun with the same flags to reproduce"
    return out


COMMANDS = {
    "globset-validate": cmd_globset_validate,
    "theta-hom": cmd_theta_hom,
    "tower-build": cmd_tower_build,
    "chain-build": cmd_chain_build,
    "law-check": cmd_law_check,
    "model-validate": cmd_model_validate,
    "homotopy": cmd_homotopy,
    "pushout-sweep": cmd_pushout_sweep,
    "free-pushout": cmd_free_pushout,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--max-table-len", type=int, default=5)
    common.add_argument("--max-entry", type=int, default=2)
    common.add_argument("--sat-depth", type=int, default=3)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="glob_coherator", description="Bounded coherator and groupoid model checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("globset-validate", parents=[common])
    p.add_argument("path")
    p = sub.add_parser("theta-hom", parents=[common])
    p.add_argument("dom")
    p.add_argument("cod")
    sub.add_parser("tower-build", parents=[common])
    p = sub.add_parser("chain-build", parents=[common])
    p.add_argument("--n", type=int, default=1)
    p = sub.add_parser("law-check", parents=[common])
    p.add_argument("law")
    for flag in ("--i", "--j", "--k", "--n"):
        p.add_argument(flag, type=int)
    p.add_argument("--mutation", choices=co.MUTATIONS)
    p.add_argument("--composite", type=int, default=200)
    p = sub.add_parser("model-validate", parents=[common])
    p.add_argument("path")
    p.add_argument("--level", type=int)
    p = sub.add_parser("homotopy", parents=[common])
    p.add_argument("what", choices=("pi0", "pik", "we"))
    p.add_argument("path")
    p.add_argument("--k", type=int)
    p.add_argument("--x")
    p = sub.add_parser("pushout-sweep", parents=[common])
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--max-objects", type=int, default=3)
    p.add_argument("--max-morphisms", type=int, default=12)
    p.add_argument("--model")
    p.add_argument("--rows", action="store_true", help="list every row, not only the failing ones")
    p = sub.add_parser("free-pushout", parents=[common])
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--model")
    p.add_argument("--mutation", choices=("drop-inverse",))
    return ap


def run(argv=None, out=None):
    """Run one command; returns the exit code."""
    out = out or sys.stdout.buffer
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT["invalid"] if e.code else 0
    fmt = getattr(args, "format", "json")
    try:
        report = COMMANDS[args.command](args)
        code = EXIT[_verdict_of(report)]
    except INPUT_ERRORS as e:
        report = {"verdict": "invalid", "error": type(e).__name__, "message": str(e)}
        if getattr(e, "line", None):
            report["line"] = e.line
            report["column"] = getattr(e, "col", None)
        code = EXIT["invalid"]
    report["command"] = args.command
    out.write(emit_report(report, fmt))
    out.flush()
    return code


def main():
    sys.exit(run())
