"""Command-line front end.

Exit codes: 0 success, 1 usage or parameter error, 2 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Sequence

from . import families as fam
from .moves import EndpointMismatch, MoveError, MoveScript, run_and_check
from .surface import DualGraph

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _jsonable(x: Any) -> Any:
    if isinstance(x, DualGraph):
        return x.to_json_obj()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(obj: Any) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def parse_value(text: str) -> Any:
    text = text.strip()
    if "," in text or text.startswith("["):
        return [parse_value(t) for t in text.strip("[]").split(",") if t.strip()]
    try:
        return int(text)
    except ValueError:
        return text


def parse_params(pairs: Sequence[str], path: Optional[str]) -> dict:
    params: dict = {}
    if path:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read params file {path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise UsageError("params file must hold a JSON object")
        params.update(loaded)
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        params[key.strip()] = parse_value(value)
    return params


# reports

def family_report(result: fam.FamilyResult) -> dict:
    c = result.construction
    v = result.verdict
    report: dict = {
        "schema": SCHEMA,
        "family": c.name,
        "params": c.params,
        "status": "ok" if result.ok else "mismatch",
        "mismatches": result.mismatches,
        "notes": c.notes,
    }
    if c.model is not None:
        report["picard_rank"] = c.model.picard_rank
        report["boundary"] = list(c.model.boundary)
    elif c.matrix is not None:
        report["picard_rank"] = c.matrix.target.rank
        report["boundary"] = list(c.matrix.source.basis)
    if result.matrix is not None:
        report["j_matrix"] = result.matrix.tolist()
    if v is not None:
        report.update({
            "determinant": v.determinant,
            "snf_diag": list(v.snf_diag),
            "h1_torsion": list(v.h1_torsion),
            "q_acyclic": v.q_acyclic,
            "z_acyclic": v.z_acyclic,
            "h2_iso": v.h2_iso,
            "real_plane": v.real_plane,
            "boundary_connected": v.boundary_connected,
            "boundary_tree": v.boundary_tree,
        })
    if c.fibration is not None:
        report["fibration"] = c.fibration.to_dict()
    report["kappa"] = [e.to_dict() for e in c.kappa]
    report["computed"] = c.computed
    report["moves"] = result.endpoints
    report["expected"] = [
        {"name": name, "value": fact.value, "provenance": fact.provenance.to_dict(),
         **({"note": fact.note} if fact.note else {})}
        for name, fact in c.expected.items()
    ]
    claimed = []
    if any(e.verdict == "kappa_two_claimed" for e in c.kappa):
        claimed.append("log general type, from the combinatorial exclusion hypotheses only")
    if v is not None and v.real_plane:
        claimed.append("real locus diffeomorphic to R^2, from the homological criterion")
    if result.endpoints:
        claimed.append("birational diffeomorphism, checked only on the curve configuration")
    report["claimed"] = claimed
    return report


def _graph_for(c: fam.Construction) -> Optional[DualGraph]:
    if c.graph is not None:
        return c.graph
    if c.model is not None:
        return c.model.dual_graph()
    return None


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# commands

def cmd_family(args) -> int:
    params = parse_params(args.param or [], args.params)
    result = fam.verify_family(args.name, params)
    report = family_report(result)
    if args.json:
        _write(args.json, dumps(report))
    if args.dot:
        g = _graph_for(result.construction)
        if g is None:
            raise UsageError(f"family {args.name} has no dual graph")
        _write(args.dot, g.to_dot(args.name))
    if not args.json:
        sys.stdout.write(dumps(report))
    for m in result.mismatches:
        print(f"mismatch: {m}", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_MISMATCH


def load_move_script(ref: str) -> MoveScript:
    path = Path(ref)
    if path.exists():
        try:
            return MoveScript.load(path)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{ref}: invalid JSON: {exc}") from None
    try:
        return fam.load_script(ref)
    except FileNotFoundError:
        raise UsageError(f"no move script file or bundled script named {ref!r}") from None


def cmd_moves(args) -> int:
    try:
        script = load_move_script(args.script)
    except MoveError as exc:
        raise UsageError(str(exc)) from None
    out: dict = {"schema": SCHEMA, "script": script.name or args.script}
    code = EXIT_OK
    try:
        end = run_and_check(script)
        out["status"] = "ok"
        out["endpoint"] = end.to_json_obj()
    except EndpointMismatch as exc:
        out["status"] = "mismatch"
        out["errors"] = exc.diffs
        code = EXIT_MISMATCH
    except MoveError as exc:
        out["status"] = "error"
        out["errors"] = [str(exc)]
        code = EXIT_MISMATCH
    text = dumps(out)
    if args.json:
        _write(args.json, text)
    else:
        sys.stdout.write(text)
    for e in out.get("errors", []):
        print(f"error: {e}", file=sys.stderr)
    return code


def verify_all(pattern: Optional[str]) -> list[dict]:
    rows = []
    for info in fam.select_families(pattern):
        for params in fam.sweep_parameters(info):
            result = fam.verify_family(info.name, params)
            rows.append({"family": info.name, "params": params,
                         "status": "ok" if result.ok else "mismatch",
                         "mismatches": result.mismatches})
    return rows


def cmd_verify_all(args) -> int:
    rows = verify_all(args.filter)
    if not rows:
        raise UsageError(f"no family matches {args.filter!r}")
    bad = [r for r in rows if r["status"] != "ok"]
    for r in rows:
        params = json.dumps(r["params"], sort_keys=True)
        print(f"{r['status']:8} {r['family']} {params}")
        for m in r["mismatches"]:
            print(f"         {m}")
    print(f"{len(rows) - len(bad)}/{len(rows)} checks passed")
    if args.json:
        _write(args.json, dumps({"schema": SCHEMA, "results": rows}))
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_list(args) -> int:
    for info in fam.list_families():
        defaults = json.dumps(info.defaults, sort_keys=True) if info.defaults else ""
        print(f"{info.name:24} {info.summary} {defaults}".rstrip())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fakeplanes", description="Verify constructions of fake real planes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("family", help="build one family and report its verdict")
    f.add_argument("name")
    f.add_argument("-p", "--param", action="append", metavar="KEY=VALUE",
                   help="family parameter; lists are comma separated")
    f.add_argument("--params", metavar="FILE", help="JSON object of parameters")
    f.add_argument("--json", metavar="PATH", help="write the report here ('-' for stdout)")
    f.add_argument("--dot", metavar="PATH", help="write the dual graph in DOT format")
    f.set_defaults(func=cmd_family)

    m = sub.add_parser("moves", help="run a move script and check its endpoint")
    m.add_argument("script", help="path to a move script, or the name of a bundled one")
    m.add_argument("--json", metavar="PATH")
    m.set_defaults(func=cmd_moves)

    v = sub.add_parser("verify-all", help="verify every family over its parameter sweep")
    v.add_argument("--filter", metavar="GLOB", help="only families matching this pattern")
    v.add_argument("--json", metavar="PATH")
    v.set_defaults(func=cmd_verify_all)

    ls = sub.add_parser("list", help="list the families")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, fam.FamilyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
