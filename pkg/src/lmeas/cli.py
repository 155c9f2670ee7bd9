"""Command line front end: run scenario files, list the builtin suite, check one property.

Exit status: 0 when every scenario ran and none flagged a theorem violation,
2 when some report carries a violation flag, 1 on input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import harness as Hn
from . import sexpr as S

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2
BUILTIN_PREFIX = "builtin:"
CHARGE_PROPERTIES = ("purely-finitely-additive", "continuous", "s-bounded", "nonnegative")
SCENARIO_PROPERTIES = ("pointwise-convergence", "uniform-s-bounded")


class InputError(Exception):
    pass


def _default_depth():
    raw = os.environ.get("LMEAS_DEPTH")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"LMEAS_DEPTH must be an integer, got {raw!r}") from None


def _depth(args):
    depth = args.depth if args.depth is not None else _default_depth()
    if depth is not None and depth < 4:
        raise InputError("depth must be at least 4")
    return depth


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def load_scenarios(paths, builtins: bool) -> list:
    out = []
    for p in paths:
        if p.startswith(BUILTIN_PREFIX):
            try:
                out.append(Hn.builtin(p[len(BUILTIN_PREFIX):]))
            except Hn.ScenarioError as e:
                raise InputError(str(e)) from None
            continue
        try:
            out.append(Hn.load_scenario(_read(p), p))
        except S.SexprError as e:
            raise InputError(str(e)) from None
    if builtins:
        out.extend(Hn.builtin(name) for name in sorted(Hn.BUILTINS))
    names = [s.name for s in out]
    dup = sorted({n for n in names if names.count(n) > 1})
    if dup:
        raise InputError(f"duplicate scenario names: {', '.join(dup)}")
    return sorted(out, key=lambda s: s.name)


def _run_one(s: Hn.Scenario):
    try:
        return s, Hn.run_scenario(s), None
    except (ValueError, KeyError) as e:
        return s, None, f"{type(e).__name__}: {e}"


# ---------------------------------------------------------------------------
# output formats

_CSV_FIELDS = ("scenario", "theorem", "depth", "seed", "conclusion", "violation_flag",
               "derived_regulator", "hypotheses")


def _row(d: dict) -> dict:
    return {
        "scenario": d["scenario"], "theorem": d["theorem"], "depth": d["depth"], "seed": d["seed"],
        "conclusion": d["conclusion"]["outcome"], "violation_flag": str(d["violation_flag"]).lower(),
        "derived_regulator": d["derived_regulator"] or "",
        "hypotheses": ";".join(f"{h['name']}={h['outcome']}" for h in d["hypothesis_audit"]),
    }


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def render_md(rows) -> str:
    lines = ["| " + " | ".join(_CSV_FIELDS) + " |", "|" + "---|" * len(_CSV_FIELDS)]
    for r in rows:
        lines.append("| " + " | ".join(str(r[k]).replace("|", "\\|") for k in _CSV_FIELDS) + " |")
    return "\n".join(lines) + "\n"


def render(d: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(d, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return render_csv([_row(d)])
    return f"# {d['scenario']}\n\n" + render_md([_row(d)])


def render_index(entries: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema_version": Hn.SCHEMA_VERSION, "suite_version": Hn.SUITE_VERSION,
                           "scenarios": entries}, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    fields = ("scenario", "theorem", "conclusion", "violation_flag", "report", "error")
    rows = [{k: ("" if e.get(k) is None else str(e[k]).lower() if isinstance(e.get(k), bool) else e[k])
             for k in fields} for e in entries]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    lines = ["| " + " | ".join(fields) + " |", "|" + "---|" * len(fields)]
    lines += ["| " + " | ".join(str(r[k]) for k in fields) + " |" for r in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_run(args) -> int:
    depth = _depth(args)
    if not args.files and not args.builtins:
        raise InputError("no scenario files given (pass FILES or --builtins)")
    scenarios = [s.with_overrides(depth, args.seed) for s in load_scenarios(args.files, args.builtins)]
    jobs = args.jobs or (os.cpu_count() or 1)
    if jobs < 0:
        raise InputError("--jobs must be nonnegative")
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_run_one, scenarios))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries, status = [], EXIT_OK
    for s, report, err in results:
        entry = {"scenario": s.name, "theorem": s.theorem, "conclusion": None,
                 "violation_flag": None, "report": None, "error": err}
        if report is not None:
            d = report.to_dict()
            fname = f"{s.name}.{args.format}"
            (out / fname).write_text(render(d, args.format), encoding="utf-8")
            entry.update(conclusion=d["conclusion"]["outcome"], violation_flag=d["violation_flag"], report=fname)
            if d["violation_flag"]:
                status = EXIT_VIOLATION
                print(f"THEOREM-VIOLATION {s.name} ({s.theorem})", file=sys.stderr)
        else:
            print(f"error in {s.name}: {err}", file=sys.stderr)
            if status == EXIT_OK:
                status = EXIT_INPUT
        entries.append(entry)
    (out / f"index.{args.format}").write_text(render_index(entries, args.format), encoding="utf-8")
    for e in entries:
        print(f"{e['scenario']}\t{e['theorem']}\t{e['conclusion'] or 'error'}")
    return status


def cmd_list(args) -> int:
    for name, theorem in Hn.list_builtins():
        print(f"{name}\t{theorem}")
    return EXIT_OK


def check_property(text: str, prop: str, depth: int, source: str = ""):
    from .measures import check_continuous, check_purely_finitely_additive, s_boundedness_certificate, \
        singleton_family, verify_s_bounded
    from .lattice import Verdict
    try:
        node = S.parse_one(text, source)
        head = node.head if isinstance(node, S.Node) else None
    except S.SexprError as e:
        raise InputError(str(e)) from None
    if head == "charge":
        if prop not in CHARGE_PROPERTIES:
            raise InputError(f"unknown charge property {prop!r}; expected one of {', '.join(CHARGE_PROPERTIES)}")
        try:
            m = S.load_charge(node)
        except S.SexprError as e:
            raise InputError(f"{source}:{e}" if source and not e.source else str(e)) from None
        if prop == "purely-finitely-additive":
            return check_purely_finitely_additive(m, depth)
        if prop == "continuous":
            return check_continuous(m, depth)
        if prop == "nonnegative":
            return Verdict.holds(None, depth) if m.is_nonneg() else Verdict.fails(None, depth)
        return verify_s_bounded(m, singleton_family(), s_boundedness_certificate(m), depth)
    if head == "scenario":
        if prop not in SCENARIO_PROPERTIES:
            raise InputError(f"unknown scenario property {prop!r}; expected one of {', '.join(SCENARIO_PROPERTIES)}")
        try:
            s = Hn.load_scenario(text, source).with_overrides(depth)
        except S.SexprError as e:
            raise InputError(str(e)) from None
        if prop == "pointwise-convergence":
            return Hn._audit(s, s.regulator("b"))
        from .regulators import uniform_sbounded_check
        return uniform_sbounded_check(s.family, s.H(), s.regulator("r"), depth).verdict
    raise InputError(f"{source}: expected a (charge ...) or (scenario ...) form")


def cmd_check(args) -> int:
    depth = _depth(args) or 20
    v = check_property(_read(args.file), args.property, depth, args.file)
    print(json.dumps({"property": args.property, **Hn.jsonable(v)}, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 1); 2 is reserved for violations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lmeas", description="Depth-bounded verification of lattice-valued measure scenarios.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run scenario files and write reports")
    r.add_argument("files", nargs="*", metavar="FILES", help=f"scenario files, or {BUILTIN_PREFIX}NAME")
    r.add_argument("--format", choices=("json", "csv", "md"), default="json")
    r.add_argument("--out", default="reports")
    r.add_argument("--depth", type=int)
    r.add_argument("--jobs", type=int, default=0, help="worker threads, 0 = one per CPU")
    r.add_argument("--seed", type=int)
    r.add_argument("--builtins", action="store_true", help="also run the builtin suite")
    r.set_defaults(fn=cmd_run)
    ls = sub.add_parser("list", help="list the builtin scenarios")
    ls.set_defaults(fn=cmd_list)
    c = sub.add_parser("check", help="check one property of a charge or scenario file")
    c.add_argument("--property", required=True)
    c.add_argument("--depth", type=int)
    c.add_argument("file", metavar="FILE")
    c.set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
