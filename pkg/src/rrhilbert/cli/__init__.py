"""Command-line driver: ``rrhilbert {analyze,corpus,rr,reduce,spec}``.

Exit codes: 0 success, 1 usage or parse error, 2 budget exhausted,
3 verdict violation or corpus mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..field import FieldError
from ..hilbert import BudgetExceeded, NotMPrimaryError
from ..parse import ParseError
from ..ring import RingError
from .corpus import SPECS, corpus_spec, run_corpus
from .pipeline import Options, analyze, prepare, report_dict
from .report import encode, to_json_text, to_markdown
from .specfile import IdealSpec, SpecError, load_spec

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _available_cpus() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    common.add_argument("--markdown", metavar="PATH", help="write the markdown report here ('-' for stdout)")
    common.add_argument("--seed", type=int, help="RNG seed (default: the spec's, else 42)")
    common.add_argument("--field", help="coefficient field: Q, p, or p:N")
    common.add_argument("--power-budget", type=_positive, help="largest power of I computed")
    common.add_argument("--k-budget", type=_positive, help="largest colon exponent in closures")
    common.add_argument("--window", type=_positive, help="stability window")
    common.add_argument("--confirm-steps", type=_positive, help="repeats needed to accept a stable chain")
    common.add_argument("--workers", type=_positive, default=_available_cpus(),
                        help="worker processes for the corpus (default: available CPUs)")
    common.add_argument("--timings", action="store_true", help="include stage timings in the report")

    p = _Parser(prog="rrhilbert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    a = sub.add_parser("analyze", parents=[common], help="run the full pipeline on a spec")
    a.add_argument("spec", help="spec file or built-in example name")
    c = sub.add_parser("corpus", parents=[common], help="check the built-in worked examples")
    c.add_argument("--only", action="append", metavar="NAME",
                   help="restrict to these examples (repeatable, or comma-separated)")
    r = sub.add_parser("rr", parents=[common], help="Ratliff-Rush closure of I^n")
    r.add_argument("spec")
    r.add_argument("n", type=int)
    d = sub.add_parser("reduce", parents=[common], help="reduction numbers only")
    d.add_argument("spec")
    s = sub.add_parser("spec", help="print a spec in normalized form")
    s.add_argument("spec")
    sub.add_parser("list", help="list the built-in examples")
    return p


def resolve_spec(arg: str) -> IdealSpec:
    if os.path.exists(arg):
        return load_spec(arg)
    if arg in SPECS:
        return corpus_spec(arg)
    raise UsageError(f"{arg}: no such file or built-in example (try 'rrhilbert list')")


def _options(ns) -> Options:
    return Options(seed=ns.seed, field=ns.field, power_budget=ns.power_budget,
                   k_budget=ns.k_budget, window=ns.window, confirm_steps=ns.confirm_steps,
                   timings=ns.timings)


def _emit(ns, report: dict, markdown: str | None = None):
    wrote = False
    if ns.json:
        _write(ns.json, to_json_text(report))
        wrote = True
    if ns.markdown:
        _write(ns.markdown, markdown if markdown is not None else to_markdown(report))
        wrote = True
    if not wrote:
        sys.stdout.write(to_json_text(report))


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _meta(spec: IdealSpec) -> dict:
    from .. import __version__

    return {"engine": "rrhilbert", "version": __version__, "seed": spec.seed, "field": spec.field,
            "budgets": dict(spec.budgets), "notes": []}


def cmd_analyze(ns) -> int:
    a = analyze(resolve_spec(ns.spec), _options(ns))
    report = report_dict(a, timings=ns.timings)
    _emit(ns, report)
    bad = report["verdicts"]["violations"]
    if bad:
        print(f"verdict violation: {', '.join(bad)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_rr(ns) -> int:
    if ns.n < 0:
        raise UsageError("n must be non-negative")
    a = prepare(resolve_spec(ns.spec), _options(ns))
    b = a.spec.budgets
    from ..filtration import RatliffRush

    if ns.n == 0:
        entry = {"n": 0, "generators": ["1"], "colength": 0, "gap": 0, "certificate": None}
    else:
        eng = RatliffRush(a.ideal, b["confirm_steps"], b["k_budget"])
        closure, cert = eng.closure(ns.n)
        entry = {
            "n": ns.n,
            "generators": [str(g) for g in closure.groebner_basis()],
            "colength": closure.quotient_length(),
            "gap": eng.gap(ns.n),
            "certificate": {"stable_step": cert.stable_step, "confirm_steps": cert.confirm_steps,
                            "chain_lengths": list(cert.chain_lengths),
                            "power_contained": cert.power_contained,
                            "product_check": cert.product_check, "grade": cert.grade},
        }
    report = {"spec": a.spec.to_dict(), "rr": entry, "meta": _meta(a.spec)}
    md = [f"# Ratliff-Rush closure of I^{entry['n']}: {a.spec.name}", "",
          f"- generators: ({', '.join(entry['generators'])})",
          f"- colength l(A/closure) = {entry['colength']}",
          f"- l(closure/I^n) = {entry['gap']}"]
    if entry["certificate"]:
        c = entry["certificate"]
        md.append(f"- colon chain stable from k = {c['stable_step']}, lengths {c['chain_lengths']}")
    _emit(ns, report, "\n".join(md) + "\n")
    return EXIT_OK


def cmd_reduce(ns) -> int:
    from ..reduction import pinned_reduction, random_minimal_reduction
    from .pipeline import _reduction_dict

    a = prepare(resolve_spec(ns.spec), _options(ns))
    b = a.spec.budgets
    red = random_minimal_reduction(a.ideal, a.spec.seed, bound=b["power_budget"],
                                   window=b["window"], retries=b["retries"])
    pinned = None
    if a.pinned_J is not None:
        pinned = pinned_reduction(a.ideal, a.pinned_J, bound=b["power_budget"], window=b["window"])
    report = {"spec": a.spec.to_dict(),
              "reduction": {"random": _reduction_dict(red), "pinned": _reduction_dict(pinned)},
              "meta": _meta(a.spec)}
    md = [f"# Reduction numbers: {a.spec.name}", ""]
    for label, r in (("random", red), ("pinned", pinned)):
        if r is not None:
            md.append(f"- {label} J = ({', '.join(str(g) for g in r.J.own_generators)}): "
                      f"r_J(I) = {r.r}, checked through n = {r.verified_range}")
    _emit(ns, report, "\n".join(md) + "\n")
    return EXIT_OK


def cmd_corpus(ns) -> int:
    names = []
    for item in ns.only or []:
        names += [x.strip() for x in item.split(",") if x.strip()]
    for n in names:
        if n not in SPECS:
            raise UsageError(f"unknown example {n!r}; choose from {', '.join(SPECS)}")
    results = run_corpus(names, _options(ns), workers=ns.workers)
    failed = False
    rows = []
    lines = ["# Corpus", "", "| example | checks | violations | status |", "|---|---|---|---|"]
    for res in results:
        passed = sum(1 for c in res.checks if c[3])
        ok = res.ok and not res.violations
        failed |= not ok
        status = "PASS" if ok else "FAIL"
        print(f"{status} {res.name}: {passed}/{len(res.checks)} checks, "
              f"violations: {', '.join(res.violations) or 'none'}", file=sys.stderr)
        for label, exp, got, good in res.checks:
            if not good:
                print(f"  mismatch in {label}: expected {exp!r}, got {got!r}", file=sys.stderr)
        lines.append(f"| {res.name} | {passed}/{len(res.checks)} | "
                     f"{', '.join(res.violations) or 'none'} | {status} |")
        rows.append({
            "name": res.name,
            "ok": ok,
            "checks": [{"label": l, "expected": encode(e) if not isinstance(e, str) else e,
                        "actual": encode(g) if not isinstance(g, str) else g, "ok": k}
                       for l, e, g, k in res.checks],
            "violations": res.violations,
            "report": res.report,
        })
    from .. import __version__

    report = {"corpus": rows, "meta": {"engine": "rrhilbert", "version": __version__}}
    if ns.json:
        _write(ns.json, to_json_text(report))
    if ns.markdown:
        md = "\n".join(lines) + "\n"
        for row in rows:
            md += "\n" + to_markdown(row["report"])
        _write(ns.markdown, md)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_spec(ns) -> int:
    spec = resolve_spec(ns.spec)
    spec.build()
    sys.stdout.write(spec.to_text())
    return EXIT_OK


def cmd_list(ns) -> int:
    for name in SPECS:
        print(name)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "corpus": cmd_corpus, "rr": cmd_rr, "reduce": cmd_reduce,
            "spec": cmd_spec, "list": cmd_list}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return COMMANDS[ns.command](ns)
    except BudgetExceeded as exc:
        stage = exc.stage or "computation"
        hint = f"; raise {exc.flag}" if exc.flag else ""
        print(f"rrhilbert: budget exhausted in stage {stage}: {exc}{hint}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpecError, ParseError, FieldError, RingError, NotMPrimaryError, UsageError) as exc:
        print(f"rrhilbert: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"rrhilbert: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
