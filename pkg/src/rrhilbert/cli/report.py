"""JSON encoding and markdown rendering of analysis reports.

The markdown view is rendered from the same dictionary that is serialized to
JSON, so every number it shows is present in the JSON as well.
"""

from __future__ import annotations

import json


def encode(obj):
    """Integers become decimal strings; booleans, floats and None are kept."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (float, str)):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def to_json_text(report: dict) -> str:
    return json.dumps(encode(report), indent=2, ensure_ascii=False) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt(x)}" for k, x in v.items())
    return str(v)


def _table(header: list[str], rows: list[list]) -> list[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for r in rows:
        out.append("| " + " | ".join(_fmt(c).replace("|", "\\|") for c in r) + " |")
    return out


def _spec_lines(spec: dict) -> list[str]:
    ring = spec["ring"]
    out = [
        f"- ring: k[{', '.join(ring['variables'])}] over {ring['field']}, order {ring['order']}",
    ]
    if ring["relations"]:
        out.append(f"- relations: {'; '.join(ring['relations'])}")
    if ring["dimension"] is not None:
        out.append(f"- declared dimension: {ring['dimension']}")
    out.append(f"- ideal: ({', '.join(spec['ideal'])})")
    if spec["reduction"]:
        out.append(f"- pinned reduction: ({', '.join(spec['reduction'])})")
    if spec["assertions"]["integrally_closed"]:
        out.append("- asserted integrally closed")
    out.append(f"- seed: {spec['seed']}")
    return out


def _hilbert_lines(h: dict, title: str) -> list[str]:
    out = [f"## {title}", ""]
    out.append(f"- dimension d = {h['dimension']}")
    if "colength" in h:
        out.append(f"- colength l(A/I) = {h['colength']}")
    out.append(f"- series numerator: {_fmt(h['numerator'])}")
    out += ["", *_table([f"e{i}" for i in range(len(h["coefficients"]))], [h["coefficients"]])]
    out += ["", f"- fitted e0..ed: {_fmt(h['fitted'])}",
            f"- Hilbert function agrees with the polynomial from n = {h['threshold']}",
            f"- second Hilbert function agrees from n = {h['second_threshold']}", ""]
    out += _table(["n", "H(n) = l(A/F_n)"], h["samples"])
    return out + [""]


def _filtration_lines(f: dict) -> list[str]:
    out = ["## Ratliff-Rush filtration", ""]
    out.append(f"- stability index rho = {f['rho']} (window {f['window']})")
    out.append(f"- sum of gaps = {f['gap_sum']}")
    out.append("")
    rows = [[c["n"], c["gap"], c["colength"], c["stable_step"], c["chain_lengths"]]
            for c in f["closures"]]
    out += _table(["n", "l(closure/I^n)", "l(A/closure)", "stable step K", "chain lengths"], rows)
    for c in f["closures"]:
        if "groebner_basis" in c:
            out += ["", f"Closure of I^{c['n']}: ({', '.join(c['groebner_basis'])})"]
    if f["tilde_hilbert"]:
        out += [""] + _hilbert_lines(f["tilde_hilbert"], "Hilbert data of the Ratliff-Rush filtration")
    for n in f["notes"]:
        out.append(f"- note: {n}")
    return out + [""]


def _reduction_lines(r: dict) -> list[str]:
    out = ["## Reductions", ""]
    rows = []
    for label in ("random", "pinned"):
        red = r[label]
        if red is None:
            continue
        rows.append([label, "(" + ", ".join(red["J"]) + ")", red["contained_in_I"], red["r"],
                     red["r_tilde"], red["verified_range"], red["attempts"]])
    out += _table(["kind", "J", "J in I", "r_J(I)", "r~_J", "checked through n", "draws"], rows)
    out += ["", "### Superficial sequence", ""]
    if r["superficial"]:
        rows = [[i + 1, s["x"], s["window"], s["passed"],
                 s["coefficients"]["ideal"] if s["coefficients"] else None,
                 s["coefficients"]["quotient"] if s["coefficients"] else None]
                for i, s in enumerate(r["superficial"])]
        out += _table(["i", "x_i", "window", "passed", "e(I)", "e(I mod x)"], rows)
    else:
        out.append("- empty")
    g = r["good_behaviour"]
    out += ["", f"- good behaviour observed modulo the first {g['good_length']} of "
                f"{g['sequence_length']} elements ({g['grade']})"]
    return out + [""]


def _depth_lines(dp: dict) -> list[str]:
    out = ["## Depth probes", "", f"- method: {dp['method']}; {dp['note']}"]
    for key in ("I-adic", "ratliff-rush"):
        p = dp[key]
        if p is not None:
            out.append(f"- {key}: depth >= {p['depth_lower_bound']} along ({', '.join(p['sequence'])})")
    return out + [""]


def _verdict_lines(v: dict) -> list[str]:
    c = v["closure"]
    out = ["## Verdicts", ""]
    line = f"- integrally closed: {c['status']} ({c['method']})"
    if c["witness"]:
        line += f", witness exponent {_fmt(c['witness'])}"
    out.append(line)
    if v["vn"]:
        out.append(f"- V_n: {_fmt([x[1] for x in v['vn']['values']])}; residuals "
                   f"{_fmt(v['vn']['residuals'])}; e0 residual {v['vn']['e0_residual']}")
    out.append("")
    rows = [[p["id"], f"{p['hypothesis']['status']} ({p['hypothesis']['grade']})",
             p["conclusion"], p["observed"], p["numbers"]] for p in v["predicates"]]
    out += _table(["id", "hypothesis", "conclusion", "raw comparison", "numbers"], rows)
    if v["violations"]:
        out += ["", f"**Violations:** {', '.join(v['violations'])}"]
    return out + [""]


def to_markdown(report: dict) -> str:
    name = report["spec"]["name"]
    out = [f"# rrhilbert report: {name}", ""]
    out += _spec_lines(report["spec"]) + [""]
    if "hilbert" in report:
        out += _hilbert_lines(report["hilbert"], "Hilbert-Samuel data")
    if "filtration" in report:
        out += _filtration_lines(report["filtration"])
    if "reduction" in report:
        out += _reduction_lines(report["reduction"])
    if "depth" in report:
        out += _depth_lines(report["depth"])
    if "verdicts" in report:
        out += _verdict_lines(report["verdicts"])
    meta = report["meta"]
    out += ["## Run", "", f"- {meta['engine']} {meta['version']}, seed {meta['seed']}, "
                          f"field {meta['field']}", f"- budgets: {_fmt(meta['budgets'])}"]
    for n in meta.get("notes", []):
        out.append(f"- note: {n}")
    if "timings" in meta:
        out.append(f"- timings (s): {_fmt(meta['timings'])}")
    return "\n".join(out) + "\n"
