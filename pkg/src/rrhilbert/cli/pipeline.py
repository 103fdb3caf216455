"""The analysis pipeline behind ``rrhilbert analyze`` and the corpus runner."""

from __future__ import annotations

import copy
import dataclasses
import time
from dataclasses import dataclass

from .. import __version__
from ..filtration import FiltrationReport, RatliffRush, filtration_report
from ..hilbert import HilbertProfile, profile
from ..ideal import Ideal
from ..reduction import (
    DepthProbe,
    Reduction,
    good_behaviour_sequence,
    pinned_reduction,
    random_minimal_reduction,
    superficial_sequence,
    tilde_reduction_number,
    vv_depth_probe,
)
from ..verdict import (
    ClosureStatus,
    TheoremVerdicts,
    VerdictError,
    VnCheck,
    evaluate_bounds,
    is_integrally_closed_monomial,
    vn_formula_check,
)
from .specfile import IdealSpec


@dataclass
class Options:
    """Command-line overrides; ``None`` keeps the spec's value."""

    seed: int | None = None
    field: str | None = None
    power_budget: int | None = None
    k_budget: int | None = None
    window: int | None = None
    confirm_steps: int | None = None
    timings: bool = False


def apply_options(spec: IdealSpec, opts: Options | None) -> IdealSpec:
    spec = copy.deepcopy(spec)
    if opts is None:
        return spec
    if opts.seed is not None:
        spec.seed = opts.seed
    if opts.field is not None:
        spec.field = opts.field
    for key in ("power_budget", "k_budget", "window", "confirm_steps"):
        v = getattr(opts, key)
        if v is not None:
            spec.budgets[key] = v
    return spec


@dataclass
class Analysis:
    spec: IdealSpec
    ring: object
    ideal: Ideal
    pinned_J: Ideal | None
    profile: HilbertProfile | None = None
    filtration: FiltrationReport | None = None
    closure_status: ClosureStatus | None = None
    reduction: Reduction | None = None
    pinned: Reduction | None = None
    superficial: list = dataclasses.field(default_factory=list)
    good_length: int | None = None
    good_evidence: list = dataclasses.field(default_factory=list)
    depth: DepthProbe | None = None
    tilde_depth: DepthProbe | None = None
    vn: VnCheck | None = None
    verdicts: TheoremVerdicts | None = None
    timings: dict = dataclasses.field(default_factory=dict)
    notes: list = dataclasses.field(default_factory=list)
    _engine: RatliffRush | None = None
    _closure_top: int = 0

    def closure(self, n: int) -> Ideal:
        """Ĩ^n; past the observed stability window this is I^n."""
        if n == 0:
            return Ideal(self.ring, [self.ring.one()])
        if n <= self._closure_top:
            return self._engine.closure(n)[0]
        return self.ideal.power(n)


class _Clock:
    def __init__(self, sink: dict):
        self.sink = sink

    def __call__(self, stage: str):
        clock = self

        class _Stage:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                clock.sink[stage] = round(time.perf_counter() - self.t, 3)
                return False

        return _Stage()


def prepare(spec: IdealSpec, opts: Options | None = None) -> Analysis:
    spec = apply_options(spec, opts)
    ring, ideal, pinned = spec.build()
    return Analysis(spec, ring, ideal, pinned)


def analyze(spec: IdealSpec, opts: Options | None = None) -> Analysis:
    """Run every stage; budget exhaustion propagates as BudgetExceeded."""
    a = prepare(spec, opts)
    b = a.spec.budgets
    I = a.ideal
    d = a.ring.dimension
    clock = _Clock(a.timings)
    window = b["window"]
    with clock("hilbert"):
        a.profile = profile(I, budget=b["power_budget"])
    with clock("reduction"):
        a.reduction = random_minimal_reduction(I, a.spec.seed, bound=b["power_budget"],
                                               window=window, retries=b["retries"])
        if a.pinned_J is not None:
            a.pinned = pinned_reduction(I, a.pinned_J, bound=b["power_budget"], window=window)
    reds = [r for r in (a.reduction, a.pinned) if r is not None]
    with clock("filtration"):
        a.filtration = filtration_report(
            I, window=window, confirm_steps=b["confirm_steps"], k_budget=b["k_budget"],
            budget=b["power_budget"], through=max(r.r for r in reds) + 1,
        )
        a._engine = RatliffRush(I, b["confirm_steps"], b["k_budget"])
        a._closure_top = a.filtration.closures[-1][0]
    rho = a.filtration.rho
    with clock("tilde-reduction"):
        for red in reds:
            top = max(red.r, rho) + window
            red.r_tilde, red.tilde_evidence = tilde_reduction_number(I, red.J, a.closure, top, rho=rho)
    with clock("closure"):
        a.closure_status = is_integrally_closed_monomial(I, asserted=a.spec.integrally_closed)
    with clock("superficial"):
        certs = superficial_sequence(I, max(d - 1, 0), a.spec.seed, window=window,
                                     retries=b["retries"], start_hint=a.reduction.r,
                                     budget=b["power_budget"])
        a.superficial = certs
    seq = [c.x for c in a.superficial]
    with clock("good-behaviour"):
        ok, ev = good_behaviour_sequence(I, seq, window, confirm_steps=b["confirm_steps"],
                                         k_budget=b["k_budget"])
        a.good_evidence = ev
        a.good_length = len(ev) if ok else len(ev) - 1
    degrees = range(1, max(a.reduction.r, rho) + window + 1)
    with clock("depth"):
        gens = list(a.reduction.J.own_generators)
        a.depth = vv_depth_probe(I, gens, degrees)
        a.tilde_depth = vv_depth_probe(I, gens, degrees, filtration=a.closure, label="ratliff-rush")
    with clock("vn"):
        try:
            a.vn = vn_formula_check(a.profile, a.filtration, a.reduction, a.closure)
        except VerdictError as exc:
            a.notes.append(f"V_n formula not checked: {exc}")
    with clock("verdicts"):
        a.verdicts = evaluate_bounds(
            a.profile, a.filtration, a.reduction, a.closure_status, pinned=a.pinned,
            good_length=a.good_length, depth=a.depth, tilde_depth=a.tilde_depth, vn=a.vn,
        )
    return a


# -- report assembly ---------------------------------------------------------------
def _polys(polys) -> list[str]:
    return [str(p) for p in polys]


def _reduction_dict(red: Reduction | None):
    if red is None:
        return None
    return {
        "J": _polys(red.J.own_generators),
        "seed": red.seed,
        "pinned": red.pinned,
        "contained_in_I": red.contained,
        "attempts": red.attempts,
        "r": red.r,
        "evidence": [[n, ok] for n, ok in red.evidence],
        "verified_range": red.verified_range,
        "r_tilde": red.r_tilde,
        "tilde_evidence": [[n, ok] for n, ok in red.tilde_evidence],
    }


def _probe_dict(p: DepthProbe | None):
    if p is None:
        return None
    return {
        "filtration": p.filtration,
        "sequence": _polys(p.sequence),
        "depth_lower_bound": p.depth_lower_bound,
        "checks": [[i, n, ok] for i, n, ok in p.checks],
    }


def hilbert_dict(p: HilbertProfile, ideal: Ideal | None = None) -> dict:
    out = {
        "dimension": p.dimension,
        "samples": [[n, h] for n, h in p.samples],
        "numerator": list(p.numerator),
        "coefficients": list(p.coefficients),
        "fitted": list(p.fitted),
        "threshold": p.threshold,
        "second_threshold": p.second_threshold,
        "second_values": [[n, v] for n, v in p.second_values()],
    }
    if ideal is not None:
        out["colength"] = p.H(1)
        out["m_primary_witnesses"] = list(ideal.is_m_primary()[1])
    return out


def filtration_dict(F: FiltrationReport) -> dict:
    closures = []
    for (n, ideal, K), cert in zip(F.closures, F.certificates):
        entry = {
            "n": n,
            "gap": F.gap(n),
            "colength": ideal.quotient_length(),
            "stable_step": K,
            "chain_lengths": list(cert.chain_lengths),
            "grade": cert.grade,
        }
        if F.gap(n):
            entry["groebner_basis"] = _polys(ideal.groebner_basis())
        closures.append(entry)
    return {
        "rho": F.rho,
        "window": F.window,
        "gaps": [[n, g] for n, g in F.gaps],
        "gap_sum": sum(g for _, g in F.gaps),
        "closures": closures,
        "tilde_hilbert": hilbert_dict(F.tilde_profile) if F.tilde_profile else None,
        "notes": list(F.notes),
    }


def report_dict(a: Analysis, timings: bool = False) -> dict:
    """The JSON-ready report (integers are still ints here)."""
    sup = []
    for c in a.superficial:
        sup.append({
            "x": str(c.x),
            "window": list(c.window),
            "checks": [[n, ok] for n, ok in c.checks],
            "coefficients": {"ideal": list(c.coefficients[0]), "quotient": list(c.coefficients[1])}
            if c.coefficients else None,
            "passed": c.passed,
        })
    cs = a.closure_status
    meta = {
        "engine": "rrhilbert",
        "version": __version__,
        "seed": a.spec.seed,
        "field": a.spec.field,
        "budgets": dict(a.spec.budgets),
        "notes": list(a.notes),
    }
    if timings:
        meta["timings"] = dict(a.timings)
    return {
        "spec": a.spec.to_dict(),
        "hilbert": hilbert_dict(a.profile, a.ideal),
        "filtration": filtration_dict(a.filtration),
        "reduction": {
            "random": _reduction_dict(a.reduction),
            "pinned": _reduction_dict(a.pinned),
            "superficial": sup,
            "good_behaviour": {
                "sequence_length": len(a.superficial),
                "good_length": a.good_length,
                "stages": [{"i": i, "evidence": [[n, ok] for n, ok in ev]}
                           for i, ev in a.good_evidence],
                "grade": "observed",
            },
        },
        "depth": {
            "method": "colon",
            "note": "observed lower bounds on the checked degrees",
            "I-adic": _probe_dict(a.depth),
            "ratliff-rush": _probe_dict(a.tilde_depth),
        },
        "verdicts": {
            "closure": {"status": cs.status, "method": cs.method,
                        "witness": list(cs.witness) if cs.witness else None, "reason": cs.reason},
            "vn": None if a.vn is None else {
                "values": [[n, v] for n, v in a.vn.values],
                "residuals": {str(i): r for i, r in a.vn.residuals.items()},
                "e0_residual": a.vn.e0_residual,
                "zero_from": a.vn.zero_from,
            },
            "predicates": a.verdicts.to_list(),
            "violations": [v.id for v in a.verdicts.violations()],
        },
        "meta": meta,
    }
