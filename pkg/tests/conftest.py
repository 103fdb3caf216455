from __future__ import annotations

import itertools
import random
import time

import pytest
from hypothesis import HealthCheck, settings

from rrhilbert.ideal import Ideal
from rrhilbert.ring import Ring

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def _generic(rng, names):
    gens = [f"{v}^{rng.randint(2, 3)}" for v in names]
    for _ in range(rng.randint(1, 2)):
        terms = []
        for _ in range(rng.randint(1, 2)):
            exps = [rng.randint(0, 2) for _ in names]
            if sum(exps) == 0:
                exps[0] = 1
            mono = "*".join(f"{v}^{e}" for v, e in zip(names, exps) if e)
            terms.append(f"{rng.choice([1, 2, 3])}*{mono}")
        gens.append(rng.choice([" + ", " - "]).join(terms))
    return gens


def _equigenerated(rng, names):
    """Pure powers of degree k plus some other monomials of degree k."""
    k = rng.randint(3, 4) if len(names) == 2 else 2
    mons = []
    for e in itertools.product(range(k + 1), repeat=len(names)):
        if sum(e) == k and max(e) < k:
            mons.append("*".join(f"{v}^{a}" for v, a in zip(names, e) if a))
    picked = rng.sample(mons, rng.randint(1, len(mons) - 1))
    return [f"{v}^{k}" for v in names] + picked


def _quadric_binomials(rng, names):
    """Differences of squares and mixed products, as in small Gorenstein examples."""
    squares = [f"{v}^2" for v in names]
    gens = [f"{a} - {rng.choice([1, 2])}*{b}" for a, b in zip(squares, squares[1:])]
    mixed = [f"{a}*{b}" for a, b in itertools.combinations(names, 2)]
    gens += rng.sample(mixed, rng.randint(len(mixed) - 1, len(mixed)))
    if rng.random() < 0.5:
        gens.append(squares[-1] if rng.random() < 0.5 else f"{squares[0]}*{names[-1]}")
    return gens


def random_m_primary(seed: int, nvars: int):
    """A small m-primary ideal of one of three shapes, chosen by the seed."""
    rng = random.Random(seed)
    names = "xyz"[:nvars]
    R = Ring(names)
    maker = (_generic, _equigenerated, _quadric_binomials)[seed % 3]
    while True:
        I = Ideal(R, maker(rng, names))
        if I.is_m_primary()[0]:
            return R, I


RANDOM_CORPUS = [random_m_primary(seed, 2 + (seed // 3) % 2) for seed in range(24)]


@pytest.fixture(scope="session")
def random_corpus():
    return RANDOM_CORPUS


def spec_text(R: Ring, I: Ideal, seed: int = 42) -> str:
    return (f"ring {','.join(R.variables)} over Q order degrevlex\n"
            f"ideal {'; '.join(str(g) for g in I.generators)}\nseed {seed}\n")


# wall-clock seconds spent building ``corpus_analyses``
CORPUS_SECONDS: list = []


@pytest.fixture(scope="session")
def corpus_analyses():
    """Full pipeline runs over the random corpus, computed once."""
    from rrhilbert.cli.pipeline import analyze
    from rrhilbert.cli.specfile import parse_spec

    start = time.perf_counter()
    out = []
    for i, (R, I) in enumerate(RANDOM_CORPUS):
        out.append(analyze(parse_spec(spec_text(R, I, seed=i), name=f"random-{i}")))
    CORPUS_SECONDS.append(time.perf_counter() - start)
    return out


_EXAMPLES: dict = {}


@pytest.fixture(scope="session")
def example():
    """``example(name)`` analyzes a built-in example once per session."""
    from rrhilbert.cli.corpus import corpus_spec
    from rrhilbert.cli.pipeline import analyze

    def get(name):
        if name not in _EXAMPLES:
            _EXAMPLES[name] = analyze(corpus_spec(name))
        return _EXAMPLES[name]

    return get
