"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import load_fixture, random_dn3  # noqa: E402

from dneq.classify import EXPECTED_PAIRS, necessary_pairs, pass_filter  # noqa: E402
from dneq.curvature import irregular_control_operator, nilpotence_report, primes_between  # noqa: E402
from dneq.fixtures import load_golden  # noqa: E402
from dneq.modular import eta_product_check, i_function, phi, phi_in_t  # noqa: E402
from dneq.pfit import extract_matrix, recover  # noqa: E402
from dneq.series import RatSeries, compose, nth_root, reversion  # noqa: E402
from dneq.weyl import (  # noqa: E402
    DNMatrix,
    DPoly,
    d3_expand,
    dn_build,
    formal_adjoint,
    indicial_at_zero,
    regularize_pipeline,
    weyl_apply,
)

TERMS = 48
D3 = DPoly([0, 0, 0, 1])


def _random_matrices(n: int, seed: int) -> list[DNMatrix]:
    rng = random.Random(seed)
    return [random_dn3(rng) for _ in range(n)]


def table_reproduction():
    start = time.perf_counter()
    bad = [fx.pair for fx in load_golden() if recover(fx.N, fx.d, fx.c0, TERMS) != fx.matrix]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    return ok, f"{17 - len(bad)}/17 matrices exact at {TERMS} terms in {elapsed:.1f}s" + (f"; wrong: {bad}" if bad else "")


def operator_reproduction():
    bad = [fx.pair for fx in load_golden() if dn_build(fx.matrix) != fx.operator]
    mats = _random_matrices(100, 1)
    disagree = sum(dn_build(A) != d3_expand(A) for A in mats)
    return not bad and not disagree, f"{17 - len(bad)}/17 operators; closed form agrees on {100 - disagree}/100 random"


def eta_product_formula():
    reps = [eta_product_check(fx.N, fx.d, fx.c0, TERMS) for fx in load_golden()]
    good = [r for r in reps if r["ok"] and r["terms"] >= 40]
    return len(good) == 17, f"{len(good)}/17 pairs equal through {min(r['terms'] for r in reps)} terms"


def same_level_equality():
    pairs = [(N, d) for N, d in sorted(EXPECTED_PAIRS) if N in (1, 2, 3, 5) and d > 1]
    base = 30
    fails = []
    for N, d in pairs:
        p1 = phi(N, 1, base)
        if phi(N, d, base * d) != p1.inflate(d):
            fails.append((N, d, "phi"))
        lhs, rhs = i_function(N, d, prec=base * d), i_function(N, 1, prec=base)
        if lhs.offset != d * rhs.offset or lhs.body.truncate(base * d) != rhs.body.inflate(d).truncate(base * d):
            fails.append((N, d, "I"))
    return not fails, f"{len(pairs) - len({f[:2] for f in fails})}/{len(pairs)} pairs agree through {base} terms" + (
        f"; failures {fails}" if fails else ""
    )


def classifier():
    got = necessary_pairs(200, 6)
    want_reasons = {(10, 1): ("budget B₁=2>1",), (13, 2): ("ν₃=2>1",), (6, 2): ("ν∞=4>3",)}
    wrong = {p: pass_filter(*p).reasons for p, r in want_reasons.items() if pass_filter(*p).reasons != r}
    ok = got == EXPECTED_PAIRS and not wrong
    return ok, f"{len(got)} pairs, equal to M: {got == EXPECTED_PAIRS}; reason codes {'match' if not wrong else wrong}"


def mum_invariant():
    bad = [fx.pair for fx in load_golden() if indicial_at_zero(fx.operator) != D3]
    rnd = sum(indicial_at_zero(dn_build(A)) != D3 for A in _random_matrices(100, 2))
    return not bad and not rnd, f"{17 - len(bad)}/17 table operators, {100 - rnd}/100 random"


def adjoint_antisymmetry():
    bad = [fx.pair for fx in load_golden() if formal_adjoint(fx.operator) != -fx.operator]
    rnd = 0
    for A in _random_matrices(100, 3):
        L = dn_build(A)
        rnd += formal_adjoint(L) != -L
    return not bad and not rnd, f"{17 - len(bad)}/17 table operators, {100 - rnd}/100 random"


def annihilation():
    bad = []
    for fx in load_golden():
        res = weyl_apply(fx.operator, phi_in_t(fx.N, fx.d, fx.c0, TERMS))
        if not res.is_zero() or res.prec < TERMS:
            bad.append(fx.pair)
    return not bad, f"{17 - len(bad)}/17 operators kill Phi(t) through {TERMS} terms"


def p_curvature():
    start = time.perf_counter()
    primes = primes_between(5, 43)
    bad, nbad_primes = [], 0
    for fx in load_golden():
        rep = nilpotence_report(fx.operator, primes)
        nbad_primes += sum(v == "bad_prime" for v in rep["primes"].values())
        if "not_nilpotent" in rep["primes"].values():
            bad.append(fx.pair)
    ctl = nilpotence_report(irregular_control_operator(), primes)
    ctl_ok = set(ctl["primes"].values()) == {"not_nilpotent"}
    elapsed = time.perf_counter() - start
    ok = not bad and ctl_ok and elapsed < 30
    return ok, (
        f"{17 - len(bad)}/17 nilpotent at every good prime in 5..43 ({nbad_primes} bad (operator, prime) cases skipped); "
        f"control rejected: {ctl_ok}; {elapsed:.1f}s"
    )


def _rand_poly_series(rng, c0, c1, prec=60, degree=8):
    return RatSeries([c0, c1] + [rng.randint(-3, 3) for _ in range(degree - 1)] + [0] * (prec - degree - 1), prec)


def series_properties():
    rng = random.Random(4)
    units = [Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-3, 2), Fraction(2)]
    x = RatSeries.x(60)
    rev = root = assoc = 0
    for _ in range(100):
        f = _rand_poly_series(rng, 0, rng.choice(units))
        g = reversion(f)
        rev += reversion(g) == f and compose(f, g) == x and compose(g, f) == x
        u = _rand_poly_series(rng, 1, Fraction(rng.randint(-5, 5), rng.randint(1, 7)))
        n = rng.randint(2, 6)
        root += nth_root(u, n) ** n == u
        a = _rand_poly_series(rng, Fraction(3, 2), rng.randint(-3, 3))
        b = _rand_poly_series(rng, 0, rng.randint(-3, 3))
        c = _rand_poly_series(rng, 0, rng.randint(-3, 3))
        assoc += compose(compose(a, b), c) == compose(a, compose(b, c))
    return rev == root == assoc == 100, f"reversion {rev}/100, nth_root {root}/100, associativity {assoc}/100 at 60 terms"


def pipeline_consistency():
    doc = load_fixture("pipeline_relation.json")
    mats = [DNMatrix.from_json(m) for m in doc["instances"]]
    equal = sum(regularize_pipeline(A) == dn_build(A) for A in mats)
    same_class = sum(extract_matrix(regularize_pipeline(A)).same_class(A) for A in mats)
    ok = doc["relation"] == "equal" and equal == same_class == len(mats) == 25
    return ok, f"recorded relation '{doc['relation']}': {equal}/{len(mats)} equal, {same_class}/{len(mats)} same class"


CRITERIA = [
    (1, "table reproduction", table_reproduction),
    (2, "operator reproduction", operator_reproduction),
    (3, "eta-product formula", eta_product_formula),
    (4, "same-level equality", same_level_equality),
    (5, "classifier", classifier),
    (6, "MUM invariant", mum_invariant),
    (7, "adjoint antisymmetry", adjoint_antisymmetry),
    (8, "annihilation", annihilation),
    (9, "p-curvature", p_curvature),
    (10, "series kernel properties", series_properties),
    (11, "pipeline consistency", pipeline_consistency),
]


def _line(num, name, ok, detail) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2} {name}: {detail}"


@pytest.mark.parametrize("num,name,check", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, name, check, capsys):
    ok, detail = check()
    with capsys.disabled():
        print("\n" + _line(num, name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(_line(num, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
