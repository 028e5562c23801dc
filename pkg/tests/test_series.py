from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dneq.series import (
    CompositionNeedsPositiveValuation,
    DivisionByHigherValuation,
    FracSeries,
    NotReversible,
    RatSeries,
    RootNeedsUnitConstantTerm,
    compose,
    div,
    frac_mul,
    frac_pow,
    nth_root,
    reversion,
)

P = 60


def S(*cs, prec=12):
    return RatSeries(list(cs) + [0] * (prec - len(cs)), prec)


# -- naive oracles on plain lists ---------------------------------------------


def conv(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def lagrange_reversion(f, n):
    """[x^m] g = (1/m) [x^(m-1)] (x/f)^m, computed with plain lists."""
    m_ = n - 1
    h = [Fraction(c) for c in f[1:n]]  # f/x, known to m_ terms
    inv = [Fraction(0)] * m_
    inv[0] = 1 / h[0]
    for k in range(1, m_):
        inv[k] = -sum(h[i] * inv[k - i] for i in range(1, k + 1)) / h[0]
    out = [Fraction(0)] * n
    pw = [Fraction(1)] + [Fraction(0)] * (m_ - 1)
    for m in range(1, n):
        pw = conv(pw, inv, m_)
        out[m] = pw[m - 1] / m
    return out


# -- examples -----------------------------------------------------------------


def test_mul_add_examples():
    assert S(1, 1) * S(1, -1) == S(1, 0, -1)
    assert (S(1, 1) + S(-1, -1)).is_zero()
    assert S(1, 1) * S(1, 1) == S(1, 2, 1)


def test_div_examples():
    assert div(S(1), S(1, -1)) == RatSeries([1] * 12, 12)
    q = div(S(0, 1, 1), S(0, 1))
    assert q.coeffs[:2] == (1, 1) and not any(q.coeffs[2:])
    with pytest.raises(DivisionByHigherValuation):
        div(S(0, 1), S(0, 0, 0, 1))


def test_compose_examples():
    assert compose(S(1, 1), S(0, 0, 1)) == S(1, 0, 1)
    geo = RatSeries([1] * 12, 12)
    assert compose(geo, S(0, 2)) == RatSeries([2**n for n in range(12)], 12)
    with pytest.raises(CompositionNeedsPositiveValuation):
        compose(geo, S(1, 1))
    # a polynomial may be composed with anything
    assert compose(S(1, 1), S(1, 1), f_is_polynomial=True).coeffs[:2] == (2, 1)


def test_reversion_examples():
    g = reversion(RatSeries([0] + [1] * 11, 12))
    assert list(g.coeffs) == [0] + [(-1) ** (n + 1) for n in range(1, 12)]
    assert reversion(S(0, 1)) == S(0, 1)
    g = reversion(S(0, 1, 1))
    assert list(g.coeffs[:5]) == [0, 1, -1, 2, -5]
    for bad in (S(1, 1), S(0, 0, 1)):
        with pytest.raises(NotReversible):
            reversion(bad)


def test_compose_with_reversion_is_identity():
    f = S(0, 1, 1, prec=P)
    assert compose(f, reversion(f)) == RatSeries.x(P)


def test_nth_root_examples():
    assert nth_root(S(1, 2, 1), 2) == S(1, 1)
    e4 = RatSeries([1, 240, 2160, 6720, 17520], 5)
    assert list(nth_root(e4, 2).coeffs[:3]) == [1, 120, -6120]
    assert nth_root(RatSeries.one(20), 7) == RatSeries.one(20)
    with pytest.raises(RootNeedsUnitConstantTerm):
        nth_root(S(2, 1), 2)


def test_frac_examples():
    h1 = FracSeries(Fraction(1, 24), S(1, -1, -1))
    h2 = FracSeries(Fraction(2, 24), S(1, 0, -1))
    prod = frac_mul(frac_pow(h1, 2), frac_pow(h2, 2))
    assert prod.offset == Fraction(1, 4)
    sq = frac_pow(FracSeries(Fraction(1, 2), RatSeries.one(10)), 2)
    assert sq.offset == 1 and sq.body == RatSeries.one(10)


def test_json_roundtrip():
    s = S(1, Fraction(-3, 7), 5)
    obj = s.to_json()
    assert obj["offset"] == "0" and obj["coeffs"][1] == "-3/7"
    assert RatSeries.from_json(obj) == s
    f = FracSeries(Fraction(1, 3), s)
    assert FracSeries.from_json(f.to_json()) == f


# -- properties ---------------------------------------------------------------

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)
unit = st.sampled_from([Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-3, 2), Fraction(2)])


def series_with(c0, c1_nonzero=False, prec=P, degree=8):
    """Random polynomials of low degree, read as series known to ``prec`` terms.

    Dense random rationals make 60-term reversions cost seconds each through
    coefficient growth alone; a short polynomial still exercises every term.
    """
    tail = st.lists(st.integers(-3, 3), min_size=degree - 1, max_size=degree - 1)
    c1 = unit if c1_nonzero else small
    return st.tuples(c1, tail).map(
        lambda t: RatSeries([c0, t[0], *t[1]] + [0] * (prec - degree - 1), prec)
    )


@settings(max_examples=100, deadline=None)
@given(series_with(0, c1_nonzero=True))
def test_reversion_roundtrip(f):
    g = reversion(f)
    assert reversion(g) == f
    assert compose(f, g) == RatSeries.x(P)
    assert compose(g, f) == RatSeries.x(P)


@settings(max_examples=100, deadline=None)
@given(st.tuples(unit, st.lists(small, min_size=14, max_size=14)))
def test_reversion_matches_lagrange(c):
    f = RatSeries([0, c[0], *c[1]], 16)
    assert list(reversion(f).coeffs) == lagrange_reversion(list(f.coeffs), 16)


@settings(max_examples=100, deadline=None)
@given(series_with(1), st.integers(2, 6))
def test_nth_root_powers_back(f, n):
    g = nth_root(f, n)
    assert g.coeffs[0] == 1
    assert g**n == f


@settings(max_examples=100, deadline=None)
@given(series_with(Fraction(3, 2)), series_with(0), series_with(0))
def test_composition_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=20, max_size=20), st.lists(small, min_size=20, max_size=20))
def test_mul_matches_convolution(ca, cb):
    a, b = RatSeries(ca, 20), RatSeries(cb, 20)
    prod = a * b
    assert prod.prec >= 20  # more when either factor has positive valuation
    assert list(prod.coeffs[:20]) == conv(a.coeffs, b.coeffs, 20)


@settings(max_examples=50, deadline=None)
@given(st.lists(small, min_size=40, max_size=40), st.integers(1, 4))
def test_precision_is_conservative(cs, v):
    """Every reported coefficient agrees with a recomputation from more terms."""
    g_full = RatSeries([0] * v + [1] + cs, 41 + v)
    f_full = RatSeries([1] + cs[::-1], 41)
    g, f = g_full.truncate(12 + v), f_full.truncate(12)
    for lo, hi in [
        (compose(f, g), compose(f_full, g_full)),
        (div(f, g.shift(-v)), div(f_full, g_full.shift(-v))),
        (nth_root(f, 3), nth_root(f_full, 3)),
        (f * g, f_full * g_full),
    ]:
        assert hi.prec >= lo.prec
        assert hi.truncate(lo.prec) == lo


def test_precision_bookkeeping():
    a = RatSeries([1, 2, 3], 3)
    b = RatSeries([0, 0, 1, 5, 6, 7, 8], 7)  # x^2 * (1 + ...), known to x^7
    assert (a * b).prec == 5
    assert b.inflate(3).prec == 21
    assert b.derivative().prec == 6
