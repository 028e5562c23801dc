from fractions import Fraction

import pytest
from conftest import dn3_matrices, load_fixture
from hypothesis import assume, given, settings, strategies as st

from dneq.fixtures import golden, load_golden
from dneq.modular import phi_in_t
from dneq.pfit import extract_matrix
from dneq.series import FracSeries, RatSeries
from dneq.weyl import (
    A1_DT,
    A1_T,
    D,
    T,
    A1Op,
    DNMatrix,
    DPoly,
    NotLeftDivisibleByD,
    WeylOp,
    _d_minus,
    connection_matrix,
    d3_expand,
    dn_build,
    formal_adjoint,
    fourier_transform,
    from_ddt,
    indicial_at_zero,
    regularize_pipeline,
    right_det,
    strip_left_D,
    symbol_polynomial,
    to_ddt,
    weyl_apply,
    weyl_mul,
)

D3 = DPoly([0, 0, 0, 1])


def lin(a, b):
    return DPoly([b, a])


def op(**terms):
    return WeylOp({int(k[1:]): v for k, v in terms.items()})


LEVEL2 = DNMatrix(3, {(0, 0): 24, (1, 1): 104, (0, 1): 3888, (1, 2): 13600, (0, 2): 504576, (0, 3): 18323712})
LEVEL2_OP = WeylOp({0: D3, 1: lin(2, 1) * lin(4, 3) * lin(4, 1) * -8})


# -- normal form ----------------------------------------------------------------


def test_commutation_relation():
    assert weyl_mul(D, T) == WeylOp({1: lin(1, 1)})
    assert weyl_mul(T, D) == WeylOp({1: lin(1, 0)})
    assert D * D * T == WeylOp({1: lin(1, 1) ** 2})


weyl_ops = st.dictionaries(
    st.integers(0, 3),
    st.lists(st.integers(-4, 4), min_size=1, max_size=3).map(DPoly),
    max_size=3,
).map(WeylOp)


@settings(max_examples=100, deadline=None)
@given(weyl_ops, weyl_ops, weyl_ops)
def test_mul_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60, deadline=None)
@given(weyl_ops, weyl_ops)
def test_apply_is_a_module_action(a, b):
    assume(a and b)  # a zero result carries no meaningful offset
    s = FracSeries(Fraction(1, 3), RatSeries([1, 2, -1, 5, 0, 3, 1, 1, 2, 7], 10))
    assert weyl_apply(a * b, s) == weyl_apply(a, weyl_apply(b, s))


@settings(max_examples=60, deadline=None)
@given(weyl_ops)
def test_ddt_roundtrip(L):
    assert from_ddt(to_ddt(L)) == L


def test_operator_json_roundtrip():
    obj = LEVEL2_OP.to_json()
    assert obj["terms"][0] == {"tdeg": 0, "dpoly": ["0", "0", "0", "1"]}
    assert WeylOp.from_json(obj) == LEVEL2_OP


# -- right determinant and DN construction -------------------------------------------


def test_right_det_small():
    assert right_det([[D]]) == D
    assert right_det([[D, WeylOp()], [WeylOp(), D + 1]]) == D * (D + 1)


def test_right_det_commutative_case():
    m = [[WeylOp.scalar(x) for x in row] for row in [[2, 3, 1], [0, -1, 4], [5, 2, 2]]]
    assert right_det(m) == WeylOp.scalar(2 * (-2 - 8) - 3 * (0 - 20) + 1 * (0 + 5))


def test_dn_build_examples():
    assert dn_build(DNMatrix.zero(3)) == WeylOp({0: D3})
    assert dn_build(LEVEL2) == LEVEL2_OP
    want = WeylOp({0: D3, 3: lin(2, 3) * lin(1, 2) * lin(1, 1) * -54})
    assert dn_build(golden(3, 3).matrix) == want


def test_d3_expand_level2_higher_terms_vanish():
    L = d3_expand(LEVEL2)
    assert L == LEVEL2_OP
    assert not L.coeff(2) and not L.coeff(3) and not L.coeff(4)


@pytest.mark.parametrize("N", [1, 2, 4])
def test_dn_build_other_orders(N):
    A = DNMatrix(N, {(0, 0): 3, (0, 1): Fraction(1, 2)})
    L = dn_build(A)
    assert indicial_at_zero(L) == DPoly([0] * N + [1])
    assert L.tdegree() <= N + 1


def test_strip_left_d_rejects():
    with pytest.raises(NotLeftDivisibleByD):
        strip_left_D(WeylOp({0: DPoly([1, 1])}))


@settings(max_examples=100, deadline=None)
@given(dn3_matrices)
def test_dn_build_matches_closed_form(A):
    L = dn_build(A)
    assert L == d3_expand(A)
    assert indicial_at_zero(L) == D3
    assert formal_adjoint(L) == -L


@settings(max_examples=30, deadline=None)
@given(dn3_matrices, st.fractions(min_value=-50, max_value=50, max_denominator=20))
def test_class_shift_consistent(A, a):
    assert dn_build(A.class_shift(a)) == d3_expand(A.class_shift(a))
    assert A.class_shift(a).same_class(A)


def test_matrix_symmetry_enforced():
    A = DNMatrix(3, {(0, 0): 1, (2, 3): 7})
    assert A[0, 1] == 7 and A[3, 3] == 1
    with pytest.raises(ValueError):
        DNMatrix(3, {(0, 1): 1, (2, 3): 2})
    assert DNMatrix.from_json(A.to_json()) == A


# -- adjoint, indicial, symbol --------------------------------------------------------


def test_adjoint_examples():
    assert formal_adjoint(D) == -D
    x = WeylOp({1: lin(2, 1)})
    # (t(2D+1))* = (-2D+1) t = t(-2D-1)
    assert formal_adjoint(x) == WeylOp({1: lin(-2, -1)})
    assert formal_adjoint(formal_adjoint(x)) == x
    assert formal_adjoint(LEVEL2_OP) == -LEVEL2_OP


@settings(max_examples=60, deadline=None)
@given(weyl_ops, weyl_ops)
def test_adjoint_reverses_products(a, b):
    assert formal_adjoint(a * b) == formal_adjoint(b) * formal_adjoint(a)


def test_indicial_examples():
    assert indicial_at_zero(WeylOp({0: D3, 1: lin(1, 0)})) == D3
    assert not indicial_at_zero(WeylOp({1: lin(1, 0)}))


def test_symbol_examples():
    assert symbol_polynomial(WeylOp({0: D3})) == [1]
    L = WeylOp({0: D3, 4: lin(1, 3) * lin(1, 2) * lin(1, 1) * -256})
    assert symbol_polynomial(L) == [1, 0, 0, 0, -256]
    sym = symbol_polynomial(golden(6, 1).operator)
    # quadratic in t with distinct roots: nonzero discriminant
    a, b, c = sym[2], sym[1], sym[0]
    assert len(sym) == 3 and b * b - 4 * a * c != 0


# -- pipeline -----------------------------------------------------------------------


def test_fourier_on_generators():
    assert fourier_transform(A1_T) == A1_DT
    assert fourier_transform(A1_DT) == -A1_T
    assert A1_DT * A1_T == A1_T * A1_DT + A1Op.scalar(1)


def test_zero_matrix_pipeline_determinant():
    hat = right_det(_d_minus(connection_matrix(DNMatrix.zero(3)), D))
    assert hat == D**4
    assert regularize_pipeline(DNMatrix.zero(3)) == WeylOp({0: D3})


def test_pipeline_relation_pinned():
    doc = load_fixture("pipeline_relation.json")
    assert doc["relation"] == "equal"
    mats = [DNMatrix.from_json(m) for m in doc["instances"]]
    assert len(mats) == 25
    for A in mats:
        P = regularize_pipeline(A)
        assert P == dn_build(A)
        assert extract_matrix(P).same_class(A)


# -- golden operators -----------------------------------------------------------------


@pytest.mark.parametrize("fx", load_golden(), ids=lambda f: f"{f.N}-{f.d}")
def test_golden_operator(fx):
    L = fx.operator
    assert dn_build(fx.matrix) == L
    assert indicial_at_zero(L) == D3
    assert formal_adjoint(L) == -L
    assert weyl_apply(L, phi_in_t(fx.N, fx.d, prec=32)).is_zero()
