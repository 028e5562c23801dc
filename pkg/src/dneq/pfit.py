"""Recover the D3 operator annihilating a series and read off its matrix."""
from __future__ import annotations

from fractions import Fraction

from .linalg import echelon, integer_rows, solve_unique
from .numth import rat_str
from .series import DEFAULT_PREC, RatSeries
from .weyl import DNMatrix, DPoly, WeylOp, d3_expand

__all__ = [
    "FitError",
    "NoD3Annihilator",
    "UnderdeterminedFit",
    "NotD3Shaped",
    "fit_d3",
    "extract_matrix",
    "recover",
    "recover_report",
    "normalize_class",
    "MIN_FIT_TERMS",
    "MIN_SURPLUS",
]

MIN_FIT_TERMS = 24
MIN_SURPLUS = 8
MAX_TDEG = 4
ORDER = 3

_D3 = DPoly([0, 0, 0, 1])


class FitError(ArithmeticError):
    pass


class NoD3Annihilator(FitError):
    pass


class UnderdeterminedFit(FitError):
    pass


class NotD3Shaped(FitError):
    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = residuals


def _system(phi: RatSeries, r: int):
    """Rows of ``n^3 phi_n + sum_{k<=r} p_k(n-k) phi_{n-k} = 0`` for ``n >= 1``.

    Unknowns are the coefficients ``c_{k,m}`` of ``p_k = sum_m c_{k,m} D^m``,
    ordered ``k`` major.  Equations that are identically ``0 = 0`` are dropped.
    """
    c = phi.coeffs
    rows = []
    for n in range(1, phi.prec):
        row = []
        for k in range(1, r + 1):
            m0 = n - k
            v = c[m0] if m0 >= 0 else 0
            row.extend(v * m0**j if v else 0 for j in range(ORDER + 1))
        rhs = -(n**ORDER) * c[n]
        if any(row) or rhs:
            rows.append(row + [rhs])
    return rows


def fit_d3(phi: RatSeries, max_tdeg: int = MAX_TDEG, min_surplus: int = MIN_SURPLUS) -> WeylOp:
    """The operator ``D^3 + sum_{k=1..r} t^k p_k(D)`` (``deg p_k <= 3``) of least
    ``t``-degree ``r <= max_tdeg`` annihilating ``phi`` to its precision.

    Any annihilator ``L`` of t-degree below 4 has multiples ``(1 + c t + ...) L``
    of the same shape, so the ansatz is fixed at the least degree that is
    consistent; there the solution must be unique and leave at least
    ``min_surplus`` independent checks.
    """
    if phi.prec < MIN_FIT_TERMS:
        raise UnderdeterminedFit(f"need at least {MIN_FIT_TERMS} terms, got {phi.prec}")
    if phi.coeffs[0] != 1:
        raise ValueError("series must have constant term 1")
    if all(not x for x in phi.coeffs[1:]):
        return WeylOp({0: _D3})
    for r in range(1, max_tdeg + 1):
        rows = _system(phi, r)
        nunk = r * (ORDER + 1)
        ef = echelon(integer_rows(rows), nunk)
        if not ef.consistent():
            continue
        if ef.rank < nunk:
            raise UnderdeterminedFit(f"t-degree {r}: rank {ef.rank} < {nunk} unknowns")
        surplus = len(rows) - ef.rank
        if surplus < min_surplus:
            raise UnderdeterminedFit(f"t-degree {r}: only {surplus} surplus equations")
        sol = solve_unique(ef)
        terms = {0: _D3}
        for k in range(1, r + 1):
            terms[k] = DPoly(sol[(k - 1) * (ORDER + 1) : k * (ORDER + 1)])
        return WeylOp(terms)
    raise NoD3Annihilator(f"no operator of t-degree <= {max_tdeg} annihilates the series")


def extract_matrix(L: WeylOp) -> DNMatrix:
    """Invert the D3 expansion stage by stage; every residual must vanish."""
    residuals: dict[str, str] = {}

    def fail(key, value):
        residuals[key] = str(value) if not isinstance(value, Fraction) else rat_str(value)

    extra = [k for k in L.terms if k < 0 or k > 4]
    if extra:
        fail("tdeg", extra)
    if L.coeff(0) != _D3:
        fail("p0", L.coeff(0))
    for k, p in L.terms.items():
        if p.degree() > ORDER:
            fail(f"deg p{k}", p.degree())
    if residuals:
        raise NotD3Shaped("operator is not of D3 shape", residuals)

    lin = lambda a, b: DPoly([b, a])  # noqa: E731  a*D + b

    # stage 1: p1 = -(2D+1) * ((a00+a11) D^2 + (a00+a11) D + a00)
    q1, r1 = L.coeff(1).divmod(-lin(2, 1))
    if r1:
        fail("p1 mod (2D+1)", r1)
    a00 = q1[0]
    a11 = q1[2] - a00
    if q1[1] != q1[2]:
        fail("p1 D-slot", q1[1] - q1[2])

    # stage 2: p2 = (D+1) * (x D^2 + y D + z)
    q2, r2 = L.coeff(2).divmod(lin(1, 1))
    if r2:
        fail("p2 mod (D+1)", r2)
    a01 = (6 * a11 * a00 + a00**2 - q2[0]) / 4
    a12 = a11**2 + a00**2 + 4 * a11 * a00 - 2 * a01 - q2[2]
    y = 8 * a11 * a00 - 2 * a12 + 2 * a00**2 - 4 * a01 + 2 * a11**2
    if q2[1] != y:
        fail("p2 D-slot", q2[1] - y)

    # stage 3: p3 = -(2D+3)(D+2)(D+1) * c3
    q3, r3 = L.coeff(3).divmod(-(lin(2, 3) * lin(1, 2) * lin(1, 1)))
    if r3 or q3.degree() > 0:
        fail("p3 shape", L.coeff(3))
    c3 = q3[0]
    a02 = c3 - (a00**2 * a11 + a11**2 * a00 - a12 * a00 - a11 * a01 - a01 * a00)

    # stage 4: p4 = (D+3)(D+2)(D+1) * c4
    q4, r4 = L.coeff(4).divmod(lin(1, 3) * lin(1, 2) * lin(1, 1))
    if r4 or q4.degree() > 0:
        fail("p4 shape", L.coeff(4))
    c4 = q4[0]
    a03 = -c4 + (-(a00**2) * a12 + 2 * a02 * a00 + a00**2 * a11**2 + a01**2 - 2 * a01 * a11 * a00)

    if residuals:
        raise NotD3Shaped("nonzero residuals in the D3 inversion", residuals)
    A = DNMatrix(3, {(0, 0): a00, (1, 1): a11, (0, 1): a01, (1, 2): a12, (0, 2): a02, (0, 3): a03})
    if d3_expand(A) != L:
        raise AssertionError("D3 inversion does not reproduce the operator")
    return A


def normalize_class(A: DNMatrix) -> DNMatrix:
    """Shift the diagonal so that ``a00 = 0``."""
    return A.class_shift(-A[0, 0])


def recover_report(N: int, d: int, c0=None, prec: int = DEFAULT_PREC) -> dict:
    from .fixtures import default_c0
    from .modular import phi_in_t

    if c0 is None:
        c0 = default_c0(N)
    series = phi_in_t(N, d, c0, prec)
    L = fit_d3(series)
    A = extract_matrix(L)
    return {"pair": [N, d], "c0": Fraction(c0), "matrix": A, "operator": L, "series": series}


def recover(N: int, d: int, c0=None, prec: int = DEFAULT_PREC) -> DNMatrix:
    """Phi in ``t`` -> fitted operator -> D3 matrix."""
    return recover_report(N, d, c0, prec)["matrix"]
