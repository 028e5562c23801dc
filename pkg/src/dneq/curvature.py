"""p-curvature of an operator over F_p(t) and a nilpotence screen.

For a first-order system ``d/dt xi = xi M`` the iterates ``A_1 = M``,
``A_{k+1} = M A_k + A_k'`` satisfy ``xi^(k) = xi A_k``, and ``C_p = A_p`` is
the p-curvature.  Polynomials over F_p are numpy int64 coefficient vectors
(ascending); with ``p < 2**15`` every convolution stays well inside int64.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .numth import is_prime
from .weyl import DPoly, WeylOp, symbol_polynomial, to_ddt

__all__ = [
    "BadPrime",
    "FpPoly",
    "FpRatFun",
    "FpMatrix",
    "companion_matrix",
    "p_curvature",
    "is_nilpotent",
    "nilpotence_report",
    "primes_between",
    "irregular_control_operator",
]

NILPOTENT = "nilpotent"
NOT_NILPOTENT = "not_nilpotent"
BAD = "bad_prime"


class BadPrime(ArithmeticError):
    pass


class FpPoly:
    __slots__ = ("c", "p")

    def __init__(self, coeffs, p: int):
        a = np.asarray(coeffs, dtype=np.int64) % p
        nz = np.flatnonzero(a)
        self.c = a[: nz[-1] + 1] if nz.size else a[:0]
        self.p = p

    @classmethod
    def from_rationals(cls, coeffs: Sequence[Fraction], p: int) -> FpPoly:
        return cls([_reduce(Fraction(x), p) for x in coeffs], p)

    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(len(self.c))

    def __eq__(self, other) -> bool:
        return isinstance(other, FpPoly) and self.p == other.p and np.array_equal(self.c, other.c)

    def __repr__(self) -> str:
        return f"FpPoly({self.c.tolist()}, p={self.p})"

    def __add__(self, other: FpPoly) -> FpPoly:
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] += b
        return FpPoly(out, self.p)

    def __neg__(self) -> FpPoly:
        return FpPoly(-self.c, self.p)

    def __sub__(self, other: FpPoly) -> FpPoly:
        return self + (-other)

    def __mul__(self, other) -> FpPoly:
        if isinstance(other, FpPoly):
            if not len(self.c) or not len(other.c):
                return FpPoly([], self.p)
            return FpPoly(np.convolve(self.c, other.c), self.p)
        return FpPoly(self.c * (int(other) % self.p), self.p)

    __rmul__ = __mul__

    def derivative(self) -> FpPoly:
        if len(self.c) <= 1:
            return FpPoly([], self.p)
        return FpPoly(self.c[1:] * np.arange(1, len(self.c), dtype=np.int64), self.p)

    def lead(self) -> int:
        return int(self.c[-1])

    def monic(self) -> FpPoly:
        return self * pow(self.lead(), -1, self.p)

    def divmod(self, other: FpPoly) -> tuple[FpPoly, FpPoly]:
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        p = self.p
        r = self.c.copy()
        db = other.degree()
        inv = pow(other.lead(), -1, p)
        if len(r) - 1 < db:
            return FpPoly([], p), self
        q = np.zeros(len(r) - db, dtype=np.int64)
        b = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            coef = (r[k + db] * inv) % p
            if coef:
                q[k] = coef
                r[k : k + db + 1] = (r[k : k + db + 1] - coef * b) % p
        return FpPoly(q, p), FpPoly(r[:db], p)

    def gcd(self, other: FpPoly) -> FpPoly:
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else a


def _reduce(x: Fraction, p: int) -> int:
    if x.denominator % p == 0:
        raise BadPrime(f"denominator {x.denominator} divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


class FpRatFun:
    """``num / den`` over F_p, reduced, ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: FpPoly, den: FpPoly | None = None):
        p = num.p
        if den is None:
            den = FpPoly([1], p)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = num, FpPoly([1], p)
            return
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num.divmod(g)[0], den.divmod(g)[0]
        lc = den.lead()
        inv = pow(lc, -1, p)
        self.num, self.den = num * inv, den * inv

    @property
    def p(self) -> int:
        return self.num.p

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        return isinstance(other, FpRatFun) and self.num == other.num and self.den == other.den

    def __repr__(self) -> str:
        return f"FpRatFun({self.num.c.tolist()} / {self.den.c.tolist()}, p={self.p})"

    def __add__(self, other: FpRatFun) -> FpRatFun:
        return FpRatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> FpRatFun:
        return FpRatFun(-self.num, self.den)

    def __sub__(self, other: FpRatFun) -> FpRatFun:
        return self + (-other)

    def __mul__(self, other: FpRatFun) -> FpRatFun:
        return FpRatFun(self.num * other.num, self.den * other.den)

    def derivative(self) -> FpRatFun:
        return FpRatFun(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den * self.den
        )


class FpMatrix:
    def __init__(self, rows: Sequence[Sequence[FpRatFun]]):
        self.rows = [list(r) for r in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("matrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> int:
        return self.rows[0][0].p

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, FpMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"FpMatrix({self.rows!r})"

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def common_denominator(self) -> FpPoly:
        den = FpPoly([1], self.p)
        for r in self.rows:
            for x in r:
                g = den.gcd(x.den)
                den = den * x.den.divmod(g)[0]
        return den.monic()

    def numerators(self, den: FpPoly) -> list[list[FpPoly]]:
        return [[x.num * den.divmod(x.den)[0] for x in r] for r in self.rows]


def _poly_matmul(a, b):
    n = len(a)
    p = a[0][0].p
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = FpPoly([], p)
            for k in range(n):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def companion_matrix(L: WeylOp, p: int) -> FpMatrix:
    """First-order system ``d/dt xi = xi M`` for ``xi = (y, y', ..., y^(n-1))``."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for k, poly in L.terms.items():
        for c in poly.c:
            if c.denominator % p == 0:
                raise BadPrime(f"coefficient {c} of t^{k} term has denominator divisible by {p}")
    c = to_ddt(L)
    if not c:
        raise ValueError("zero operator")
    n = max(c)
    sym = symbol_polynomial(L)
    if sym[-1].numerator % p == 0:
        raise BadPrime(f"leading symbol coefficient {sym[-1]} vanishes mod {p}")
    if sym[0].numerator % p == 0:
        raise BadPrime(f"trailing symbol coefficient {sym[0]} vanishes mod {p}")
    lead = FpPoly.from_rationals(c[n], p)
    zero = FpRatFun(FpPoly([], p))
    one = FpRatFun(FpPoly([1], p))
    rows = [[zero] * n for _ in range(n)]
    for j in range(n - 1):
        rows[j + 1][j] = one
    for i in range(n):
        ci = FpPoly.from_rationals(c.get(i, []), p)
        rows[i][n - 1] = FpRatFun(-ci, lead)
    return FpMatrix(rows)


def _curvature_numerator(m: FpMatrix, p: int):
    """``(P, den)`` with ``C_p = P / den**p`` (``den`` the common denominator of ``M``)."""
    den = m.common_denominator()
    base = m.numerators(den)
    dden = den.derivative()
    cur = base
    for k in range(1, p):
        prod = _poly_matmul(base, cur)
        cur = [
            [prod[i][j] + cur[i][j].derivative() * den - cur[i][j] * dden * k for j in range(m.n)]
            for i in range(m.n)
        ]
    return cur, den


def p_curvature(m: FpMatrix, p: int) -> FpMatrix:
    """``C_p`` by ``p - 1`` steps of ``A <- M A + A'`` from ``A = M``."""
    if m.p != p:
        raise ValueError("matrix is over a different prime field")
    num, den = _curvature_numerator(m, p)
    denp = FpPoly([1], p)
    for _ in range(p):
        denp = denp * den
    return FpMatrix([[FpRatFun(x, denp) for x in r] for r in num])


def is_nilpotent(c: FpMatrix) -> bool:
    """``C**n == 0`` for the n x n matrix ``C``."""
    den = c.common_denominator()
    num = c.numerators(den)
    acc = num
    for _ in range(c.n - 1):
        acc = _poly_matmul(acc, num)
    return all(not x for r in acc for x in r)


def _classify_prime(L: WeylOp, p: int) -> tuple[str, str | None]:
    try:
        m = companion_matrix(L, p)
    except BadPrime as e:
        return BAD, str(e)
    num, _den = _curvature_numerator(m, p)
    acc = num
    for _ in range(m.n - 1):
        acc = _poly_matmul(acc, num)
    return (NILPOTENT if all(not x for r in acc for x in r) else NOT_NILPOTENT), None


def primes_between(lo: int, hi: int) -> list[int]:
    return [q for q in range(lo, hi + 1) if is_prime(q)]


def nilpotence_report(L: WeylOp, primes: Iterable[int]) -> dict:
    """Per-prime verdicts and a summary.

    The summary is ``"consistent with global nilpotence"`` unless some good
    prime gives a non-nilpotent p-curvature; with no good primes it is
    ``"vacuous"``.
    """
    verdicts: dict[int, str] = {}
    reasons: dict[int, str] = {}
    for q in primes:
        if not is_prime(q):
            raise ValueError(f"{q} is not prime")
        v, why = _classify_prime(L, q)
        verdicts[q] = v
        if why:
            reasons[q] = why
    good = [v for v in verdicts.values() if v != BAD]
    if not good:
        summary = "vacuous"
    elif NOT_NILPOTENT in good:
        summary = "not globally nilpotent"
    else:
        summary = "consistent with global nilpotence"
    return {"primes": verdicts, "bad_reasons": reasons, "verdict": summary}


def irregular_control_operator() -> WeylOp:
    """``t (d/dt - 1) = D - t``: exponential solutions, never nilpotent."""
    return WeylOp({0: DPoly([0, 1]), 1: DPoly([-1])})
