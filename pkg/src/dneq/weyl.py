"""Operators in ``t`` and ``D = t d/dt`` and the determinantal construction.

A :class:`WeylOp` is stored ``t``-graded as ``sum_k t**k * p_k(D)`` with every
``t`` on the left; the defining relation is ``p(D) * t = t * p(D + 1)``.
Negative ``k`` are allowed so that operators on the torus (``t`` invertible)
can be represented; everything the DN construction returns has ``k >= 0``.

:class:`A1Op` is the ``(t, d/dt)`` presentation on the affine line, used by
the regularization pipeline (left division by ``t``, Fourier transform).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .numth import rat, rat_str
from .series import FracSeries, RatSeries

__all__ = [
    "WeylError",
    "NotLeftDivisibleByD",
    "NotLeftDivisibleByT",
    "DPoly",
    "WeylOp",
    "A1Op",
    "DNMatrix",
    "D",
    "T",
    "weyl_mul",
    "right_det",
    "connection_matrix",
    "dn_matrix",
    "dn_build",
    "d3_expand",
    "regularize_pipeline",
    "fourier_transform",
    "formal_adjoint",
    "indicial_at_zero",
    "symbol_polynomial",
    "strip_left_D",
    "strip_left_t",
    "weyl_apply",
    "to_ddt",
    "from_ddt",
    "to_a1",
    "from_a1",
    "class_shift",
]

_ZERO = Fraction(0)


class WeylError(ArithmeticError):
    pass


class NotLeftDivisibleByD(WeylError):
    pass


class NotLeftDivisibleByT(WeylError):
    pass


# ---------------------------------------------------------------------------
# polynomials in D


class DPoly:
    """Polynomial in ``D`` with rational coefficients, ascending order."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(x) for x in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.c: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, a) -> DPoly:
        return cls([a])

    @classmethod
    def linear(cls, a, b) -> DPoly:
        """``a*D + b``."""
        return cls([b, a])

    @classmethod
    def from_factors(cls, scale, factors: Iterable[Sequence]) -> DPoly:
        out = cls([scale])
        for f in factors:
            out = out * cls(f)
        return out

    def degree(self) -> int:
        return len(self.c) - 1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, DPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == DPoly([other]).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __getitem__(self, i: int) -> Fraction:
        return self.c[i] if 0 <= i < len(self.c) else _ZERO

    def __repr__(self) -> str:
        return f"DPoly([{', '.join(rat_str(x) for x in self.c)}])"

    def __str__(self) -> str:
        return _poly_str(self.c, "D")

    def __add__(self, other: DPoly) -> DPoly:
        if not isinstance(other, DPoly):
            other = DPoly([other])
        n = max(len(self.c), len(other.c))
        return DPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> DPoly:
        return DPoly(-x for x in self.c)

    def __sub__(self, other: DPoly) -> DPoly:
        if not isinstance(other, DPoly):
            other = DPoly([other])
        return self + (-other)

    def __mul__(self, other) -> DPoly:
        if not isinstance(other, DPoly):
            a = rat(other)
            return DPoly(a * x for x in self.c)
        if not self.c or not other.c:
            return DPoly()
        out = [_ZERO] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return DPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> DPoly:
        out = DPoly([1])
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, x):
        acc = _ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def shift(self, a) -> DPoly:
        """``p(D + a)``."""
        a = rat(a)
        if not a or not self.c:
            return self
        n = len(self.c)
        out = [_ZERO] * n
        for i, x in enumerate(self.c):
            if not x:
                continue
            apow = Fraction(1)
            for j in range(i, -1, -1):
                out[j] += x * comb(i, j) * apow
                apow *= a
        return DPoly(out)

    def reflect(self) -> DPoly:
        """``p(-D)``."""
        return DPoly(x if i % 2 == 0 else -x for i, x in enumerate(self.c))

    def divmod(self, other: DPoly) -> tuple[DPoly, DPoly]:
        if not other.c:
            raise ZeroDivisionError("division by the zero polynomial")
        r = list(self.c)
        lead = other.c[-1]
        dq = len(r) - len(other.c)
        if dq < 0:
            return DPoly(), self
        q = [_ZERO] * (dq + 1)
        for k in range(dq, -1, -1):
            coef = r[k + len(other.c) - 1] / lead
            q[k] = coef
            if coef:
                for j, y in enumerate(other.c):
                    r[k + j] -= coef * y
        return DPoly(q), DPoly(r[: len(other.c) - 1])

    def exact_div(self, other: DPoly) -> DPoly | None:
        q, r = self.divmod(other)
        return q if not r else None


def _poly_str(cs: Sequence[Fraction], var: str) -> str:
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            s = mono
        else:
            s = rat_str(abs(c)) + ("*" + mono if mono else "")
        parts.append(("-" if c < 0 else "+", s))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, s in parts[1:]:
        out += f" {sign} {s}"
    return out


# ---------------------------------------------------------------------------
# operators sum_k t^k p_k(D)


class WeylOp:
    """``sum_k t**k * p_k(D)``; ``terms`` maps ``k`` to a nonzero :class:`DPoly`."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, DPoly | Sequence] | None = None):
        clean: dict[int, DPoly] = {}
        for k, p in (terms or {}).items():
            if not isinstance(p, DPoly):
                p = DPoly(p)
            if p:
                clean[int(k)] = p
        self.terms: dict[int, DPoly] = dict(sorted(clean.items()))

    @classmethod
    def scalar(cls, a) -> WeylOp:
        return cls({0: DPoly([a])})

    @classmethod
    def dpoly(cls, p: DPoly | Sequence, k: int = 0) -> WeylOp:
        return cls({k: p if isinstance(p, DPoly) else DPoly(p)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, WeylOp):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == WeylOp.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"WeylOp({str(self)!r})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, p in self.terms.items():
            tpart = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            ps = str(p)
            if p.degree() == 0:
                c = p.c[0]
                body = rat_str(c) if not tpart else (("-" if c == -1 else "" if c == 1 else rat_str(c) + "*") + tpart)
            elif not tpart:
                body = ps
            else:
                body = f"{tpart}*({ps})"
            out.append(body)
        return " + ".join(out).replace("+ -", "- ")

    def tdegree(self) -> int:
        return max(self.terms) if self.terms else -1

    def tvaluation(self) -> int:
        return min(self.terms) if self.terms else 0

    def order(self) -> int:
        """Order in ``D`` (highest D-degree over all t-components)."""
        return max((p.degree() for p in self.terms.values()), default=-1)

    def coeff(self, k: int) -> DPoly:
        return self.terms.get(k, DPoly())

    def __add__(self, other) -> WeylOp:
        if not isinstance(other, WeylOp):
            other = WeylOp.scalar(other)
        out = dict(self.terms)
        for k, p in other.terms.items():
            out[k] = out[k] + p if k in out else p
        return WeylOp(out)

    __radd__ = __add__

    def __neg__(self) -> WeylOp:
        return WeylOp({k: -p for k, p in self.terms.items()})

    def __sub__(self, other) -> WeylOp:
        if not isinstance(other, WeylOp):
            other = WeylOp.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> WeylOp:
        return (-self) + other

    def __mul__(self, other) -> WeylOp:
        if isinstance(other, WeylOp):
            return weyl_mul(self, other)
        a = rat(other)
        return WeylOp({k: p * a for k, p in self.terms.items()})

    def __rmul__(self, other) -> WeylOp:
        a = rat(other)
        return WeylOp({k: p * a for k, p in self.terms.items()})

    def __pow__(self, e: int) -> WeylOp:
        out = WeylOp.scalar(1)
        for _ in range(e):
            out = out * self
        return out

    def to_json(self) -> dict:
        return {
            "terms": [
                {"tdeg": k, "dpoly": [rat_str(c) for c in p.c]} for k, p in self.terms.items()
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> WeylOp:
        return cls({int(t["tdeg"]): DPoly(rat(c) for c in t["dpoly"]) for t in obj["terms"]})


D = WeylOp({0: DPoly([0, 1])})
T = WeylOp({1: DPoly([1])})


def weyl_mul(a: WeylOp, b: WeylOp) -> WeylOp:
    """Product in normal form using ``p(D) * t**j = t**j * p(D + j)``."""
    out: dict[int, DPoly] = {}
    for i, p in a.terms.items():
        for j, q in b.terms.items():
            term = p.shift(j) * q
            k = i + j
            out[k] = out[k] + term if k in out else term
    return WeylOp(out)


def strip_left_D(L: WeylOp) -> WeylOp:
    """The ``X`` with ``D * X = L``; ``D * t**k p(D) = t**k (D + k) p(D)``."""
    out = {}
    for k, p in L.terms.items():
        q = p.exact_div(DPoly([k, 1]))
        if q is None:
            raise NotLeftDivisibleByD(f"t^{k} component {p} is not divisible by D + {k}")
        out[k] = q
    return WeylOp(out)


def strip_left_t(L: WeylOp) -> WeylOp:
    """The ``X`` with ``t * X = L`` among operators with nonnegative t-degrees."""
    if 0 in L.terms or (L.terms and min(L.terms) < 0):
        raise NotLeftDivisibleByT("operator has a component of t-degree <= 0")
    return WeylOp({k - 1: p for k, p in L.terms.items()})


def class_shift(A: DNMatrix, a) -> DNMatrix:
    return A.class_shift(a)


# ---------------------------------------------------------------------------
# right determinant


def right_det(m: Sequence[Sequence]):
    """Right determinant: expansion along the rightmost column, each entry
    multiplied on the right by its complement, complements expanded the same
    way.  Signs are ``(-1)**(row + col)``, so commuting entries give the
    ordinary determinant.
    """
    n = len(m)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in m):
        raise ValueError("matrix is not square")
    return _rdet(tuple(tuple(r) for r in m))


def _rdet(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    col = n - 1
    total = None
    for i in range(n):
        e = m[i][col]
        if not e:
            continue
        minor = tuple(row[:col] for r, row in enumerate(m) if r != i)
        term = e * _rdet(minor)
        if (i + col) % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return m[0][0] * 0
    return total


# ---------------------------------------------------------------------------
# DN matrices


class DNMatrix:
    """Symmetric parameter matrix ``a_ij`` (``0 <= i <= j <= N``) of a DN
    equation, symmetric about the anti-diagonal: ``a_ij = a_{N-j, N-i}``.

    Only ``i <= j`` entries exist.  Entries may be given for either member of
    a symmetric pair; conflicting values are rejected.
    """

    __slots__ = ("N", "a")

    def __init__(self, N: int, entries: Mapping[tuple[int, int], object] | None = None):
        if N < 1:
            raise ValueError("order N must be positive")
        a: dict[tuple[int, int], Fraction] = {
            (i, j): _ZERO for i in range(N + 1) for j in range(i, N + 1)
        }
        given: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i <= j <= N):
                raise ValueError(f"entry ({i},{j}) outside 0 <= i <= j <= {N}")
            v = rat(v)
            for key in ((i, j), (N - j, N - i)):
                if key in given and given[key] != v:
                    raise ValueError(f"entries ({i},{j}) and {key} violate the SW-NE symmetry")
                given[key] = v
        a.update(given)
        self.N = N
        self.a = a

    @classmethod
    def zero(cls, N: int = 3) -> DNMatrix:
        return cls(N)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> DNMatrix:
        """From a full upper-triangular table as printed (lower part ignored)."""
        N = len(rows) - 1
        ent = {(i, j): rows[i][j] for i in range(N + 1) for j in range(i, N + 1)}
        return cls(N, ent)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return self.a[ij]

    def __eq__(self, other) -> bool:
        if isinstance(other, DNMatrix):
            return self.N == other.N and self.a == other.a
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.N, tuple(sorted(self.a.items()))))

    def __repr__(self) -> str:
        return f"DNMatrix(N={self.N}, rows={self.rows()})"

    def rows(self) -> list[list[str]]:
        return [
            [rat_str(self.a[i, j]) if j >= i else "0" for j in range(self.N + 1)]
            for i in range(self.N + 1)
        ]

    def independent_keys(self) -> list[tuple[int, int]]:
        """One representative ``(i, j)`` per symmetry orbit, lexicographically first."""
        seen, out = set(), []
        for key in sorted(self.a):
            if key in seen:
                continue
            i, j = key
            seen.update({key, (self.N - j, self.N - i)})
            out.append(key)
        return out

    def class_shift(self, a) -> DNMatrix:
        """Add the scalar ``a`` to every diagonal entry (same class)."""
        a = rat(a)
        ent = {k: v + a if k[0] == k[1] else v for k, v in self.a.items()}
        return DNMatrix(self.N, ent)

    def same_class(self, other: DNMatrix) -> bool:
        if self.N != other.N:
            return False
        shift = self.a[0, 0] - other.a[0, 0]
        return other.class_shift(shift) == self

    def to_json(self) -> dict:
        sep = "," if self.N >= 10 else ""
        return {
            "N": self.N,
            "a": {f"{i}{sep}{j}": rat_str(self.a[i, j]) for (i, j) in self.independent_keys()},
        }

    @classmethod
    def from_json(cls, obj: dict) -> DNMatrix:
        N = int(obj["N"])
        ent = {}
        for key, v in obj["a"].items():
            if "," in key:
                i, j = (int(x) for x in key.split(","))
            else:
                if len(key) != 2:
                    raise ValueError(f"ambiguous entry key {key!r}; use 'i,j'")
                i, j = int(key[0]), int(key[1])
            ent[i, j] = v
        return cls(N, ent)


def connection_matrix(A: DNMatrix) -> list[list[WeylOp]]:
    """Connection matrix with entries ``a_kl * t**(l-k+1)`` on and above the
    diagonal and 1 on the subdiagonal."""
    n = A.N + 1
    rows = []
    for k in range(n):
        row = []
        for l in range(n):
            if k > l + 1:
                row.append(WeylOp())
            elif k == l + 1:
                row.append(WeylOp.scalar(1))
            else:
                row.append(WeylOp({l - k + 1: DPoly([A[k, l]])}))
        rows.append(row)
    return rows


@lru_cache(maxsize=None)
def _dt_power(m: int) -> WeylOp:
    """``(D t)**m = (t (D+1))**m``."""
    return (D * T) ** m


def dn_matrix(A: DNMatrix) -> list[list[WeylOp]]:
    """``M_kl = a_kl (D t)**(l-k+1)`` for ``k <= l``, 1 for ``k = l + 1``."""
    n = A.N + 1
    rows = []
    for k in range(n):
        row = []
        for l in range(n):
            if k > l + 1:
                row.append(WeylOp())
            elif k == l + 1:
                row.append(WeylOp.scalar(1))
            else:
                row.append(_dt_power(l - k + 1) * A[k, l])
        rows.append(row)
    return rows


def _d_minus(m: list[list[WeylOp]], diag: WeylOp) -> list[list[WeylOp]]:
    n = len(m)
    return [[(diag if k == l else WeylOp()) - m[k][l] for l in range(n)] for k in range(n)]


def dn_build(A: DNMatrix) -> WeylOp:
    """The DN operator ``L`` with ``D * L = det_right(D - M)``."""
    full = right_det(_d_minus(dn_matrix(A), D))
    return strip_left_D(full)


def d3_expand(A: DNMatrix) -> WeylOp:
    """Closed-form expansion of a D3 operator in its six free parameters."""
    if A.N != 3:
        raise ValueError("d3_expand needs N = 3")
    a00, a11, a01, a12, a02, a03 = (A[0, 0], A[1, 1], A[0, 1], A[1, 2], A[0, 2], A[0, 3])
    L = lambda a, b: DPoly([b, a])  # noqa: E731  a*D + b
    p1 = -(L(2, 1) * DPoly([a00, a00 + a11, a00 + a11]))
    p2 = L(1, 1) * DPoly(
        [
            6 * a11 * a00 + a00**2 - 4 * a01,
            8 * a11 * a00 - 2 * a12 + 2 * a00**2 - 4 * a01 + 2 * a11**2,
            a11**2 + a00**2 + 4 * a11 * a00 - a12 - 2 * a01,
        ]
    )
    c3 = a00**2 * a11 + a11**2 * a00 - a12 * a00 + a02 - a11 * a01 - a01 * a00
    c4 = -(a00**2) * a12 + 2 * a02 * a00 + a00**2 * a11**2 - a03 + a01**2 - 2 * a01 * a11 * a00
    p3 = -(L(2, 3) * L(1, 2) * L(1, 1)) * c3
    p4 = L(1, 3) * L(1, 2) * L(1, 1) * c4
    return WeylOp({0: DPoly([0, 0, 0, 1]), 1: p1, 2: p2, 3: p3, 4: p4})


# ---------------------------------------------------------------------------
# structural analyses


def formal_adjoint(L: WeylOp) -> WeylOp:
    """Anti-automorphism fixing ``t`` and sending ``D`` to ``-D``:
    ``(t**k p(D))* = p(-D) t**k = t**k p(-D - k)``."""
    return WeylOp({k: p.reflect().shift(k) for k, p in L.terms.items()})


def indicial_at_zero(L: WeylOp) -> DPoly:
    return L.coeff(0)


@lru_cache(maxsize=None)
def _stirling2(m: int, i: int) -> int:
    if m == i:
        return 1
    if i == 0 or i > m:
        return 0
    return i * _stirling2(m - 1, i) + _stirling2(m - 1, i - 1)


def to_ddt(L: WeylOp) -> dict[int, list[Fraction]]:
    """Rewrite as ``sum_j c_j(t) (d/dt)**j``; returns ``{j: coeffs of c_j}``.

    Uses ``D**m = sum_i S(m, i) t**i (d/dt)**i``.  Requires ``t``-degrees >= 0.
    """
    if L.terms and min(L.terms) < 0:
        raise ValueError("operator has negative t-degrees")
    out: dict[int, dict[int, Fraction]] = {}
    for k, p in L.terms.items():
        for m, c in enumerate(p.c):
            if not c:
                continue
            for i in range(m + 1):
                s = _stirling2(m, i)
                if s:
                    slot = out.setdefault(i, {})
                    slot[k + i] = slot.get(k + i, _ZERO) + c * s
    result = {}
    for j, poly in out.items():
        deg = max(poly)
        cs = [poly.get(e, _ZERO) for e in range(deg + 1)]
        while cs and not cs[-1]:
            cs.pop()
        if cs:
            result[j] = cs
    return dict(sorted(result.items()))


def _falling(j: int) -> DPoly:
    """``D (D-1) ... (D-j+1)``."""
    out = DPoly([1])
    for r in range(j):
        out = out * DPoly([-r, 1])
    return out


def from_ddt(c: Mapping[int, Sequence]) -> WeylOp:
    """Inverse of :func:`to_ddt`: ``t**e (d/dt)**j = t**(e-j) D(D-1)...(D-j+1)``."""
    out = WeylOp()
    for j, poly in c.items():
        fj = _falling(j)
        for e, a in enumerate(poly):
            a = rat(a)
            if a:
                out = out + WeylOp({e - j: fj * a})
    return out


def symbol_polynomial(L: WeylOp) -> list[Fraction]:
    """Leading ``d/dt`` coefficient with its common power of ``t`` removed.

    Nonzero roots of this polynomial are the finite nonzero singularities.
    """
    c = to_ddt(L)
    if not c:
        return []
    top = c[max(c)]
    v = next(i for i, x in enumerate(top) if x)
    return list(top[v:])


def weyl_apply(L: WeylOp, s):
    """Apply ``L`` to a series, ``D`` acting as ``x d/dx`` (fractional exponents allowed)."""
    if isinstance(s, RatSeries):
        s = FracSeries(0, s)
    if not L.terms:
        return FracSeries(s.offset, RatSeries.zero(s.prec))
    kmin = min(L.terms)
    o = s.offset
    prec = s.prec
    out = [_ZERO] * prec
    for k, p in L.terms.items():
        sh = k - kmin
        for n, c in enumerate(s.body.coeffs):
            if n + sh >= prec:
                break
            if c:
                out[n + sh] += p(o + n) * c
    return FracSeries(o + kmin, RatSeries(out, prec))


# ---------------------------------------------------------------------------
# the (t, d/dt) presentation


class A1Op:
    """``sum c_ij t**i (d/dt)**j`` with all ``t`` to the left."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {
            (int(i), int(j)): rat(c) for (i, j), c in sorted((terms or {}).items()) if rat(c)
        }

    @classmethod
    def scalar(cls, a) -> A1Op:
        return cls({(0, 0): a})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, A1Op):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        parts = [f"{rat_str(c)}*t^{i}*d^{j}" for (i, j), c in self.terms.items()]
        return "A1Op(" + " + ".join(parts or ["0"]) + ")"

    def __add__(self, other) -> A1Op:
        if not isinstance(other, A1Op):
            other = A1Op.scalar(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, _ZERO) + c
        return A1Op(out)

    __radd__ = __add__

    def __neg__(self) -> A1Op:
        return A1Op({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> A1Op:
        if not isinstance(other, A1Op):
            other = A1Op.scalar(other)
        return self + (-other)

    def __mul__(self, other) -> A1Op:
        if not isinstance(other, A1Op):
            a = rat(other)
            return A1Op({k: c * a for k, c in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (a, b), x in self.terms.items():
            for (c, d), y in other.terms.items():
                # d^b t^c = sum_k C(b,k) c!/(c-k)! t^(c-k) d^(b-k)
                ff = 1
                for k in range(min(b, c) + 1):
                    if k:
                        ff *= c - k + 1
                    key = (a + c - k, b + d - k)
                    out[key] = out.get(key, _ZERO) + x * y * comb(b, k) * ff
        return A1Op(out)

    def __rmul__(self, other) -> A1Op:
        a = rat(other)
        return A1Op({k: c * a for k, c in self.terms.items()})

    def __pow__(self, e: int) -> A1Op:
        out = A1Op.scalar(1)
        for _ in range(e):
            out = out * self
        return out


A1_T = A1Op({(1, 0): 1})
A1_DT = A1Op({(0, 1): 1})


def to_a1(L: WeylOp) -> A1Op:
    return A1Op({(e, j): a for j, poly in to_ddt(L).items() for e, a in enumerate(poly)})


def from_a1(X: A1Op) -> WeylOp:
    c: dict[int, list[Fraction]] = {}
    for (i, j), a in X.terms.items():
        poly = c.setdefault(j, [])
        if len(poly) <= i:
            poly.extend([_ZERO] * (i + 1 - len(poly)))
        poly[i] += a
    return from_ddt(c)


def a1_strip_left_t(X: A1Op) -> A1Op:
    if any(i == 0 for (i, _j) in X.terms):
        raise NotLeftDivisibleByT("operator has terms free of t")
    return A1Op({(i - 1, j): c for (i, j), c in X.terms.items()})


def fourier_transform(X: A1Op) -> A1Op:
    """``FT(sum f_i(t) d^i) = sum f_i(d) (-t)**i``."""
    out = A1Op()
    for (i, j), c in X.terms.items():
        out = out + (A1_DT**i) * ((-A1_T) ** j) * c
    return out


def invert_torus(L: WeylOp) -> WeylOp:
    """Pullback along ``t -> 1/t``: ``t -> t**-1``, ``D -> -D``."""
    return WeylOp({-k: p.reflect() for k, p in L.terms.items()})


def negate_t(L: WeylOp) -> WeylOp:
    """Pullback along ``t -> -t``: ``D`` fixed, ``d/dt -> -d/dt``."""
    return WeylOp({k: p * (-1 if k % 2 else 1) for k, p in L.terms.items()})


def regularize_pipeline(A: DNMatrix) -> WeylOp:
    """Run the regularization chain on the connection-matrix operator.

    Right determinant of ``D - C`` (``C`` the connection matrix), left
    division by ``t`` in ``Q[t, d/dt]``, Fourier transform, inversion
    ``t -> 1/t``, the sign change ``t -> -t`` and right multiplication by
    ``t``.
    """
    if A.N != 3:
        raise ValueError("regularize_pipeline needs N = 3")
    hat = right_det(_d_minus(connection_matrix(A), D))
    stripped = a1_strip_left_t(to_a1(hat))
    ft = fourier_transform(stripped)
    out = negate_t(invert_torus(from_a1(ft))) * T
    return out
