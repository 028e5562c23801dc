"""Truncated power series over exact rationals.

A :class:`RatSeries` is known modulo ``x**prec``; every operation reports a
result only as far as its inputs justify.  :class:`FracSeries` adds a single
rational leading exponent, enough for eta products and rational powers of
unit series.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .numth import rat, rat_str

DEFAULT_PREC = 48

__all__ = [
    "DEFAULT_PREC",
    "SeriesError",
    "DivisionByHigherValuation",
    "CompositionNeedsPositiveValuation",
    "NotReversible",
    "RootNeedsUnitConstantTerm",
    "RatSeries",
    "FracSeries",
    "mul",
    "add",
    "sub",
    "inverse",
    "div",
    "power_int",
    "power",
    "nth_root",
    "compose",
    "reversion",
    "from_polynomial",
    "frac_mul",
    "frac_add",
    "frac_pow",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SeriesError(ArithmeticError):
    pass


class DivisionByHigherValuation(SeriesError):
    pass


class CompositionNeedsPositiveValuation(SeriesError):
    pass


class NotReversible(SeriesError):
    pass


class RootNeedsUnitConstantTerm(SeriesError):
    pass


class RatSeries:
    """``sum(coeffs[n] * x**n) + O(x**prec)`` with rational coefficients."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable = (), prec: int | None = None):
        cs = [rat(c) for c in coeffs]
        if prec is None:
            prec = len(cs)
        if prec < 0:
            raise ValueError("precision must be nonnegative")
        if len(cs) < prec:
            cs.extend([_ZERO] * (prec - len(cs)))
        self.coeffs: tuple[Fraction, ...] = tuple(cs[:prec])
        self.prec: int = prec

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, prec: int = DEFAULT_PREC) -> RatSeries:
        return cls((), prec)

    @classmethod
    def one(cls, prec: int = DEFAULT_PREC) -> RatSeries:
        return cls.constant(1, prec)

    @classmethod
    def constant(cls, c, prec: int = DEFAULT_PREC) -> RatSeries:
        return cls([c], prec)

    @classmethod
    def x(cls, prec: int = DEFAULT_PREC) -> RatSeries:
        return cls([0, 1], prec)

    @classmethod
    def from_function(cls, f, prec: int) -> RatSeries:
        return cls((f(n) for n in range(prec)), prec)

    # -- basics -------------------------------------------------------------

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self) -> int:
        return self.prec

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatSeries):
            return self.prec == other.prec and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.prec, self.coeffs))

    def __repr__(self) -> str:
        shown = ", ".join(rat_str(c) for c in self.coeffs[:8])
        more = ", ..." if self.prec > 8 else ""
        return f"RatSeries([{shown}{more}], prec={self.prec})"

    def __str__(self) -> str:
        parts = []
        for n, c in enumerate(self.coeffs):
            if c:
                mono = "" if n == 0 else ("x" if n == 1 else f"x^{n}")
                if mono and c == 1:
                    parts.append(mono)
                elif mono and c == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(rat_str(c) + ("*" + mono if mono else ""))
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} + O(x^{self.prec})"

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (``prec`` if none is known)."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return self.prec

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, prec: int) -> RatSeries:
        if prec > self.prec:
            raise ValueError(f"cannot extend precision {self.prec} to {prec}")
        return RatSeries(self.coeffs[:prec], prec)

    def shift(self, k: int) -> RatSeries:
        """Multiply by ``x**k`` (``k`` may be negative if the low terms vanish)."""
        if k >= 0:
            return RatSeries((_ZERO,) * k + self.coeffs, self.prec + k)
        if any(self.coeffs[:-k]):
            raise DivisionByHigherValuation(f"series has terms below x^{-k}")
        return RatSeries(self.coeffs[-k:], self.prec + k)

    def inflate(self, d: int) -> RatSeries:
        """Substitute ``x -> x**d``."""
        if d < 1:
            raise ValueError("d must be positive")
        prec = d * self.prec
        out = [_ZERO] * prec
        for n, c in enumerate(self.coeffs):
            out[d * n] = c
        return RatSeries(out, prec)

    def deflate(self, d: int) -> RatSeries:
        """Inverse of :meth:`inflate`; fails unless only powers ``x**(d*k)`` occur."""
        if any(c for n, c in enumerate(self.coeffs) if n % d):
            raise ValueError(f"series is not a series in x^{d}")
        return RatSeries(self.coeffs[::d], (self.prec + d - 1) // d)

    def derivative(self) -> RatSeries:
        return RatSeries((n * c for n, c in enumerate(self.coeffs) if n), max(self.prec - 1, 0))

    def theta(self) -> RatSeries:
        """``x d/dx``."""
        return RatSeries((n * c for n, c in enumerate(self.coeffs)), self.prec)

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> RatSeries:
        if isinstance(other, RatSeries):
            return other
        return RatSeries.constant(rat(other), self.prec)

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        p = min(self.prec, other.prec)
        return RatSeries((a + b for a, b in zip(self.coeffs[:p], other.coeffs[:p])), p)

    __radd__ = __add__

    def __neg__(self) -> RatSeries:
        return RatSeries((-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, RatSeries):
            try:
                c = rat(other)
            except TypeError:
                return NotImplemented
            return RatSeries((c * a for a in self.coeffs), self.prec)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatSeries):
            c = rat(other)
            return RatSeries((a / c for a in self.coeffs), self.prec)
        return div(self, other)

    def __rtruediv__(self, other):
        return div(RatSeries.constant(rat(other), self.prec), self)

    def __pow__(self, e):
        if isinstance(e, int):
            if e >= 0:
                return power_int(self, e)
            return power_int(inverse(self), -e)
        return power(self, rat(e))

    def __call__(self, g: RatSeries) -> RatSeries:
        return compose(self, g)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"offset": "0", "prec": self.prec, "coeffs": [rat_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> RatSeries:
        if rat(obj.get("offset", "0")) != 0:
            raise ValueError("series has a nonzero offset; load it as FracSeries")
        return cls(obj["coeffs"], obj["prec"])


# -- kernels -----------------------------------------------------------------


def mul(a: RatSeries, b: RatSeries) -> RatSeries:
    # a known mod x^pa, b mod x^pb: the product is known mod
    # x^min(pa + vb, pb + va).
    va, vb = a.valuation(), b.valuation()
    p = min(a.prec + vb, b.prec + va)
    if p <= 0:
        return RatSeries((), max(p, 0))
    # clear denominators and convolve integers; one gcd per output coefficient
    ac, bc = a.coeffs[:p], b.coeffs[:p]
    da = lcm(*(x.denominator for x in ac)) if ac else 1
    db = lcm(*(y.denominator for y in bc)) if bc else 1
    ai = [(i, x.numerator * (da // x.denominator)) for i, x in enumerate(ac) if x]
    bi = [(j, y.numerator * (db // y.denominator)) for j, y in enumerate(bc) if y]
    acc = [0] * p
    for i, x in ai:
        for j, y in bi:
            k = i + j
            if k >= p:
                break
            acc[k] += x * y
    den = da * db
    return RatSeries([Fraction(c, den) if c else _ZERO for c in acc], p)


def add(a: RatSeries, b: RatSeries) -> RatSeries:
    return a + b


def sub(a: RatSeries, b: RatSeries) -> RatSeries:
    return a - b


def inverse(f: RatSeries) -> RatSeries:
    """``1/f`` for ``f(0) != 0``."""
    if f.prec == 0:
        return RatSeries((), 0)
    c0 = f.coeffs[0]
    if not c0:
        raise DivisionByHigherValuation("constant term is zero")
    p = f.prec
    inv0 = 1 / c0
    out = [inv0] + [_ZERO] * (p - 1)
    fc = f.coeffs
    for n in range(1, p):
        s = _ZERO
        for k in range(1, n + 1):
            if fc[k]:
                s += fc[k] * out[n - k]
        out[n] = -s * inv0
    return RatSeries(out, p)


def div(a: RatSeries, b: RatSeries) -> RatSeries:
    vb = b.valuation()
    if vb >= b.prec:
        raise DivisionByHigherValuation("divisor is zero to its precision")
    va = a.valuation()
    if va < vb:
        raise DivisionByHigherValuation(f"valuation {va} of numerator below valuation {vb} of divisor")
    return mul(a.shift(-vb), inverse(b.shift(-vb)))


def power_int(f: RatSeries, e: int) -> RatSeries:
    if e < 0:
        return power_int(inverse(f), -e)
    result = RatSeries.one(f.prec)
    base = f
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def power(f: RatSeries, e) -> RatSeries:
    """``f**e`` for rational ``e`` and ``f(0) = 1``.

    Uses the recurrence ``k*h_k = sum_{j=1..k} ((e+1)*j - k) * f_j * h_{k-j}``
    obtained from ``f * h' = e * f' * h``.
    """
    e = rat(e)
    if e.denominator == 1:
        return power_int(f, e.numerator)
    if f.prec == 0:
        return RatSeries((), 0)
    if f.coeffs[0] != 1:
        raise RootNeedsUnitConstantTerm(f"constant term {rat_str(f.coeffs[0])} is not 1")
    p = f.prec
    fc = f.coeffs
    h = [_ONE] + [_ZERO] * (p - 1)
    e1 = e + 1
    for k in range(1, p):
        s = _ZERO
        for j in range(1, k + 1):
            if fc[j]:
                s += (e1 * j - k) * fc[j] * h[k - j]
        h[k] = s / k
    return RatSeries(h, p)


def nth_root(f: RatSeries, n: int) -> RatSeries:
    """The unique ``g`` with ``g(0) = 1`` and ``g**n = f``; requires ``f(0) = 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    if f.prec and f.coeffs[0] != 1:
        raise RootNeedsUnitConstantTerm(f"constant term {rat_str(f.coeffs[0])} is not 1")
    if n == 1:
        return f
    return power(f, Fraction(1, n))


def compose(f: RatSeries, g: RatSeries, f_is_polynomial: bool = False) -> RatSeries:
    """``f(g(x))``.

    ``g`` must have zero constant term, unless ``f_is_polynomial`` declares
    the listed coefficients of ``f`` exact (no truncation tail).
    """
    if g.prec == 0:
        return RatSeries((), 0)
    if f_is_polynomial:
        p = g.prec
    elif g.coeffs[0]:
        raise CompositionNeedsPositiveValuation("inner series has a nonzero constant term")
    else:
        # truncating f at x^f.prec costs O(g^f.prec) = O(x^(v*f.prec))
        p = min(g.prec, g.valuation() * f.prec)
    g = g.truncate(p)
    fc = f.coeffs
    last = max((n for n, c in enumerate(fc) if c), default=-1)
    acc = RatSeries.zero(p)
    for n in range(last, -1, -1):
        acc = mul(acc, g).truncate(p) + fc[n]
    return acc


def reversion(f: RatSeries) -> RatSeries:
    """Compositional inverse of ``f = c1*x + O(x^2)``, ``c1 != 0``.

    Newton iteration ``g <- g - (f(g) - x) / f'(g)``, doubling the number of
    correct terms each round.
    """
    if f.prec < 2:
        raise NotReversible("need at least the linear coefficient")
    if f.coeffs[0]:
        raise NotReversible("constant term is nonzero")
    if not f.coeffs[1]:
        raise NotReversible("linear coefficient is zero")
    p = f.prec
    fp = f.derivative()
    g = RatSeries([0, 1 / f.coeffs[1]], 2)
    n = 2
    while n < p:
        n = min(2 * n, p)
        gn = RatSeries(g.coeffs, n)
        resid = compose(f.truncate(n), gn) - RatSeries.x(n)
        slope = compose(fp.truncate(n - 1), gn)
        g = gn - div(resid, slope)
        if g.prec < n:
            raise AssertionError("Newton step lost precision")
        g = g.truncate(n)
    return g.truncate(p)


def from_polynomial(coeffs: Sequence, prec: int) -> RatSeries:
    return RatSeries(coeffs, prec)


class FracSeries:
    """``x**offset * body(x)`` with a rational ``offset``.

    The body has a nonzero constant term unless the whole series is zero.
    """

    __slots__ = ("offset", "body")

    def __init__(self, offset, body: RatSeries):
        offset = rat(offset)
        v = body.valuation()
        if 0 < v < body.prec:
            offset += v
            body = body.shift(-v)
        self.offset: Fraction = offset
        self.body: RatSeries = body

    @property
    def prec(self) -> int:
        return self.body.prec

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FracSeries):
            return self.offset == other.offset and self.body == other.body
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.offset, self.body))

    def __repr__(self) -> str:
        return f"FracSeries(offset={rat_str(self.offset)}, body={self.body!r})"

    def __mul__(self, other):
        if isinstance(other, FracSeries):
            return frac_mul(self, other)
        if isinstance(other, RatSeries):
            return frac_mul(self, FracSeries(0, other))
        return FracSeries(self.offset, self.body * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, RatSeries):
            other = FracSeries(0, other)
        if not isinstance(other, FracSeries):
            return NotImplemented
        return frac_add(self, other)

    def __neg__(self):
        return FracSeries(self.offset, -self.body)

    def __sub__(self, other):
        return self + (-other)

    def __pow__(self, e):
        return frac_pow(self, e)

    def truncate(self, prec: int) -> FracSeries:
        return FracSeries(self.offset, self.body.truncate(prec))

    def to_json(self) -> dict:
        return {
            "offset": rat_str(self.offset),
            "prec": self.body.prec,
            "coeffs": [rat_str(c) for c in self.body.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> FracSeries:
        return cls(rat(obj["offset"]), RatSeries(obj["coeffs"], obj["prec"]))


def frac_mul(a: FracSeries, b: FracSeries) -> FracSeries:
    return FracSeries(a.offset + b.offset, a.body * b.body)


def frac_add(a: FracSeries, b: FracSeries) -> FracSeries:
    """Sum of two series whose offsets differ by an integer."""
    d = b.offset - a.offset
    if d.denominator != 1:
        raise ValueError("offsets differ by a non-integer")
    d = int(d)
    if d >= 0:
        return FracSeries(a.offset, a.body + b.body.shift(d))
    return FracSeries(b.offset, a.body.shift(-d) + b.body)


def frac_pow(a: FracSeries, e) -> FracSeries:
    """Rational power; the body must have constant term 1 unless ``e`` is an integer."""
    e = rat(e)
    if e.denominator == 1:
        return FracSeries(a.offset * e, a.body ** int(e))
    return FracSeries(a.offset * e, power(a.body, e))
