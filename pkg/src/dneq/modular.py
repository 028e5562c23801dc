"""q-expansions: eta products, Eisenstein series, inverse uniformizers, the
solutions Phi and the I-function.

Series in ``q`` and in ``Q = q**(1/d)`` are plain :class:`RatSeries`; the
variable is implied by the caller.  ``Phi`` combos evaluate
``sum e_j * E_{2,j}(Q)`` with ``E_{2,j}(Q) = -(j/24) (1 - 24 sum sigma(n) Q**(j n))``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .fixtures import UniformizerSpec, default_c0, golden, uniformizer_spec
from .numth import divisor_sigma, rat
from .series import DEFAULT_PREC, FracSeries, RatSeries, compose, frac_pow, nth_root, reversion

__all__ = [
    "eta_body",
    "eta_H",
    "eta_quotient",
    "eisenstein_E2",
    "eisenstein_E4",
    "eisenstein_combo",
    "j_function",
    "phi",
    "uniformizer_inv",
    "T_of_q",
    "t_of_Q",
    "Q_of_t",
    "phi_in_t",
    "eta_product",
    "i_function",
    "eta_product_check",
]


def _pentagonal(limit: int):
    """``(m, sign)`` with ``prod (1 - x^n) = sum sign * x^m``, ``m < limit``."""
    yield 0, 1
    k = 1
    while k * (3 * k - 1) // 2 < limit:
        sign = -1 if k % 2 else 1
        for m in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if m < limit:
                yield m, sign
        k += 1


@lru_cache(maxsize=1024)
def eta_body(j: int, prec: int) -> RatSeries:
    """``prod_{n>=1} (1 - x**(j n))`` modulo ``x**prec``."""
    if j < 1:
        raise ValueError("j must be positive")
    out = [0] * prec
    for m, sign in _pentagonal((prec + j - 1) // j):
        out[j * m] = sign
    return RatSeries(out, prec)


def eta_H(j: int, prec: int = DEFAULT_PREC) -> FracSeries:
    """``H_j = x**(j/24) prod (1 - x**(j n))``."""
    return FracSeries(Fraction(j, 24), eta_body(j, prec))


def eta_quotient(factors, prec: int = DEFAULT_PREC) -> FracSeries:
    """``prod H_i**e_i`` for ``(i, e_i)`` in ``factors``."""
    offset = Fraction(0)
    body = RatSeries.one(prec)
    for i, e in factors:
        offset += Fraction(i * e, 24)
        body = body * (eta_body(i, prec) ** e)
    return FracSeries(offset, body)


def eisenstein_E2(j: int, prec: int = DEFAULT_PREC) -> RatSeries:
    if j < 1:
        raise ValueError("j must be positive")
    out = [Fraction(0)] * prec
    out[0] = Fraction(-j, 24)
    n = 1
    while j * n < prec:
        out[j * n] = Fraction(j * divisor_sigma(1, n))
        n += 1
    return RatSeries(out, prec)


def eisenstein_E4(prec: int = DEFAULT_PREC) -> RatSeries:
    return RatSeries([1] + [240 * divisor_sigma(3, n) for n in range(1, prec)], prec)


def eisenstein_combo(combo, prec: int = DEFAULT_PREC) -> RatSeries:
    out = RatSeries.zero(prec)
    for j, e in combo:
        out = out + eisenstein_E2(j, prec) * rat(e)
    return out


def j_function(prec: int = DEFAULT_PREC) -> FracSeries:
    """``j = E4**3 / Delta`` with ``Delta = H_1**24``; offset -1."""
    body = eisenstein_E4(prec) ** 3 * eta_body(1, prec) ** -24
    return FracSeries(-1, body)


def phi(N: int, d: int, prec: int = DEFAULT_PREC) -> RatSeries:
    """The tabulated solution as a series in ``Q`` (constant term 1)."""
    fx = golden(N, d)
    if fx.phi_combo is not None:
        return eisenstein_combo(fx.phi_combo, prec)
    dq = fx.sqrt_e4
    return nth_root(eisenstein_E4(-(-prec // dq)), 2).inflate(dq).truncate(prec)


def _level_spec(spec) -> UniformizerSpec:
    if isinstance(spec, UniformizerSpec):
        return spec
    return uniformizer_spec(int(spec))


def uniformizer_inv(spec, prec: int = DEFAULT_PREC, c0=None) -> FracSeries:
    """``T**-1 = q**-1 + c0 + O(q)`` as a series with offset -1.

    ``spec`` is a :class:`UniformizerSpec` or a level.  The recipe's own
    constant term is replaced by ``c0`` (the level default when not given);
    with neither, the raw recipe is returned.
    """
    spec = _level_spec(spec)
    if c0 is None:
        c0 = spec.c0
    work = prec + 3
    if spec.is_j:
        total = j_function(work)
    else:
        total = None
        for scale, factors in spec.summands:
            s = eta_quotient(factors, work) * scale
            total = s if total is None else total + s
    if total.offset != -1:
        raise ValueError(f"recipe for level {spec.N} does not start at q^-1")
    body = total.body.truncate(prec)
    if c0 is not None and prec > 1:
        cs = list(body.coeffs)
        cs[1] = rat(c0)
        body = RatSeries(cs, prec)
    return FracSeries(-1, body)


def T_of_q(spec, c0, prec: int = DEFAULT_PREC) -> RatSeries:
    """``T(q) = 1 / T**-1 = q - c0 q**2 + ...``."""
    inv = uniformizer_inv(spec, prec, c0)
    return (1 / inv.body).shift(1).truncate(prec)


def t_of_Q(spec, d: int, c0, prec: int = DEFAULT_PREC) -> RatSeries:
    """``t = T**(1/d)`` in ``Q = q**(1/d)``: ``t = Q * u(Q**d)**(1/d)`` where ``T = q u(q)``."""
    if prec < 1:
        raise ValueError("precision must be positive")
    pu = max(-(-(prec - 1) // d), 1)
    u = 1 / uniformizer_inv(spec, pu, c0).body
    return nth_root(u, d).inflate(d).truncate(prec - 1).shift(1)


def Q_of_t(spec, d: int, c0, prec: int = DEFAULT_PREC) -> RatSeries:
    return reversion(t_of_Q(spec, d, c0, prec))


def phi_in_t(N: int, d: int, c0=None, prec: int = DEFAULT_PREC) -> RatSeries:
    """Phi expanded in ``t = T**(1/d)``; ``c0`` defaults to the tabulated one."""
    if c0 is None:
        c0 = default_c0(N)
    golden(N, d)  # validates the pair
    q_t = Q_of_t(N, d, c0, prec)
    return compose(phi(N, d, prec), q_t)


def eta_product(N: int, d: int, prec: int = DEFAULT_PREC) -> FracSeries:
    """``H_d(Q)**2 * H_{Nd}(Q)**2``."""
    return eta_quotient(((d, 2), (N * d, 2)), prec)


def i_function(N: int, d: int, c0=None, prec: int = DEFAULT_PREC) -> FracSeries:
    """``I = Phi * t**(d (N+1)/12)`` as a series in ``Q``."""
    if c0 is None:
        c0 = default_c0(N)
    golden(N, d)
    t = t_of_Q(N, d, c0, prec + 1)
    tf = FracSeries(1, t.shift(-1))
    return FracSeries(0, phi(N, d, prec)) * frac_pow(tf, Fraction(d * (N + 1), 12))


def eta_product_check(N: int, d: int, c0=None, prec: int = DEFAULT_PREC) -> dict:
    """Compare the I-function with ``H_d**2 H_{Nd}**2`` coefficientwise."""
    lhs = i_function(N, d, c0, prec)
    rhs = eta_product(N, d, prec)
    p = min(lhs.prec, rhs.prec)
    mismatches = [n for n in range(p) if lhs.body[n] != rhs.body[n]]
    return {
        "pair": [N, d],
        "offset_match": lhs.offset == rhs.offset,
        "terms": p,
        "mismatches": mismatches,
        "ok": lhs.offset == rhs.offset and not mismatches,
    }
