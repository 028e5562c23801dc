"""Invariants of X_0(N) and the necessary-condition filters on pairs (N, d)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .numth import divisors, euler_phi, kronecker_symbol, prime_factors

__all__ = [
    "ModularInvariants",
    "FilterResult",
    "invariants",
    "pass_filter",
    "necessary_pairs",
    "rejections",
    "EXPECTED_PAIRS",
]

EXPECTED_PAIRS = frozenset(
    [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (7, 1), (8, 1), (9, 1), (11, 1),
     (1, 2), (2, 2), (3, 2), (4, 2), (5, 2), (3, 3), (2, 4)]
)  # fmt: skip


@dataclass(frozen=True)
class ModularInvariants:
    g: int
    nu2: int
    nu3: int
    nu_inf: int


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.passed


def _nu2(N: int) -> int:
    if N % 4 == 0:
        return 0
    prod = 1
    for p in prime_factors(N):
        prod *= 1 + kronecker_symbol(-1, p)
    return prod // 2 if N % 2 == 0 else prod


def _nu3(N: int) -> int:
    if N % 9 == 0:
        return 0
    prod = 1
    for p in prime_factors(N):
        prod *= 1 + kronecker_symbol(-3, p)
    return prod


def _nu_inf(N: int) -> int:
    return sum(euler_phi(gcd(m, N // m)) for m in divisors(N))


def invariants(N: int) -> ModularInvariants:
    """Genus and elliptic/cusp counts of ``X_0(N)``."""
    if N < 1:
        raise ValueError("level must be positive")
    if N == 1:
        return ModularInvariants(0, 1, 1, 1)
    nu2, nu3, nu_inf = _nu2(N), _nu3(N), _nu_inf(N)
    index = Fraction(N)
    for p in prime_factors(N):
        index *= 1 + Fraction(1, p)
    g = 1 + index / 12 - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nu_inf, 2)
    if g.denominator != 1 or g < 0:
        raise ArithmeticError(f"genus formula gave {g} at N={N}")
    return ModularInvariants(int(g), nu2, nu3, nu_inf)


def _ceil_half(n: int) -> int:
    return (n + 1) // 2


def nonsimple_budget(inv: ModularInvariants) -> int:
    """Lower bound on the nonzero non-simple singularities of an (N,1) variation.

    Cusps other than the one at the origin pair up under W, as do elliptic
    points; each image is non-simple.
    """
    return (_ceil_half(inv.nu_inf) - 1) + _ceil_half(inv.nu2) + _ceil_half(inv.nu3)


def pass_filter(N: int, d: int) -> FilterResult:
    if N < 2 or d < 1:
        raise ValueError("filters need N >= 2 and d >= 1")
    if d >= 5:
        return FilterResult(False, (f"d={d}≥5",))
    inv = invariants(N)
    fails: list[str] = []
    if d == 1:
        if inv.g == 0:
            b = nonsimple_budget(inv)
            if b > 1:
                fails.append(f"budget B₁={b}>1")
        elif inv.g == 1:
            if inv.nu2:
                fails.append(f"g=1 and ν₂={inv.nu2}>0")
            if inv.nu3:
                fails.append(f"g=1 and ν₃={inv.nu3}>0")
            if inv.nu_inf != 2:
                fails.append(f"g=1 and ν∞={inv.nu_inf}≠2")
        else:
            fails.append(f"genus g={inv.g}>1")
    elif d == 2:
        if inv.g != 0:
            fails.append(f"genus g={inv.g}>0")
        if inv.nu_inf > 3:
            fails.append(f"ν∞={inv.nu_inf}>3")
        if inv.nu3 > 1:
            fails.append(f"ν₃={inv.nu3}>1")
        if inv.nu2 > 7:
            fails.append(f"ν₂={inv.nu2}>7")
        if N >= 48:
            fails.append(f"N={N}≥48")
    else:
        want_nu2, want_nu3 = (0, 1) if d == 3 else (1, 0)
        if inv.g != 0:
            fails.append(f"genus g={inv.g}>0")
        if inv.nu_inf != 2:
            fails.append(f"ν∞={inv.nu_inf}≠2")
        if inv.nu3 != want_nu3:
            fails.append(f"ν₃={inv.nu3}≠{want_nu3}")
        if inv.nu2 != want_nu2:
            fails.append(f"ν₂={inv.nu2}≠{want_nu2}")
    return FilterResult(not fails, tuple(fails))


def necessary_pairs(n_max: int = 200, d_max: int = 6) -> set[tuple[int, int]]:
    """Pairs surviving the filters; level 1 contributes ``(1,1)`` and ``(1,2)`` by fiat."""
    out = {(1, 1), (1, 2)}
    for N in range(2, n_max + 1):
        for d in range(1, d_max + 1):
            if pass_filter(N, d):
                out.add((N, d))
    return out


def rejections(n_range, d_range) -> dict[tuple[int, int], tuple[str, ...]]:
    out = {}
    for N in n_range:
        if N < 2:
            continue
        for d in d_range:
            res = pass_filter(N, d)
            if not res:
                out[(N, d)] = res.reasons
    return out
