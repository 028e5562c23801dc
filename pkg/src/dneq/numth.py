"""Exact rationals and the small arithmetic functions used by the series and
classifier modules.

Rationals are :class:`fractions.Fraction`; they are always in lowest terms
with a positive denominator, so ``==`` is structural.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

Rat = Fraction

__all__ = [
    "Rat",
    "rat",
    "rat_str",
    "is_prime",
    "prime_factors",
    "divisors",
    "divisor_sigma",
    "euler_phi",
    "kronecker_symbol",
]


def rat(x) -> Fraction:
    """Coerce ``x`` (int, Fraction or a ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_str(x) -> str:
    """Serialize a rational as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for f in range(3, isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Trial-division factorization ``{p: exponent}``."""
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("n must be positive")
    small, large = [], []
    for m in range(1, isqrt(n) + 1):
        if n % m == 0:
            small.append(m)
            if m != n // m:
                large.append(n // m)
    return small + large[::-1]


def divisor_sigma(k: int, n: int) -> int:
    """Sum of the k-th powers of the positive divisors of n."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return sum(m**k for m in divisors(n))


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def kronecker_symbol(a: int, p: int) -> int:
    """(a/p) for a prime p.

    Legendre symbol for odd p (Euler's criterion); at p = 2 the Kronecker
    extension: 0 for even a, 1 for a = +-1 mod 8, -1 for a = +-3 mod 8.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0
