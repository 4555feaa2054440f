"""Exact rationals, Gamma values at positive half-integers, Catalan numbers,
and the closed-form right-hand sides of the volume and constant term formulas.

Every Gamma value that occurs is ``q * sqrt(pi)**p`` with ``q`` rational, so a
product of them is exact as long as the powers of ``sqrt(pi)`` cancel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Union

Number = Union[int, Fraction]


@dataclass(frozen=True)
class GammaHalfValue:
    """The number ``q * sqrt(pi)**sqrt_pi_power``."""

    q: Fraction
    sqrt_pi_power: int = 0

    def __mul__(self, other):
        if isinstance(other, GammaHalfValue):
            return GammaHalfValue(self.q * other.q, self.sqrt_pi_power + other.sqrt_pi_power)
        return GammaHalfValue(self.q * Fraction(other), self.sqrt_pi_power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GammaHalfValue):
            return GammaHalfValue(self.q / other.q, self.sqrt_pi_power - other.sqrt_pi_power)
        return GammaHalfValue(self.q / Fraction(other), self.sqrt_pi_power)

    def is_rational(self) -> bool:
        return self.sqrt_pi_power == 0

    def to_fraction(self) -> Fraction:
        if self.sqrt_pi_power != 0:
            raise ArithmeticError(f"value still carries sqrt(pi)^{self.sqrt_pi_power}")
        return self.q


ONE = GammaHalfValue(Fraction(1))


@lru_cache(maxsize=None)
def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("Catalan numbers need k >= 0")
    return comb(2 * k, k) // (k + 1)


def gamma_half(two_x: int) -> GammaHalfValue:
    """``Gamma(two_x / 2)`` for a positive integer ``two_x``."""
    two_x = int(two_x)
    if two_x <= 0:
        raise ValueError(f"Gamma is only evaluated at positive half-integers, got {two_x}/2")
    if two_x % 2 == 0:
        return GammaHalfValue(Fraction(factorial(two_x // 2 - 1)), 0)
    k = (two_x - 1) // 2
    # Gamma(k + 1/2) = (2k)! / (4^k k!) * sqrt(pi)
    return GammaHalfValue(Fraction(factorial(2 * k), 4**k * factorial(k)), 1)


def gamma(x: Number) -> GammaHalfValue:
    x = Fraction(x)
    if (2 * x).denominator != 1:
        raise ValueError(f"Gamma argument {x} is not a half-integer")
    return gamma_half(int(2 * x))


@dataclass(frozen=True)
class MorrisParams:
    """Parameters ``(n, a, b, c)`` of the Morris constant term family."""

    n: int
    a: Fraction
    b: int
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "c", Fraction(self.c))
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.a < 0:
            raise ValueError("a must be nonnegative")
        if self.b < 0:
            raise ValueError("b must be nonnegative")
        if self.c <= 0 or (2 * self.c).denominator != 1:
            raise ValueError(f"c must be a positive half-integer, got {self.c}")


def _params(p=None, **kw) -> MorrisParams:
    return p if isinstance(p, MorrisParams) else MorrisParams(**kw)


def morris_rhs(p: MorrisParams | None = None, **kw) -> Fraction:
    """Gamma-product side of the Morris identity.

    ``(1/n!) prod_{j<n} G(a+b+(n-1+j)c) G(c) / (G(a+jc) G(c+jc) G(b+jc+1))``.
    """
    p = _params(p, **kw)
    n, a, b, c = p.n, p.a, p.b, p.c
    value = ONE
    for j in range(n):
        value = value * gamma(a + b + (n - 1 + j) * c) * gamma(c)
        value = value / (gamma(a + j * c) * gamma(c + j * c) * gamma(b + j * c + 1))
    return value.to_fraction() / factorial(n)


def thmC_rhs(p: MorrisParams | None = None, **kw) -> Fraction:
    """Closed form of the type C constant term:
    ``2^(2an + 4c C(n,2) - 2n) (1/n!) prod_j G(a+(b-1)/2+(n-1+j)c) G(c)
    / (G((b+1)/2+jc) G(c+jc) G(a+jc))``.
    """
    p = _params(p, **kw)
    n, a, b, c = p.n, p.a, p.b, p.c
    value = ONE
    half_b = Fraction(b - 1, 2)
    for j in range(n):
        value = value * gamma(a + half_b + (n - 1 + j) * c) * gamma(c)
        value = value / (gamma(Fraction(b + 1, 2) + j * c) * gamma(c + j * c) * gamma(a + j * c))
    exponent = 2 * a * n + 4 * c * comb(n, 2) - 2 * n
    if exponent.denominator != 1:
        raise ValueError(f"power of two {exponent} is not an integer")
    return value.to_fraction() * Fraction(2) ** int(exponent) / factorial(n)


def catalan_product(lo: int, hi: int) -> int:
    out = 1
    for k in range(lo, hi + 1):
        out *= catalan(k)
    return out


def cry_volume_formula(n: int) -> int:
    """Normalized volume of ``CRY_n``: ``Cat(1) ... Cat(n-2)``."""
    if n < 2:
        raise ValueError("CRY_n needs n >= 2")
    return catalan_product(1, n - 2)


def cryd_volume_formula(n: int) -> int:
    """Normalized volume of ``CRYD_{n+1}``: ``2^((n-1)^2) Cat(0) ... Cat(n-1)``."""
    if n < 1:
        raise ValueError("CRYD_{n+1} needs n >= 1")
    return 2 ** ((n - 1) ** 2) * catalan_product(0, n - 1)


def cryc_volume_formula(n: int) -> int:
    """Normalized volume of ``CRYC_{n+1}``: ``2^(n(n-1)) Cat(0) ... Cat(n-1)``."""
    if n < 1:
        raise ValueError("CRYC_{n+1} needs n >= 1")
    return 2 ** (n * (n - 1)) * catalan_product(0, n - 1)


def cryd_gamma_ratio(n: int) -> Fraction:
    """``G(n+1) G(1/2) / (G((n+2)/2) G((n+1)/2))``, which equals ``2^n``."""
    value = gamma_half(2 * n + 2) * gamma_half(1) / (gamma_half(n + 2) * gamma_half(n + 1))
    return value.to_fraction()


def format_number(x: Number) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
