"""
Special functions and constants used by the closed forms.

Double precision throughout. scipy supplies Γ, ζ and ψ at real arguments,
sympy the Bernoulli numbers for exact ζ(−m), mpmath the Glaisher–Kinkelin
constant and ζ′(2k).
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict

import mpmath
import sympy
from scipy import special as sp

from .exceptions import DomainError

SADDLE_VARIANTS = ('minus', 'plus', 'ratio')

# Terms below this are dropped from the c_m series
_SADDLE_EPS = 1e-18


def gamma(x: float) -> float:
    if x <= 0:
        raise DomainError(f"gamma is only evaluated for x > 0, got {x}")
    return float(sp.gamma(x))


def zeta(s: float) -> float:
    if s <= 1:
        raise DomainError(f"zeta is only evaluated for s > 1, got {s}")
    return float(sp.zeta(s))


@lru_cache(maxsize=None)
def zeta_neg(m: int) -> Fraction:
    """Exact ζ(−m) = −B_{m+1}/(m+1); ζ(0) = −1/2."""
    if m < 0:
        raise DomainError(f"zeta_neg needs m >= 0, got {m}")
    if m == 0:
        return Fraction(-1, 2)
    bernoulli = sympy.bernoulli(m + 1)
    return -Fraction(int(bernoulli.p), int(bernoulli.q)) / (m + 1)


@lru_cache(maxsize=None)
def zeta_deriv_neg(m: int) -> float:
    """
    ζ′(−m) for integer m >= 0.

    Even m = 2k uses the trivial-zero identity
    ζ′(−2k) = (−1)^k (2k)! ζ(2k+1) / (2 (2π)^{2k});
    odd m = 2k−1 uses the functional equation
    ζ′(1−2k) = 2 (−1)^{k+1} (2π)^{−2k} Γ(2k) ζ(2k) [ψ(2k) − ln 2π + ζ′(2k)/ζ(2k)].
    """
    if m < 0:
        raise DomainError(f"zeta_deriv_neg needs m >= 0, got {m}")
    if m == 0:
        return -0.5 * math.log(2 * math.pi)
    if m % 2 == 0:
        k = m // 2
        return (-1) ** k * math.factorial(m) * zeta(m + 1) / (2 * (2 * math.pi) ** m)
    k = (m + 1) // 2
    two_k = 2 * k
    zeta_2k = zeta(two_k)
    zeta_prime_2k = float(mpmath.zeta(two_k, 1, 1))
    bracket = float(sp.digamma(two_k)) - math.log(2 * math.pi) + zeta_prime_2k / zeta_2k
    return 2 * (-1) ** (k + 1) * (2 * math.pi) ** (-two_k) * gamma(two_k) * zeta_2k * bracket


def zeta_prime(s: float) -> float:
    """ζ′(s) by mpmath, any real s != 1."""
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    return float(mpmath.zeta(s, 1, 1))


@lru_cache(maxsize=None)
def glaisher() -> float:
    return float(mpmath.glaisher)


def _series(term, first: int) -> float:
    total = 0.0
    j = first
    while True:
        value = term(j)
        total += value
        if abs(value) < _SADDLE_EPS:
            return total
        j += 1


@lru_cache(maxsize=None)
def saddle_constant(m: int, variant: str = 'minus') -> float:
    """
    Series constants of the m^k families:

    minus  Σ_{j≥2} 1/(j(m^{j−1} − 1))
    plus   Σ_{j≥2} (−1)^j/(j(m^{j−1} − 1))
    ratio  2 Σ_{j≥1} 1/((2j+1)(m^{2j} − 1))
    """
    if variant not in SADDLE_VARIANTS:
        raise DomainError(f"unknown saddle variant {variant!r}")
    if m < 2:
        raise DomainError(f"saddle constants need m >= 2, got {m}")
    m = float(m)
    if variant == 'minus':
        return _series(lambda j: 1.0 / (j * (m ** (j - 1) - 1)), 2)
    if variant == 'plus':
        return _series(lambda j: (-1) ** j / (j * (m ** (j - 1) - 1)), 2)
    return 2.0 * _series(lambda j: 1.0 / ((2 * j + 1) * (m ** (2 * j) - 1)), 1)


@dataclass(frozen=True)
class ConstantTable:
    pi: float
    zeta3: float
    glaisher: float
    zeta_values: Dict[int, float] = field(default_factory=dict)
    zeta_derivs: Dict[int, float] = field(default_factory=dict)
    saddle: Dict[tuple, float] = field(default_factory=dict)


@lru_cache(maxsize=1)
def constants() -> ConstantTable:
    return ConstantTable(
        pi=math.pi,
        zeta3=zeta(3),
        glaisher=glaisher(),
        zeta_values={s: zeta(s) for s in range(2, 15)},
        zeta_derivs={m: zeta_deriv_neg(m) for m in range(0, 13)},
        saddle={(m, variant): saddle_constant(m, variant) for m in range(2, 6) for variant in SADDLE_VARIANTS},
    )
