"""
Catalog of q-product families with closed-form coefficient asymptotics.

Each FamilyEntry pairs a product (as DSL text, parsed on demand) with its
printed closed form and, for families whose formula follows from the
convolution calculus, an independent derivation through core.asymptotics
or core.meinardus. derive(id) and instantiate(id) agree in log space.
"""
import fnmatch
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, pi, sqrt
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from . import asymptotics as asym
from . import meinardus, special
from .asymptotics import ONE_HALF, TWO_THIRDS, AsymptoticForm
from .exceptions import ParamError, UnknownFamily
from .qspec import ExponentFn, ExponentKind, ProductSpec, parse

logger = logging.getLogger(__name__)

_SQRT_PI = sqrt(pi)
_SQRT_3PI = sqrt(3 * pi)


def _zeta3() -> float:
    return special.zeta(3)


def _glaisher() -> float:
    return special.glaisher()


# DSL text helpers

def _q(step: int, offset: int = 0) -> str:
    linear = 'k' if step == 1 else f'{step}k'
    if offset:
        linear += f'+{offset}'
    return 'q^k' if linear == 'k' else f'q^({linear})'


def _pow(exponent: int) -> str:
    return '' if exponent == 1 else f'^{exponent}'


def _affine(m: int, c: int) -> str:
    text = 'k' if m == 1 else f'{m}k'
    if c > 0:
        text += f'+{c}'
    elif c < 0:
        text += f'-{-c}'
    return text


# Ingham / Meinardus progressions

def partminus(s, t) -> AsymptoticForm:
    x = t / s
    v = special.gamma(x) * pi ** (x - 1) * 2 ** (-1.5 - x / 2) * 3 ** (-x / 2) * s ** (-0.5 + x / 2)
    return AsymptoticForm.single(v=v, r=pi * sqrt(2 / (3 * s)), b=Fraction(s + t, 2 * s))


def partplus(s, t) -> AsymptoticForm:
    x = t / s
    return AsymptoticForm.single(v=1 / (2 ** (1 + x) * (3 * s) ** 0.25), r=pi / sqrt(3 * s), b=Fraction(3, 4))


def partratio(s, t) -> AsymptoticForm:
    x = t / s
    v = special.gamma(x) * s ** (x / 2 - 0.5) * pi ** (x - 1) / 2 ** (2 * x + 1)
    return AsymptoticForm.single(v=v, r=pi / sqrt(s), b=Fraction(t, 2 * s) + ONE_HALF)


def convminus(s, t, c, d) -> AsymptoticForm:
    x, y = t / s, d / c
    v = (
        special.gamma(x) * special.gamma(y)
        * s ** ((2 * x - 2 * y - 1) / 4) * c ** ((2 * y - 2 * x - 1) / 4)
        * (s + c) ** ((2 * x + 2 * y - 1) / 4) * pi ** (x + y - 2)
        / (2 ** ((2 * x + 2 * y + 7) / 4) * 3 ** ((2 * x + 2 * y - 1) / 4))
    )
    return AsymptoticForm.single(
        v=v,
        r=pi * sqrt(2 * (1 / s + 1 / c) / 3),
        b=Fraction(1, 4) + Fraction(t, 2 * s) + Fraction(d, 2 * c),
    )


def convplus(s, t, c, d) -> AsymptoticForm:
    x, y = t / s, d / c
    v = 2 ** (-0.5 - x - y) * (s + c) ** 0.25 / (3 ** 0.25 * s ** 0.25 * c ** 0.25)
    return AsymptoticForm.single(v=v, r=pi * sqrt((1 / s + 1 / c) / 3), b=Fraction(3, 4))


def convratio(s, t, c, d) -> AsymptoticForm:
    y = d / c
    v = (
        2 ** (-y - (s + t) / s) * c ** (-0.5 + y / 2) * (c + 2 * s) ** (y / 2)
        * pi ** (-1 + y) * special.gamma(y) / (3 ** (y / 2) * s ** (y / 2))
    )
    return AsymptoticForm.single(v=v, r=pi * sqrt((2 / c + 1 / s) / 3), b=Fraction(c + d, 2 * c))


def powerminus(s, t, m) -> AsymptoticForm:
    x = t / s
    v = (
        special.gamma(x) ** m
        * 2 ** (-(m + 5) / 4 - m * x / 2) * 3 ** ((m - 1) / 4 - m * x / 2)
        * m ** (-(m - 1) / 4 + m * x / 2) * s ** (-(m + 1) / 4 + m * x / 2)
        * pi ** (-m + m * x)
    )
    return AsymptoticForm.single(v=v, r=pi * sqrt(2 * m / (3 * s)), b=Fraction(3 - m, 4) + Fraction(m * t, 2 * s))


def powerplus(s, t, m) -> AsymptoticForm:
    x = t / s
    v = 2 ** ((m - 3) / 2 - m * x) * m ** 0.25 / (3 * s) ** 0.25
    return AsymptoticForm.single(v=v, r=pi * sqrt(m / (3 * s)), b=Fraction(3, 4))


def powerratio_general(s, t, m) -> AsymptoticForm:
    x = t / s
    v = (
        special.gamma(x) ** m * 2 ** (m / 2 - 1.5 - 2 * x * m)
        * s ** (-m / 4 - 0.25 + x * m / 2) * m ** (0.25 - m / 4 + x * m / 2)
        * pi ** (x * m - m)
    )
    return AsymptoticForm.single(v=v, r=pi * sqrt(m / s), b=Fraction(3 - m, 4) + Fraction(t * m, 2 * s))


def powerratio(s, t, m) -> AsymptoticForm:
    if (s, t) == (2, 1):
        # odd parts: the Γ(1/2)^m and π powers cancel
        return AsymptoticForm.single(
            v=m ** 0.25 / 2 ** (m / 2 + 1.75), r=pi * sqrt(m / 2), b=Fraction(3, 4),
        )
    return powerratio_general(s, t, m)


def powerm_minus(m) -> AsymptoticForm:
    v = m ** ((m + 1) / 4) / (2 ** ((3 * m + 5) / 4) * 3 ** ((m + 1) / 4))
    return AsymptoticForm.single(v=v, r=pi * sqrt(2 * m / 3), b=Fraction(m + 3, 4))


def powerm_plus(m) -> AsymptoticForm:
    v = m ** 0.25 / (2 ** ((m + 3) / 2) * 3 ** 0.25)
    return AsymptoticForm.single(v=v, r=pi * sqrt(m / 3), b=Fraction(3, 4))


def powerm_ratio(m) -> AsymptoticForm:
    v = m ** ((m + 1) / 4) / 2 ** (3 * (m + 1) / 2)
    return AsymptoticForm.single(v=v, r=pi * sqrt(m), b=Fraction(m + 3, 4))


# Quotients of Euler products

def convplusdenom(m) -> AsymptoticForm:
    v = (m - 1) ** 0.25 / (2 ** 1.5 * 3 ** 0.25 * m ** 0.25)
    return AsymptoticForm.single(v=v, r=pi * sqrt((m - 1) / (3 * m)), b=Fraction(3, 4))


def convplusdenom_power(m, h) -> AsymptoticForm:
    ratio = h * (m - 1) / (3 * m)
    return AsymptoticForm.single(v=ratio ** 0.25 / 2 ** 1.5, r=pi * sqrt(ratio), b=Fraction(3, 4))


def powerplusdenom(m) -> AsymptoticForm:
    v = m ** 0.25 / (2 ** 1.75 * 3 ** 0.25)
    return AsymptoticForm.single(v=v, r=pi * sqrt(m / 6), b=Fraction(3, 4), alternating=True)


def convplusnumer(m) -> AsymptoticForm:
    if m % 2 == 0:
        v = (m + 2) ** 0.25 / (4 * (6 * m) ** 0.25)
        r = pi * sqrt((m + 2) / (6 * m))
    else:
        v = (m - 1) ** 0.25 / (2 ** 1.5 * (6 * m) ** 0.25)
        r = pi * sqrt((m - 1) / (6 * m))
    return AsymptoticForm.single(v=v, r=r, b=Fraction(3, 4), alternating=True)


def hagis(m) -> AsymptoticForm:
    v = (m - 1) ** 0.25 / (2 * 6 ** 0.25 * m ** 0.75)
    return AsymptoticForm.single(v=v, r=pi * sqrt(2 * (m - 1) / (3 * m)), b=Fraction(3, 4))


def hagis_power(m, h) -> AsymptoticForm:
    v = h ** 0.25 * (m - 1) ** 0.25 / (2 ** 1.25 * 3 ** 0.25 * m ** (0.25 + h / 2))
    return AsymptoticForm.single(v=v, r=pi * sqrt(2 * h * (m - 1) / (3 * m)), b=Fraction(3, 4))


def odd_over_even(m) -> AsymptoticForm:
    v = (4 * m + 1) ** 0.25 / (2 ** 1.75 * 3 ** 0.25 * (2 * m + 1) ** 0.75)
    return AsymptoticForm.single(
        v=v, r=pi * sqrt((4 * m + 1) / (6 * (2 * m + 1))), b=Fraction(3, 4), alternating=True,
    )


def odd_over_even_m0() -> AsymptoticForm:
    return AsymptoticForm.single(
        v=1 / (2 ** 1.75 * 3 ** 0.25), r=pi / sqrt(6), b=Fraction(3, 4), alternating=True,
    )


def mixed_pm(m) -> AsymptoticForm:
    return AsymptoticForm.single(v=2 ** (-(m + 1) / 2), r=pi * sqrt((m - 2) / 3), b=ONE_HALF)


def inv_plus_minus(m) -> AsymptoticForm:
    v = (2 * m - 1) ** ((m + 1) / 4) / (2 ** (m + 1) * 3 ** ((m + 1) / 4))
    return AsymptoticForm.single(v=v, r=pi * sqrt((2 * m - 1) / 3), b=Fraction(m + 3, 4))


def a100823() -> AsymptoticForm:
    return AsymptoticForm.single(v=sqrt(37) / (12 * sqrt(5)), r=pi / 3 * sqrt(37 / 5), b=1)


def a147785() -> AsymptoticForm:
    return AsymptoticForm.single(v=sqrt(7 / 5) / 12, r=pi / 3 * sqrt(14 / 5), b=1)


# Plane partitions and k in the exponent (p = 2/3)

def wright_plane() -> AsymptoticForm:
    z3, A = _zeta3(), _glaisher()
    v = z3 ** (7 / 36) * math.exp(1 / 12) / (A * 2 ** (11 / 36) * _SQRT_3PI)
    return AsymptoticForm.single(v=v, r=3 * z3 ** (1 / 3) / 2 ** (2 / 3), b=Fraction(25, 36), p=TWO_THIRDS)


def a026007() -> AsymptoticForm:
    z3 = _zeta3()
    v = z3 ** (1 / 6) / (2 ** 0.75 * 3 ** (1 / 3) * _SQRT_PI)
    return AsymptoticForm.single(v=v, r=1.5 ** (4 / 3) * z3 ** (1 / 3), b=TWO_THIRDS, p=TWO_THIRDS)


def a156616() -> AsymptoticForm:
    z7, A = 7 * _zeta3(), _glaisher()
    v = z7 ** (7 / 36) * math.exp(1 / 12) / (A * 2 ** (7 / 9) * _SQRT_3PI)
    return AsymptoticForm.single(v=v, r=3 * 2 ** (-4 / 3) * z7 ** (1 / 3), b=Fraction(25, 36), p=TWO_THIRDS)


def powerkminus(m) -> AsymptoticForm:
    mz, A = m * _zeta3(), _glaisher()
    v = mz ** (m / 36 + 1 / 6) * math.exp(m / 12) / (A ** m * 2 ** (1 / 3 - m / 36) * _SQRT_3PI)
    return AsymptoticForm.single(
        v=v, r=3 * mz ** (1 / 3) / 2 ** (2 / 3), b=Fraction(m, 36) + TWO_THIRDS, p=TWO_THIRDS,
    )


def powerkplus(m) -> AsymptoticForm:
    mz = m * _zeta3()
    v = mz ** (1 / 6) / (2 ** (m / 12 + 2 / 3) * 3 ** (1 / 3) * _SQRT_PI)
    return AsymptoticForm.single(v=v, r=3 ** (4 / 3) * mz ** (1 / 3) / 2 ** (4 / 3), b=TWO_THIRDS, p=TWO_THIRDS)


def powerkratio(m) -> AsymptoticForm:
    z7, A = 7 * m * _zeta3(), _glaisher()
    v = z7 ** (1 / 6 + m / 36) * math.exp(m / 12) / (A ** m * 2 ** (2 / 3 + m / 9) * _SQRT_3PI)
    return AsymptoticForm.single(
        v=v, r=3 * z7 ** (1 / 3) / 2 ** (4 / 3), b=TWO_THIRDS + Fraction(m, 36), p=TWO_THIRDS,
    )


def a255528() -> AsymptoticForm:
    z3, A = _zeta3(), _glaisher()
    v = A * z3 ** (5 / 36) * math.exp(-1 / 12) / (2 ** (7 / 9) * _SQRT_3PI)
    return AsymptoticForm.single(
        v=v, r=3 * z3 ** (1 / 3) * 2 ** (-5 / 3), b=Fraction(23, 36), p=TWO_THIRDS, alternating=True,
    )


# One simple pole: b(k) = k^m

def _gz(m) -> float:
    return special.gamma(m + 2) * special.zeta(m + 2)


def powerkexpminus(m) -> AsymptoticForm:
    G, zm = _gz(m), special.zeta_neg(m)
    v = G ** ((1 - 2 * float(zm)) / (2 * m + 4)) * math.exp(special.zeta_deriv_neg(m)) / sqrt(2 * pi * (m + 2))
    return AsymptoticForm.single(
        v=v,
        r=(m + 2) / (m + 1) * G ** (1 / (m + 2)),
        b=(m + 3 - 2 * zm) / (2 * m + 4),
        p=Fraction(m + 1, m + 2),
    )


def powerkexpplus(m) -> AsymptoticForm:
    G = (1 - 2.0 ** (-m - 1)) * _gz(m)
    v = 2 ** float(special.zeta_neg(m)) * G ** (1 / (2 * m + 4)) / sqrt(2 * pi * (m + 2))
    return AsymptoticForm.single(
        v=v,
        r=(m + 2) / (m + 1) * G ** (1 / (m + 2)),
        b=Fraction(m + 3, 2 * m + 4),
        p=Fraction(m + 1, m + 2),
    )


def powerkexpratio(m) -> AsymptoticForm:
    C = (2 ** (m + 2) - 1) * _gz(m)
    zm = special.zeta_neg(m)
    v = (
        (C / 2 ** (2 * m + 3)) ** ((1 - 2 * float(zm)) / (2 * m + 4))
        * math.exp(special.zeta_prime(-m)) / sqrt((m + 2) * pi)
    )
    return AsymptoticForm.single(
        v=v,
        r=(m + 2) / (m + 1) * (C / 2 ** (m + 1)) ** (1 / (m + 2)),
        b=ONE_HALF + (1 - 2 * zm) / (2 * m + 4),
        p=Fraction(m + 1, m + 2),
    )


def powerkexpratio_even(m) -> AsymptoticForm:
    """Even m >= 2: ζ(−m) = 0 and ζ′(−m) has a closed form through ζ(m+1)."""
    C = (2 ** (m + 2) - 1) * _gz(m)
    zeta_deriv = (-1) ** (m // 2) * special.gamma(m + 1) * special.zeta(m + 1) / (2 ** (m + 1) * pi ** m)
    v = (C / 2 ** (2 * m + 3)) ** (1 / (2 * m + 4)) * math.exp(zeta_deriv) / sqrt((m + 2) * pi)
    return AsymptoticForm.single(
        v=v,
        r=(m + 2) / (m + 1) * (C / 2 ** (m + 1)) ** (1 / (m + 2)),
        b=ONE_HALF + Fraction(1, 2 * m + 4),
        p=Fraction(m + 1, m + 2),
    )


# Two poles: b(k) = m·k + c

def twopole_minus(m, c) -> AsymptoticForm:
    mz, A = m * _zeta3(), _glaisher()
    v = (
        mz ** (m / 36 + c / 6 + 1 / 6) * math.exp(m / 12 - c ** 2 * pi ** 4 / (432 * mz))
        / (A ** m * 2 ** (c / 3 + 1 / 3 - m / 36) * sqrt(3) * pi ** ((c + 1) / 2))
    )
    return AsymptoticForm.mixed(
        v=v,
        s=c * pi ** 2 / (3 * 2 ** (4 / 3) * mz ** (1 / 3)),
        r=3 * mz ** (1 / 3) / 2 ** (2 / 3),
        b=Fraction(m, 36) + Fraction(c, 6) + TWO_THIRDS,
    )


def twopole_plus(m, c) -> AsymptoticForm:
    mz = m * _zeta3()
    v = (
        mz ** (1 / 6) * math.exp(-c ** 2 * pi ** 4 / (1296 * mz))
        / (2 ** (m / 12 + c / 2 + 2 / 3) * 3 ** (1 / 3) * _SQRT_PI)
    )
    return AsymptoticForm.mixed(
        v=v,
        s=c * pi ** 2 / (2 ** (5 / 3) * 3 ** (4 / 3) * mz ** (1 / 3)),
        r=3 ** (4 / 3) * mz ** (1 / 3) / 2 ** (4 / 3),
        b=TWO_THIRDS,
    )


def twopole_ratio(m, c) -> AsymptoticForm:
    z7, A = 7 * m * _zeta3(), _glaisher()
    v = (
        z7 ** (1 / 6 + c / 6 + m / 36) * math.exp(m / 12 - c ** 2 * pi ** 4 / (336 * m * _zeta3()))
        / (A ** m * 2 ** (2 / 3 + 7 * c / 6 + m / 9) * sqrt(3) * pi ** ((c + 1) / 2))
    )
    return AsymptoticForm.mixed(
        v=v,
        s=c * pi ** 2 / (2 ** (5 / 3) * z7 ** (1 / 3)),
        r=3 * z7 ** (1 / 3) / 2 ** (4 / 3),
        b=TWO_THIRDS + Fraction(c, 6) + Fraction(m, 36),
    )


# Saddle point: b(k) = m^k

def saddle_minus(m) -> AsymptoticForm:
    c = special.saddle_constant(m, 'minus')
    return AsymptoticForm.single(v=math.exp(-0.5 + c) / (2 * _SQRT_PI), r=2, b=Fraction(3, 4), base=m)


def saddle_plus(m) -> AsymptoticForm:
    c = special.saddle_constant(m, 'plus')
    return AsymptoticForm.single(v=math.exp(-0.5 - c) / (2 * _SQRT_PI), r=2, b=Fraction(3, 4), base=m)


def saddle_ratio(m) -> AsymptoticForm:
    c = special.saddle_constant(m, 'ratio')
    return AsymptoticForm.single(
        v=math.exp(-1 + c) / (_SQRT_PI * 2 ** 0.75), r=2 * sqrt(2), b=Fraction(3, 4), base=m,
    )


# Composition paths

def _derive_hagis(m) -> AsymptoticForm:
    return asym.fold(asym.convolve, [partminus(m, j) for j in range(1, m)])


def _derive_convplusdenom(m) -> AsymptoticForm:
    # (m−1)-fold convolution of the (1 + q^{mk+j}) factors, amplitudes 2^{−1−j/m}
    base = AsymptoticForm.single(v=(3 * m) ** -0.25, r=pi / sqrt(3 * m), b=Fraction(3, 4))
    return asym.scale(asym.power(base, m - 1), 2 ** (-1.5 * (m - 1)))


def _derive_convplusnumer(m) -> AsymptoticForm:
    if m % 2 == 0:
        return asym.alternate(convplus(2, 1, m, m))
    target = asym.convolve(powerplus(2, 1, 1), convplus(2 * m, 2 * m, 2 * m, m))
    return asym.alternate(asym.deconvolve(target, powerratio(2 * m, m, 1)))


def _derive_odd_over_even(m) -> AsymptoticForm:
    target = asym.convolve(partplus(4 * m + 2, 2 * m + 1), hagis(2 * m + 1))
    return asym.alternate(asym.deconvolve(target, convplusdenom(2 * m + 1)))


def _derive_a100823() -> AsymptoticForm:
    return asym.convolve(
        asym.convolve(convplus(5, 1, 5, 4), convplus(5, 2, 5, 3)),
        asym.convolve(convminus(3, 1, 3, 2), partminus(6, 6)),
    )


def _derive_a147785() -> AsymptoticForm:
    target = asym.convolve(asym.convolve(hagis(15), partplus(1, 1)), convminus(3, 3, 5, 5))
    return asym.deconvolve(target, partratio(1, 1))


def _single_pole(exponent: ExponentFn, kind: str) -> AsymptoticForm:
    dd = meinardus.dirichlet_from_exponent(exponent)
    if kind == meinardus.MINUS:
        return meinardus.single_pole_minus(dd)
    return meinardus.single_pole_plus(dd)


def _k_power(m) -> ExponentFn:
    if m == 0:
        return ExponentFn(ExponentKind.CONSTANT, 1)
    return ExponentFn(ExponentKind.POWER, m)


_K = ExponentFn(ExponentKind.POWER, 1)


def _derive_wright() -> AsymptoticForm:
    return _single_pole(_K, meinardus.MINUS)


def _derive_a026007() -> AsymptoticForm:
    return _single_pole(_K, meinardus.PLUS)


def _derive_a156616() -> AsymptoticForm:
    return asym.convolve(_derive_wright(), _derive_a026007())


def _derive_a255528() -> AsymptoticForm:
    # solved for the reflected product, (−1)^n restored last
    halved = asym.rescale(powerkplus(2), Fraction(1, 2))
    odd_part = asym.scale(asym.deconvolve(powerkplus(1), halved), 2)
    combined = asym.convolve(odd_part, powerkplus(1))
    return asym.alternate(asym.deconvolve(combined, powerkminus(1)))


def _derive_powerkexpratio(m) -> AsymptoticForm:
    exponent = _k_power(m)
    return asym.convolve(_single_pole(exponent, meinardus.MINUS), _single_pole(exponent, meinardus.PLUS))


def _affine_exponent(m, c) -> ExponentFn:
    return ExponentFn(ExponentKind.AFFINE, m, c)


def _derive_twopole_ratio(m, c) -> AsymptoticForm:
    exponent = _affine_exponent(m, c)
    return asym.convolve_mixed(
        meinardus.meinardus_form(exponent, meinardus.MINUS),
        meinardus.meinardus_form(exponent, meinardus.PLUS),
    )


# Registry

@dataclass(frozen=True)
class Constraint:
    label: str
    check: Callable[..., bool]


@dataclass(frozen=True)
class FamilyEntry:
    id: str
    params: Tuple[str, ...]
    spec_builder: Callable[..., str]
    asym_builder: Callable[..., AsymptoticForm]
    derive_builder: Optional[Callable[..., AsymptoticForm]] = None
    constraints: Tuple[Constraint, ...] = ()
    oeis_refs: Tuple[str, ...] = ()
    source: str = ''
    grid: Tuple[Tuple[int, ...], ...] = ((),)
    alternating: bool = False
    notes: str = ''

    @property
    def composable(self) -> bool:
        return self.derive_builder is not None

    @property
    def grid_params(self) -> List[Dict[str, int]]:
        return [dict(zip(self.params, values)) for values in self.grid]

    def spec_text(self, **params) -> str:
        return self.spec_builder(**params)

    def spec(self, **params) -> ProductSpec:
        spec = parse(self.spec_text(**params))
        spec.meta.update(family=self.id, params=dict(params))
        return spec

    def form(self, **params) -> AsymptoticForm:
        return self.asym_builder(**params)

    def check(self, params) -> Dict[str, int]:
        """Coerce and validate a parameter mapping; raise ParamError naming each violation."""
        if params is None:
            params = {}
        if not isinstance(params, Mapping):
            raise ParamError(f"parameters of {self.id} must be a mapping, got {type(params).__name__}")
        errors = []
        unknown = sorted(set(params) - set(self.params))
        if unknown:
            errors.append(f"{self.id} has no parameter(s) {', '.join(unknown)}; expected {list(self.params)}")
        missing = [name for name in self.params if name not in params]
        if missing:
            errors.append(f"{self.id} is missing parameter(s) {', '.join(missing)}")
        values = {}
        for name in self.params:
            if name not in params:
                continue
            raw = params[name]
            try:
                if isinstance(raw, bool) or (isinstance(raw, float) and not raw.is_integer()):
                    raise ValueError
                values[name] = int(raw)
            except (TypeError, ValueError):
                errors.append(f"parameter {name}={raw!r} is not an integer")
        if errors:
            raise ParamError(errors)
        violated = [c.label for c in self.constraints if not c.check(values)]
        if violated:
            raise ParamError([f"{self.id}: constraint {label} violated by {values}" for label in violated])
        return values

    def as_dict(self) -> dict:
        return {
            'id': self.id,
            'params': list(self.params),
            'constraints': [c.label for c in self.constraints],
            'oeis_refs': list(self.oeis_refs),
            'source': self.source,
            'alternating': self.alternating,
            'composable': self.composable,
            'grid': self.grid_params,
            'notes': self.notes,
        }


def _greater_than(name, bound) -> Callable[[Dict[str, int]], bool]:
    return lambda p: p[name] > bound


def _positive(*names) -> Tuple[Constraint, ...]:
    return tuple(Constraint(f'{name} > 0', _greater_than(name, 0)) for name in names)


def _coprime(*names) -> Constraint:
    label = f"gcd({','.join(names)}) = 1"
    return Constraint(label, lambda p: reduce(gcd, (p[n] for n in names)) == 1)


def _at_least(name, bound) -> Constraint:
    return Constraint(f'{name} >= {bound}', lambda p: p[name] >= bound)


_HAGIS_NOTE = (
    "The Hagis (1971) formula is cited incorrectly in some references "
    "(s must be s − 1 and 24 must be 24n); the amplitude here is the corrected one."
)
_WRIGHT_NOTE = (
    "Wright's plane-partition formula is cited incorrectly in many papers: "
    "the denominator carries √(3π), not √π."
)


def _registry() -> List[FamilyEntry]:
    ST = ('s', 't')
    STCD = ('s', 't', 'c', 'd')
    STM = ('s', 't', 'm')
    st_rules = _positive('s', 't') + (_coprime('s', 't'),)
    stcd_rules = _positive('s', 't', 'c', 'd') + (_coprime('s', 't', 'c', 'd'),)
    stm_rules = _positive('s', 't', 'm') + (_coprime('s', 't'),)

    return [
        FamilyEntry(
            id='partminus', params=ST,
            spec_builder=lambda s, t: f'prod(k>=0, 1/(1-{_q(s, t)}))',
            asym_builder=partminus,
            constraints=st_rules,
            oeis_refs=('A000041',),
            source='Ingham: parts in one residue class, ∏ 1/(1 − q^{sk+t})',
            grid=((1, 1), (1, 2), (1, 3)),
        ),
        FamilyEntry(
            id='partplus', params=ST,
            spec_builder=lambda s, t: f'prod(k>=0, (1+{_q(s, t)}))',
            asym_builder=partplus,
            constraints=st_rules,
            oeis_refs=('A000009',),
            source='Meinardus: distinct parts in one residue class, ∏ (1 + q^{sk+t})',
            grid=((1, 1), (1, 2), (1, 3)),
        ),
        FamilyEntry(
            id='partratio', params=ST,
            spec_builder=lambda s, t: f'prod(k>=0, (1+{_q(s, t)})/(1-{_q(s, t)}))',
            asym_builder=partratio,
            derive_builder=lambda s, t: asym.convolve(partminus(s, t), partplus(s, t)),
            constraints=st_rules,
            oeis_refs=('A015128',),
            source='overpartitions in one residue class, convolution of partminus and partplus',
            grid=((1, 1), (1, 2), (1, 3)),
        ),
        FamilyEntry(
            id='convminus', params=STCD,
            spec_builder=lambda s, t, c, d: f'prod(k>=0, 1/((1-{_q(s, t)})*(1-{_q(c, d)})))',
            asym_builder=convminus,
            derive_builder=lambda s, t, c, d: asym.convolve(partminus(s, t), partminus(c, d)),
            constraints=stcd_rules,
            source='convolution of two Ingham progressions',
            grid=((1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3)),
        ),
        FamilyEntry(
            id='convplus', params=STCD,
            spec_builder=lambda s, t, c, d: f'prod(k>=0, (1+{_q(s, t)})*(1+{_q(c, d)}))',
            asym_builder=convplus,
            derive_builder=lambda s, t, c, d: asym.convolve(partplus(s, t), partplus(c, d)),
            constraints=stcd_rules,
            source='convolution of two distinct-part progressions',
            grid=((1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3)),
        ),
        FamilyEntry(
            id='convratio', params=STCD,
            spec_builder=lambda s, t, c, d: f'prod(k>=0, (1+{_q(s, t)})/(1-{_q(c, d)}))',
            asym_builder=convratio,
            derive_builder=lambda s, t, c, d: asym.convolve(partplus(s, t), partminus(c, d)),
            constraints=stcd_rules,
            source='distinct parts in one progression times unrestricted parts in another',
            grid=((1, 1, 1, 1), (1, 1, 1, 2), (1, 1, 1, 3)),
        ),
        FamilyEntry(
            id='powerminus', params=STM,
            spec_builder=lambda s, t, m: f'prod(k>=0, 1/(1-{_q(s, t)}){_pow(m)})',
            asym_builder=powerminus,
            derive_builder=lambda s, t, m: asym.power(partminus(s, t), m),
            constraints=stm_rules,
            source='m-th power of an Ingham progression (power theorem)',
            grid=((1, 1, 1), (1, 1, 2), (1, 1, 3)),
        ),
        FamilyEntry(
            id='powerplus', params=STM,
            spec_builder=lambda s, t, m: f'prod(k>=0, (1+{_q(s, t)}){_pow(m)})',
            asym_builder=powerplus,
            derive_builder=lambda s, t, m: asym.power(partplus(s, t), m),
            constraints=stm_rules,
            source='m-th power of a distinct-part progression',
            grid=((1, 1, 1), (1, 1, 2), (1, 1, 3)),
        ),
        FamilyEntry(
            id='powerratio', params=STM,
            spec_builder=lambda s, t, m: f'prod(k>=0, (1+{_q(s, t)}){_pow(m)}/(1-{_q(s, t)}){_pow(m)})',
            asym_builder=powerratio,
            derive_builder=lambda s, t, m: asym.power(partratio(s, t), m),
            constraints=stm_rules,
            oeis_refs=('A080054', 'A007096', 'A261647', 'A014969', 'A261648', 'A014970'),
            source='m-th power of overpartitions in one progression; odd parts s=2, t=1 simplify',
            grid=((1, 1, 1), (1, 1, 2), (1, 1, 3)),
        ),
        FamilyEntry(
            id='powerm_minus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/(1-q^k){_pow(m)})',
            asym_builder=powerm_minus,
            derive_builder=lambda m: asym.power(partminus(1, 1), m),
            constraints=_positive('m'),
            oeis_refs=('A000041', 'A000712', 'A000716', 'A023003', 'A144064'),
            source='partitions into m colours',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='powerm_plus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k){_pow(m)})',
            asym_builder=powerm_plus,
            derive_builder=lambda m: asym.power(partplus(1, 1), m),
            constraints=_positive('m'),
            oeis_refs=('A000009', 'A022567', 'A022568', 'A022569', 'A022570'),
            source='distinct parts in m colours',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='powerm_ratio', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k){_pow(m)}/(1-q^k){_pow(m)})',
            asym_builder=powerm_ratio,
            derive_builder=lambda m: asym.power(partratio(1, 1), m),
            constraints=_positive('m'),
            oeis_refs=('A015128', 'A001934', 'A004404'),
            source='m-th power of the overpartition product',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='convplusdenom', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)/(1+{_q(m)}))',
            asym_builder=convplusdenom,
            derive_builder=_derive_convplusdenom,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A000700', 'A003105', 'A070048', 'A096938', 'A261770', 'A097793'),
            source='(m−1)-fold convolution of the progressions mk+j, j = 1..m−1',
            grid=((2,), (3,), (4,)),
        ),
        FamilyEntry(
            id='convplusdenom_power', params=('m', 'h'),
            spec_builder=lambda m, h: f'prod(k>=1, (1+q^k){_pow(h)}/(1+{_q(m)}){_pow(h)})',
            asym_builder=convplusdenom_power,
            derive_builder=lambda m, h: asym.power(convplusdenom(m), h),
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1), Constraint('h >= 1', lambda p: p["h"] >= 1)),
            source='h-th power of convplusdenom',
            grid=((2, 1), (2, 2), (2, 3)),
        ),
        FamilyEntry(
            id='powerplusdenom', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/(1+q^k){_pow(m)})',
            asym_builder=powerplusdenom,
            derive_builder=lambda m: asym.alternate(powerplus(2, 1, m)),
            constraints=_positive('m'),
            oeis_refs=('A081362', 'A022597', 'A022598', 'A022599'),
            source='q → −q turns 1/(1+q^k) into odd parts; Euler identity',
            grid=((1,), (2,), (3,)),
            alternating=True,
        ),
        FamilyEntry(
            id='convplusnumer', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+{_q(m)})/(1+q^k))',
            asym_builder=convplusnumer,
            derive_builder=_derive_convplusnumer,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A081360', 'A109389', 'A261734', 'A133563', 'A261736', 'A113297', 'A261735'),
            source='q → −q reflection, separate even and odd m branches',
            grid=((2,), (3,), (4,)),
            alternating=True,
        ),
        FamilyEntry(
            id='hagis', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1-{_q(m)})/(1-q^k))',
            asym_builder=hagis,
            derive_builder=_derive_hagis,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A000009', 'A000726', 'A001935', 'A035959', 'A219601', 'A035985', 'A261775', 'A104502',
                       'A261776'),
            source='Hagis: partitions with no part repeated m or more times',
            grid=((2,), (3,), (4,)),
            notes=_HAGIS_NOTE,
        ),
        FamilyEntry(
            id='hagis_power', params=('m', 'h'),
            spec_builder=lambda m, h: f'prod(k>=1, (1-{_q(m)}){_pow(h)}/(1-q^k){_pow(h)})',
            asym_builder=hagis_power,
            derive_builder=lambda m, h: asym.power(hagis(m), h),
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1), Constraint('h >= 1', lambda p: p["h"] >= 1)),
            source='h-th power of the Hagis product',
            grid=((2, 1), (2, 2), (2, 3)),
            notes=_HAGIS_NOTE,
        ),
        FamilyEntry(
            id='odd_over_even', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1-{_q(2 * m + 1)})/(1-q^(2k)))',
            asym_builder=odd_over_even,
            derive_builder=_derive_odd_over_even,
            constraints=(_at_least('m', 1),),
            oeis_refs=('A262346', 'A262364'),
            source='q → −q splits (1 − q^{(2m+1)k}) into odd and even progressions',
            grid=((1,), (2,), (3,)),
            alternating=True,
        ),
        FamilyEntry(
            id='odd_over_even_m0', params=(),
            spec_builder=lambda: 'prod(k>=1, (1-q^k)/(1-q^(2k)))',
            asym_builder=odd_over_even_m0,
            derive_builder=lambda: asym.alternate(partplus(2, 1)),
            oeis_refs=('A081362',),
            source='the m = 0 member, equal to 1/∏(1 + q^k)',
            alternating=True,
        ),
        FamilyEntry(
            id='mixed_pm', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1-q^k)*(1+q^k){_pow(m)})',
            asym_builder=mixed_pm,
            derive_builder=lambda m: asym.deconvolve(powerplus(1, 1, m + 1), powerratio(1, 1, 1)),
            constraints=(Constraint('m > 2', lambda p: p["m"] > 2),),
            oeis_refs=('A085140', 'A261998'),
            source='solved from (1 − q^k)(1 + q^k)^m · overpartitions = (1 + q^k)^{m+1}',
            grid=((3,), (4,), (5,)),
        ),
        FamilyEntry(
            id='inv_plus_minus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/((1+q^k)*(1-q^k){_pow(m)}))',
            asym_builder=inv_plus_minus,
            derive_builder=lambda m: asym.deconvolve(powerminus(1, 1, m + 1), powerratio(1, 1, 1)),
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A002513', 'A029863', 'A262380'),
            source='solved from the product with overpartitions, 1/(1 − q^k)^{m+1}',
            grid=((2,), (3,), (4,)),
        ),
        FamilyEntry(
            id='a100823', params=(),
            spec_builder=lambda: 'prod(k>=1, (1+q^k)/((1-q^k)*(1+q^(3k))*(1+q^(5k))))',
            asym_builder=a100823,
            derive_builder=_derive_a100823,
            oeis_refs=('A100823',),
            source='worked example: nested convolutions of progressions mod 3, 5 and 6',
        ),
        FamilyEntry(
            id='a147785', params=(),
            spec_builder=lambda: 'prod(k>=1, (1-q^(15k))/((1-q^(3k))*(1-q^(5k))))',
            asym_builder=a147785,
            derive_builder=_derive_a147785,
            oeis_refs=('A147785',),
            source='worked example: convolutions followed by one deconvolution',
        ),
        FamilyEntry(
            id='wright_plane', params=(),
            spec_builder=lambda: 'prod(k>=1, 1/(1-q^k)^k)',
            asym_builder=wright_plane,
            derive_builder=_derive_wright,
            oeis_refs=('A000219',),
            source='MacMahon plane partitions, Wright asymptotics',
            notes=_WRIGHT_NOTE,
        ),
        FamilyEntry(
            id='a026007', params=(),
            spec_builder=lambda: 'prod(k>=1, (1+q^k)^k)',
            asym_builder=a026007,
            derive_builder=_derive_a026007,
            oeis_refs=('A026007',),
            source='distinct parts, k different parts of size k',
        ),
        FamilyEntry(
            id='a156616', params=(),
            spec_builder=lambda: 'prod(k>=1, (1+q^k)^k/(1-q^k)^k)',
            asym_builder=a156616,
            derive_builder=_derive_a156616,
            oeis_refs=('A156616',),
            source='convolution of plane partitions and A026007',
        ),
        FamilyEntry(
            id='powerkminus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/(1-q^k)^({_affine(m, 0)}))',
            asym_builder=powerkminus,
            derive_builder=lambda m: asym.power(wright_plane(), m),
            constraints=_positive('m'),
            oeis_refs=('A000219', 'A161870', 'A255610', 'A255611', 'A255612', 'A255613', 'A255614', 'A193427'),
            source='m-th power of the plane-partition product',
            grid=((1,), (2,), (3,)),
            notes=_WRIGHT_NOTE,
        ),
        FamilyEntry(
            id='powerkplus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^({_affine(m, 0)}))',
            asym_builder=powerkplus,
            derive_builder=lambda m: asym.power(a026007(), m),
            constraints=_positive('m'),
            oeis_refs=('A026007', 'A026011', 'A027346', 'A027906'),
            source='m-th power of A026007',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='powerkratio', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^({_affine(m, 0)})/(1-q^k)^({_affine(m, 0)}))',
            asym_builder=powerkratio,
            derive_builder=lambda m: asym.power(a156616(), m),
            constraints=_positive('m'),
            oeis_refs=('A156616', 'A261386', 'A261389'),
            source='m-th power of A156616',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='a255528', params=(),
            spec_builder=lambda: 'prod(k>=1, 1/(1+q^k)^k)',
            asym_builder=a255528,
            derive_builder=_derive_a255528,
            oeis_refs=('A255528',),
            source='q → −q reflection of ∏ 1/(1 + q^k)^k, solved with rescaled A026007 powers',
            alternating=True,
        ),
        FamilyEntry(
            id='powerkexpminus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/(1-q^k)^{_k_power(m).render()})',
            asym_builder=powerkexpminus,
            derive_builder=lambda m: _single_pole(_k_power(m), meinardus.MINUS),
            constraints=_positive('m'),
            oeis_refs=('A000219', 'A023871', 'A023872', 'A023873', 'A023874', 'A023875', 'A023876', 'A023877',
                       'A023878', 'A144048'),
            source='Meinardus, one simple pole at m + 1: b(k) = k^m',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='powerkexpplus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^{_k_power(m).render()})',
            asym_builder=powerkexpplus,
            derive_builder=lambda m: _single_pole(_k_power(m), meinardus.PLUS),
            constraints=_positive('m'),
            oeis_refs=('A026007', 'A027998', 'A248882', 'A248883', 'A248884'),
            source='Meinardus for (1 + q^k)^{k^m}, one simple pole',
            grid=((1,), (2,), (3,)),
        ),
        FamilyEntry(
            id='powerkexpratio', params=('m',),
            spec_builder=lambda m: (
                'prod(k>=1, (1+q^k)/(1-q^k))' if m == 0
                else f'prod(k>=1, (1+q^k)^{_k_power(m).render()}/(1-q^k)^{_k_power(m).render()})'
            ),
            asym_builder=powerkexpratio,
            derive_builder=_derive_powerkexpratio,
            constraints=(_at_least('m', 0),),
            oeis_refs=('A015128', 'A156616', 'A206622', 'A206623', 'A206624'),
            source='convolution of the two single-pole forms',
            grid=((0,), (1,), (2,)),
        ),
        FamilyEntry(
            id='powerkexpratio_even', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^{_k_power(m).render()}/(1-q^k)^{_k_power(m).render()})',
            asym_builder=powerkexpratio_even,
            derive_builder=_derive_powerkexpratio,
            constraints=(_at_least('m', 2), Constraint('m even', lambda p: p["m"] % 2 == 0)),
            oeis_refs=('A206622', 'A206624'),
            source='even m: ζ(−m) = 0 and ζ′(−m) through ζ(m + 1)',
            grid=((2,), (4,), (6,)),
        ),
        FamilyEntry(
            id='twopole_minus', params=('m', 'c'),
            spec_builder=lambda m, c: f'prod(k>=1, 1/(1-q^k)^({_affine(m, c)}))',
            asym_builder=twopole_minus,
            derive_builder=lambda m, c: meinardus.meinardus_form(_affine_exponent(m, c), meinardus.MINUS),
            constraints=(Constraint('m > 0', lambda p: p["m"] > 0), Constraint('m + c >= 0', lambda p: p["m"] + p["c"] >= 0)),
            oeis_refs=('A261452',),
            source='Meinardus with poles at 1 and 2: b(k) = mk + c',
            grid=((1, -1), (1, 0), (1, 1)),
        ),
        FamilyEntry(
            id='twopole_plus', params=('m', 'c'),
            spec_builder=lambda m, c: f'prod(k>=1, (1+q^k)^({_affine(m, c)}))',
            asym_builder=twopole_plus,
            derive_builder=lambda m, c: meinardus.meinardus_form(_affine_exponent(m, c), meinardus.PLUS),
            constraints=(Constraint('m > 0', lambda p: p["m"] > 0), Constraint('m + c >= 0', lambda p: p["m"] + p["c"] >= 0)),
            source='Meinardus for (1 + q^k)^{mk+c}, poles at 1 and 2',
            grid=((1, -1), (1, 0), (1, 1)),
        ),
        FamilyEntry(
            id='twopole_ratio', params=('m', 'c'),
            spec_builder=lambda m, c: f'prod(k>=1, (1+q^k)^({_affine(m, c)})/(1-q^k)^({_affine(m, c)}))',
            asym_builder=twopole_ratio,
            derive_builder=_derive_twopole_ratio,
            constraints=(Constraint('m > 0', lambda p: p["m"] > 0), Constraint('m + c >= 0', lambda p: p["m"] + p["c"] >= 0)),
            source='mixed-exponent convolution of the two-pole minus and plus forms',
            grid=((1, -1), (1, 0), (1, 1)),
        ),
        FamilyEntry(
            id='saddle_minus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, 1/(1-q^k)^{m}^k)',
            asym_builder=saddle_minus,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A034899', 'A144067', 'A144068', 'A144069', 'A144074'),
            source='saddle point, b(k) = m^k',
            grid=((2,), (3,), (4,)),
        ),
        FamilyEntry(
            id='saddle_plus', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^{m}^k)',
            asym_builder=saddle_plus,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A102866', 'A256142'),
            source='saddle point for (1 + q^k)^{m^k}',
            grid=((2,), (3,), (4,)),
        ),
        FamilyEntry(
            id='saddle_ratio', params=('m',),
            spec_builder=lambda m: f'prod(k>=1, (1+q^k)^{m}^k/(1-q^k)^{m}^k)',
            asym_builder=saddle_ratio,
            constraints=(Constraint('m > 1', lambda p: p["m"] > 1),),
            oeis_refs=('A261519', 'A261520'),
            source='saddle point for ((1 + q^k)/(1 − q^k))^{m^k}',
            grid=((2,), (3,), (4,)),
        ),
    ]


REGISTRY: Dict[str, FamilyEntry] = {entry.id: entry for entry in _registry()}


def list_families(pattern: Optional[str] = None) -> List[FamilyEntry]:
    """Registry entries in definition order, optionally filtered by an id glob."""
    entries = list(REGISTRY.values())
    if pattern:
        entries = [entry for entry in entries if fnmatch.fnmatchcase(entry.id, pattern)]
    return entries


def get_family(family_id: str) -> FamilyEntry:
    try:
        return REGISTRY[family_id]
    except KeyError:
        raise UnknownFamily(f"unknown family {family_id!r}") from None


def instantiate(family_id: str, params: Optional[Mapping] = None) -> Tuple[ProductSpec, AsymptoticForm]:
    entry = get_family(family_id)
    values = entry.check(params)
    logger.debug(f"Instantiating {family_id} with {values}")
    return entry.spec(**values), entry.form(**values)


def derive(family_id: str, params: Optional[Mapping] = None) -> AsymptoticForm:
    entry = get_family(family_id)
    values = entry.check(params)
    if not entry.composable:
        raise ParamError(f"{family_id} has no composition path; only its closed form is available")
    logger.debug(f"Deriving {family_id} with {values}")
    return entry.derive_builder(**values)


def parse_params(text: Optional[str]) -> Dict[str, str]:
    """'s=1,t=2' -> {'s': '1', 't': '2'}; values are coerced by FamilyEntry.check."""
    params = {}
    if not text:
        return params
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        name, sep, value = item.partition('=')
        if not sep or not name.strip():
            raise ParamError(f"expected name=value, got {item!r}")
        params[name.strip()] = value.strip()
    return params
