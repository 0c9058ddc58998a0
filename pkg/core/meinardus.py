"""
Meinardus-type asymptotics for ∏(1 − q^k)^{−b(k)} and ∏(1 + q^k)^{b(k)}.

The exponent sequence b(k) enters through its Dirichlet series
d(s) = Σ b(k) k^{−s}: pole locations and residues, d(0) and d′(0).
Near τ = 0 the log of the product behaves like

    minus:  Σ_i K_i τ^{−i} − d(0) log τ + d′(0)
    plus:   Σ_i K_i τ^{−i} + d(0) log 2

with K_i = Res_i Γ(i) ζ(i+1), times (1 − 2^{−i}) for the plus type.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import special
from .asymptotics import AsymptoticForm, exact
from .exceptions import MultiplePoles, SingularSystem, UnsupportedExponent, UnsupportedPoleSet
from .qspec import ExponentFn, ExponentKind

logger = logging.getLogger(__name__)

MINUS = 'minus'
PLUS = 'plus'
KINDS = (MINUS, PLUS)

MAX_POLE = 2


@dataclass(frozen=True)
class DirichletData:
    poles: Tuple[Tuple[int, float], ...]
    d0: object
    dd0: float

    def __post_init__(self):
        poles = tuple(sorted((int(rho), float(res)) for rho, res in self.poles if res != 0))
        locations = [rho for rho, _ in poles]
        if any(rho < 1 for rho in locations) or len(set(locations)) != len(locations):
            raise UnsupportedPoleSet(f"pole locations must be distinct positive integers, got {locations}")
        object.__setattr__(self, 'poles', poles)
        object.__setattr__(self, 'd0', exact(self.d0))

    @property
    def locations(self) -> Tuple[int, ...]:
        return tuple(rho for rho, _ in self.poles)

    @property
    def residues(self) -> Dict[int, float]:
        return dict(self.poles)


@dataclass(frozen=True)
class SaddleExpansion:
    ps: Tuple[float, ...]
    h: float
    r: int
    kind: str
    K: Dict[int, float]
    d0: float

    def shifted_weights(self) -> Dict[int, float]:
        """K'_i = i·K_i; K'_0 carries d(0) for the minus type."""
        weights = {i: i * self.K.get(i, 0.0) for i in range(1, self.r + 1)}
        weights[0] = float(self.d0) if self.kind == MINUS else 0.0
        return weights

    def residual(self, z: float) -> float:
        """h·P^{r+1} − Σ K'_i h^{(r−i)/(r+1)} z^{r−i} P^{r−i} at z."""
        P = sum(c * z ** t for t, c in enumerate(self.ps))
        lhs = self.h * P ** (self.r + 1)
        rhs = sum(
            weight * self.h ** ((self.r - i) / (self.r + 1)) * z ** (self.r - i) * P ** (self.r - i)
            for i, weight in self.shifted_weights().items()
        )
        return lhs - rhs


def dirichlet_from_exponent(e: ExponentFn) -> DirichletData:
    if e.kind is ExponentKind.GEOMETRIC:
        raise UnsupportedExponent(f"{e.render()} has no Dirichlet-series pole structure")
    if e.kind is ExponentKind.POWER:
        return DirichletData(
            poles=((e.m + 1, 1.0),),
            d0=special.zeta_neg(e.m),
            dd0=special.zeta_deriv_neg(e.m),
        )
    if e.kind is ExponentKind.CONSTANT:
        slope, intercept = 0, e.m
    else:
        slope, intercept = e.m, e.c
    return DirichletData(
        poles=((2, slope), (1, intercept)),
        d0=slope * special.zeta_neg(1) + intercept * special.zeta_neg(0),
        dd0=slope * special.zeta_deriv_neg(1) + intercept * special.zeta_deriv_neg(0),
    )


def log_generating_terms(dd: DirichletData, kind: str = MINUS) -> Dict[int, float]:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    terms = {}
    for rho, residue in dd.poles:
        K = residue * special.gamma(rho) * special.zeta(rho + 1)
        if kind == PLUS:
            K *= 1 - 2.0 ** (-rho)
        terms[rho] = K
    return terms


def _only_pole(dd: DirichletData) -> Tuple[int, float]:
    if len(dd.poles) != 1:
        raise MultiplePoles(f"expected one pole, got poles at {list(dd.locations)}")
    return dd.poles[0]


def single_pole_minus(dd: DirichletData) -> AsymptoticForm:
    rho, residue = _only_pole(dd)
    H = residue * special.gamma(rho + 1) * special.zeta(rho + 1)
    d0 = float(dd.d0)
    v = math.exp(dd.dd0) * H ** ((1 - 2 * d0) / (2 * (rho + 1))) / math.sqrt(2 * math.pi * (rho + 1))
    return AsymptoticForm.single(
        v=v,
        r=(1 + 1 / rho) * H ** (1 / (rho + 1)),
        b=(rho + 2 - 2 * dd.d0) / (2 * rho + 2),
        p=Fraction(rho, rho + 1),
    )


def single_pole_plus(dd: DirichletData) -> AsymptoticForm:
    rho, residue = _only_pole(dd)
    H = (1 - 2.0 ** (-rho)) * residue * special.gamma(rho + 1) * special.zeta(rho + 1)
    v = 2.0 ** float(dd.d0) * H ** (1 / (2 * (rho + 1))) / math.sqrt(2 * math.pi * (rho + 1))
    return AsymptoticForm.single(
        v=v,
        r=(1 + 1 / rho) * H ** (1 / (rho + 1)),
        b=Fraction(rho + 2, 2 * rho + 2),
        p=Fraction(rho, rho + 1),
    )


def _truncate(series, degree: int) -> np.ndarray:
    out = np.zeros(degree + 1)
    series = np.asarray(series, dtype=float)[:degree + 1]
    out[:len(series)] = series
    return out


def _power(series, k: int, degree: int) -> np.ndarray:
    result = _truncate([1.0], degree)
    for _ in range(k):
        result = _truncate(npoly.polymul(result, series), degree)
    return result


def _inverse(series, degree: int) -> np.ndarray:
    inv = np.zeros(degree + 1)
    inv[0] = 1.0 / series[0]
    for t in range(1, degree + 1):
        inv[t] = -sum(series[j] * inv[t - j] for j in range(1, t + 1)) / series[0]
    return inv


def solve_saddle_expansion(dd: DirichletData, r: int = 2, kind: str = MINUS) -> SaddleExpansion:
    """
    Expand the saddle point τ of n·τ^{r+1} = Σ_i K'_i τ^{r−i} as
    τ = h^{1/(r+1)}·z·P(z), z = n^{−1/(r+1)}, P(0) = 1, solving one linear
    equation per coefficient of P up to z^{r+1}.
    """
    if r > MAX_POLE or not set(dd.locations) <= set(range(1, r + 1)) or r not in dd.locations:
        raise UnsupportedPoleSet(f"equidistant simple poles 1..{r} (r <= {MAX_POLE}) expected, got {list(dd.locations)}")
    K = log_generating_terms(dd, kind)
    h = r * K.get(r, 0.0)
    if h == 0 or not math.isfinite(h):
        raise SingularSystem(f"leading coefficient h={h} makes the saddle equation degenerate")
    if h < 0:
        raise SingularSystem(f"leading coefficient h={h} is negative; no real saddle point")

    expansion = SaddleExpansion(ps=(), h=h, r=r, kind=kind, K=K, d0=float(dd.d0))
    weights = expansion.shifted_weights()
    degree = r + 1
    ps = _truncate([1.0], degree)
    for t in range(1, degree + 1):
        ps[t] = 0.0
        equation = h * _power(ps, r + 1, degree)
        for i, weight in weights.items():
            if not weight:
                continue
            shift = r - i
            term = weight * h ** (shift / (r + 1)) * _power(ps, shift, degree)
            equation[shift:] -= term[:degree + 1 - shift]
        ps[t] = -equation[t] / (h * (r + 1))
    logger.debug(f"Saddle expansion ({kind}, r={r}): ps={list(ps)}")
    return SaddleExpansion(ps=tuple(float(c) for c in ps), h=h, r=r, kind=kind, K=K, d0=float(dd.d0))


def exponent_coefficients(expansion: SaddleExpansion) -> Dict[int, float]:
    """Coefficients of w^k, w = n^{1/(r+1)}, k = 0..r, in n·τ + Σ K_j τ^{−j}."""
    r, h = expansion.r, expansion.h
    ps = np.asarray(expansion.ps)
    inverse = _inverse(ps, r)
    coefficients = {}
    for k in range(r + 1):
        value = h ** (1 / (r + 1)) * ps[r - k]
        for j, K in expansion.K.items():
            if j >= k:
                value += K * h ** (-j / (r + 1)) * _power(inverse, j, r)[j - k]
        coefficients[k] = float(value)
    return coefficients


def assemble(dd: DirichletData, expansion: SaddleExpansion) -> AsymptoticForm:
    r, h = expansion.r, expansion.h
    coefficients = exponent_coefficients(expansion)
    d0 = float(dd.d0)
    log_v = coefficients[0] + (r + 2) / (2 * (r + 1)) * math.log(h) - 0.5 * math.log(2 * math.pi * (r + 1) * h)
    if expansion.kind == MINUS:
        log_v += dd.dd0 - d0 / (r + 1) * math.log(h)
        b = (r + 2 - 2 * dd.d0) / (2 * (r + 1))
    else:
        log_v += d0 * math.log(2)
        b = Fraction(r + 2, 2 * (r + 1))
    return AsymptoticForm(
        v=math.exp(log_v),
        terms={Fraction(k, r + 1): coefficients[k] for k in range(1, r + 1)},
        b=b,
    )


def two_pole(dd: DirichletData, kind: str = MINUS) -> AsymptoticForm:
    if set(dd.locations) != {1, 2}:
        raise UnsupportedPoleSet(f"two_pole needs poles at exactly 1 and 2, got {list(dd.locations)}")
    return assemble(dd, solve_saddle_expansion(dd, 2, kind))


def meinardus_form(e: ExponentFn, kind: str = MINUS) -> AsymptoticForm:
    """Dispatch on the pole structure of b(k) = e(k); zero residues are already dropped."""
    dd = dirichlet_from_exponent(e)
    if len(dd.poles) == 1:
        return single_pole_minus(dd) if kind == MINUS else single_pole_plus(dd)
    return two_pole(dd, kind)
