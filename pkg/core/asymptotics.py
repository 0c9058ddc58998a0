"""
Algebra of subexponential asymptotic forms

    a_n ~ (±1)^n · v · base^n · exp(Σ s_i n^{p_i}) / n^b

convolve, power and deconvolve handle single-term forms with a common
exponent p; convolve_mixed handles the {1/3, 2/3} pair.
"""
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Mapping, NamedTuple, Optional, Tuple, Union

from .exceptions import (
    AlternatingInput,
    DomainError,
    MixedExponentMismatch,
    OrderViolation,
    WrongExponentSet,
)

Real = Union[Fraction, float]

ONE_THIRD = Fraction(1, 3)
ONE_HALF = Fraction(1, 2)
TWO_THIRDS = Fraction(2, 3)
MIXED_EXPONENTS = frozenset({ONE_THIRD, TWO_THIRDS})

_SQRT_PI = math.sqrt(math.pi)
_SQRT_2PI = math.sqrt(2 * math.pi)


def exact(x) -> Real:
    """Keep ints and Fractions exact, everything else becomes float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    return float(x)


def format_real(x: Real) -> Union[str, float]:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else f'{x.numerator}/1'
    return float(x)


def parse_real(value) -> Real:
    if isinstance(value, str):
        return Fraction(value.strip())
    return exact(value)


class LogValue(NamedTuple):
    log: float
    sign: int


@dataclass(frozen=True)
class AsymptoticForm:
    v: float
    terms: Tuple[Tuple[Fraction, float], ...]
    b: Real
    alternating: bool = False
    base: float = 1.0

    def __post_init__(self):
        terms = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        normalized = tuple(sorted(
            (Fraction(p), float(s)) for p, s in terms if float(s) != 0.0
        ))
        object.__setattr__(self, 'terms', normalized)
        object.__setattr__(self, 'b', exact(self.b))
        object.__setattr__(self, 'v', float(self.v))
        object.__setattr__(self, 'base', float(self.base))

        if not self.v > 0 or math.isinf(self.v):
            raise DomainError(f"amplitude must be positive and finite, got {self.v}")
        if not self.base >= 1:
            raise DomainError(f"geometric base must be >= 1, got {self.base}")
        exponents = [p for p, _ in normalized]
        if len(set(exponents)) != len(exponents):
            raise DomainError(f"duplicate exponents in {exponents}")
        for p in exponents:
            if not 0 < p < 1:
                raise DomainError(f"exponent {p} is outside (0, 1)")
        if len(normalized) == 1 and normalized[0][1] <= 0:
            raise DomainError(f"single-term coefficient must be positive, got {normalized[0][1]}")
        if len(normalized) > 1:
            if set(exponents) != MIXED_EXPONENTS:
                raise WrongExponentSet(f"multi-term forms must use exponents 1/3 and 2/3, got {exponents}")
            if self.coefficient(TWO_THIRDS) <= 0:
                raise DomainError("the n^(2/3) coefficient must be positive")

    @classmethod
    def single(cls, v, r, b, p=ONE_HALF, alternating=False, base=1.0) -> 'AsymptoticForm':
        return cls(v=v, terms=((Fraction(p), r),), b=b, alternating=alternating, base=base)

    @classmethod
    def mixed(cls, v, s, r, b, alternating=False) -> 'AsymptoticForm':
        return cls(v=v, terms=((ONE_THIRD, s), (TWO_THIRDS, r)), b=b, alternating=alternating)

    @property
    def terms_map(self) -> Dict[Fraction, float]:
        return dict(self.terms)

    def coefficient(self, p) -> float:
        return self.terms_map.get(Fraction(p), 0.0)

    @property
    def is_single(self) -> bool:
        return len(self.terms) == 1

    @property
    def p(self) -> Fraction:
        if not self.is_single:
            raise WrongExponentSet(f"form has exponents {[p for p, _ in self.terms]}, not a single term")
        return self.terms[0][0]

    @property
    def r(self) -> float:
        return self.coefficient(self.p)

    def isclose(self, other: 'AsymptoticForm', rel_tol=1e-12, abs_tol=0.0) -> bool:
        if self.alternating != other.alternating:
            return False
        if [p for p, _ in self.terms] != [p for p, _ in other.terms]:
            return False
        pairs = [(self.v, other.v), (float(self.b), float(other.b)), (self.base, other.base)]
        pairs += [(s1, s2) for (_, s1), (_, s2) in zip(self.terms, other.terms)]
        return all(math.isclose(x, y, rel_tol=rel_tol, abs_tol=abs_tol) for x, y in pairs)

    def render(self) -> str:
        parts = [f"{self.v:.12g}"]
        if self.alternating:
            parts.insert(0, "(-1)^n")
        if self.base != 1:
            parts.append(f"{self.base:g}^n")
        exponent = ' + '.join(f"{s:.12g}*n^({p})" for p, s in self.terms)
        if exponent:
            parts.append(f"exp({exponent})")
        text = ' * '.join(parts)
        if self.b != 0:
            text += f" / n^({format_real(self.b)})"
        return text

    def __str__(self):
        return self.render()


def _require_plain(*forms: AsymptoticForm) -> None:
    for form in forms:
        if form.alternating:
            raise AlternatingInput("alternating forms cannot be combined directly; use the q -> -q reflection")
        if form.base != 1:
            raise DomainError("forms with a geometric base^n are outside the convolution algebra")


def _common_exponent(a1: AsymptoticForm, a2: AsymptoticForm) -> Fraction:
    if not (a1.is_single and a2.is_single):
        raise MixedExponentMismatch("both forms must carry a single exponential term")
    if a1.p != a2.p:
        raise MixedExponentMismatch(f"exponents differ: {a1.p} and {a2.p}")
    return a1.p


def convolve(a1: AsymptoticForm, a2: AsymptoticForm) -> AsymptoticForm:
    _require_plain(a1, a2)
    p = _common_exponent(a1, a2)
    pf = float(p)
    q = 1.0 / (1.0 - pf)
    r1, r2 = a1.r, a2.r
    b1, b2 = float(a1.b), float(a2.b)
    total = r1 ** q + r2 ** q
    v = (
        _SQRT_2PI * a1.v * a2.v * total ** (b1 + b2 - (3.0 - pf) / 2.0)
        / (math.sqrt((1.0 - pf) * pf) * r1 ** ((b1 - 0.5) * q) * r2 ** ((b2 - 0.5) * q))
    )
    return AsymptoticForm.single(
        v=v,
        r=total ** (1.0 - pf),
        b=a1.b + a2.b + p / 2 - 1,
        p=p,
    )


def self_convolve(a: AsymptoticForm) -> AsymptoticForm:
    _require_plain(a)
    p = a.p
    pf = float(p)
    b = float(a.b)
    v = a.v ** 2 * _SQRT_PI * 2.0 ** (2 * b + pf / 2 - 1) / math.sqrt(pf * a.r * (1.0 - pf))
    return AsymptoticForm.single(v=v, r=a.r * 2.0 ** (1.0 - pf), b=2 * a.b + p / 2 - 1, p=p)


def power(a: AsymptoticForm, h) -> AsymptoticForm:
    h = exact(h)
    if h < 1:
        raise DomainError(f"power needs h >= 1, got {h}")
    _require_plain(a)
    p = a.p
    pf, hf, b = float(p), float(h), float(a.b)
    b_h = a.b * h + (p / 2 - 1) * (h - 1)
    n_power = a.b * h - (h - 1) * (2 - p) / 2
    if isinstance(b_h, Fraction) and isinstance(n_power, Fraction):
        assert b_h == n_power, (b_h, n_power)
    v = (
        a.v ** hf
        * hf ** (b * hf + hf * pf / 2 - hf - pf / 2 + 0.5)
        * (2 * math.pi / ((1.0 - pf) * pf * a.r)) ** ((hf - 1) / 2)
    )
    return AsymptoticForm.single(v=v, r=hf ** (1.0 - pf) * a.r, b=b_h, p=p)


def deconvolve(target: AsymptoticForm, known: AsymptoticForm) -> AsymptoticForm:
    """The form a0 with convolve(a0, known) == target."""
    _require_plain(target, known)
    p = _common_exponent(target, known)
    pf = float(p)
    q = 1.0 / (1.0 - pf)
    r1, r2 = known.r, target.r
    if not 0 < r1 < r2:
        raise OrderViolation(f"known exponent coefficient {r1} must be below the target's {r2}")
    b1, b2 = float(known.b), float(target.b)
    gap = r2 ** q - r1 ** q
    v = (
        math.sqrt((1.0 - pf) * pf) * target.v
        * r2 ** ((1 - 2 * b2) * q / 2) * gap ** (b2 - b1 - pf / 2 + 0.5)
        / (_SQRT_2PI * known.v * r1 ** ((1 - 2 * b1) * q / 2))
    )
    return AsymptoticForm.single(
        v=v,
        r=gap ** (1.0 - pf),
        b=target.b - known.b - p / 2 + 1,
        p=p,
    )


def _mixed_parts(a: AsymptoticForm):
    exponents = {p for p, _ in a.terms}
    if TWO_THIRDS not in exponents or not exponents <= MIXED_EXPONENTS:
        raise WrongExponentSet(f"expected exponents {{1/3, 2/3}}, got {sorted(exponents)}")
    return a.coefficient(ONE_THIRD), a.coefficient(TWO_THIRDS)


def convolve_mixed(a1: AsymptoticForm, a2: AsymptoticForm) -> AsymptoticForm:
    _require_plain(a1, a2)
    s1, r1 = _mixed_parts(a1)
    s2, r2 = _mixed_parts(a2)
    b1, b2 = float(a1.b), float(a2.b)
    cubes = r1 ** 3 + r2 ** 3
    v = (
        3 * a1.v * a2.v * _SQRT_PI * cubes ** (b1 + b2 - 7.0 / 6.0)
        / (r1 ** (3 * b1 - 1.5) * r2 ** (3 * b2 - 1.5))
        * math.exp((r2 ** 2 * s1 - r1 ** 2 * s2) ** 2 / (4 * r1 * r2 * cubes))
    )
    return AsymptoticForm.mixed(
        v=v,
        s=(r1 * s1 + r2 * s2) / cubes ** (1.0 / 3.0),
        r=cubes ** (1.0 / 3.0),
        b=a1.b + a2.b - TWO_THIRDS,
    )


def rescale(a: AsymptoticForm, factor) -> AsymptoticForm:
    """Substitute n -> factor·n."""
    lam = float(factor)
    if lam <= 0:
        raise DomainError(f"rescale factor must be positive, got {factor}")
    return replace(
        a,
        v=a.v * lam ** (-float(a.b)),
        terms=tuple((p, s * lam ** float(p)) for p, s in a.terms),
        base=a.base ** lam,
    )


def scale(a: AsymptoticForm, c) -> AsymptoticForm:
    c = float(c)
    if c <= 0:
        raise DomainError(f"scale factor must be positive, got {c}")
    return replace(a, v=a.v * c)


def alternate(a: AsymptoticForm) -> AsymptoticForm:
    return replace(a, alternating=True)


def predicted_sign(a: AsymptoticForm, n: int) -> int:
    return -1 if a.alternating and n % 2 else 1


def evaluate_log(a: AsymptoticForm, n: int) -> LogValue:
    if n < 1:
        raise DomainError(f"forms are evaluated at n >= 1, got {n}")
    log_value = math.log(a.v) + sum(s * n ** float(p) for p, s in a.terms) - float(a.b) * math.log(n)
    if a.base != 1:
        log_value += n * math.log(a.base)
    return LogValue(log_value, predicted_sign(a, n))


def fold(operation, forms, initial: Optional[AsymptoticForm] = None) -> AsymptoticForm:
    """Left fold of a binary form operation."""
    iterator = iter(forms)
    result = initial if initial is not None else next(iterator)
    for form in iterator:
        result = operation(result, form)
    return result
