"""
Product DSL: parse ``prod(k>=K0, ...)`` expressions into a ProductSpec.

Grammar (whitespace-insensitive, ``q`` is the formal variable)::

    product  := "prod(" "k>=" ("0"|"1") "," ratio ")"
    ratio    := term | term "/" denom | "1" "/" denom
    denom    := term | "(" term ")"
    term     := factor { "*" factor }
    factor   := "(" ("1+"|"1-") "q^" exp ")" [ "^" epow ]
    exp      := "k" | integer | "(" linear ")"
    epow     := integer | "k" | "k^" integer | integer "^k" | "(" linear ")"
    linear   := [integer ["*"]] "k" [("+"|"-") integer]

A factor's progression is stored as (step s, first exponent t) over an index
j >= 0; the exponent function is evaluated at k = j + K0.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce
from math import gcd
from typing import Iterator, List, Tuple

import pyparsing as pp

from .exceptions import QSpecSyntaxError, QSpecValidationError

logger = logging.getLogger(__name__)


class Sign(str, Enum):
    PLUS = 'plus'
    MINUS = 'minus'


class Location(str, Enum):
    NUMERATOR = 'numerator'
    DENOMINATOR = 'denominator'


class ExponentKind(str, Enum):
    CONSTANT = 'constant'
    AFFINE = 'affine'
    POWER = 'power'
    GEOMETRIC = 'geometric'


@dataclass(frozen=True)
class ExponentFn:
    kind: ExponentKind
    m: int
    c: int = 0

    def __call__(self, k: int) -> int:
        if self.kind is ExponentKind.CONSTANT:
            return self.m
        if self.kind is ExponentKind.AFFINE:
            return self.m * k + self.c
        if self.kind is ExponentKind.POWER:
            return k ** self.m
        return self.m ** k

    @property
    def is_polynomial(self) -> bool:
        return self.kind is not ExponentKind.GEOMETRIC

    @property
    def depends_on_k(self) -> bool:
        return self.kind is not ExponentKind.CONSTANT

    def render(self) -> str:
        if self.kind is ExponentKind.CONSTANT:
            return str(self.m)
        if self.kind is ExponentKind.POWER:
            return 'k' if self.m == 1 else f'k^{self.m}'
        if self.kind is ExponentKind.GEOMETRIC:
            return f'{self.m}^k'
        return f'({_render_linear(self.m, self.c)})'


UNIT_EXPONENT = ExponentFn(ExponentKind.CONSTANT, 1)


@dataclass(frozen=True)
class FactorTerm:
    sign: Sign
    step: int
    offset: int
    exponent: ExponentFn = UNIT_EXPONENT
    location: Location = Location.NUMERATOR
    start: int = 1

    def exponents(self, limit: int) -> Iterator[Tuple[int, int]]:
        """Yield (d, e) for every generated q-exponent d <= limit with e != 0."""
        j = 0
        d = self.offset
        while d <= limit:
            e = self.exponent(self.start + j)
            if e:
                yield d, e
            j += 1
            d += self.step

    @property
    def progression(self) -> Tuple[int, int]:
        return self.step, self.offset

    def render(self) -> str:
        op = '+' if self.sign is Sign.PLUS else '-'
        raw_offset = self.offset - self.step * self.start
        linear = _render_linear(self.step, raw_offset)
        q_exp = 'k' if linear == 'k' else f'({linear})'
        text = f'(1{op}q^{q_exp})'
        if self.exponent != UNIT_EXPONENT:
            text += f'^{self.exponent.render()}'
        return text


@dataclass(frozen=True)
class ProductSpec:
    factors: Tuple[FactorTerm, ...]
    start: int = 1
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not self.factors:
            raise QSpecValidationError('a product needs at least one factor')

    @property
    def numerator(self) -> List[FactorTerm]:
        return [f for f in self.factors if f.location is Location.NUMERATOR]

    @property
    def denominator(self) -> List[FactorTerm]:
        return [f for f in self.factors if f.location is Location.DENOMINATOR]

    @property
    def progressions(self) -> List[Tuple[int, int]]:
        return [f.progression for f in self.factors]

    def render(self) -> str:
        return render(self)

    def __str__(self):
        return self.render()


def _render_linear(step: int, offset: int) -> str:
    text = 'k' if step == 1 else f'{step}k'
    if offset > 0:
        text += f'+{offset}'
    elif offset < 0:
        text += f'-{-offset}'
    return text


def render(spec: ProductSpec) -> str:
    """Canonical text of a ProductSpec; parse(render(spec)) == spec."""
    num = '*'.join(f.render() for f in spec.numerator)
    den_factors = spec.denominator
    den = '*'.join(f.render() for f in den_factors)
    if len(den_factors) > 1:
        den = f'({den})'
    if not num:
        body = f'1/{den}'
    elif den:
        body = f'{num}/{den}'
    else:
        body = num
    return f'prod(k>={spec.start}, {body})'


# Grammar

@dataclass(frozen=True)
class _Linear:
    step: int
    offset: int


@dataclass(frozen=True)
class _ConstantQ:
    value: int


@dataclass(frozen=True)
class _RawFactor:
    sign: str
    q: object
    exponent: ExponentFn


@dataclass(frozen=True)
class _Ratio:
    numerator: tuple
    denominator: tuple


def _affine_or_power(tokens):
    linear = tokens[0]
    if (linear.step, linear.offset) == (1, 0):
        return ExponentFn(ExponentKind.POWER, 1)
    return ExponentFn(ExponentKind.AFFINE, linear.step, linear.offset)


def _grammar():
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    lpar, rpar = pp.Suppress('('), pp.Suppress(')')
    k = pp.Suppress(pp.Literal('k'))

    coefficient = integer + pp.Opt(pp.Suppress('*'))
    signed_offset = (pp.one_of('+ -') + integer).set_parse_action(
        lambda t: t[1] if t[0] == '+' else -t[1]
    )
    linear = (pp.Opt(coefficient, default=1) + k + pp.Opt(signed_offset, default=0)).set_parse_action(
        lambda t: _Linear(t[0], t[1])
    )

    q_exp = pp.Suppress('q') + pp.Suppress('^') + (
        (lpar + linear + rpar)
        | pp.Literal('k').set_parse_action(lambda: _Linear(1, 0))
        | pp.Word(pp.nums).set_parse_action(lambda t: _ConstantQ(int(t[0])))
    )

    geometric = (integer + pp.Suppress('^') + k).set_parse_action(
        lambda t: ExponentFn(ExponentKind.GEOMETRIC, t[0])
    )
    k_power = (k + pp.Suppress('^') + integer).set_parse_action(
        lambda t: ExponentFn(ExponentKind.POWER, t[0])
    )
    k_alone = pp.Literal('k').set_parse_action(lambda: ExponentFn(ExponentKind.POWER, 1))
    constant = pp.Word(pp.nums).set_parse_action(lambda t: ExponentFn(ExponentKind.CONSTANT, int(t[0])))
    affine = linear.copy().add_parse_action(_affine_or_power)
    epow = (
        (lpar + (geometric | k_power | affine) + rpar)
        | geometric
        | constant
        | k_power
        | k_alone
    )

    factor = (
        lpar + pp.Suppress('1') + pp.one_of('+ -') + q_exp + rpar
        + pp.Opt(pp.Suppress('^') + epow, default=UNIT_EXPONENT)
    ).set_parse_action(lambda t: _RawFactor(t[0], t[1], t[2]))

    term = pp.Group(factor + pp.ZeroOrMore(pp.Suppress('*') + factor))
    denom = (lpar + term + rpar) | term
    unit_ratio = (pp.Suppress('1') + pp.Suppress('/') + denom).set_parse_action(
        lambda t: _Ratio((), tuple(t[0]))
    )
    fraction = (term + pp.Opt(pp.Suppress('/') + denom)).set_parse_action(
        lambda t: _Ratio(tuple(t[0]), tuple(t[1]) if len(t) > 1 else ())
    )
    ratio = unit_ratio | fraction

    return (
        pp.Suppress('prod') + lpar + pp.Suppress('k') + pp.Suppress('>=')
        + pp.one_of('0 1').set_parse_action(lambda t: int(t[0]))
        + pp.Suppress(',') + ratio + rpar
    )


_PRODUCT = _grammar()


def _validate_exponent(fn: ExponentFn, start: int) -> List[str]:
    if fn.kind is ExponentKind.CONSTANT and fn.m < 1:
        return [f'exponent value {fn.m} must be at least 1']
    if fn.kind is ExponentKind.AFFINE:
        if fn.m < 1:
            return [f'affine exponent slope {fn.m} must be at least 1']
        if fn(start) < 0:
            return [f'exponent {fn.render()} is negative at k={start}']
    if fn.kind is ExponentKind.POWER and fn.m < 1:
        return [f'power exponent k^{fn.m} needs m >= 1']
    if fn.kind is ExponentKind.GEOMETRIC and fn.m < 2:
        return [f'geometric exponent {fn.m}^k needs m >= 2']
    return []


def _build(start: int, numerator, denominator) -> ProductSpec:
    errors = []
    factors = []
    for raw_list, location in ((numerator, Location.NUMERATOR), (denominator, Location.DENOMINATOR)):
        for raw in raw_list:
            if isinstance(raw.q, _ConstantQ):
                errors.append(f'q^{raw.q.value} does not depend on k')
                continue
            step, raw_offset = raw.q.step, raw.q.offset
            if step < 1:
                errors.append(f'progression step {step} must be at least 1')
                continue
            first = step * start + raw_offset
            if first < 1:
                errors.append(f'progression {_render_linear(step, raw_offset)} gives exponent t={first} at k={start}')
                continue
            errors.extend(_validate_exponent(raw.exponent, start))
            factors.append(FactorTerm(
                sign=Sign.PLUS if raw.sign == '+' else Sign.MINUS,
                step=step,
                offset=first,
                exponent=raw.exponent,
                location=location,
                start=start,
            ))
    if errors:
        raise QSpecValidationError(errors)

    # k>=0 with every t > s and k-free exponents is rewritten as k>=1
    if start == 0 and all(f.offset > f.step and not f.exponent.depends_on_k for f in factors):
        start = 1
        factors = [
            FactorTerm(f.sign, f.step, f.offset, f.exponent, f.location, start=1)
            for f in factors
        ]
    return ProductSpec(tuple(factors), start=start)


def parse(text: str) -> ProductSpec:
    if not isinstance(text, str):
        raise QSpecSyntaxError(f'expected DSL text, got {type(text).__name__}')
    try:
        parsed = _PRODUCT.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        expected = exc.msg[len('Expected '):] if exc.msg.startswith('Expected ') else exc.msg
        raise QSpecSyntaxError('cannot parse product', position=exc.loc, expected=expected) from None
    start, ratio = parsed[0], parsed[1]
    return _build(start, ratio.numerator, ratio.denominator)


def validate_coprimality(spec: ProductSpec) -> List[str]:
    """
    Report the gcd conditions the closed formulas assume. Informational only:
    expansion never depends on them.
    """
    warnings = []
    for step, offset in dict.fromkeys(spec.progressions):
        pair_gcd = gcd(step, offset)
        if pair_gcd != 1:
            warnings.append(f'GCD({step},{offset})={pair_gcd} ≠ 1')

    flat = [value for progression in spec.progressions for value in progression]
    if len(spec.factors) > 1:
        full = reduce(gcd, flat)
        tuple_text = ','.join(str(value) for value in flat)
        if full != 1:
            warnings.append(f'GCD({tuple_text})={full} ≠ 1')
        elif warnings:
            warnings.append(f'GCD({tuple_text})=1 holds? yes')

    for message in warnings:
        logger.warning(f"Coprimality check on {spec.render()}: {message}")
    return warnings
