"""
Exact coefficient expansion of q-products.

Every product is rewritten as ∏_d (1 − q^d)^{−b(d)} (plus factors through
1 + q^d = (1 − q^{2d})/(1 − q^d)) and expanded with the Euler transform

    n·a_n = Σ_{i=1..n} c_i·a_{n−i},   c_i = Σ_{d|i} d·b(d).
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import islice
from math import comb
from operator import mul
from typing import Dict, Iterator, List, Sequence, Tuple

from .conf import qasym_setting
from .exceptions import ExactnessViolation, OverflowGuard, UsageError, ZeroCoefficient
from .qspec import ExponentKind, Location, ProductSpec, Sign

logger = logging.getLogger(__name__)

_LN2 = math.log(2)


@dataclass(frozen=True)
class SeriesPoly:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, 'coeffs', tuple(self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def cauchy(self, other: 'SeriesPoly') -> 'SeriesPoly':
        """Product of two truncated series, kept to the shorter order."""
        order = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return SeriesPoly(tuple(
            sum(map(mul, a[:n + 1], reversed(b[:n + 1])))
            for n in range(order + 1)
        ))

    def alternated(self) -> 'SeriesPoly':
        """Coefficients of F(−q)."""
        return SeriesPoly(tuple(c if n % 2 == 0 else -c for n, c in enumerate(self.coeffs)))


@dataclass(frozen=True)
class EulerWeights:
    order: int
    b: Dict[int, int] = field(default_factory=dict)

    def __getitem__(self, d: int) -> int:
        return self.b.get(d, 0)

    def divisor_sums(self) -> List[int]:
        c = [0] * (self.order + 1)
        for d, weight in self.b.items():
            if weight and d <= self.order:
                step = d * weight
                for multiple in range(d, self.order + 1, d):
                    c[multiple] += step
        return c


def check_order(N: int) -> None:
    if N < 0:
        raise UsageError(f"order must be non-negative, got {N}")
    max_order = qasym_setting('QASYM_MAX_ORDER', 100000)
    if N > max_order:
        raise UsageError(f"order {N} exceeds QASYM_MAX_ORDER={max_order}")


def _guarded_exponents(factor, N: int, budget: int) -> Iterator[Tuple[int, int]]:
    geometric = factor.exponent.kind is ExponentKind.GEOMETRIC
    for d, e in factor.exponents(N):
        if geometric and e.bit_length() > budget:
            raise OverflowGuard(
                f"exponent {factor.exponent.render()} reaches {e.bit_length()} bits at q^{d}, "
                f"budget is {budget} bits"
            )
        yield d, e


def to_euler_weights(spec: ProductSpec, N: int) -> EulerWeights:
    if N < 0:
        raise UsageError(f"order must be non-negative, got {N}")
    budget = qasym_setting('QASYM_EXPONENT_BIT_BUDGET', 1_000_000)
    b = defaultdict(int)
    for factor in spec.factors:
        # (1 − q^d) in the denominator and (1 + q^d) in the numerator add weight
        direction = 1 if factor.location is Location.DENOMINATOR else -1
        for d, e in _guarded_exponents(factor, N, budget):
            if factor.sign is Sign.MINUS:
                b[d] += direction * e
            else:
                b[d] -= direction * e
                if 2 * d <= N:
                    b[2 * d] += direction * e
    return EulerWeights(order=N, b={d: w for d, w in b.items() if w})


def negate_weights(weights: EulerWeights) -> EulerWeights:
    """Weights of F(−q): odd d moves to (1 + q^d), even d is unchanged."""
    b = defaultdict(int)
    for d, weight in weights.b.items():
        if d % 2 == 0:
            b[d] += weight
        else:
            b[d] -= weight
            if 2 * d <= weights.order:
                b[2 * d] += weight
    return EulerWeights(order=weights.order, b={d: w for d, w in b.items() if w})


def expand_weights(weights: EulerWeights) -> SeriesPoly:
    N = weights.order
    c = weights.divisor_sums()
    a = [1]
    for n in range(1, N + 1):
        total = sum(map(mul, islice(c, 1, n + 1), reversed(a)))
        value, remainder = divmod(total, n)
        if remainder:
            raise ExactnessViolation(f"n·a_n is not divisible by n at n={n}")
        a.append(value)
    return SeriesPoly(tuple(a))


def expand(spec: ProductSpec, N: int) -> SeriesPoly:
    check_order(N)
    logger.debug(f"Expanding {spec.render()} to order {N}")
    return expand_weights(to_euler_weights(spec, N))


def expand_signed(spec: ProductSpec, N: int) -> SeriesPoly:
    """
    Expand through the reflected product F(−q) and restore the signs with
    (−1)^n. The reflected series of an alternating family has constant sign,
    so this is the path its asymptotics are stated on.
    """
    check_order(N)
    reflected = expand_weights(negate_weights(to_euler_weights(spec, N)))
    return reflected.alternated()


def expand_reflected(spec: ProductSpec, N: int) -> SeriesPoly:
    check_order(N)
    return expand_weights(negate_weights(to_euler_weights(spec, N)))


def _factor_series(sign: Sign, location: Location, e: int, terms: int) -> List[int]:
    # coefficients of (1 ± x)^{±e} up to x^terms
    sigma = 1 if sign is Sign.PLUS else -1
    if location is Location.NUMERATOR:
        return [comb(e, j) * sigma ** j for j in range(terms + 1)]
    return [(-1) ** j * comb(e + j - 1, j) * sigma ** j for j in range(terms + 1)]


def expand_naive(spec: ProductSpec, N: int) -> SeriesPoly:
    """Truncated factor-by-factor multiplication; the oracle for expand."""
    check_order(N)
    a = [1] + [0] * N
    for factor in spec.factors:
        for d, e in factor.exponents(N):
            series = _factor_series(factor.sign, factor.location, e, N // d)
            product = [0] * (N + 1)
            for i, coefficient in enumerate(a):
                if not coefficient:
                    continue
                for j, weight in enumerate(series):
                    index = i + j * d
                    if index > N:
                        break
                    product[index] += coefficient * weight
            a = product
    return SeriesPoly(tuple(a))


def log_abs_coeff(p: SeriesPoly, n: int) -> float:
    """ln|a_n| from the bit length and the leading 64 bits."""
    value = abs(p.coeffs[n])
    if value == 0:
        raise ZeroCoefficient(f"a_{n} is zero")
    bits = value.bit_length()
    if bits <= 64:
        return math.log(value)
    shift = bits - 64
    return math.log(value >> shift) + shift * _LN2


def sign_of(p: SeriesPoly, n: int) -> int:
    value = p.coeffs[n]
    return (value > 0) - (value < 0)


def from_sequence(values: Sequence[int]) -> SeriesPoly:
    return SeriesPoly(tuple(int(v) for v in values))
