import math
import os
import time
import unittest

from django.test import SimpleTestCase, override_settings

from core import catalog
from core.exceptions import OverflowGuard, UsageError, ZeroCoefficient
from core.qspec import parse
from core.series import (
    expand,
    expand_naive,
    expand_reflected,
    expand_signed,
    from_sequence,
    log_abs_coeff,
    sign_of,
    to_euler_weights,
)

PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
RUN_SLOW = os.environ.get('QASYM_RUN_SLOW') == '1'


class ExpandTest(SimpleTestCase):
    def test_partitions(self):
        self.assertEqual(list(expand(parse('prod(k>=1, 1/(1-q^k))'), 10)), PARTITIONS)

    def test_distinct_parts(self):
        self.assertEqual(list(expand(parse('prod(k>=1, (1+q^k))'), 10)), [1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10])

    def test_overpartitions(self):
        series = expand(parse('prod(k>=1, (1+q^k)/(1-q^k))'), 10)
        self.assertEqual(list(series), [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232])

    def test_pentagonal_numbers(self):
        series = expand(parse('prod(k>=1, (1-q^k))'), 15)
        self.assertEqual(list(series), [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1])

    def test_plane_partitions(self):
        series = expand(parse('prod(k>=1, 1/(1-q^k)^k)'), 10)
        self.assertEqual(list(series), [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500])

    def test_euler_identity(self):
        distinct = expand(parse('prod(k>=1, (1+q^k))'), 2000)
        odd = expand(parse('prod(k>=1, 1/(1-q^(2k-1)))'), 2000)
        self.assertEqual(distinct, odd)

    def test_order_zero(self):
        self.assertEqual(list(expand(parse('prod(k>=1, 1/(1-q^k))'), 0)), [1])

    def test_inverse_products_multiply_to_one(self):
        partitions = expand(parse('prod(k>=1, 1/(1-q^k))'), 30)
        euler = expand(parse('prod(k>=1, (1-q^k))'), 30)
        self.assertEqual(list(partitions.cauchy(euler)), [1] + [0] * 30)

    def test_weights_of_plus_factor(self):
        weights = to_euler_weights(parse('prod(k>=1, (1+q^(2k-1)))'), 6)
        # (1 + q^d) = (1 − q^{2d})/(1 − q^d)
        self.assertEqual(weights.b, {1: 1, 2: -1, 3: 1, 6: -1, 5: 1})


class NaiveOracleTest(SimpleTestCase):
    def test_catalog_products_match_naive_multiplication(self):
        for entry in catalog.list_families():
            if entry.id.startswith('saddle'):
                continue
            params = entry.grid_params[0]
            spec = entry.spec(**params)
            with self.subTest(family=entry.id, params=params):
                self.assertEqual(expand(spec, 30), expand_naive(spec, 30))

    def test_geometric_exponents(self):
        spec = parse('prod(k>=1, (1+q^k)^2^k/(1-q^k)^2^k)')
        self.assertEqual(expand(spec, 30), expand_naive(spec, 30))


class ReflectionTest(SimpleTestCase):
    def test_signed_expansion_is_the_plain_expansion(self):
        spec = parse('prod(k>=1, 1/(1+q^k)^2)')
        self.assertEqual(expand_signed(spec, 50), expand(spec, 50))

    def test_reflected_coefficients(self):
        spec = parse('prod(k>=1, (1+q^(2k))/(1+q^k))')
        plain = expand(spec, 40)
        reflected = expand_reflected(spec, 40)
        for n in range(41):
            self.assertEqual(reflected[n], (-1) ** n * plain[n])

    def test_alternating_families_alternate(self):
        # the reflected products of these have positive coefficients from n = 3 on
        for family_id in ('powerplusdenom', 'convplusnumer', 'odd_over_even', 'odd_over_even_m0'):
            entry = catalog.get_family(family_id)
            series = expand(entry.spec(**entry.grid_params[0]), 60)
            with self.subTest(family=family_id):
                for n in range(5, 61):
                    self.assertEqual(sign_of(series, n), (-1) ** n, f'a_{n} = {series[n]}')

    def test_a255528_alternates_once_the_main_term_dominates(self):
        series = expand(catalog.get_family('a255528').spec(), 340)
        self.assertEqual(series[5], 0)
        for n in range(300, 341):
            self.assertEqual(sign_of(series, n), (-1) ** n)


class GuardTest(SimpleTestCase):
    def test_negative_order(self):
        with self.assertRaises(UsageError):
            expand(parse('prod(k>=1, 1/(1-q^k))'), -1)

    @override_settings(QASYM_MAX_ORDER=10)
    def test_order_cap(self):
        with self.assertRaises(UsageError):
            expand(parse('prod(k>=1, 1/(1-q^k))'), 11)

    @override_settings(QASYM_EXPONENT_BIT_BUDGET=8)
    def test_geometric_exponent_budget(self):
        with self.assertRaises(OverflowGuard):
            expand(parse('prod(k>=1, 1/(1-q^k)^2^k)'), 20)


class LogCoefficientTest(SimpleTestCase):
    def test_small_coefficient(self):
        series = from_sequence(PARTITIONS)
        self.assertAlmostEqual(log_abs_coeff(series, 10), math.log(42), places=14)

    def test_large_coefficient(self):
        series = expand(parse('prod(k>=1, 1/(1-q^k))'), 3000)
        self.assertAlmostEqual(log_abs_coeff(series, 3000), math.log(series[3000]), places=9)

    def test_negative_coefficient(self):
        series = from_sequence([1, -1, -1, 0])
        self.assertEqual(log_abs_coeff(series, 1), 0.0)
        self.assertEqual(sign_of(series, 1), -1)

    def test_zero_coefficient(self):
        series = expand(parse('prod(k>=1, (1-q^k))'), 5)
        with self.assertRaises(ZeroCoefficient):
            log_abs_coeff(series, 3)


@unittest.skipUnless(RUN_SLOW, 'set QASYM_RUN_SLOW=1 for the timing checks')
class PerformanceTest(SimpleTestCase):
    def test_partitions_to_ten_thousand(self):
        started = time.perf_counter()
        series = expand(parse('prod(k>=1, 1/(1-q^k))'), 10000)
        self.assertLess(time.perf_counter() - started, 10)
        self.assertGreater(series[10000], 0)
