import math
import os
import tempfile
import unittest
from pathlib import Path

from django.core.cache import cache
from django.test import SimpleTestCase, override_settings

from core import catalog
from core.asymptotics import AsymptoticForm
from core.exceptions import FormatError, GapError, MismatchError, SignMismatch, UsageError, ZeroCoefficient
from core.qspec import parse
from core.serializers import VerificationReportSerializer
from core.services import (
    CONVERGING,
    DIVERGING,
    INCONCLUSIVE,
    BFile,
    Checkpoint,
    ExpansionService,
    OeisService,
    VerificationService,
    _suite_task,
    classify,
    fit_trend,
)

FIXTURES = Path(__file__).resolve().parent / 'fixtures'
RUN_SLOW = os.environ.get('QASYM_RUN_SLOW') == '1'
PARTITIONS = parse('prod(k>=1, 1/(1-q^k))')
HARDY_RAMANUJAN = AsymptoticForm.single(v=1 / (4 * math.sqrt(3)), r=math.pi * math.sqrt(2 / 3), b=1)


@override_settings(QASYM_CACHE_EXPANSIONS=True, QASYM_CACHE_MAX_ORDER=100)
class ExpansionServiceTest(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def test_expansion_is_cached(self):
        series = ExpansionService.expand(PARTITIONS, 20)
        self.assertEqual(cache.get(ExpansionService.cache_key(PARTITIONS, 20)), list(series.coeffs))
        self.assertEqual(ExpansionService.expand(PARTITIONS, 20), series)

    def test_large_orders_bypass_cache(self):
        ExpansionService.expand(PARTITIONS, 150)
        self.assertIsNone(cache.get(ExpansionService.cache_key(PARTITIONS, 150)))


class ClassifyTest(SimpleTestCase):
    def test_verdicts(self):
        self.assertEqual(classify([0.3, 0.2, 0.1]), CONVERGING)
        self.assertEqual(classify([-0.3, 0.2, -0.1]), CONVERGING)
        self.assertEqual(classify([0.1, 0.2, 0.3]), DIVERGING)
        self.assertEqual(classify([0.3, 0.1, 0.2]), INCONCLUSIVE)
        self.assertEqual(classify([0.3, 0.2]), INCONCLUSIVE)

    def test_only_last_three_count(self):
        self.assertEqual(classify([0.01, 0.5, 0.3, 0.2]), CONVERGING)

    def test_trend(self):
        points = [
            Checkpoint(n=n, exact=0.0, predicted=0.0, delta=2 / math.sqrt(n), ratio=1.0, sign=1, predicted_sign=1)
            for n in (100, 400, 1600)
        ]
        self.assertAlmostEqual(fit_trend(points), -0.5, places=10)
        self.assertIsNone(fit_trend(points[:1]))


class VerifyTest(SimpleTestCase):
    def test_partitions_converge(self):
        report = VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN, [100, 200, 400])
        self.assertEqual(report.verdict, CONVERGING)
        self.assertTrue(report.sign_ok)
        self.assertEqual([point.n for point in report.checkpoints], [100, 200, 400])
        self.assertLess(abs(report.deltas[0]), 0.05)
        self.assertLess(report.trend, 0)

    def test_delta_at_one_hundred(self):
        report = VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN, [100])
        point = report.checkpoints[0]
        self.assertAlmostEqual(point.exact, math.log(190569292), places=12)
        self.assertAlmostEqual(point.delta, point.exact - point.predicted, places=15)
        self.assertAlmostEqual(point.ratio, math.exp(point.delta), places=15)

    def test_overpartitions_converge(self):
        spec, form = catalog.instantiate('partratio', {'s': 1, 't': 1})
        report = VerificationService.verify(spec, form, [250, 500, 1000])
        self.assertEqual(report.verdict, CONVERGING)

    def test_alternating_family(self):
        spec, form = catalog.instantiate('powerplusdenom', {'m': 1})
        report = VerificationService.verify(spec, form, [250, 500, 1000])
        self.assertTrue(report.sign_ok)
        self.assertEqual(report.checkpoints[0].sign, -1 if 250 % 2 else 1)

    def test_sign_mismatch(self):
        spec, form = catalog.instantiate('powerplusdenom', {'m': 1})
        plain = AsymptoticForm(v=form.v, terms=form.terms, b=form.b)
        with self.assertRaises(SignMismatch):
            VerificationService.verify(spec, plain, [100, 101])

    def test_constant_sign_family_against_alternating_form(self):
        with self.assertRaises(SignMismatch):
            VerificationService.verify(PARTITIONS, AsymptoticForm.single(v=1, r=1, b=1, alternating=True), [3])

    def test_zero_coefficient(self):
        with self.assertRaises(ZeroCoefficient):
            VerificationService.verify(parse('prod(k>=1, (1-q^k))'), HARDY_RAMANUJAN, [3])

    def test_checkpoint_rules(self):
        for checkpoints in ([0, 10], [10, 5], [10, 10]):
            with self.subTest(checkpoints=checkpoints):
                with self.assertRaises(UsageError):
                    VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN, checkpoints)

    @override_settings(QASYM_DEFAULT_CHECKPOINTS=[50, 100, 150])
    def test_default_checkpoints(self):
        report = VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN)
        self.assertEqual([point.n for point in report.checkpoints], [50, 100, 150])

    def test_report_serializer_round_trip(self):
        report = VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN, [100, 200, 400], identifier='partitions')
        serializer = VerificationReportSerializer(data=VerificationReportSerializer(report).data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        restored = serializer.save()
        self.assertEqual(restored.identifier, 'partitions')
        self.assertEqual(restored.verdict, report.verdict)
        self.assertEqual(restored.checkpoints, report.checkpoints)


class SuiteTest(SimpleTestCase):
    def test_suite_checkpoints(self):
        self.assertEqual(VerificationService.suite_checkpoints(4000), [500, 1000, 2000, 4000])
        self.assertEqual(VerificationService.suite_checkpoints(2), [1, 2])

    def test_filtered_suite(self):
        reports = VerificationService.run_suite('part*', max_n=400, workers=1)
        identifiers = [report.identifier for report in reports]
        self.assertEqual(identifiers, sorted(identifiers))
        self.assertEqual(identifiers[0], 'partminus(s=1,t=1)')
        self.assertEqual(len(reports), 3)
        self.assertEqual(reports[0].verdict, CONVERGING)
        self.assertTrue(all(not report.error for report in reports))

    def test_empty_filter(self):
        self.assertEqual(VerificationService.run_suite('no_such_family*', max_n=100), [])

    def test_failing_task_becomes_diverging_report(self):
        report = _suite_task(('hagis', {'m': 1}, [10]))
        self.assertEqual(report.verdict, DIVERGING)
        self.assertIn('m > 1', report.error)
        self.assertTrue(report.failed)


@unittest.skipUnless(RUN_SLOW, 'set QASYM_RUN_SLOW=1 for the n = 10000 convergence runs')
class SlowConvergenceTest(SimpleTestCase):
    def test_hardy_ramanujan_at_ten_thousand(self):
        report = VerificationService.verify(PARTITIONS, HARDY_RAMANUJAN, [100, 1000, 10000])
        self.assertEqual(report.verdict, CONVERGING)
        self.assertLess(abs(report.deltas[-1]), 0.01)

    def test_overpartitions_at_ten_thousand(self):
        spec, form = catalog.instantiate('partratio', {'s': 1, 't': 1})
        report = VerificationService.verify(spec, form, [1000, 5000, 10000])
        self.assertEqual(report.verdict, CONVERGING)


CONVERGENCE_GROUPS = (
    'part*', 'conv*', 'power*', 'hagis*', 'twopole_*',
    'odd_over_even*', 'mixed_pm', 'inv_plus_minus', 'a*', 'wright_plane',
)


class CatalogConvergenceTest(SimpleTestCase):
    """Every non-saddle family at its first grid point, checkpoints 500, 1000, 2000, 4000."""

    def assertGroupConverges(self, pattern):
        reports = VerificationService.run_suite(pattern, max_n=4000, workers=os.cpu_count() or 1)
        self.assertTrue(reports)
        for report in reports:
            with self.subTest(report=report.identifier):
                self.assertEqual(report.error, '')
                self.assertEqual([point.n for point in report.checkpoints], [500, 1000, 2000, 4000])
                self.assertEqual(report.verdict, CONVERGING)

    def test_groups_cover_every_non_saddle_family(self):
        covered = {entry.id for pattern in CONVERGENCE_GROUPS for entry in catalog.list_families(pattern)}
        expected = {family_id for family_id in catalog.REGISTRY if not family_id.startswith('saddle')}
        self.assertEqual(covered, expected)

    def test_partitions(self):
        self.assertGroupConverges('part*')

    def test_convolutions(self):
        self.assertGroupConverges('conv*')

    def test_powers(self):
        self.assertGroupConverges('power*')

    def test_hagis(self):
        self.assertGroupConverges('hagis*')

    def test_two_pole(self):
        self.assertGroupConverges('twopole_*')

    def test_remaining_families(self):
        for pattern in CONVERGENCE_GROUPS[5:]:
            with self.subTest(pattern=pattern):
                self.assertGroupConverges(pattern)


class SaddleConvergenceTest(SimpleTestCase):
    def test_saddle_families_converge(self):
        reports = VerificationService.run_suite('saddle_*', max_n=4000, workers=os.cpu_count() or 1)
        self.assertEqual(len(reports), 3)
        for report in reports:
            with self.subTest(report=report.identifier):
                self.assertEqual(report.error, '')
                self.assertTrue(report.sign_ok)
                self.assertEqual(report.verdict, CONVERGING)

    def test_saddle_minus_delta_bound(self):
        spec, form = catalog.instantiate('saddle_minus', {'m': 2})
        report = VerificationService.verify(spec, form, [500, 1000, 2000, 4000])
        deltas = [abs(delta) for delta in report.deltas]
        self.assertEqual(deltas, sorted(deltas, reverse=True))
        self.assertEqual(len(set(deltas)), 4)
        self.assertLess(deltas[2], 0.065)
        self.assertLess(deltas[3], 0.05)


class BFileTest(SimpleTestCase):
    def test_parse(self):
        self.assertEqual(OeisService.parse_bfile('0 1\n1 1\n2 2'), BFile(offset=0, values=(1, 1, 2)))

    def test_comment_header(self):
        text = '# A000041\n#\n0 1\n1 1\n\n2 2\n'
        self.assertEqual(OeisService.parse_bfile(text).values, (1, 1, 2))

    def test_offset_and_big_values(self):
        big = 10 ** 60 + 7
        bfile = OeisService.parse_bfile(f'1 5\n2 {big}')
        self.assertEqual(bfile.offset, 1)
        self.assertEqual(bfile.values, (5, big))

    def test_gap(self):
        with self.assertRaises(GapError):
            OeisService.parse_bfile('0 1\n2 2')

    def test_bad_lines(self):
        for text in ('0 1 5', 'x 1', '0', ''):
            with self.subTest(text=text):
                with self.assertRaises(FormatError):
                    OeisService.parse_bfile(text)

    def test_write_then_read(self):
        series = ExpansionService.expand(PARTITIONS, 20)
        with tempfile.TemporaryDirectory() as tmp:
            path = OeisService.write_bfile(Path(tmp) / 'b.txt', series.coeffs, comments=['partitions'])
            raw = path.read_bytes()
            bfile = OeisService.read_bfile(path)
        self.assertNotIn(b'\r', raw)
        self.assertTrue(raw.startswith(b'# partitions\n0 1\n'))
        self.assertEqual(bfile.values, series.coeffs)

    def test_compare_reports_first_difference(self):
        series = ExpansionService.expand(PARTITIONS, 10)
        corrupted = BFile(offset=0, values=(1, 1, 2, 3, 5, 8, 11))
        with self.assertRaises(MismatchError) as ctx:
            OeisService.compare(series, corrupted)
        self.assertEqual(ctx.exception.index, 5)

    def test_compare_overlap_only(self):
        series = ExpansionService.expand(PARTITIONS, 3)
        self.assertEqual(OeisService.compare(series, BFile(offset=2, values=(2, 3, 5, 7))), 2)

    def test_compare_skips_negative_indices(self):
        series = ExpansionService.expand(PARTITIONS, 10)
        self.assertEqual(OeisService.compare(series, BFile(offset=-2, values=(9, 9, 1, 1, 2))), 3)

    def test_compare_without_overlap(self):
        series = ExpansionService.expand(PARTITIONS, 3)
        for bfile in (BFile(offset=-3, values=(1, 1)), BFile(offset=4, values=(5, 7))):
            with self.subTest(offset=bfile.offset):
                with self.assertRaises(FormatError):
                    OeisService.compare(series, bfile)

    def test_cross_check_fixture(self):
        report = OeisService.cross_check('powerm_minus', {'m': 1}, FIXTURES / 'b000041.txt')
        self.assertTrue(report.matched)
        self.assertEqual(report.compared, 31)
        self.assertEqual(report.params, {'m': 1})

    def test_cross_check_overpartition_prefix(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'b015128.txt'
            path.write_text('0 1\n1 2\n2 4\n3 8\n4 14\n')
            report = OeisService.cross_check('partratio', {'s': 1, 't': 1}, path)
        self.assertEqual(report.compared, 5)

    def test_cross_check_mismatch(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.txt'
            path.write_text('0 1\n1 1\n2 2\n3 4\n')
            with self.assertRaises(MismatchError) as ctx:
                OeisService.cross_check('powerm_minus', {'m': 1}, path)
        self.assertEqual(ctx.exception.index, 3)
