import json
import math
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from core import catalog
from core.asymptotics import AsymptoticForm
from core.serializers import AsymptoticFormSerializer

FIXTURES = Path(__file__).resolve().parent / 'fixtures'
PARTITIONS_SPEC = 'prod(k>=1, 1/(1-q^k))'


def form_json(form: AsymptoticForm) -> str:
    return json.dumps(AsymptoticFormSerializer(form).data)


def load_form(text: str) -> AsymptoticForm:
    serializer = AsymptoticFormSerializer(data=json.loads(text))
    assert serializer.is_valid(), serializer.errors
    return serializer.save()


def colours(m: int) -> AsymptoticForm:
    return catalog.instantiate('powerm_minus', {'m': m})[1]


class CommandTestCase(SimpleTestCase):
    def run_command(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO(), **options)
        return out.getvalue()

    def assertExitCode(self, code, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            self.run_command(*args, **options)
        self.assertEqual(ctx.exception.returncode, code)
        return ctx.exception


class ExpandCommandTest(CommandTestCase):
    def test_json_to_stdout(self):
        data = json.loads(self.run_command('expand', spec=PARTITIONS_SPEC, order=10))
        self.assertEqual(data['coefficients'], ['1', '1', '2', '3', '5', '7', '11', '15', '22', '30', '42'])
        self.assertEqual(data['offset'], 0)

    def test_reflected(self):
        data = json.loads(self.run_command('expand', spec=PARTITIONS_SPEC, order=5, reflected=True))
        self.assertEqual(data['coefficients'], ['1', '-1', '2', '-3', '5', '-7'])

    def test_spec_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'spec.txt'
            path.write_text(PARTITIONS_SPEC + '\n')
            data = json.loads(self.run_command('expand', spec=f'@{path}', order=3))
        self.assertEqual(data['coefficients'], ['1', '1', '2', '3'])

    def test_out_files(self):
        with tempfile.TemporaryDirectory() as tmp:
            json_path = Path(tmp) / 'p.json'
            bfile_path = Path(tmp) / 'b000041.txt'
            self.run_command('expand', spec=PARTITIONS_SPEC, order=30, out=str(json_path))
            self.run_command('expand', spec=PARTITIONS_SPEC, order=30, out=str(bfile_path))
            data = json.loads(json_path.read_text())
            written = bfile_path.read_text()
        self.assertEqual(data['coefficients'][-1], '5604')
        self.assertEqual(written.splitlines()[0], f'# {PARTITIONS_SPEC}')
        self.assertEqual(written.splitlines()[-1], '30 5604')

    def test_parse_error_exits_two(self):
        error = self.assertExitCode(2, 'expand', spec='prod(k>=1, 1/(1-q^k)', order=5)
        self.assertIn('QSpecSyntaxError', str(error))

    @override_settings(QASYM_MAX_ORDER=50)
    def test_order_cap_exits_two(self):
        self.assertExitCode(2, 'expand', spec=PARTITIONS_SPEC, order=51)

    def test_missing_spec_file(self):
        self.assertExitCode(2, 'expand', spec='@/nonexistent/spec.txt', order=5)


class FormCommandTest(CommandTestCase):
    def test_closed_form(self):
        form = load_form(self.run_command('form', family='partminus', params='s=1,t=1'))
        self.assertAlmostEqual(form.v, 1 / (4 * math.sqrt(3)), places=14)
        self.assertAlmostEqual(form.coefficient(Fraction(1, 2)), math.pi * math.sqrt(2 / 3), places=12)

    def test_derived_form(self):
        closed = load_form(self.run_command('form', family='powerm_minus', params='m=3'))
        derived = load_form(self.run_command('form', family='powerm_minus', params='m=3', derive=True))
        self.assertTrue(derived.isclose(closed, rel_tol=1e-12))

    def test_list(self):
        data = json.loads(self.run_command('form', family='twopole_*', list=True))
        self.assertEqual([item['id'] for item in data], ['twopole_minus', 'twopole_plus', 'twopole_ratio'])

    def test_family_required(self):
        self.assertExitCode(2, 'form')

    def test_unknown_family(self):
        error = self.assertExitCode(2, 'form', family='nope')
        self.assertIn('UnknownFamily', str(error))


class CalculusCommandTest(CommandTestCase):
    def test_conv(self):
        result = load_form(self.run_command('conv', form_json(colours(1)), form_json(colours(1))))
        self.assertTrue(result.isclose(colours(2), rel_tol=1e-10))

    def test_power(self):
        result = load_form(self.run_command('power', form_json(colours(1)), '--h', '3'))
        self.assertTrue(result.isclose(colours(3), rel_tol=1e-10))

    def test_power_rejects_bad_exponent(self):
        self.assertExitCode(2, 'power', form_json(colours(1)), '--h', 'two')

    def test_solve(self):
        result = load_form(self.run_command('solve', form_json(colours(3)), form_json(colours(1))))
        self.assertTrue(result.isclose(colours(2), rel_tol=1e-10))

    def test_convmixed(self):
        a = AsymptoticForm.mixed(v=0.5, s=0.3, r=1.2, b=Fraction(2, 3))
        b = AsymptoticForm.mixed(v=0.7, s=-0.2, r=0.9, b=Fraction(1, 2))
        result = load_form(self.run_command('convmixed', form_json(a), form_json(b)))
        self.assertAlmostEqual(result.coefficient(Fraction(2, 3)), (1.2 ** 3 + 0.9 ** 3) ** (1 / 3), places=12)

    def test_convmixed_rejects_square_root_forms(self):
        error = self.assertExitCode(2, 'convmixed', form_json(colours(1)), form_json(colours(1)))
        self.assertIn('WrongExponentSet', str(error))

    def test_form_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'form.json'
            path.write_text(form_json(colours(1)))
            result = load_form(self.run_command('conv', f'@{path}', f'@{path}'))
        self.assertTrue(result.isclose(colours(2), rel_tol=1e-10))

    def test_invalid_form_json(self):
        self.assertExitCode(2, 'conv', '{"v": 1', form_json(colours(1)))
        self.assertExitCode(2, 'conv', '{"v": 1, "terms": [], "b": "x"}', form_json(colours(1)))


class VerifyCommandTest(CommandTestCase):
    def test_family_json(self):
        output = self.run_command(
            'verify', family='partminus', params='s=1,t=1', checkpoints='100,200,400', format='json',
        )
        data = json.loads(output)
        self.assertEqual(data['identifier'], 'partminus(s=1,t=1)')
        self.assertEqual(data['verdict'], 'converging')
        self.assertEqual([point['n'] for point in data['checkpoints']], [100, 200, 400])

    def test_spec_and_form(self):
        output = self.run_command(
            'verify', spec=PARTITIONS_SPEC, form=form_json(colours(1)), checkpoints='100,200,400', format='csv',
        )
        rows = output.splitlines()
        self.assertEqual(rows[0].split(',')[:3], ['identifier', 'n', 'exact'])
        self.assertEqual(len(rows), 4)
        self.assertTrue(all(row.endswith(',converging') for row in rows[1:]))

    def test_text_report(self):
        output = self.run_command('verify', family='partratio', params='s=1,t=1', checkpoints='250,500,1000')
        self.assertIn('partratio(s=1,t=1): converging', output)
        self.assertIn('n=1000', output)

    def test_sign_mismatch_exits_one(self):
        form = catalog.instantiate('powerplusdenom', {'m': 1})[1]
        plain = AsymptoticForm(v=form.v, terms=form.terms, b=form.b)
        error = self.assertExitCode(
            1, 'verify', spec='prod(k>=1, 1/(1+q^k))', form=form_json(plain), checkpoints='100,101',
        )
        self.assertIn('n=101', str(error))

    def test_diverging_exits_one(self):
        wrong = AsymptoticForm.single(v=1, r=2 * math.pi * math.sqrt(2 / 3), b=1)
        self.assertExitCode(
            1, 'verify', spec=PARTITIONS_SPEC, form=form_json(wrong), checkpoints='100,200,400',
        )

    def test_usage_errors_exit_two(self):
        self.assertExitCode(2, 'verify', spec='prod(k>=1, 1/(1-q^0))', form=form_json(colours(1)))
        self.assertExitCode(2, 'verify', spec=PARTITIONS_SPEC)
        self.assertExitCode(2, 'verify', family='partminus', params='s=1,t=1', checkpoints='10,x')
        self.assertExitCode(2, 'verify', family='partminus', params='s=1,t=1', checkpoints='20,10')
        self.assertExitCode(2, 'verify', family='saddle_minus', params='m=2', derive=True)


class SuiteCommandTest(CommandTestCase):
    def test_text(self):
        output = self.run_command('suite', filter='part*', max_n=400, workers=1)
        self.assertIn('partminus(s=1,t=1): converging', output)
        self.assertIn('3 families checked, none diverging', output)

    def test_csv(self):
        output = self.run_command('suite', filter='part*', max_n=400, workers=1, format='csv')
        self.assertEqual(len(output.splitlines()), 1 + 3 * 4)

    def test_no_match(self):
        output = self.run_command('suite', filter='nothing*', max_n=100)
        self.assertIn('No families match', output)

    def test_failure_exits_one(self):
        with override_settings(QASYM_MAX_ORDER=100):
            error = self.assertExitCode(1, 'suite', filter='partminus', max_n=400, workers=1)
        self.assertIn('partminus', str(error))


class BFileCommandTest(CommandTestCase):
    def test_check_fixture(self):
        output = self.run_command('bfile', 'check', family='powerm_minus', params='m=1', file=str(FIXTURES / 'b000041.txt'))
        self.assertIn('31 terms from n=0', output)

    def test_write_then_check(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'b.txt'
            self.run_command('bfile', 'write', family='partratio', params='s=1,t=1', order=40, file=str(path))
            output = self.run_command('bfile', 'check', family='partratio', params='s=1,t=1', file=str(path))
            lines = path.read_text().splitlines()
        self.assertEqual(lines[1:6], ['0 1', '1 2', '2 4', '3 8', '4 14'])
        self.assertIn('41 terms', output)

    def test_write_from_spec(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'b.txt'
            self.run_command('bfile', 'write', spec='prod(k>=1, (1+q^k))', order=6, file=str(path))
            lines = path.read_text().splitlines()
        self.assertEqual(lines[-1], '6 4')

    def test_mismatch_exits_one(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'b.txt'
            path.write_text('0 1\n1 1\n2 2\n3 4\n')
            error = self.assertExitCode(1, 'bfile', 'check', family='powerm_minus', params='m=1', file=str(path))
        self.assertIn('a(3)', str(error))

    def test_usage_errors_exit_two(self):
        self.assertExitCode(2, 'bfile', 'check', file=str(FIXTURES / 'b000041.txt'))
        self.assertExitCode(2, 'bfile', 'check', family='powerm_minus', params='m=1', file='/nonexistent/b.txt')
        self.assertExitCode(2, 'bfile', 'write', file='/tmp/unused.txt')
