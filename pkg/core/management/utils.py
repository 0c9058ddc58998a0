"""
Argument handling shared by the qasym management commands.

Usage and parse problems leave with exit status 2; sign mismatches,
b-file mismatches and diverging verdicts with exit status 1.
"""
import csv
import io
import json
from contextlib import contextmanager
from pathlib import Path

from django.core.management.base import CommandError

from core.asymptotics import AsymptoticForm
from core.exceptions import MismatchError, QAsymError, SignMismatch
from core.qspec import ProductSpec, parse
from core.serializers import AsymptoticFormSerializer, VerificationReportSerializer

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1


def read_text_arg(value: str) -> str:
    """'@path' reads the file, anything else is taken literally."""
    if value.startswith('@'):
        path = Path(value[1:])
        try:
            return path.read_text(encoding='utf-8').strip()
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc}", returncode=USAGE_ERROR)
    return value


def read_spec(value: str) -> ProductSpec:
    return parse(read_text_arg(value))


def read_form(value: str) -> AsymptoticForm:
    text = read_text_arg(value)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CommandError(f"form is not valid JSON: {exc}", returncode=USAGE_ERROR)
    serializer = AsymptoticFormSerializer(data=data)
    if not serializer.is_valid():
        raise CommandError(f"invalid form: {json.dumps(serializer.errors)}", returncode=USAGE_ERROR)
    return serializer.save()


def parse_checkpoints(text: str):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise CommandError(f"checkpoints must be comma-separated integers, got {text!r}", returncode=USAGE_ERROR)


def dump_json(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


@contextmanager
def cli_errors():
    """Translate library errors into CommandError with the documented exit codes"""
    try:
        yield
    except (SignMismatch, MismatchError) as exc:
        raise CommandError(str(exc), returncode=VERIFICATION_FAILURE)
    except QAsymError as exc:
        raise CommandError(f"{type(exc).__name__}: {exc}", returncode=USAGE_ERROR)


REPORT_FORMATS = ('json', 'csv', 'text')
CSV_COLUMNS = ('identifier', 'n', 'exact', 'predicted', 'delta', 'ratio', 'sign', 'predicted_sign', 'verdict')


def render_reports(reports, fmt: str, many: bool = True) -> str:
    if fmt == 'json':
        if many:
            return dump_json(VerificationReportSerializer(reports, many=True).data)
        return dump_json(VerificationReportSerializer(reports[0]).data)

    if fmt == 'csv':
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS)
        for report in reports:
            if not report.checkpoints:
                writer.writerow([report.identifier, '', '', '', '', '', '', '', report.verdict])
            for point in report.checkpoints:
                writer.writerow([
                    report.identifier, point.n, repr(point.exact), repr(point.predicted),
                    repr(point.delta), '' if point.ratio is None else repr(point.ratio),
                    point.sign, point.predicted_sign, report.verdict,
                ])
        return buffer.getvalue().rstrip('\n')

    lines = []
    for report in reports:
        trend = 'n/a' if report.trend is None else f'{report.trend:+.3f}'
        lines.append(f'{report.identifier}: {report.verdict} (trend {trend})')
        if report.error:
            lines.append(f'    error: {report.error}')
        for point in report.checkpoints:
            ratio = 'overflow' if point.ratio is None else f'{point.ratio:.9f}'
            lines.append(
                f'    n={point.n:<8d} ln|a_n|={point.exact:<20.12f} '
                f'ln f(n)={point.predicted:<20.12f} delta={point.delta:+.3e} ratio={ratio}'
            )
    return '\n'.join(lines)
