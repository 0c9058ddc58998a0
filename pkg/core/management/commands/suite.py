from django.core.management.base import BaseCommand, CommandError

from core.management.utils import REPORT_FORMATS, VERIFICATION_FAILURE, cli_errors, render_reports
from core.services import VerificationService


class Command(BaseCommand):
    help = "Verify every catalog family at its smallest parameters"

    def add_arguments(self, parser):
        parser.add_argument('--filter', help='Family id glob, e.g. "power*"')
        parser.add_argument('--max-n', type=int, help='Largest checkpoint; the others are max-n/8, /4 and /2')
        parser.add_argument('--workers', type=int, help='Worker processes (default QASYM_SUITE_WORKERS)')
        parser.add_argument('--format', choices=REPORT_FORMATS, default='text', help='Report format')

    def handle(self, *args, **options):
        with cli_errors():
            reports = VerificationService.run_suite(
                pattern=options.get('filter'),
                max_n=options.get('max_n'),
                workers=options.get('workers'),
            )

        if not reports:
            self.stdout.write(self.style.WARNING('No families match the filter'))
            return

        self.stdout.write(render_reports(reports, options['format']))

        failed = [report.identifier for report in reports if report.failed]
        if failed:
            raise CommandError(
                f"{len(failed)} of {len(reports)} families diverge: {', '.join(failed)}",
                returncode=VERIFICATION_FAILURE,
            )
        if options['format'] == 'text':
            self.stdout.write(self.style.SUCCESS(f'{len(reports)} families checked, none diverging'))
