from django.core.management.base import BaseCommand, CommandError

from core import catalog
from core.exceptions import UsageError
from core.management.utils import (
    REPORT_FORMATS,
    VERIFICATION_FAILURE,
    cli_errors,
    parse_checkpoints,
    read_form,
    read_spec,
    render_reports,
)
from core.services import VerificationService


class Command(BaseCommand):
    help = "Compare exact coefficients of a q-product with an asymptotic form in log space"

    def add_arguments(self, parser):
        parser.add_argument('--spec', help='DSL text or @file')
        parser.add_argument('--form', help='AsymptoticForm JSON or @file')
        parser.add_argument('--family', help='Catalog family id; supplies the product and, without --form, the formula')
        parser.add_argument('--params', default='', help='Family parameters, e.g. s=1,t=1')
        parser.add_argument(
            '--derive',
            action='store_true',
            help='With --family, check the derived form instead of the closed form'
        )
        parser.add_argument('--checkpoints', help='Comma-separated n values, strictly increasing')
        parser.add_argument('--format', choices=REPORT_FORMATS, default='text', help='Report format')

    def handle(self, *args, **options):
        checkpoints = parse_checkpoints(options['checkpoints']) if options.get('checkpoints') else None

        with cli_errors():
            spec, form, identifier = self._resolve(options)
            report = VerificationService.verify(spec, form, checkpoints, identifier=identifier)

        self.stdout.write(render_reports([report], options['format'], many=False))
        if report.failed:
            raise CommandError(f"{report.identifier}: verdict {report.verdict}", returncode=VERIFICATION_FAILURE)

    @staticmethod
    def _resolve(options):
        spec = form = identifier = None
        family = options.get('family')
        if family:
            params = catalog.parse_params(options['params'])
            spec, form = catalog.instantiate(family, params)
            if options['derive']:
                form = catalog.derive(family, params)
            identifier = f"{family}({options['params']})" if options['params'] else family

        if options.get('spec'):
            spec = read_spec(options['spec'])
        if options.get('form'):
            form = read_form(options['form'])
        if spec is None or form is None:
            raise UsageError('give --family, or --spec together with --form')
        return spec, form, identifier
