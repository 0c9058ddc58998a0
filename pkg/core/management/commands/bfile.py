from django.core.management.base import BaseCommand, CommandError

from core import catalog
from core.exceptions import UsageError
from core.management.utils import USAGE_ERROR, cli_errors, read_spec
from core.services import ExpansionService, OeisService


class Command(BaseCommand):
    help = "Cross-check a catalog family against a local OEIS b-file, or write one"

    def add_arguments(self, parser):
        parser.add_argument('action', choices=('check', 'write'))
        parser.add_argument('--family', help='Catalog family id')
        parser.add_argument('--params', default='', help='Family parameters, e.g. m=2')
        parser.add_argument('--spec', help='DSL text or @file; write only, instead of --family')
        parser.add_argument('--order', type=int, default=1000, help='Largest index to write (default 1000)')
        parser.add_argument('--file', required=True, help='b-file path')

    def handle(self, *args, **options):
        if options['action'] == 'check':
            self._check(options)
        else:
            self._write(options)

    def _check(self, options):
        if not options.get('family'):
            raise CommandError('check needs --family', returncode=USAGE_ERROR)
        try:
            with cli_errors():
                report = OeisService.cross_check(
                    options['family'],
                    catalog.parse_params(options['params']),
                    options['file'],
                )
        except OSError as exc:
            raise CommandError(f"cannot read {options['file']}: {exc}", returncode=USAGE_ERROR)

        self.stdout.write(self.style.SUCCESS(
            f"{report.family} matches {options['file']}: {report.compared} terms from n={report.offset}"
        ))

    def _write(self, options):
        with cli_errors():
            if options.get('family'):
                spec, _ = catalog.instantiate(options['family'], catalog.parse_params(options['params']))
            elif options.get('spec'):
                spec = read_spec(options['spec'])
            else:
                raise UsageError('write needs --family or --spec')
            series = ExpansionService.expand(spec, options['order'])

        try:
            path = OeisService.write_bfile(options['file'], series.coeffs, comments=[spec.render()])
        except OSError as exc:
            raise CommandError(f"cannot write {options['file']}: {exc}", returncode=USAGE_ERROR)
        self.stdout.write(self.style.SUCCESS(f'Wrote {len(series)} terms to {path}'))
