from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.management.utils import USAGE_ERROR, cli_errors, dump_json, read_spec
from core.serializers import SeriesSerializer
from core.series import expand_reflected
from core.services import ExpansionService, OeisService


class Command(BaseCommand):
    help = "Expand a q-product to exact integer coefficients a_0..a_N"

    def add_arguments(self, parser):
        parser.add_argument('--spec', required=True, help='DSL text or @file, e.g. "prod(k>=1, 1/(1-q^k))"')
        parser.add_argument('--order', type=int, required=True, help='Largest power of q to compute')
        parser.add_argument(
            '--out',
            help='Write to this path; a .json suffix gives JSON, anything else an OEIS b-file'
        )
        parser.add_argument(
            '--reflected',
            action='store_true',
            help='Expand F(-q) instead of F(q)'
        )

    def handle(self, *args, **options):
        with cli_errors():
            spec = read_spec(options['spec'])
            order = options['order']
            series = expand_reflected(spec, order) if options['reflected'] else ExpansionService.expand(spec, order)

        data = SeriesSerializer({
            'spec': spec.render(),
            'order': order,
            'offset': 0,
            'coefficients': series.coeffs,
        }).data

        out = options.get('out')
        if not out:
            self.stdout.write(dump_json(data))
            return

        path = Path(out)
        try:
            if path.suffix == '.json':
                path.write_text(dump_json(data) + '\n', encoding='utf-8')
            else:
                OeisService.write_bfile(path, series.coeffs, comments=[spec.render()])
        except OSError as exc:
            raise CommandError(f"cannot write {path}: {exc}", returncode=USAGE_ERROR)
        self.stdout.write(self.style.SUCCESS(f'Wrote {len(series)} coefficients to {path}'))
