from django.core.management.base import BaseCommand

from core import catalog
from core.exceptions import UsageError
from core.management.utils import cli_errors, dump_json
from core.serializers import AsymptoticFormSerializer, FamilySerializer


class Command(BaseCommand):
    help = "Print the asymptotic form of a catalog family as JSON"

    def add_arguments(self, parser):
        parser.add_argument('--family', help='Catalog family id, e.g. partminus')
        parser.add_argument('--params', default='', help='Comma-separated name=value pairs, e.g. s=1,t=1')
        parser.add_argument(
            '--derive',
            action='store_true',
            help='Build the form through the convolution calculus instead of the printed closed form'
        )
        parser.add_argument(
            '--list',
            action='store_true',
            help='Dump the catalog instead; --family is then read as an id glob'
        )

    def handle(self, *args, **options):
        with cli_errors():
            if options['list']:
                entries = catalog.list_families(options.get('family'))
                self.stdout.write(dump_json(FamilySerializer(entries, many=True).data))
                return

            family = options.get('family')
            if not family:
                raise UsageError('--family is required unless --list is given')

            params = catalog.parse_params(options['params'])
            if options['derive']:
                form = catalog.derive(family, params)
            else:
                _, form = catalog.instantiate(family, params)

        self.stdout.write(dump_json(AsymptoticFormSerializer(form).data))
