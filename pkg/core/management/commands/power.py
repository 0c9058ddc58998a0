from django.core.management.base import BaseCommand, CommandError

from core.asymptotics import parse_real, power
from core.management.utils import USAGE_ERROR, cli_errors, dump_json, read_form
from core.serializers import AsymptoticFormSerializer


class Command(BaseCommand):
    help = "Raise the generating function of a form to the power h (h-fold convolution)"

    def add_arguments(self, parser):
        parser.add_argument('form', help='AsymptoticForm JSON or @file')
        parser.add_argument('--h', required=True, help='Exponent h >= 1; integers or "p/q"')

    def handle(self, *args, **options):
        try:
            h = parse_real(options['h'])
        except (ValueError, ZeroDivisionError):
            raise CommandError(f"--h must be a number or \"p/q\", got {options['h']!r}", returncode=USAGE_ERROR)

        with cli_errors():
            result = power(read_form(options['form']), h)
        self.stdout.write(dump_json(AsymptoticFormSerializer(result).data))
