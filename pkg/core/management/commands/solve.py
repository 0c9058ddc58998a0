from django.core.management.base import BaseCommand

from core.asymptotics import deconvolve
from core.management.utils import cli_errors, dump_json, read_form
from core.serializers import AsymptoticFormSerializer


class Command(BaseCommand):
    help = "Solve convolve(x, known) = target for the unknown form x"

    def add_arguments(self, parser):
        parser.add_argument('target', help='AsymptoticForm JSON or @file of the product')
        parser.add_argument('known', help='AsymptoticForm JSON or @file of the known factor')

    def handle(self, *args, **options):
        with cli_errors():
            result = deconvolve(read_form(options['target']), read_form(options['known']))
        self.stdout.write(dump_json(AsymptoticFormSerializer(result).data))
