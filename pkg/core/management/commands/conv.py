from django.core.management.base import BaseCommand

from core.asymptotics import convolve
from core.management.utils import cli_errors, dump_json, read_form
from core.serializers import AsymptoticFormSerializer


class Command(BaseCommand):
    help = "Convolve two single-term asymptotic forms sharing the exponent p"

    def add_arguments(self, parser):
        parser.add_argument('first', help='AsymptoticForm JSON or @file')
        parser.add_argument('second', help='AsymptoticForm JSON or @file')

    def handle(self, *args, **options):
        with cli_errors():
            result = convolve(read_form(options['first']), read_form(options['second']))
        self.stdout.write(dump_json(AsymptoticFormSerializer(result).data))
