import sys

from django.apps import AppConfig


class CoreConfig(AppConfig):
    name = 'core'
    verbose_name = 'q-series asymptotics'

    def ready(self):
        # b-files and JSON exports print coefficients with tens of thousands of digits
        if hasattr(sys, 'set_int_max_str_digits'):
            sys.set_int_max_str_digits(0)
