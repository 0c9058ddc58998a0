import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'qasym.settings')
os.environ.setdefault('QASYM_CACHE_EXPANSIONS', 'False')
django.setup()
