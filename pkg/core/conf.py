from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


def qasym_setting(name, default):
    """Read a tunable from Django settings; library callers may run unconfigured."""
    try:
        return getattr(settings, name, default)
    except ImproperlyConfigured:
        return default
