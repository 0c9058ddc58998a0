"""
URL configuration for qasym project.

The read-only API lives under /api/ (see core.urls).
"""
from django.urls import path, include

urlpatterns = [
    path('', include('core.urls')),
]
