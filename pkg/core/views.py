import logging

from rest_framework import status, viewsets
from rest_framework.decorators import action, api_view
from rest_framework.response import Response
from rest_framework.views import exception_handler

from . import catalog
from .exceptions import QAsymError, UnknownFamily
from .qspec import parse
from .serializers import AsymptoticFormSerializer, ExpandQuerySerializer, FamilySerializer, SeriesSerializer
from .services import ExpansionService

logger = logging.getLogger(__name__)


def qasym_exception_handler(exc, context):
    """DRF handler that also turns library errors into 400/404 {"detail": ...} responses"""
    response = exception_handler(exc, context)
    if response is not None:
        return response
    if isinstance(exc, UnknownFamily):
        return Response({'detail': str(exc)}, status=status.HTTP_404_NOT_FOUND)
    if isinstance(exc, QAsymError):
        logger.info(f"Rejected API request: {type(exc).__name__}: {exc}")
        return Response({'detail': str(exc), 'error': type(exc).__name__}, status=status.HTTP_400_BAD_REQUEST)
    return None


class FamilyViewSet(viewsets.ViewSet):
    lookup_field = 'family_id'
    lookup_value_regex = r'[a-z0-9_]+'

    def list(self, request):
        entries = catalog.list_families(request.query_params.get('filter'))
        return Response(FamilySerializer(entries, many=True).data)

    def retrieve(self, request, family_id=None):
        return Response(FamilySerializer(catalog.get_family(family_id)).data)

    @action(detail=True, methods=['get'])
    def form(self, request, family_id=None):
        params = catalog.parse_params(request.query_params.get('params'))
        if request.query_params.get('derive') in ('1', 'true', 'yes'):
            form = catalog.derive(family_id, params)
        else:
            _, form = catalog.instantiate(family_id, params)
        return Response(AsymptoticFormSerializer(form).data)


@api_view(['GET'])
def expand(request):
    query = ExpandQuerySerializer(data=request.query_params)
    if not query.is_valid():
        field, messages = next(iter(query.errors.items()))
        return Response({'detail': f'{field}: {messages[0]}'}, status=status.HTTP_400_BAD_REQUEST)
    order = query.validated_data['order']

    spec = parse(query.validated_data['spec'])
    series = ExpansionService.expand(spec, order)
    serializer = SeriesSerializer({
        'spec': spec.render(),
        'order': order,
        'offset': 0,
        'coefficients': series.coeffs,
    })
    return Response(serializer.data)
