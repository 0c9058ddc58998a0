from fractions import Fraction

from rest_framework import serializers

from .asymptotics import AsymptoticForm, format_real, parse_real
from .conf import qasym_setting
from .exceptions import QAsymError
from .services import VERDICTS, Checkpoint, VerificationReport


class RealField(serializers.Field):
    """Exact rationals travel as "p/q" strings, everything else as JSON numbers."""

    def to_representation(self, value):
        return format_real(value)

    def to_internal_value(self, data):
        if isinstance(data, bool):
            raise serializers.ValidationError('expected a number or a "p/q" string')
        try:
            return parse_real(data)
        except (TypeError, ValueError, ZeroDivisionError):
            raise serializers.ValidationError(f'{data!r} is not a real number or a "p/q" string')


class TermSerializer(serializers.Serializer):
    p = RealField()
    s = serializers.FloatField()

    def to_representation(self, instance):
        p, s = instance
        return {'p': format_real(p), 's': float(s)}

    def validate_p(self, value):
        if not isinstance(value, Fraction):
            raise serializers.ValidationError('term exponents must be exact, e.g. "1/2"')
        return value


class AsymptoticFormSerializer(serializers.Serializer):
    v = serializers.FloatField()
    terms = TermSerializer(many=True)
    b = RealField()
    alternating = serializers.BooleanField(default=False)
    base = serializers.FloatField(default=1.0)
    formula = serializers.SerializerMethodField()

    def get_formula(self, obj):
        return obj.render()

    def validate(self, attrs):
        try:
            self._build(attrs)
        except QAsymError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return self._build(validated_data)

    @staticmethod
    def _build(data):
        terms = tuple((term['p'], term['s']) for term in data['terms'])
        fields = {key: value for key, value in data.items() if key != 'terms'}
        return AsymptoticForm(terms=terms, **fields)


class CheckpointSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    exact = serializers.FloatField()
    predicted = serializers.FloatField()
    delta = serializers.FloatField()
    ratio = serializers.FloatField(allow_null=True)
    sign = serializers.IntegerField(min_value=-1, max_value=1)
    predicted_sign = serializers.IntegerField(min_value=-1, max_value=1)

    def create(self, validated_data):
        return Checkpoint(**validated_data)


class VerificationReportSerializer(serializers.Serializer):
    identifier = serializers.CharField()
    checkpoints = CheckpointSerializer(many=True)
    sign_ok = serializers.BooleanField()
    trend = serializers.FloatField(allow_null=True)
    verdict = serializers.ChoiceField(choices=VERDICTS)
    error = serializers.CharField(allow_blank=True, default='')

    def validate_checkpoints(self, value):
        ns = [checkpoint['n'] for checkpoint in value]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise serializers.ValidationError('checkpoints must be strictly increasing in n')
        return value

    def create(self, validated_data):
        checkpoints = [Checkpoint(**checkpoint) for checkpoint in validated_data.pop('checkpoints')]
        return VerificationReport(checkpoints=checkpoints, **validated_data)


class FamilySerializer(serializers.Serializer):
    id = serializers.CharField()
    params = serializers.ListField(child=serializers.CharField())
    constraints = serializers.SerializerMethodField()
    oeis_refs = serializers.ListField(child=serializers.CharField())
    source = serializers.CharField()
    alternating = serializers.BooleanField()
    composable = serializers.BooleanField()
    grid = serializers.SerializerMethodField()
    notes = serializers.CharField()
    spec = serializers.SerializerMethodField()
    formula = serializers.SerializerMethodField()

    def get_constraints(self, obj):
        return [constraint.label for constraint in obj.constraints]

    def get_grid(self, obj):
        return obj.grid_params

    def get_spec(self, obj):
        return obj.spec_text(**obj.grid_params[0])

    def get_formula(self, obj):
        return obj.form(**obj.grid_params[0]).render()


class ExpandQuerySerializer(serializers.Serializer):
    """Query string of the expand endpoint."""

    spec = serializers.CharField()
    order = serializers.IntegerField(min_value=0, default=20)

    def validate_order(self, value):
        limit = min(
            qasym_setting('QASYM_API_MAX_ORDER', 10000),
            qasym_setting('QASYM_MAX_ORDER', 100000),
        )
        if value > limit:
            raise serializers.ValidationError(f'order must be at most {limit}')
        return value


class SeriesSerializer(serializers.Serializer):
    spec = serializers.CharField()
    order = serializers.IntegerField(min_value=0)
    offset = serializers.IntegerField(default=0)
    # big integers as strings so JSON consumers keep every digit
    coefficients = serializers.ListField(child=serializers.CharField())

    def validate_coefficients(self, value):
        try:
            return [int(c) for c in value]
        except ValueError:
            raise serializers.ValidationError('coefficients must be integers')
