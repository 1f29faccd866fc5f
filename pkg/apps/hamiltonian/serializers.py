from rest_framework import serializers

from apps.core.serializers import RealField

from .exceptions import ParseError
from .parser import parse


class HamiltonianField(serializers.CharField):
    """Hamiltonian stored as DSL text; parsed on the way in."""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return parse(text)
        except ParseError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return str(value)


class HoferEstimateSerializer(serializers.Serializer):
    lower = RealField()
    upper = RealField()
    grid_resolution = serializers.IntegerField()
    refinement_depth = serializers.IntegerField()
    t_nodes = serializers.IntegerField()
