from rest_framework import serializers

from apps.core.serializers import PointField, RationalField

from .exceptions import LayoutError
from .layout import Circle, LinkLayout


class CircleSerializer(serializers.Serializer):
    """Serializer for one round link component."""

    center = PointField()
    radius = RationalField(positive=True)


class LinkLayoutSerializer(serializers.Serializer):
    """Serializer for LinkLayout; rationals travel as "p/q" strings."""

    k = serializers.IntegerField(min_value=1)
    eta = RationalField(nonnegative=True)
    circles = CircleSerializer(many=True)
    areas = serializers.ListField(child=RationalField(positive=True), min_length=2)
    disk_area = RationalField(required=False, positive=True)

    def validate(self, attrs):
        try:
            attrs['layout'] = LinkLayout(
                k=attrs['k'],
                eta=attrs['eta'],
                circles=[Circle(center=c['center'], radius=c['radius']) for c in attrs['circles']],
                areas=attrs['areas'],
                disk_area=attrs.get('disk_area'),
            )
        except LayoutError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data) -> LinkLayout:
        return validated_data['layout']


class AdmissibilityReportSerializer(serializers.Serializer):
    admissible = serializers.BooleanField()
    # "lambda" is a keyword; the report stores it as lambda_
    lambda_ = RationalField()
    violations = serializers.ListField(child=serializers.CharField())
    surjective_setting = serializers.BooleanField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['lambda'] = data.pop('lambda_')
        return data
