from rest_framework import serializers

from apps.core.serializers import RealField


class PreservationReportSerializer(serializers.Serializer):
    preserved = serializers.BooleanField()
    sigma = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_null=True)
    max_deviation = RealField()
