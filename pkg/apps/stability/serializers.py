from rest_framework import serializers

from apps.braid.extraction import ORIENTATIONS, ClosureSpec
from apps.braid.serializers import BraidWordSerializer
from apps.core.serializers import PointField, RationalField, RealField
from apps.geometry.exceptions import LayoutError
from apps.geometry.layout import standard_layout
from apps.geometry.serializers import LinkLayoutSerializer
from apps.hamiltonian.builders import BumpSite, adjacent_swap

from .harness import REGIMES, ExperimentConfig, Perturbation


class BumpSiteSerializer(serializers.Serializer):
    center = PointField()
    inner = RationalField(positive=True)
    outer = RationalField(positive=True)

    def validate(self, attrs):
        if attrs['outer'] <= attrs['inner']:
            raise serializers.ValidationError('outer radius must exceed inner radius')
        return attrs


class PerturbationSerializer(serializers.Serializer):
    """{"site": {...}, "delta": "p/q"} or {"hamiltonian": DSL text}."""

    site = BumpSiteSerializer(required=False)
    delta = RationalField(required=False, positive=True)
    hamiltonian = serializers.CharField(required=False)

    def validate(self, attrs):
        site = attrs.get('site')
        try:
            attrs['perturbation'] = Perturbation(
                site=BumpSite(site['center'], site['inner'], site['outer']) if site else None,
                delta=attrs.get('delta'),
                hamiltonian=attrs.get('hamiltonian'),
            )
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


class ExperimentConfigSerializer(serializers.Serializer):
    """
    Experiment config JSON.

    The layout is either a full layout object or {"k", "eta"} for the
    standard row layout; the base Hamiltonian defaults to the half-turn of
    circles 1 and 2. The seed is mandatory.
    """

    layout = serializers.DictField(required=False)
    k = serializers.IntegerField(required=False, min_value=2)
    eta = RationalField(required=False, nonnegative=True, default='0')
    base_hamiltonian = serializers.CharField(required=False)
    seed = serializers.IntegerField(min_value=0)
    trials = serializers.IntegerField(min_value=0, default=0)
    perturbations = PerturbationSerializer(many=True, required=False, default=list)
    delta = RationalField(required=False, positive=True)
    regime = serializers.ChoiceField(choices=REGIMES, default='hull')
    flow_rtol = serializers.FloatField(required=False, min_value=0)
    flow_atol = serializers.FloatField(required=False, min_value=0)
    preservation_tol = serializers.FloatField(required=False, min_value=0)
    separation_margin = serializers.FloatField(required=False, min_value=0)
    projection_angle = serializers.FloatField(default=0.0)
    closure = serializers.ChoiceField(choices=ORIENTATIONS, default='shorter')

    def validate(self, attrs):
        if 'layout' in attrs:
            layout_serializer = LinkLayoutSerializer(data=attrs['layout'])
            if not layout_serializer.is_valid():
                raise serializers.ValidationError({'layout': layout_serializer.errors})
            layout = layout_serializer.save()
        elif 'k' in attrs:
            try:
                layout = standard_layout(attrs['k'], attrs['eta'])
            except LayoutError as exc:
                raise serializers.ValidationError(str(exc))
        else:
            raise serializers.ValidationError('Give a layout or k')
        try:
            base = attrs.get('base_hamiltonian') or str(adjacent_swap(layout, 1))
            attrs['config'] = ExperimentConfig(
                layout=layout,
                base_hamiltonian=base,
                seed=attrs['seed'],
                trials=attrs['trials'],
                perturbations=tuple(p['perturbation'] for p in attrs['perturbations']),
                delta=attrs.get('delta'),
                regime=attrs['regime'],
                flow_rtol=attrs.get('flow_rtol'),
                flow_atol=attrs.get('flow_atol'),
                preservation_tol=attrs.get('preservation_tol'),
                separation_margin=attrs.get('separation_margin'),
                projection_angle=attrs['projection_angle'],
                closure=ClosureSpec(attrs['closure']),
            )
        except (LayoutError, ValueError) as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data) -> ExperimentConfig:
        return validated_data['config']


class TrialRecordSerializer(serializers.Serializer):
    index = serializers.IntegerField()
    delta = RationalField(allow_null=True)
    hofer_lower = RealField()
    hofer_upper = RealField()
    below_threshold = serializers.BooleanField()
    braid_equal = serializers.BooleanField()
    certificate = serializers.BooleanField()
    base_word = BraidWordSerializer()
    perturbed_word = BraidWordSerializer()
    sigma_pair = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField()))


class StabilityReportSerializer(serializers.Serializer):
    seed = serializers.IntegerField()
    lambda_L = RationalField()
    epsilon_L = RationalField()
    threshold = RationalField()
    verdict = serializers.BooleanField()
    contradictions = serializers.ListField(child=serializers.IntegerField())
    records = TrialRecordSerializer(many=True)


class SweepEntrySerializer(serializers.Serializer):
    factor = RationalField()
    delta = RationalField()
    survived = serializers.BooleanField()
    hofer_upper = RealField(allow_null=True)
    reason = serializers.CharField(allow_blank=True)


class SweepReportSerializer(serializers.Serializer):
    exploratory = serializers.BooleanField()
    threshold = RationalField()
    largest_stable_factor = RationalField(allow_null=True)
    entries = SweepEntrySerializer(many=True)
