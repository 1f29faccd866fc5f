from rest_framework import serializers

from apps.core.serializers import RationalField

from .complexes import Arrow, FilteredComplex, Generator
from .exceptions import MorphismError, ShapeError
from .morphisms import FilteredMorphism, MorphismEntry


class GeneratorSerializer(serializers.Serializer):
    name = serializers.CharField()
    action = RationalField()


class ArrowSerializer(serializers.Serializer):
    """One Z/2 coefficient; "src"/"dst" on the wire."""

    src = serializers.CharField(source='source')
    dst = serializers.CharField(source='target')
    i = serializers.IntegerField(min_value=0, default=0)
    j = serializers.IntegerField(min_value=0, default=0)


class ComplexSerializer(serializers.Serializer):
    """{"generators": [{"name", "action"}], "arrows": [{"src", "dst", "i", "j"}]}."""

    generators = GeneratorSerializer(many=True)
    arrows = ArrowSerializer(many=True, required=False, default=list)

    def create(self, validated_data) -> FilteredComplex:
        return FilteredComplex(
            tuple(Generator(g['name'], g['action']) for g in validated_data['generators']),
            tuple(Arrow(a['source'], a['target'], a['i'], a['j']) for a in validated_data['arrows']),
        )


class MorphismSerializer(serializers.Serializer):
    """
    {"shift": "p/q", "entries": [{"src", "dst", "i", "j"}]}.

    The source and target complexes come in through the serializer context.
    """

    shift = RationalField(nonnegative=True, default='0')
    entries = ArrowSerializer(many=True)

    def validate(self, attrs):
        try:
            attrs['morphism'] = FilteredMorphism(
                self.context['source'],
                self.context['target'],
                tuple(MorphismEntry(e['source'], e['target'], e['i'], e['j']) for e in attrs['entries']),
                attrs['shift'],
            )
        except KeyError:
            raise serializers.ValidationError('Morphisms need source and target complexes')
        except (MorphismError, ShapeError) as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data) -> FilteredMorphism:
        return validated_data['morphism']

    def to_representation(self, instance: FilteredMorphism):
        return {
            'shift': RationalField().to_representation(instance.shift),
            'entries': ArrowSerializer(instance.entries, many=True).data,
        }


class ComplexReportSerializer(serializers.Serializer):
    valid = serializers.BooleanField()
    violations = serializers.ListField(child=serializers.CharField())
    d00_squared_zero = serializers.BooleanField()
    d10_anticommutes = serializers.BooleanField()


class SkeletonReportSerializer(serializers.Serializer):
    forward_rank = serializers.IntegerField()
    backward_rank = serializers.IntegerField()
    composite_rank = serializers.IntegerField()
    homology_dim = serializers.IntegerField()
    composition_is_identity = serializers.BooleanField()
    injective = serializers.BooleanField()
    functorial = serializers.BooleanField()
    certified = serializers.BooleanField()
