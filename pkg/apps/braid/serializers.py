from rest_framework import serializers

from .exceptions import StrandCountError
from .garside import NormalForm, normal_form_from_json, normal_form_to_json
from .words import BraidWord, parse_word, word_to_json


class BraidWordSerializer(serializers.Serializer):
    """Braid word as {"k": int, "letters": [sign * index, ...]}."""

    k = serializers.IntegerField(min_value=1)
    letters = serializers.ListField(child=serializers.IntegerField())

    def validate(self, attrs):
        try:
            attrs['word'] = parse_word(attrs['k'], attrs['letters'])
        except (StrandCountError, ValueError) as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data) -> BraidWord:
        return validated_data['word']

    def to_representation(self, instance: BraidWord):
        return {'k': instance.k, 'letters': word_to_json(instance)}


class NormalFormSerializer(serializers.Serializer):
    """{"k": int, "inf": int, "factors": [[one-line permutation], ...]}."""

    k = serializers.IntegerField(min_value=1)
    inf = serializers.IntegerField()
    factors = serializers.ListField(child=serializers.ListField(child=serializers.IntegerField(min_value=1)))

    def validate(self, attrs):
        try:
            attrs['form'] = normal_form_from_json(attrs['k'], attrs)
        except (StrandCountError, ValueError) as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data) -> NormalForm:
        return validated_data['form']

    def to_representation(self, instance: NormalForm):
        return {'k': instance.k, **normal_form_to_json(instance)}
