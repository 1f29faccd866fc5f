"""
Complexes and morphisms from JSON files.
"""
import json
from pathlib import Path

from .complexes import FilteredComplex
from .exceptions import MorphismError, ShapeError
from .morphisms import FilteredMorphism
from .serializers import ComplexSerializer, MorphismSerializer


def _read(path: str, what: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ShapeError(f'Cannot read {what} {path}: {exc}') from exc


def complex_from_data(data: dict) -> FilteredComplex:
    serializer = ComplexSerializer(data=data)
    if not serializer.is_valid():
        raise ShapeError(f'Invalid complex: {serializer.errors}')
    return serializer.save()


def complex_to_data(c: FilteredComplex) -> dict:
    return ComplexSerializer(c).data


def load_complex(path: str) -> FilteredComplex:
    return complex_from_data(_read(path, 'complex'))


def load_morphism(path: str, source: FilteredComplex, target: FilteredComplex) -> FilteredMorphism:
    serializer = MorphismSerializer(data=_read(path, 'morphism'), context={'source': source, 'target': target})
    if not serializer.is_valid():
        raise MorphismError(f'Invalid morphism: {serializer.errors}')
    return serializer.save()
