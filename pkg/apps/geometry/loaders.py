"""
Loading layouts from JSON files or (k, eta) flags.
"""
import json
from pathlib import Path
from typing import Optional

from apps.core.numbers import parse_rational

from .exceptions import LayoutError
from .layout import LinkLayout, standard_layout
from .serializers import LinkLayoutSerializer


def layout_from_data(data: dict) -> LinkLayout:
    serializer = LinkLayoutSerializer(data=data)
    if not serializer.is_valid():
        raise LayoutError(f'Invalid layout: {serializer.errors}')
    return serializer.save()


def load_layout(path: Optional[str] = None, k: Optional[int] = None, eta: Optional[str] = None) -> LinkLayout:
    """
    Layout from a JSON file, or the standard row layout for (k, eta).

    Args:
        path: Layout JSON file (takes precedence)
        k: Component count for the standard layout
        eta: Rational eta for the standard layout (default 0)
    """
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, ValueError) as exc:
            raise LayoutError(f'Cannot read layout {path}: {exc}') from exc
        return layout_from_data(data)
    if k is None:
        raise LayoutError('Provide a layout file or --k')
    return standard_layout(k, parse_rational(eta if eta is not None else '0'))


def layout_to_data(layout: LinkLayout) -> dict:
    return LinkLayoutSerializer(layout).data
