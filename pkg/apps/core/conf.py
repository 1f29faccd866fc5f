"""
Access to the BRAIDFLOW_CONFIG settings dict.
"""
from typing import Any

from django.conf import settings


def get_config() -> dict:
    """Return the project-wide numerical configuration."""
    return settings.BRAIDFLOW_CONFIG


def option(value: Any, key: str) -> Any:
    """Return ``value`` unless it is None, else the configured default for ``key``."""
    if value is not None:
        return value
    return settings.BRAIDFLOW_CONFIG[key]
