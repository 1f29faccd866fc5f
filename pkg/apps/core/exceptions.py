"""
Base exception shared by every braidflow app.
"""


class BraidflowError(Exception):
    """Root of all domain errors; commands turn these into exit code 1."""
