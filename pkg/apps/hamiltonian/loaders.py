"""
Reading Hamiltonians given inline or as @file on the command line.
"""
from pathlib import Path

from .expressions import HamiltonianExpr
from .parser import parse


def read_hamiltonian_text(value: str) -> str:
    """Inline DSL text, or the contents of a file when value starts with '@'.

    Raises:
        OSError: the referenced file cannot be read
    """
    if value.startswith('@'):
        return Path(value[1:]).read_text().strip()
    return value


def load_hamiltonian(value: str) -> HamiltonianExpr:
    return parse(read_hamiltonian_text(value))
