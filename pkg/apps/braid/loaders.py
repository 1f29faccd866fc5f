"""
Braid words given on the command line as JSON integer lists.
"""
import json
from typing import Optional

from .words import BraidWord, parse_word


def load_word(text: str, k: Optional[int] = None) -> BraidWord:
    """
    Parse '[1, -2, 1]'; without k the word lives on max |letter| + 1 strands.

    Raises:
        ValueError: not a JSON list of nonzero integers
        StrandCountError: a letter does not exist on k strands
    """
    try:
        letters = json.loads(text)
    except ValueError as exc:
        raise ValueError(f'Braid words are JSON integer lists, got {text!r}') from exc
    if not isinstance(letters, list):
        raise ValueError(f'Braid words are JSON integer lists, got {text!r}')
    if k is None:
        k = max([abs(v) for v in letters if isinstance(v, int)] + [0]) + 1
    return parse_word(k, letters)
