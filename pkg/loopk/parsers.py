import re
from typing import Any, List, Tuple

import orjson

from .exceptions import ParseError

__all__ = ["JSONParser", "parse_word", "parse_vector", "parse_affine", "parse_type_list"]

_SEPARATORS = re.compile(r"[\s,]+")


class JSONParser:
    """
    Loads cached result documents.
    """

    def parse(self, stream: Any) -> Any:
        """
        :param stream: bytes, str, or an open binary file.
        """
        raw = stream.read() if hasattr(stream, "read") else stream
        try:
            return orjson.loads(raw)
        except (orjson.JSONDecodeError, TypeError) as exc:
            raise ParseError(f"not JSON: {exc}")


def _integers(text: str, what: str) -> List[int]:
    text = text.strip().strip("[]()")
    if not text:
        return []
    try:
        return [int(part) for part in _SEPARATORS.split(text) if part]
    except ValueError:
        raise ParseError(f"{what} {text!r}: expected comma or space separated integers")


def parse_word(text: str) -> List[int]:
    """
    "0,1 0" -> [0, 1, 0]; the empty string is the identity.
    """
    word = _integers(text, "word")
    if any(i < 0 for i in word):
        raise ParseError(f"word {text!r} has a negative index")
    return word


def parse_vector(text: str) -> Tuple[int, ...]:
    vector = _integers(text, "vector")
    if not vector:
        raise ParseError("vector must not be empty")
    return tuple(vector)


def parse_affine(text: str) -> Tuple[List[int], Tuple[int, ...]]:
    """
    "x=1,2;q=-1,-1" -> ([1, 2], (-1, -1)).
    """
    fields = {}
    for part in text.split(";"):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("x", "q") or key in fields:
            raise ParseError(f"affine element {text!r}: expected 'x=<word>;q=<vector>'")
        fields[key] = value
    if set(fields) != {"x", "q"}:
        raise ParseError(f"affine element {text!r}: both x and q are required")
    return parse_word(fields["x"]), parse_vector(fields["q"])


def parse_type_list(text: str) -> List[str]:
    labels = [label.strip().upper() for label in text.split(",") if label.strip()]
    if not labels:
        raise ParseError("at least one type label is required")
    return labels
