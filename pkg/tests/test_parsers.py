import io

import pytest

from loopk.exceptions import ParseError
from loopk.parsers import (
    JSONParser,
    parse_affine,
    parse_type_list,
    parse_vector,
    parse_word,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("", []),
        ("  ", []),
        ("0", [0]),
        ("0,1 0", [0, 1, 0]),
        ("[1, 2, 1]", [1, 2, 1]),
        ("2 ,1", [2, 1]),
    ],
)
def test_parse_word(text, expected):
    assert parse_word(text) == expected


@pytest.mark.parametrize("text", ["a", "1,-1", "1;2"])
def test_parse_word_rejects(text):
    with pytest.raises(ParseError):
        parse_word(text)


def test_parse_vector():
    assert parse_vector("-1,-2") == (-1, -2)
    assert parse_vector("(-3)") == (-3,)
    with pytest.raises(ParseError):
        parse_vector("")


def test_parse_affine():
    assert parse_affine("x=1,2;q=-1,-1") == ([1, 2], (-1, -1))
    assert parse_affine(" q=-2 ; x= ") == ([], (-2,))
    for text in ["x=1", "q=-1", "x=1;x=2", "y=1;q=0", "x=1;q="]:
        with pytest.raises(ParseError):
            parse_affine(text)


def test_parse_type_list():
    assert parse_type_list("a1, A2,,c2") == ["A1", "A2", "C2"]
    with pytest.raises(ParseError):
        parse_type_list(" , ")


def test_json_parser():
    parser = JSONParser()
    assert parser.parse(b'{"u": [0, 1]}') == {"u": [0, 1]}
    assert parser.parse(io.BytesIO(b"[1, 2]")) == [1, 2]
    with pytest.raises(ParseError) as info:
        parser.parse(b"{not json")
    assert info.value.detail.startswith("not JSON: ")
