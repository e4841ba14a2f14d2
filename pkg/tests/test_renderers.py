import io

import orjson
import pytest
from openpyxl import load_workbook

from loopk.exceptions import ArgumentError
from loopk.renderers import (
    CSVRenderer,
    JSONRenderer,
    TableRenderer,
    XLSXRenderer,
    get_renderer,
)

ROWS = [
    {"word": "1,0", "length": 2, "coefficient": "e^(2)"},
    {"word": "0,1,0", "length": 3, "coefficient": "-e^(2) + 1"},
]


def test_json_renderer_is_canonical():
    renderer = JSONRenderer()
    first = renderer.render({"b": 1, "a": [1, 2]})
    second = renderer.render({"a": [1, 2], "b": 1})
    assert first == second
    assert first.endswith(b"\n")
    assert orjson.loads(first) == {"a": [1, 2], "b": 1}
    assert renderer.render(None) == b""


def test_json_renderer_default_hook():
    renderer = JSONRenderer(options=orjson.OPT_SORT_KEYS)
    assert renderer.render({"s": {3, 1, 2}, "t": (1, 2)}) == b'{"s":[1,2,3],"t":[1,2]}'
    with pytest.raises(TypeError):
        renderer.render({"x": object()})


def test_table_renderer():
    text = TableRenderer().render(None, ROWS).decode()
    lines = text.splitlines()
    assert lines[0].split() == ["word", "length", "coefficient"]
    assert set(lines[1]) <= {"-", " "}
    assert lines[2].split() == ["1,0", "2", "e^(2)"]
    assert lines[3].startswith("0,1,0  3")
    assert TableRenderer().render(None, []) == b"(empty)\n"


def test_csv_renderer():
    content = CSVRenderer().render(None, ROWS)
    assert content.decode("utf-8").splitlines() == [
        "word,length,coefficient",
        '"1,0",2,e^(2)',
        '"0,1,0",3,-e^(2) + 1',
    ]


def test_tablize_uses_explicit_header():
    renderer = CSVRenderer()
    table = list(renderer.tablize(ROWS, header=["coefficient", "word", "missing"]))
    assert table[0] == ["coefficient", "word", "missing"]
    assert table[1] == ["e^(2)", "1,0", ""]
    assert list(renderer.tablize([], header=["a"])) == [["a"]]
    assert list(renderer.tablize([])) == []


def test_xlsx_renderer():
    content = XLSXRenderer().render(None, ROWS)
    sheet = load_workbook(io.BytesIO(content)).active
    assert [cell.value for cell in sheet[1]] == ["word", "length", "coefficient"]
    assert [cell.value for cell in sheet[3]] == ["0,1,0", 3, "-e^(2) + 1"]
    assert sheet.freeze_panes == "A2"
    assert sheet["A1"].font.b


@pytest.mark.parametrize(
    "fmt, cls",
    [
        ("table", TableRenderer),
        ("json", JSONRenderer),
        ("csv", CSVRenderer),
        ("xlsx", XLSXRenderer),
    ],
)
def test_get_renderer(fmt, cls):
    assert isinstance(get_renderer(fmt), cls)


def test_get_renderer_unknown_format():
    with pytest.raises(ArgumentError):
        get_renderer("yaml")
