import os

import orjson
import pytest
from openpyxl import load_workbook

from loopk import __version__
from loopk.cli import build_parser, main
from loopk.settings import loopk_settings


def run(capsysbinary, *argv):
    code = main(list(argv))
    out, err = capsysbinary.readouterr()
    return code, out, err


def run_json(capsysbinary, *argv):
    code, out, _ = run(capsysbinary, *argv, "--format", "json")
    assert code == 0
    return orjson.loads(out)


def test_conv_sl2_json(capsysbinary):
    data = run_json(capsysbinary, "conv", "--type", "A1", "--u", "0", "--v", "0")
    assert data["type"] == "A1"
    assert data["u"] == data["v"] == {"word": [0], "x": [1], "q": [-1]}
    assert [row["w"]["word"] for row in data["table"]] == [[1, 0], [0, 1, 0]]
    assert [row["coeff"] for row in data["table"]] == [
        [[[2], "1"]],
        [[[0], "1"], [[2], "-1"]],
    ]


def test_conv_sl2_table(capsysbinary):
    code, out, _ = run(capsysbinary, "conv", "--type", "A1", "--u", "0", "--v", "0")
    assert code == 0
    lines = out.decode().splitlines()
    assert lines[0].split() == ["word", "x", "q", "length", "coefficient"]
    assert lines[2].split() == ["1,0", "e", "[-1]", "2", "e^(2)"]
    assert lines[3].startswith("0,1,0")


def test_conv_with_identity(capsysbinary):
    data = run_json(capsysbinary, "conv", "--type", "A1", "--u", "", "--v", "0")
    assert [(row["w"]["word"], row["coeff"]) for row in data["table"]] == [
        ([0], [[[0], "1"]])
    ]


def test_conv_accepts_pairs_and_reduces_words(capsysbinary):
    expected = run_json(
        capsysbinary, "conv", "--type", "A1", "--u", "0", "--v", "1,0"
    )
    code, out, err = run(
        capsysbinary,
        "conv", "--type", "A1", "--u", "0,0,0", "--v", "x=;q=-1", "--format", "json",
    )
    assert code == 0
    assert b"not reduced" in err
    assert orjson.loads(out)["table"] == expected["table"]


def test_conv_a2_json_schema(capsysbinary):
    data = run_json(capsysbinary, "conv", "--type", "A2", "--u", "0", "--v", "0")
    assert set(data) == {"type", "u", "v", "table"}
    for row in data["table"]:
        assert set(row) == {"w", "length", "coeff"}
        assert len(row["w"]["word"]) == row["length"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["conv", "--type", "E9", "--u", "0", "--v", "0"],
        ["conv", "--type", "A1", "--u", "1", "--v", "0"],
        ["conv", "--type", "A1", "--u", "0", "--v", "a"],
        ["conv", "--type", "A1", "--u", "0", "--v", "0", "--format", "yaml"],
        ["conv", "--type", "A1", "--u", "0", "--v", "0", "--format", "xlsx"],
        ["conv", "--type", "A1", "--u", "1,0,1,0", "--v", "0", "--max-word-len", "3"],
        ["conv", "--type", "A1", "--u", "0", "--v", "0", "--jobs", "0"],
        ["qk", "--type", "A1", "--x", "1", "--y", "1", "--depth", "0"],
        ["qk", "--type", "A2", "--x", "3", "--y", "1"],
        ["scan", "--type", "A1"],
        ["expand", "--type", "A2", "--word", "0", "--weight", "1"],
    ],
)
def test_usage_errors_exit_2(capsysbinary, argv):
    code, out, _ = run(capsysbinary, *argv)
    assert code == 2
    assert out == b""


def test_version(capsys):
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_csv_output_file(capsysbinary, tmp_path):
    target = tmp_path / "table.csv"
    code, out, _ = run(
        capsysbinary,
        "conv", "--type", "A1", "--u", "0", "--v", "0",
        "--format", "csv", "--output", str(target),
    )
    assert code == 0
    assert out == b""
    assert target.read_text().splitlines() == [
        "word,x,q,length,coefficient",
        '"1,0",e,[-1],2,e^(2)',
        '"0,1,0",s1,[-2],3,-e^(2) + 1',
    ]


def test_xlsx_output_file(capsysbinary, tmp_path):
    target = tmp_path / "table.xlsx"
    code, _, _ = run(
        capsysbinary,
        "qk", "--type", "A1", "--x", "1", "--y", "1",
        "--format", "xlsx", "--output", str(target),
    )
    assert code == 0
    sheet = load_workbook(target).active
    assert [cell.value for cell in sheet[1]] == ["z", "eta", "q", "coefficient"]
    assert sheet.max_row == 3


@pytest.mark.parametrize("depth", [None, "-1", "-2"])
def test_qk_sl2(capsysbinary, depth):
    argv = ["qk", "--type", "A1", "--x", "1", "--y", "1"]
    if depth:
        argv += ["--depth", depth]
    data = run_json(capsysbinary, *argv)
    assert data["x"] == data["y"] == [1]
    assert data["table"] == [
        {"z": [], "eta": [1], "coeff": [[[2], "1"]]},
        {"z": [1], "eta": [0], "coeff": [[[0], "1"], [[2], "-1"]]},
    ]


def test_scan_sl2(capsysbinary):
    data = run_json(capsysbinary, "scan", "--type", "A1", "--max-len", "8")
    assert data["failures"] == []
    assert data["complete"] is True
    assert data["checked"] == data["passed"]


def test_scan_qk_summary(capsysbinary):
    code, out, _ = run(capsysbinary, "scan", "--type", "A1", "--kind", "qk")
    assert code == 0
    assert b"failed" in out
    assert b"FAIL 1" not in out


def test_roots_and_weyl(capsysbinary):
    roots = run_json(capsysbinary, "roots", "--type", "C2")
    assert roots["dual_coxeter_number"] == 3
    assert roots["highest_root"] == [2, 0]
    assert len(roots["positive_roots"]) == 4

    weyl = run_json(capsysbinary, "weyl", "--type", "A2")
    assert weyl["order"] == 6
    grassmannian = run_json(capsysbinary, "weyl", "--type", "A1", "--max-len", "3")
    assert [e["word"] for e in grassmannian["elements"]] == [[], [0], [1, 0], [0, 1, 0]]


def test_expand(capsysbinary):
    data = run_json(
        capsysbinary, "expand", "--type", "A1", "--word", "0,1", "--weight", "1"
    )
    assert [(e["v"]["word"], e["coeff"]) for e in data["expansion"]] == [
        ([], [[[1], "1"]]),
        ([0], [[[1], "-1"]]),
        ([1], [[[1], "-1"]]),
        ([0, 1], [[[1], "1"]]),
    ]
    pullback = run_json(capsysbinary, "expand", "--type", "A1", "--w", "")
    assert [e["v"]["word"] for e in pullback["expansion"]] == [[1]]


def test_result_cache(capsysbinary, monkeypatch, tmp_path):
    monkeypatch.setenv("LOOPK_CACHE_ENABLED", "true")
    loopk_settings.reload()
    cache = tmp_path / "results"
    argv = ["conv", "--type", "A1", "--u", "0", "--v", "1,0"]
    argv += ["--cache-dir", str(cache)]
    first = run(capsysbinary, *argv)
    assert "0__1-0.json" in os.listdir(cache / "A1")
    second = run(capsysbinary, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]

    argv = ["conv", "--type", "A1", "--u", "0", "--v", "0"]
    run(capsysbinary, *argv, "--cache-dir", str(cache), "--no-cache")
    assert "0__0.json" not in os.listdir(cache / "A1")


def test_log_file(capsysbinary, tmp_path):
    log_file = tmp_path / "logs" / "loopk.log"
    code, _, _ = run(
        capsysbinary, "roots", "--type", "A1", "-v", "--log-file", str(log_file)
    )
    assert code == 0
    assert log_file.exists()


def test_selftest_is_deterministic(capsysbinary):
    argv = ["selftest", "--type", "A1", "--format", "json"]
    first = run(capsysbinary, *argv)
    second = run(capsysbinary, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    report = orjson.loads(first[1])
    assert report["passed"] is True
    assert report["version"] == __version__
    assert {r["check"] for r in report["results"]} >= {"duality", "sl2-convolution"}


def test_selftest_selected_checks(capsysbinary):
    report = run_json(
        capsysbinary, "selftest", "--type", "A2", "--check", "duality,operators-on-zeta"
    )
    assert [r["check"] for r in report["results"]] == ["duality", "operators-on-zeta"]
    assert report["passed"] is True


def test_parser_lists_every_command():
    parser = build_parser()
    subparsers = next(a for a in parser._actions if a.dest == "command")
    assert set(subparsers.choices) == {
        "roots", "weyl", "conv", "qk", "scan", "selftest", "expand"
    }


def test_selftest_default_types(capsysbinary):
    report = run_json(capsysbinary, "selftest", "--check", "duality")
    assert [(r["type"], r["check"]) for r in report["results"]] == [
        ("A1", "duality"),
        ("A2", "duality"),
        ("C2", "duality"),
    ]
