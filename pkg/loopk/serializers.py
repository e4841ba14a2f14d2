"""
Conversion between domain values and plain data (lists, dicts, str, int).

Coefficients are written as decimal strings so that arbitrarily large
integers survive JSON encoders limited to 64 bits.
"""
from typing import Any, Dict, List, Sequence

from .conv import StructConstTable
from .exceptions import ParseError
from .laurent import LaurentPoly
from .weyl import AffElem, WeylElem, WeylGroup, affine_from_word, reduced_word

__all__ = [
    "laurent_to_data",
    "laurent_from_data",
    "aff_to_data",
    "aff_from_data",
    "table_to_data",
    "table_from_data",
    "table_to_rows",
    "qk_table_to_data",
    "qk_table_to_rows",
    "q_monomial",
    "verdict_to_data",
    "failure_to_data",
    "scan_report_to_data",
    "scan_report_to_rows",
]


def laurent_to_data(f: LaurentPoly) -> List[List[Any]]:
    return [[list(exponent), str(coeff)] for exponent, coeff in f.items()]


def laurent_from_data(data: Sequence) -> LaurentPoly:
    terms = {}
    try:
        for exponent, coeff in data:
            terms[tuple(int(n) for n in exponent)] = int(coeff)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed Laurent polynomial data: {exc}")
    return LaurentPoly(terms)


def aff_to_data(w: AffElem) -> Dict[str, List[int]]:
    return {"word": reduced_word(w), "x": list(w.x.word), "q": list(w.q)}


def aff_from_data(group: WeylGroup, data: Dict[str, Any]) -> AffElem:
    """
    Rebuild from the reduced word and cross-check against the (x, q) pair.
    """
    try:
        w = affine_from_word(group, data["word"])
        expected = AffElem(group.from_word(data["x"]), tuple(data["q"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed affine element data: {exc}")
    if w != expected:
        raise ParseError(f"word {data['word']} does not multiply out to {expected!r}")
    return w


def table_to_data(table: StructConstTable) -> List[Dict[str, Any]]:
    return [
        {"w": aff_to_data(w), "length": w.length, "coeff": laurent_to_data(c)}
        for w, c in table.items()
    ]


def table_from_data(
    group: WeylGroup, data: Sequence[Dict[str, Any]]
) -> StructConstTable:
    entries = {}
    for row in data:
        try:
            w = aff_from_data(group, row["w"])
            entries[w] = laurent_from_data(row["coeff"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed table row: {exc}")
    return StructConstTable(entries)


def table_to_rows(table: StructConstTable) -> List[Dict[str, Any]]:
    """
    One flat row per key, for the table/csv/xlsx renderers.
    """
    return [
        {
            "word": ",".join(str(i) for i in reduced_word(w)),
            "x": repr(w.x),
            "q": str(list(w.q)),
            "length": w.length,
            "coefficient": str(c),
        }
        for w, c in table.items()
    ]


def q_monomial(eta: Sequence[int]) -> str:
    """
    q1^n1 q2^n2 ..., omitting zero exponents; "1" for eta = 0.
    """
    parts = [f"q{i}^{n}" for i, n in enumerate(eta, start=1) if n]
    return " ".join(parts) if parts else "1"


def _word(x: WeylElem) -> List[int]:
    return list(x.word)


def qk_table_to_data(
    x: WeylElem, y: WeylElem, depth: Sequence[int], table
) -> Dict[str, Any]:
    return {
        "x": _word(x),
        "y": _word(y),
        "depth": list(depth),
        "table": [
            {"z": _word(z), "eta": list(eta), "coeff": laurent_to_data(c)}
            for (z, eta), c in table.items()
        ],
    }


def qk_table_to_rows(table) -> List[Dict[str, Any]]:
    return [
        {
            "z": ",".join(str(i) for i in z.word),
            "eta": str(list(eta)),
            "q": q_monomial(eta),
            "coefficient": str(c),
        }
        for (z, eta), c in table.items()
    ]


def verdict_to_data(verdict) -> Dict[str, Any]:
    data = {"status": verdict.status.value, "witness": verdict.witness}
    if verdict.x_polynomial is not None:
        data["x_polynomial"] = [
            [list(exponent), str(coeff)]
            for exponent, coeff in sorted(verdict.x_polynomial.items())
        ]
    return data


def failure_to_data(failure) -> Dict[str, Any]:
    data = {
        "source": failure.source,
        "sign_exponent": failure.sign_exponent,
        "coefficient": failure.coefficient,
    }
    data.update(verdict_to_data(failure.verdict))
    return data


def scan_report_to_data(report) -> Dict[str, Any]:
    return {
        "kind": report.kind.value,
        "type": report.type_label,
        "bound": report.bound,
        "complete": report.complete,
        "pairs": report.pairs,
        "checked": report.checked,
        "passed": report.passed,
        "max_abs_coefficient": str(report.max_abs_coefficient),
        "skipped": [dict(item) for item in report.skipped],
        "failures": [failure_to_data(failure) for failure in report.failures],
    }


def scan_report_to_rows(report) -> List[Dict[str, Any]]:
    """
    The headline numbers first, then one row per FAIL.
    """
    rows = [
        {"field": "type", "value": report.type_label},
        {"field": "kind", "value": report.kind.value},
        {"field": "bound", "value": str(report.bound)},
        {"field": "complete", "value": str(report.complete).lower()},
        {"field": "pairs", "value": str(report.pairs)},
        {"field": "checked", "value": str(report.checked)},
        {"field": "passed", "value": str(report.passed)},
        {"field": "failed", "value": str(len(report.failures))},
        {"field": "max_abs_coefficient", "value": str(report.max_abs_coefficient)},
    ]
    for n, failure in enumerate(report.failures, start=1):
        rows.append({"field": f"FAIL {n}", "value": failure.describe()})
    return rows
