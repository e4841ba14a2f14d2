from io import BytesIO
from itertools import chain
from typing import Any, Dict, Iterable, List, Optional

import orjson
import unicodecsv as csv
from openpyxl import Workbook
from openpyxl.styles import Alignment, Font, PatternFill

from .choices import OutputFormat
from .exceptions import ArgumentError
from .settings import loopk_settings

__all__ = [
    "JSONRenderer",
    "TableRenderer",
    "CSVRenderer",
    "XLSXRenderer",
    "get_renderer",
]


class JSONRenderer:
    """
    Renderer which serializes to JSON.
    Uses the Rust-backed orjson library; keys are sorted so equal data always
    gives equal bytes.
    """

    format = "json"
    binary = False

    def __init__(self, options: Optional[int] = None):
        self.options = loopk_settings.ORJSON_OPTIONS if options is None else options

    @staticmethod
    def default(obj: Any) -> Any:
        """
        When orjson doesn't recognize an object type for serialization it passes
        that object to this function which then converts the object to its
        native Python equivalent.
        """
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        if hasattr(obj, "value"):
            return obj.value
        if hasattr(obj, "__iter__"):
            return list(obj)
        raise TypeError(f"{type(obj).__name__} is not JSON serializable")

    def render(self, data: Any, rows: Optional[List[Dict]] = None) -> bytes:
        if data is None:
            return b""
        return orjson.dumps(data, default=self.default, option=self.options)


class BaseExportRenderer:
    """
    Renders a list of flat dicts, one per row, as a table.
    """

    header: Optional[List[str]] = None
    charset: Optional[str] = None
    binary = True

    def render(self, data: Any, rows: Optional[List[Dict]] = None) -> bytes:
        if rows is None:
            return bytes()
        table = self.tablize(rows, header=self.header)
        return self.get_file_content(table, charset=self.charset)

    def get_file_content(self, table, charset=None) -> bytes:
        raise NotImplementedError

    def get_value(self, item, key):
        value = item.get(key, "")
        if isinstance(value, (dict, list)):
            return str(value)

        return value

    def tablize(self, data: List[Dict], header: Optional[List[str]] = None):
        """
        Convert a list of data into a table: the header, then one row per item.

        If no header is provided it is taken from the keys of the first item.
        """
        if data:
            data = self.flatten_data(data)
            if not header:
                first_data = next(data)
                header = list(first_data.keys())
                data = chain([first_data], data)

            yield header
            for item in data:
                yield [self.get_value(item, key) for key in header]
        elif header:
            yield header

    def flatten_data(self, data: Iterable[Dict]):
        for item in data:
            yield dict(item)


class TableRenderer(BaseExportRenderer):
    """
    Aligned plain-text columns for the terminal.
    """

    format = "table"
    binary = False

    def get_file_content(self, table, charset=None) -> bytes:
        rows = [[str(cell) for cell in row] for row in table]
        if not rows:
            return b"(empty)\n"
        widths = [max(len(row[n]) for row in rows) for n in range(len(rows[0]))]
        lines = []
        for index, row in enumerate(rows):
            line = "  ".join(cell.ljust(w) for cell, w in zip(row, widths))
            lines.append(line.rstrip())
            if index == 0:
                lines.append("  ".join("-" * w for w in widths))
        return ("\n".join(lines) + "\n").encode("utf-8")


class CSVRenderer(BaseExportRenderer):
    """
    Renderer which serializes to CSV
    """

    format = "csv"
    binary = False

    def __init__(self, charset: Optional[str] = None):
        self.charset = charset or loopk_settings.CSV_CHARSET

    def get_file_content(self, table, charset=None) -> bytes:
        output = BytesIO()
        writer = csv.writer(output, encoding=charset, lineterminator="\n")
        for row in table:
            writer.writerow(row)

        return output.getvalue()


class XLSXRenderer(BaseExportRenderer):
    """
    Renderer for Excel spreadsheet open data format (xlsx).
    """

    format = "xlsx"
    default_export_style = {
        "header_font": Font(b=True),
        "header_fill": PatternFill("solid", start_color="87CEFA"),
        "header_alignment": Alignment(vertical="center"),
        "header_height": 20,
        "freeze_panes": "A2",
    }

    def __init__(self, export_style: Optional[Dict] = None):
        self.export_style = export_style or self.default_export_style

    def get_file_content(self, table, charset=None) -> bytes:
        style = self.export_style
        output = BytesIO()
        workbook = Workbook()
        sheet = workbook.active

        for row in table:
            sheet.append(list(row))

        for cell in sheet["1:1"]:
            cell.font = style["header_font"]
            cell.fill = style["header_fill"]
            cell.alignment = style["header_alignment"]

        sheet.row_dimensions[1].height = style["header_height"]
        sheet.freeze_panes = style.get("freeze_panes", "A2")

        sheet.print_title_rows = "1:1"
        workbook.save(output)

        return output.getvalue()


_RENDERERS = {
    OutputFormat.TABLE: TableRenderer,
    OutputFormat.JSON: JSONRenderer,
    OutputFormat.CSV: CSVRenderer,
    OutputFormat.XLSX: XLSXRenderer,
}


def get_renderer(output_format) -> Any:
    try:
        return _RENDERERS[OutputFormat(output_format)]()
    except ValueError:
        raise ArgumentError(
            f"unknown format {output_format!r}; choose from "
            + ", ".join(f.value for f in OutputFormat)
        )
