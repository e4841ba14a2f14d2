"""
Command-line front end: `loopk <command> [options]`.
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .cartan import build_root_system
from .choices import ExitCode, OutputFormat, ScanKind
from .constants import ACCEPTANCE_TYPES
from .conv import ConvolutionStats, convolve, line_bundle_expansion, pullback_expansion
from .exceptions import ArgumentError, ConfigurationError, exception_handler
from .kclass import build_context
from .parsers import parse_affine, parse_type_list, parse_vector, parse_word
from .positivity import exit_code_for, scan_convolution, scan_qk
from .qk import check_depth, default_depth, qk_product
from .renderers import get_renderer
from .selftest import run_selftest
from .serializers import (
    aff_to_data,
    laurent_to_data,
    qk_table_to_data,
    qk_table_to_rows,
    scan_report_to_data,
    scan_report_to_rows,
    table_to_data,
    table_to_rows,
)
from .settings import loopk_settings
from .storages import get_storage
from .utils import MakeFileHandler, format_word
from .weyl import (
    AffElem,
    affine_from_word,
    enumerate_grassmannian,
    is_minimal,
    reduced_word,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Config:
    type_label: str
    length_cap: int
    depth: Optional[Tuple[int, ...]]
    cache_dir: str
    cache_enabled: bool
    output_format: OutputFormat
    jobs: int
    output: Optional[str] = None
    debug: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "Config":
        try:
            output_format = OutputFormat(args.format or loopk_settings.OUTPUT_FORMAT)
        except ValueError:
            raise ConfigurationError(f"unknown output format {args.format!r}")
        return cls(
            type_label=(args.type or loopk_settings.TYPE_LABEL).strip().upper(),
            length_cap=(
                args.max_word_len
                if args.max_word_len is not None
                else loopk_settings.LENGTH_CAP
            ),
            depth=parse_vector(args.depth) if getattr(args, "depth", None) else None,
            cache_dir=args.cache_dir or loopk_settings.CACHE_DIR,
            cache_enabled=loopk_settings.CACHE_ENABLED and not args.no_cache,
            output_format=output_format,
            jobs=args.jobs if args.jobs is not None else loopk_settings.JOBS,
            output=args.output,
            debug=args.debug or loopk_settings.DEBUG,
        )

    def validate(self, command: str) -> "Config":
        """
        Caps and worker counts must be positive; a depth given to a quantum
        command must be strictly antidominant.
        """
        if self.length_cap <= 0:
            raise ConfigurationError(
                f"--max-word-len must be positive, got {self.length_cap}"
            )
        if self.jobs <= 0:
            raise ConfigurationError(f"--jobs must be positive, got {self.jobs}")
        if self.output_format is OutputFormat.XLSX and not self.output:
            raise ConfigurationError("xlsx output needs --output")
        if self.depth is not None and command in ("qk", "scan"):
            check_depth(build_root_system(self.type_label), self.depth, "--depth")
        return self

    def storage(self):
        return get_storage(self.cache_dir, enabled=self.cache_enabled)


def _parse_element(ctx, text: str, name: str) -> AffElem:
    """
    A reduced word ("0,1") or an (x, q) pair ("x=1;q=-1"). Non-reduced
    words are reduced with a warning.
    """
    group = ctx.group
    if "=" in text:
        x_word, q = parse_affine(text)
        if len(q) != ctx.rs.rank:
            raise ArgumentError(f"{name}: q must have {ctx.rs.rank} coordinates")
        return AffElem(group.from_word(x_word), q)
    word = parse_word(text)
    w = affine_from_word(group, word)
    if len(word) != w.length:
        logger.warning(
            "%s = %s is not reduced; using %s", name, format_word(word), reduced_word(w)
        )
    return w


def _parse_finite(ctx, text: Optional[str], name: str):
    word = parse_word(text or "")
    for i in word:
        if not 1 <= i <= ctx.rs.rank:
            raise ArgumentError(
                f"{name}: finite index {i} out of range 1..{ctx.rs.rank}"
            )
    x = ctx.group.from_word(word)
    if len(word) != x.length:
        logger.warning(
            "%s = %s is not reduced; using %s", name, format_word(word), x.word
        )
    return x


def _emit(config: Config, data: Any, rows: List[Dict]) -> None:
    renderer = get_renderer(config.output_format)
    payload = renderer.render(data, rows)
    if config.output:
        with open(config.output, "wb") as fh:
            fh.write(payload)
        logger.info("wrote %s", config.output)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


# commands


def cmd_roots(config: Config, args: argparse.Namespace) -> int:
    rs = build_root_system(config.type_label)
    roots = list(zip(rs.positive_roots, rs.positive_coroots, rs.root_coordinates))
    data = {
        "type": rs.type_label,
        "cartan_matrix": [list(row) for row in rs.cartan_matrix],
        "highest_root": list(rs.highest_root),
        "theta_coroot": list(rs.theta_coroot),
        "rho": list(rs.rho),
        "dual_coxeter_number": rs.dual_coxeter_number,
        "positive_roots": [
            {"root": list(a), "coroot": list(c), "simple_coordinates": list(n)}
            for a, c, n in roots
        ],
    }
    rows = [
        {
            "root": str(list(a)),
            "simple_coordinates": str(list(n)),
            "coroot": str(list(c)),
        }
        for a, c, n in roots
    ]
    _emit(config, data, rows)
    return ExitCode.SUCCESS


def cmd_weyl(config: Config, args: argparse.Namespace) -> int:
    ctx = build_context(config.type_label)
    group = ctx.group
    if args.max_len is None:
        elements = [
            {"index": x.index, "word": list(x.word), "length": x.length} for x in group
        ]
        rows = [dict(e, word=format_word(e["word"])) for e in elements]
        data = {"type": group.type_label, "order": group.order, "elements": elements}
    else:
        grassmannian = enumerate_grassmannian(group, args.max_len)
        elements = [dict(aff_to_data(w), length=w.length) for w in grassmannian]
        rows = [
            {
                "word": format_word(e["word"]),
                "x": format_word(e["x"]),
                "q": str(e["q"]),
                "length": e["length"],
            }
            for e in elements
        ]
        data = {"type": group.type_label, "max_len": args.max_len, "elements": elements}
    _emit(config, data, rows)
    return ExitCode.SUCCESS


def cmd_conv(config: Config, args: argparse.Namespace) -> int:
    ctx = build_context(config.type_label)
    u = _parse_element(ctx, args.u or "", "u")
    v = _parse_element(ctx, args.v or "", "v")
    for name, w in (("u", u), ("v", v)):
        if not is_minimal(w):
            raise ArgumentError(
                f"{name} = {reduced_word(w)} is not in W' "
                "(it has a finite right descent)"
            )
    stats = ConvolutionStats()
    table = convolve(
        ctx, u, v, length_cap=config.length_cap, stats=stats, storage=config.storage()
    )
    logger.info("convolution stats: %s", stats.as_dict())
    data = {
        "type": ctx.type_label,
        "u": aff_to_data(u),
        "v": aff_to_data(v),
        "table": table_to_data(table),
    }
    _emit(config, data, table_to_rows(table))
    return ExitCode.SUCCESS


def cmd_qk(config: Config, args: argparse.Namespace) -> int:
    ctx = build_context(config.type_label)
    x = _parse_finite(ctx, args.x, "x")
    y = _parse_finite(ctx, args.y, "y")
    depth = config.depth or default_depth(ctx.rs)
    depth2 = parse_vector(args.depth2) if args.depth2 else None
    table = qk_product(
        ctx, x, y, depth, depth2, length_cap=config.length_cap, storage=config.storage()
    )
    data = qk_table_to_data(x, y, depth, table)
    if depth2 is not None:
        data["depth2"] = list(depth2)
    _emit(config, data, qk_table_to_rows(table))
    return ExitCode.SUCCESS


def cmd_scan(config: Config, args: argparse.Namespace) -> int:
    cache_dir = config.cache_dir if config.cache_enabled else None
    if ScanKind(args.kind) is ScanKind.CONVOLUTION:
        if args.max_len is None:
            raise ArgumentError("scan --kind convolution needs --max-len")
        report = scan_convolution(
            config.type_label,
            args.max_len,
            jobs=config.jobs,
            length_cap=config.length_cap,
            cache_dir=cache_dir,
        )
    else:
        report = scan_qk(
            config.type_label,
            max_word_len=config.length_cap,
            depth=config.depth,
            jobs=config.jobs,
            cache_dir=cache_dir,
        )
    _emit(config, scan_report_to_data(report), scan_report_to_rows(report))
    if not report.complete:
        logger.warning("scan incomplete: %d pairs skipped", len(report.skipped))
    return exit_code_for(report)


def cmd_selftest(config: Config, args: argparse.Namespace) -> int:
    labels = parse_type_list(args.type) if args.type else list(ACCEPTANCE_TYPES)
    only = [name.strip() for name in args.check.split(",")] if args.check else None
    report = run_selftest(labels, only=only)
    rows = [
        {
            "type": r.type_label,
            "check": r.name,
            "result": "PASS" if r.passed else "FAIL",
            "problems": "; ".join(r.problems),
        }
        for r in report.results
    ]
    _emit(config, report.as_dict(), rows)
    return ExitCode.SUCCESS if report.passed else ExitCode.INTEGRITY


def cmd_expand(config: Config, args: argparse.Namespace) -> int:
    ctx = build_context(config.type_label)
    weight = parse_vector(args.weight) if args.weight else ctx.rs.zero()
    if len(weight) != ctx.rs.rank:
        raise ArgumentError(f"--weight must have {ctx.rs.rank} coordinates")
    if args.w is not None:
        w = _parse_element(ctx, args.w, "w")
        expansion = pullback_expansion(ctx, w, weight)
    else:
        expansion = line_bundle_expansion(ctx, parse_word(args.word or ""), weight)
    ordered = sorted(
        expansion.items(), key=lambda kv: (kv[0].length, reduced_word(kv[0]))
    )
    data = {
        "type": ctx.type_label,
        "weight": list(weight),
        "expansion": [
            {"v": aff_to_data(v), "coeff": laurent_to_data(c)} for v, c in ordered
        ],
    }
    rows = [
        {"v": format_word(reduced_word(v)), "length": v.length, "coefficient": str(c)}
        for v, c in ordered
    ]
    _emit(config, data, rows)
    return ExitCode.SUCCESS


COMMANDS = {
    "roots": cmd_roots,
    "weyl": cmd_weyl,
    "conv": cmd_conv,
    "qk": cmd_qk,
    "scan": cmd_scan,
    "selftest": cmd_selftest,
    "expand": cmd_expand,
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", help="root system type, e.g. A1, A2, C2")
    common.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        help="output format (default: table)",
    )
    common.add_argument("--output", help="write output to this file instead of stdout")
    common.add_argument(
        "--max-word-len",
        type=int,
        help="longest reduced word the engine may expand (env LOOPK_LENGTH_CAP)",
    )
    common.add_argument(
        "--cache-dir", help="result cache location (env LOOPK_CACHE_DIR)"
    )
    common.add_argument(
        "--no-cache", action="store_true", help="disable the result cache"
    )
    common.add_argument("--jobs", type=int, help="worker processes for scans")
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG"
    )
    common.add_argument("--log-file", help="also write log records to this file")
    common.add_argument(
        "--debug", action="store_true", help="print tracebacks on errors"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="loopk",
        description="Structure constants of equivariant K-homology of affine "
        "Grassmannians and quantum K-theory of flag varieties.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("roots", parents=[common], help="root system data")

    weyl = sub.add_parser("weyl", parents=[common], help="Weyl group or W' elements")
    weyl.add_argument("--max-len", type=int, help="list W' up to this length instead")

    conv = sub.add_parser(
        "conv", parents=[common], help="convolution product of u and v"
    )
    conv.add_argument("--u", help='reduced word "0,1" or pair "x=1;q=-1"')
    conv.add_argument("--v", help='reduced word "0,1" or pair "x=1;q=-1"')

    qk = sub.add_parser("qk", parents=[common], help="quantum K product of x and y")
    qk.add_argument("--x", help="finite reduced word")
    qk.add_argument("--y", help="finite reduced word")
    qk.add_argument("--depth", help="strictly antidominant coroot vector, e.g. -1,-1")
    qk.add_argument("--depth2", help="depth of the second factor (default: --depth)")

    scan = sub.add_parser("scan", parents=[common], help="positivity scan")
    scan.add_argument(
        "--kind",
        choices=[k.value for k in ScanKind],
        default=ScanKind.CONVOLUTION.value,
    )
    scan.add_argument("--max-len", type=int, help="bound on l(u) + l(v)")
    scan.add_argument("--depth", help="depth for --kind qk")

    selftest = sub.add_parser(
        "selftest", parents=[common], help="golden and property checks"
    )
    selftest.add_argument("--check", help="comma separated check names")

    expand = sub.add_parser("expand", parents=[common], help="line bundle expansions")
    expand.add_argument("--word", help="word of the product z_{i1} ... z_{in}")
    expand.add_argument("--w", help="element of W' whose pull-back to expand")
    expand.add_argument("--weight", help="twisting weight in fundamental weights")
    return parser


def configure_logging(verbosity: int, log_file: Optional[str] = None) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    formatter = logging.Formatter(loopk_settings.LOG_FORMAT)
    root = logging.getLogger("loopk")
    root.handlers.clear()
    root.setLevel(level)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)
    root.addHandler(handler)
    if log_file:
        file_handler = MakeFileHandler(log_file)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and --version exit 0; argparse errors exit 2
        return int(ExitCode.SUCCESS) if not exc.code else int(ExitCode.USAGE)

    configure_logging(args.verbose, args.log_file)
    debug = args.debug
    try:
        config = Config.from_args(args)
        debug = config.debug
        config.validate(args.command)
        return int(COMMANDS[args.command](config, args))
    except Exception as exc:
        return exception_handler(exc, {"command": args.command, "debug": debug})
