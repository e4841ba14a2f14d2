"""
The positivity predicate on signed structure constants, and systematic scans.

A constant c with sign exponent s passes when (-1)^s c is a polynomial in
x_i = e^{alpha_i} - 1 with non-negative integer coefficients. A FAIL is a
report outcome carrying full provenance, never an exception.
"""
import logging
import multiprocessing
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from .cartan import RootSystem
from .choices import ExitCode, ScanKind, Verdict
from .conv import convolve
from .exceptions import LengthCapExceeded
from .kclass import build_context
from .laurent import LaurentPoly, sum_polys
from .qk import check_depth, default_depth, qk_product
from .storages import ResultStorage
from .weyl import AffElem, WeylElem, enumerate_grassmannian, reduced_word

__all__ = [
    "PositivityVerdict",
    "Failure",
    "ScanReport",
    "check_positive",
    "reconstruct",
    "scan_convolution",
    "scan_qk",
    "exit_code_for",
]

logger = logging.getLogger(__name__)

XPolynomial = Dict[Tuple[int, ...], int]


@dataclass(frozen=True)
class PositivityVerdict:
    status: Verdict
    witness: Optional[Dict[str, Any]] = None
    x_polynomial: Optional[XPolynomial] = None

    @property
    def passed(self) -> bool:
        return self.status.passed


@lru_cache(maxsize=None)
def _binomial_expansion(
    exponents: Tuple[int, ...]
) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """
    prod (1 + x_i)^{n_i} as (x-exponent, coefficient) pairs.
    """
    xs = sympy.symbols(f"x1:{len(exponents) + 1}")
    expr = sympy.Integer(1)
    for x, n in zip(xs, exponents):
        expr *= (1 + x) ** n
    poly = sympy.Poly(expr, *xs)
    return tuple(
        (tuple(int(m) for m in monom), int(coeff)) for monom, coeff in poly.terms()
    )


def check_positive(
    rs: RootSystem, c: LaurentPoly, sign_exponent: int
) -> PositivityVerdict:
    """
    Decide whether (-1)^sign_exponent * c lies in Z_+[e^{alpha_i} - 1].

    :return: PASS with the x-polynomial, or a FAIL verdict with the offending
        e-monomial (not in the ring) or x-monomial (negative coefficient).
    """
    signed = -c if sign_exponent % 2 else c
    xpoly: XPolynomial = {}
    for exponent, coeff in signed.items():
        coords = rs.to_root_coordinates(exponent)
        if coords is None or any(n < 0 for n in coords):
            return PositivityVerdict(
                Verdict.FAIL_NOT_IN_RING,
                witness={
                    "exponent": list(exponent),
                    "root_coordinates": None if coords is None else list(coords),
                    "coefficient": str(coeff),
                },
            )
        for monom, binom in _binomial_expansion(coords):
            xpoly[monom] = xpoly.get(monom, 0) + coeff * binom

    xpoly = {m: a for m, a in xpoly.items() if a}
    negative = sorted((m, a) for m, a in xpoly.items() if a < 0)
    if negative:
        monom, coeff = negative[0]
        return PositivityVerdict(
            Verdict.FAIL_NEGATIVE_COEFF,
            witness={"x_monomial": list(monom), "coefficient": str(coeff)},
        )
    return PositivityVerdict(Verdict.PASS, x_polynomial=xpoly)


def reconstruct(rs: RootSystem, xpoly: XPolynomial) -> LaurentPoly:
    """
    Substitute x_i = e^{alpha_i} - 1 back into an x-polynomial.
    """
    rank = rs.rank
    one = LaurentPoly.one(rank)
    xs = [LaurentPoly.monomial(rs.simple_root(i)) - one for i in range(1, rank + 1)]
    parts = []
    for monom, coeff in xpoly.items():
        term = LaurentPoly.constant(coeff, rank)
        for x, n in zip(xs, monom):
            if n:
                term = term * x ** n
        parts.append(term)
    return sum_polys(parts)


@dataclass
class Failure:
    """
    A single FAIL with everything needed to reproduce it.
    """

    source: Dict[str, Any]
    sign_exponent: int
    coefficient: str
    status: Verdict
    witness: Dict[str, Any]

    @property
    def verdict(self) -> PositivityVerdict:
        return PositivityVerdict(self.status, witness=self.witness)

    def describe(self) -> str:
        where = " ".join(f"{k}={v}" for k, v in self.source.items())
        return (
            f"{self.status.value}: {where} "
            f"sign={self.sign_exponent} c={self.coefficient}"
        )


@dataclass
class ScanReport:
    kind: ScanKind
    type_label: str
    bound: Any
    pairs: int = 0
    checked: int = 0
    passed: int = 0
    max_abs_coefficient: int = 0
    complete: bool = True
    skipped: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, outcome: Dict[str, Any]) -> None:
        self.pairs += 1
        self.checked += outcome["checked"]
        self.passed += outcome["passed"]
        self.max_abs_coefficient = max(self.max_abs_coefficient, outcome["max_abs"])
        if outcome.get("skipped"):
            self.complete = False
            self.skipped.append(outcome["skipped"])
        self.failures.extend(outcome["failures"])


def exit_code_for(report: ScanReport) -> ExitCode:
    return ExitCode.POSITIVITY_FAIL if report.failures else ExitCode.SUCCESS


def _check_all(rs, constants, make_source) -> Dict[str, Any]:
    outcome = {"checked": 0, "passed": 0, "max_abs": 0, "failures": []}
    for key, coeff, sign_exponent in constants:
        outcome["checked"] += 1
        outcome["max_abs"] = max(outcome["max_abs"], coeff.max_abs_coefficient())
        verdict = check_positive(rs, coeff, sign_exponent)
        if verdict.passed:
            outcome["passed"] += 1
            continue
        failure = Failure(
            source=make_source(key),
            sign_exponent=sign_exponent,
            coefficient=str(coeff),
            status=verdict.status,
            witness=verdict.witness,
        )
        logger.error("positivity FAIL %s", failure.describe())
        outcome["failures"].append(failure)
    return outcome


_worker: Dict[str, Any] = {}


def _init_worker(type_label: str, length_cap: Optional[int], cache_dir: Optional[str]):
    _worker["ctx"] = build_context(type_label)
    _worker["length_cap"] = length_cap
    _worker["storage"] = ResultStorage(cache_dir) if cache_dir else None


def _convolution_task(task) -> Dict[str, Any]:
    (uk, uq), (vk, vq) = task
    ctx = _worker["ctx"]
    group = ctx.group
    u = AffElem(WeylElem(group, uk), uq)
    v = AffElem(WeylElem(group, vk), vq)
    source = {"u": reduced_word(u), "v": reduced_word(v)}
    try:
        table = convolve(
            ctx, u, v, length_cap=_worker["length_cap"], storage=_worker["storage"]
        )
    except LengthCapExceeded as exc:
        logger.warning("skipping u=%s v=%s: %s", source["u"], source["v"], exc.detail)
        return {
            "checked": 0,
            "passed": 0,
            "max_abs": 0,
            "failures": [],
            "skipped": dict(source, reason=exc.detail),
        }
    constants = [(w, c, u.length + v.length - w.length) for w, c in table.items()]
    return _check_all(ctx.rs, constants, lambda w: dict(source, w=reduced_word(w)))


def _qk_task(task) -> Dict[str, Any]:
    xk, yk, depth = task
    ctx = _worker["ctx"]
    x, y = ctx.group.element(xk), ctx.group.element(yk)
    source = {"x": list(x.word), "y": list(y.word), "depth": list(depth)}
    try:
        table = qk_product(
            ctx,
            x,
            y,
            depth,
            length_cap=_worker["length_cap"],
            storage=_worker["storage"],
        )
    except LengthCapExceeded as exc:
        logger.warning("skipping x=%s y=%s: %s", source["x"], source["y"], exc.detail)
        return {
            "checked": 0,
            "passed": 0,
            "max_abs": 0,
            "failures": [],
            "skipped": dict(source, reason=exc.detail),
        }
    constants = [
        ((z, eta), c, x.length + y.length - z.length) for (z, eta), c in table.items()
    ]
    return _check_all(
        ctx.rs,
        constants,
        lambda key: dict(source, z=list(key[0].word), eta=list(key[1])),
    )


def _run(tasks, func, type_label, jobs, length_cap, cache_dir, report: ScanReport):
    initargs = (type_label, length_cap, cache_dir)
    if jobs <= 1 or len(tasks) <= 1:
        _init_worker(*initargs)
        outcomes = map(func, tasks)
        for outcome in outcomes:
            report.merge(outcome)
        return report
    with multiprocessing.Pool(jobs, initializer=_init_worker, initargs=initargs) as pool:
        # imap keeps task order, so the report does not depend on jobs
        for outcome in pool.imap(func, tasks):
            report.merge(outcome)
    return report


def scan_convolution(
    type_label: str,
    max_len: int,
    jobs: int = 1,
    length_cap: Optional[int] = None,
    cache_dir: Optional[str] = None,
) -> ScanReport:
    """
    Check every p^w_{u,v} for unordered pairs u, v in W' with
    l(u) + l(v) <= max_len; u is the earlier (shorter) element.
    """
    ctx = build_context(type_label)
    elements = enumerate_grassmannian(ctx.group, max_len)
    tasks = []
    for a, u in enumerate(elements):
        for v in elements[a:]:
            if u.length + v.length <= max_len:
                tasks.append(((u.x.index, u.q), (v.x.index, v.q)))
    logger.info(
        "scan %s: %d pairs with l(u) + l(v) <= %d", type_label, len(tasks), max_len
    )
    report = ScanReport(
        kind=ScanKind.CONVOLUTION, type_label=ctx.type_label, bound=max_len
    )
    return _run(
        tasks, _convolution_task, ctx.type_label, jobs, length_cap, cache_dir, report
    )


def scan_qk(
    type_label: str,
    max_word_len: Optional[int] = None,
    depth: Optional[Sequence[int]] = None,
    jobs: int = 1,
    cache_dir: Optional[str] = None,
) -> ScanReport:
    """
    Check every d^{z,eta}_{x,y} for all x, y in W at one depth.

    :param max_word_len: length cap for the underlying convolutions.
    """
    ctx = build_context(type_label)
    if depth is None:
        depth = default_depth(ctx.rs)
    depth = check_depth(ctx.rs, depth, "depth")
    tasks = [(x.index, y.index, depth) for x in ctx.group for y in ctx.group]
    report = ScanReport(
        kind=ScanKind.QUANTUM, type_label=ctx.type_label, bound=list(depth)
    )
    return _run(tasks, _qk_task, ctx.type_label, jobs, max_word_len, cache_dir, report)
