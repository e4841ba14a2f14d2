"""
Golden values and structural identities, runnable without pytest.

Each check takes a KContext and returns a list of problems; an empty list is
a pass. `run_selftest` collects the results in a deterministic order.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__
from .cartan import RootSystem
from .conv import convolve, convolve_borel
from .exceptions import LoopKError
from .kclass import (
    KContext,
    TensorClass,
    build_context,
    loc_dprime,
    loc_scale,
    loc_sprime,
    loc_transpose,
    localization_vector,
    pairing,
    top_class_transposes,
    transpose_by_dsecond,
    transpose_by_frakD,
    transpose_by_structure_sheaf,
)
from .laurent import LaurentPoly, demazure_D, exact_div, sum_polys, weyl_act
from .positivity import scan_convolution, scan_qk
from .qk import default_depth, depth_stability_check, parity_cross_check, qk_product
from .weyl import (
    AffElem,
    demazure_product,
    enumerate_grassmannian,
    min_coset_rep,
    reduced_word,
    translation,
)

__all__ = ["CheckResult", "SelftestReport", "register", "registry", "run_selftest"]

logger = logging.getLogger(__name__)

Check = Callable[[KContext], List[str]]


@dataclass(frozen=True)
class _Entry:
    name: str
    func: Check
    families: Optional[str]


_REGISTRY: List[_Entry] = []


def register(name: str, families: Optional[str] = None):
    """
    Add a check; `families` limits it to type labels starting with one of
    the given letters.
    """

    def decorator(func: Check) -> Check:
        _REGISTRY.append(_Entry(name, func, families))
        return func

    return decorator


def registry(type_label: str) -> List[_Entry]:
    return [e for e in _REGISTRY if e.families is None or type_label[0] in e.families]


def _mono(*exponent: int) -> LaurentPoly:
    return LaurentPoly.monomial(exponent)


# zeta classes


@register("zeta-sum-and-counit")
def check_zeta_sum(ctx: KContext) -> List[str]:
    problems = []
    group = ctx.group
    one = LaurentPoly.one(ctx.rs.rank)
    total = tuple(sum_polys(parts) for parts in zip(*ctx.zeta.vectors))
    if any(v != one for v in total):
        problems.append("sum of zeta^x does not localize to 1 (x) 1")
    for x in group:
        expected = 1 if x.index == 0 else 0
        if ctx.zeta.vector(x)[0] != expected:
            problems.append(f"|zeta^{x!r}| != {expected}")
    return problems


@register("duality")
def check_duality(ctx: KContext) -> List[str]:
    problems = []
    for x in ctx.group:
        c = ctx.zeta.tensor(x)
        for y in ctx.group:
            value = pairing(ctx.rs, c, y)
            if value != (1 if x == y else 0):
                problems.append(f"<zeta^{x!r}, O_{y!r}> = {value}")
    return problems


@register("operators-on-zeta")
def check_operators_on_zeta(ctx: KContext) -> List[str]:
    """
    s'_i and D'_i act on zeta^x by the ascent/descent rule, for finite i.
    """
    group, rs = ctx.group, ctx.rs
    problems = []
    for x in group:
        vec = ctx.zeta.vector(x)
        for i in range(1, rs.rank + 1):
            sx = group.simple(i) * x
            alpha = LaurentPoly.monomial(rs.simple_root(i))
            other = ctx.zeta.vector(sx)
            if sx.length > x.length:
                s_expected = loc_scale(group, vec, alpha)
                d_expected = vec
            else:
                one = LaurentPoly.one(rs.rank)
                s_expected = tuple(a + (one - alpha) * b for a, b in zip(vec, other))
                d_expected = tuple(-b for b in other)
            if loc_sprime(group, i, vec) != s_expected:
                problems.append(f"s'_{i} zeta^{x!r}")
            if loc_dprime(group, i, vec) != d_expected:
                problems.append(f"D'_{i} zeta^{x!r}")
    return problems


@register("affine-operator-on-identity")
def check_affine_dprime(ctx: KContext) -> List[str]:
    """
    D'_0 zeta^e = -(e^theta + ... + e^{(h - 1) theta}) zeta^e, h the dual
    Coxeter number.
    """
    rs = ctx.rs
    theta = rs.highest_root
    factor = sum_polys(
        LaurentPoly.monomial(tuple(k * c for c in theta), -1)
        for k in range(1, rs.dual_coxeter_number)
    )
    vec = ctx.zeta.vectors[0]
    if loc_dprime(ctx.group, 0, vec) != loc_scale(ctx.group, vec, factor):
        return ["D'_0 zeta^e"]
    return []


@register("top-class-transposes")
def check_top_class(ctx: KContext) -> List[str]:
    forms = top_class_transposes(ctx)
    return [f"form {n} differs" for n, vec in enumerate(forms[1:], 1) if vec != forms[0]]


@register("transpose-identities")
def check_transposes(ctx: KContext) -> List[str]:
    problems = []
    for x in ctx.group:
        expected = loc_transpose(ctx.group, ctx.zeta.vector(x))
        if transpose_by_dsecond(ctx, x) != expected:
            problems.append(f"D'' form for {x!r}")
        if transpose_by_frakD(ctx, x) != expected:
            problems.append(f"frakD form for {x!r}")
        if transpose_by_structure_sheaf(ctx, x) != expected:
            problems.append(f"structure sheaf form for {x!r}")
    return problems


# SL2 closed forms


@register("sl2-zeta", families="A")
def check_sl2_zeta(ctx: KContext) -> List[str]:
    if ctx.rs.rank != 1:
        return []
    group = ctx.group
    e, s1 = group.identity, group.simple(1)
    ze, zs = ctx.zeta.vector(e), ctx.zeta.vector(s1)
    problems = []
    if ze != localization_vector(TensorClass.pure((-1,), (1,)), group):
        problems.append("zeta^e != e^-rho (x) e^rho")
    one = localization_vector(TensorClass.pure((0,), (0,)), group)
    if zs != tuple(a - b for a, b in zip(one, ze)):
        problems.append("zeta^s1 != 1 (x) 1 - e^-rho (x) e^rho")
    expected = localization_vector(TensorClass.pure((1,), (1,)), group)
    if loc_sprime(group, 0, ze) != expected:
        problems.append("s'_0 zeta^e")
    if loc_sprime(group, 0, zs) != tuple(
        a + (_mono(0) - _mono(2)) * b for a, b in zip(zs, ze)
    ):
        problems.append("s'_0 zeta^s1")
    if loc_dprime(group, 0, ze) != loc_scale(group, ze, -_mono(2)):
        problems.append("D'_0 zeta^e")
    if loc_dprime(group, 0, zs) != loc_scale(group, ze, _mono(2)):
        problems.append("D'_0 zeta^s1")
    if loc_dprime(group, 1, ze) != ze:
        problems.append("D'_1 zeta^e")
    if loc_dprime(group, 1, zs) != tuple(-a for a in ze):
        problems.append("D'_1 zeta^s1")
    return problems


@register("sl2-convolution", families="A")
def check_sl2_convolution(ctx: KContext) -> List[str]:
    if ctx.rs.rank != 1:
        return []
    tau = enumerate_grassmannian(ctx.group, 11)
    one, alpha = _mono(0), _mono(2)
    problems = []
    for n in range(6):
        for m in range(3):
            found = convolve(ctx, tau[n], tau[2 * m])
            if found.entries != {tau[n + 2 * m]: one}:
                problems.append(f"[O_{n}] [O_{2 * m}] = {found!r}")
    for n in range(3):
        for m in range(3):
            found = convolve(ctx, tau[2 * n + 1], tau[2 * m + 1])
            top = 2 * n + 2 * m
            expected = {tau[top + 2]: alpha, tau[top + 3]: one - alpha}
            if found.entries != expected:
                problems.append(f"[O_{2 * n + 1}] [O_{2 * m + 1}] = {found!r}")
    return problems


# Demazure operators

_BRAID_ORDERS = {0: 2, 1: 3, 2: 4, 3: 6}


def _random_poly(rng: random.Random, rank: int, terms: int = 4, spread: int = 3):
    data: Dict[tuple, int] = {}
    for _ in range(rng.randint(1, terms)):
        exponent = tuple(rng.randint(-spread, spread) for _ in range(rank))
        data[exponent] = data.get(exponent, 0) + rng.randint(-5, 5)
    return LaurentPoly(data)


def _alternating(
    rs: RootSystem, i: int, j: int, f: LaurentPoly, count: int
) -> LaurentPoly:
    for step in range(count):
        f = demazure_D(rs, i if step % 2 == count % 2 else j, f)
    return f


@register("operator-identities")
def check_operator_identities(ctx: KContext) -> List[str]:
    """
    Idempotence, the twisted Leibniz rule, braid relations, vanishing on
    W-invariants and exact division, on seeded random inputs.
    """
    rs, group = ctx.rs, ctx.group
    rng = random.Random(7019)
    problems = []
    for n in range(100):
        f = _random_poly(rng, rs.rank)
        g = _random_poly(rng, rs.rank)
        i = rng.randint(0, rs.rank)
        df = demazure_D(rs, i, f)
        if demazure_D(rs, i, df) != df:
            problems.append(f"D_{i} D_{i} != D_{i} on input {n}")
        leibniz = df * g + weyl_act(i, f, rs) * demazure_D(rs, i, g)
        if demazure_D(rs, i, f * g) != leibniz:
            problems.append(f"Leibniz rule for D_{i} on input {n}")
        if rs.rank > 1:
            a, b = rng.sample(range(1, rs.rank + 1), 2)
            order = _BRAID_ORDERS[
                rs.cartan_matrix[a - 1][b - 1] * rs.cartan_matrix[b - 1][a - 1]
            ]
            if _alternating(rs, a, b, f, order) != _alternating(rs, b, a, f, order):
                problems.append(f"braid relation D_{a}, D_{b} on input {n}")
        h = _random_poly(rng, rs.rank, terms=2, spread=2)
        invariant = sum_polys(weyl_act(x, h) for x in group)
        if demazure_D(rs, i, invariant):
            problems.append(f"D_{i} of a W-invariant on input {n}")
        if g and exact_div(f * g, g) != f:
            problems.append(f"exact division on input {n}")
    return problems


# convolution algebra


def _elements(ctx: KContext, max_len: int) -> List[AffElem]:
    return enumerate_grassmannian(ctx.group, max_len)


@register("commutativity")
def check_commutativity(ctx: KContext) -> List[str]:
    elements = _elements(ctx, 4 if ctx.rs.rank == 1 else 3)
    problems = []
    for a, u in enumerate(elements):
        for v in elements[a + 1:]:
            if convolve(ctx, u, v) != convolve(ctx, v, u):
                problems.append(f"{reduced_word(u)} {reduced_word(v)}")
    return problems


@register("translations")
def check_translations(ctx: KContext) -> List[str]:
    """
    Multiplying by the class of tau_q (q <= 0) translates: Borel and
    W'-forms, and the shift of all three indices of p^w_{u,v}.
    """
    group, rs = ctx.group, ctx.rs
    q = default_depth(rs)
    tau = translation(group, q)
    problems = []
    for u in _elements(ctx, 2):
        expected = {u * tau: LaurentPoly.one(rs.rank)}
        if convolve(ctx, u, tau).entries != expected:
            problems.append(f"{reduced_word(u)} with tau{list(q)}")
        shifted = convolve_borel(ctx, u, tau)
        key = min_coset_rep(demazure_product(u, tau))
        if shifted.entries != {key: LaurentPoly.one(rs.rank)}:
            problems.append(f"Borel {reduced_word(u)} with tau{list(q)}")
    elements = _elements(ctx, 1)
    for u in elements:
        for v in elements:
            base = convolve(ctx, u, v)
            moved = convolve(ctx, u * tau, v)
            if {w * tau: c for w, c in base.entries.items()} != moved.entries:
                problems.append(f"shift of {reduced_word(u)} {reduced_word(v)}")
    return problems


@register("associativity")
def check_associativity(ctx: KContext) -> List[str]:
    rng = random.Random(20240611)
    elements = _elements(ctx, 2)
    problems = []
    for _ in range(20):
        u, v, w = (rng.choice(elements) for _ in range(3))
        left: Dict[AffElem, List[LaurentPoly]] = {}
        for a, c in convolve(ctx, u, v).entries.items():
            for b, d in convolve(ctx, a, w).entries.items():
                left.setdefault(b, []).append(c * d)
        right: Dict[AffElem, List[LaurentPoly]] = {}
        for a, c in convolve(ctx, v, w).entries.items():
            for b, d in convolve(ctx, u, a).entries.items():
                right.setdefault(b, []).append(c * d)
        lhs = {k: sum_polys(p) for k, p in left.items() if sum_polys(p)}
        rhs = {k: sum_polys(p) for k, p in right.items() if sum_polys(p)}
        if lhs != rhs:
            problems.append(f"({reduced_word(u)} {reduced_word(v)}) {reduced_word(w)}")
    return problems


# quantum K


@register("qk-identity-and-stability")
def check_qk(ctx: KContext) -> List[str]:
    group, rs = ctx.group, ctx.rs
    depth = default_depth(rs)
    deeper = tuple(2 * n for n in depth)
    problems = []
    zero = (0,) * rs.rank
    for y in group:
        table = qk_product(ctx, group.identity, y, depth)
        if table.entries != {(y, zero): LaurentPoly.one(rs.rank)}:
            problems.append(f"[O^e] * [O^{y!r}] = {table!r}")
    if rs.rank == 1:
        s1 = group.simple(1)
        for d in (depth, deeper):
            table = qk_product(ctx, s1, s1, d)
            expected = {
                (group.identity, (1,)): _mono(2),
                (s1, (0,)): _mono(0) - _mono(2),
            }
            if table.entries != expected:
                problems.append(f"[O^s1] * [O^s1] at depth {list(d)} = {table!r}")
    elif group.order <= 6:
        for x in group:
            report = depth_stability_check(ctx, x, x, [depth, deeper])
            if not report.stable:
                problems.append(f"depth dependence for {x!r}")
    return problems


@register("qk-parity", families="A")
def check_qk_parity(ctx: KContext) -> List[str]:
    report = parity_cross_check(ctx)
    return [str(m) for m in report.mismatches]


# positivity


@register("positivity-scans")
def check_positivity(ctx: KContext) -> List[str]:
    problems = []
    max_len = 8 if ctx.rs.rank == 1 else 6
    conv_report = scan_convolution(ctx.type_label, max_len)
    reports = [conv_report]
    if ctx.type_label[0] == "A":
        reports.append(scan_qk(ctx.type_label))
    for report in reports:
        problems.extend(f.describe() for f in report.failures)
        problems.extend(f"skipped {s}" for s in report.skipped)
    return problems


@dataclass
class CheckResult:
    type_label: str
    name: str
    problems: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems


@dataclass
class SelftestReport:
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self) -> Dict:
        return {
            "version": __version__,
            "passed": self.passed,
            "results": [
                {
                    "type": r.type_label,
                    "check": r.name,
                    "passed": r.passed,
                    "problems": r.problems,
                }
                for r in self.results
            ],
        }


def run_selftest(type_labels: Sequence[str], only: Optional[Sequence[str]] = None):
    report = SelftestReport()
    for type_label in type_labels:
        ctx = build_context(type_label)
        for entry in registry(ctx.type_label):
            if only and entry.name not in only:
                continue
            logger.info("selftest %s %s", ctx.type_label, entry.name)
            try:
                problems = entry.func(ctx)
            except LoopKError as exc:
                problems = [f"{type(exc).__name__}: {exc.detail}"]
            result = CheckResult(ctx.type_label, entry.name, list(problems))
            if not result.passed:
                logger.error(
                    "selftest %s %s failed: %s", ctx.type_label, entry.name, problems
                )
            report.results.append(result)
    return report
