"""
Quantum K-theory structure constants of G/B from affine convolution constants.

For x, y in W and strictly antidominant depths b1, b2, every key of
[O_{x tau_b1}] (.) [O_{y tau_b2}] has the shape z tau_b with b <= 0 and z a
minimal representative modulo the stabilizer of b; it contributes
q^{b - b1 - b2} [O^z] to [O^x] * [O^y].
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cartan import CorootVector, RootSystem
from .conv import StructConstTable, convolve
from .exceptions import ArgumentError, IntegrityError
from .kclass import KContext
from .laurent import LaurentPoly
from .weyl import AffElem, WeylElem, is_minimal, is_minimal_by_shape, translation

__all__ = [
    "QKTable",
    "default_depth",
    "check_depth",
    "qk_product",
    "depth_stability_check",
    "parity_cross_check",
]

logger = logging.getLogger(__name__)

QKKey = Tuple[WeylElem, CorootVector]


@dataclass(eq=False)
class QKTable:
    """
    (z, eta) -> d^{z,eta}_{x,y} with eta in the non-negative coroot cone.
    """

    entries: Dict[QKKey, LaurentPoly] = field(default_factory=dict)
    # (z, eta) -> the key z tau_beta it came from
    sources: Dict[QKKey, AffElem] = field(default_factory=dict, repr=False)

    def get(self, z: WeylElem, eta: Sequence[int]) -> LaurentPoly:
        return self.entries.get((z, tuple(eta)), LaurentPoly.zero())

    def items(self) -> List[Tuple[QKKey, LaurentPoly]]:
        return sorted(
            self.entries.items(),
            key=lambda kv: (kv[0][0].length, kv[0][0].word, kv[0][1]),
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QKTable):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        body = ", ".join(f"({z!r}, {list(eta)}): {c}" for (z, eta), c in self.items())
        return "QKTable({" + body + "})"


def default_depth(rs: RootSystem) -> CorootVector:
    """
    -(sum of simple coroots) when strictly antidominant, otherwise the
    strictly antidominant vector with the smallest coordinate sum.
    """
    candidate = (-1,) * rs.rank
    if rs.is_antidominant(candidate, strict=True):
        return candidate
    total = rs.rank
    while True:
        total += 1
        found = [
            tuple(-n for n in parts)
            for parts in itertools.product(range(total + 1), repeat=rs.rank)
            if sum(parts) == total
        ]
        found = [q for q in found if rs.is_antidominant(q, strict=True)]
        if found:
            return min(found, key=lambda q: tuple(-n for n in q))


def check_depth(rs: RootSystem, depth: Sequence[int], name: str) -> CorootVector:
    depth = tuple(depth)
    if len(depth) != rs.rank:
        raise ArgumentError(f"{name} {list(depth)} must have {rs.rank} coordinates")
    if not rs.is_antidominant(depth, strict=True):
        raise ArgumentError(f"{name} {list(depth)} is not strictly antidominant")
    return depth


def qk_product(
    ctx: KContext,
    x: WeylElem,
    y: WeylElem,
    depth: Optional[Sequence[int]] = None,
    depth2: Optional[Sequence[int]] = None,
    length_cap: Optional[int] = None,
    storage=None,
) -> QKTable:
    """
    [O^x] * [O^y] in QK_T(G/B).

    :param depth: beta_1, strictly antidominant; defaults to `default_depth`.
    :param depth2: beta_2; defaults to beta_1.
    :raises ArgumentError: for a depth that is not strictly antidominant.
    :raises IntegrityError: when a key has the wrong shape or eta < 0.
    """
    rs = ctx.rs
    beta1 = check_depth(rs, depth if depth is not None else default_depth(rs), "depth")
    beta2 = check_depth(rs, depth2 if depth2 is not None else beta1, "depth2")

    u = AffElem(x, beta1)
    v = AffElem(y, beta2)
    for w in (u, v):
        if not is_minimal(w):
            raise IntegrityError(f"{w!r} should be a minimal coset representative")

    table = convolve(ctx, u, v, length_cap=length_cap, storage=storage)
    return qk_from_convolution(rs, table, beta1, beta2)


def qk_from_convolution(
    rs: RootSystem, table: StructConstTable, beta1: CorootVector, beta2: CorootVector
) -> QKTable:
    entries: Dict[QKKey, LaurentPoly] = {}
    sources: Dict[QKKey, AffElem] = {}
    for w, coeff in table.entries.items():
        beta = w.q
        if not is_minimal_by_shape(w):
            raise IntegrityError(f"{w!r} is not of the form z tau_beta with beta <= 0")
        eta = tuple(b - b1 - b2 for b, b1, b2 in zip(beta, beta1, beta2))
        if any(n < 0 for n in eta):
            raise IntegrityError(
                f"{w!r} gives eta = {list(eta)} outside the positive cone"
            )
        entries[(w.x, eta)] = coeff
        sources[(w.x, eta)] = w
    return QKTable(entries=entries, sources=sources)


@dataclass
class StabilityReport:
    x: WeylElem
    y: WeylElem
    depths: List[CorootVector]
    stable: bool = True
    discrepancies: List[Dict] = field(default_factory=list)


def depth_stability_check(
    ctx: KContext,
    x: WeylElem,
    y: WeylElem,
    depths: Sequence[Sequence[int]],
    length_cap: Optional[int] = None,
) -> StabilityReport:
    """
    Compare qk_product across depths; a difference is reported, not raised.
    """
    depths = [check_depth(ctx.rs, d, "depth") for d in depths]
    report = StabilityReport(x=x, y=y, depths=depths)
    if not depths:
        return report
    reference = qk_product(ctx, x, y, depths[0], length_cap=length_cap)
    for depth in depths[1:]:
        table = qk_product(ctx, x, y, depth, length_cap=length_cap)
        if table == reference:
            continue
        report.stable = False
        for key in sorted(set(reference.entries) | set(table.entries), key=str):
            lhs, rhs = reference.get(*key), table.get(*key)
            if lhs != rhs:
                report.discrepancies.append(
                    {
                        "depth": list(depth),
                        "z": list(key[0].word),
                        "eta": list(key[1]),
                        "expected": str(lhs),
                        "found": str(rhs),
                    }
                )
        logger.warning("qk product of %r, %r depends on depth %s", x, y, list(depth))
    return report


@dataclass
class ParityReport:
    type_label: str
    depth: CorootVector
    checked: int = 0
    mismatches: List[Dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def parity_cross_check(
    ctx: KContext,
    depth: Optional[Sequence[int]] = None,
    pairs: Optional[Sequence[Tuple[WeylElem, WeylElem]]] = None,
    length_cap: Optional[int] = None,
    storage=None,
) -> ParityReport:
    """
    Every d^{z,eta}_{x,y} equals its source p^{z tau_b}_{x tau_d, y tau_d}
    (recomputed with the factors swapped), and the sign exponents
    l(x)+l(y)-l(z) and l(u)+l(v)-l(w) agree mod 2.
    """
    rs, group = ctx.rs, ctx.group
    depth = check_depth(rs, depth if depth is not None else default_depth(rs), "depth")
    if pairs is None:
        pairs = [(x, y) for x in group for y in group]
    report = ParityReport(type_label=rs.type_label, depth=depth)

    for x, y in pairs:
        u, v = AffElem(x, depth), AffElem(y, depth)
        table = qk_product(ctx, x, y, depth, length_cap=length_cap, storage=storage)
        swapped = convolve(ctx, v, u, length_cap=length_cap, storage=storage)
        for (z, eta), coeff in table.items():
            w = table.sources[(z, eta)]
            report.checked += 1
            tau_length = translation(group, w.q).length
            qk_sign = x.length + y.length - z.length
            conv_sign = u.length + v.length - w.length
            problems = []
            if swapped.get(w) != coeff:
                problems.append("value")
            if tau_length % 2:
                problems.append("odd translation length")
            if (qk_sign - conv_sign) % 2:
                problems.append("parity")
            if problems:
                report.mismatches.append(
                    {
                        "x": list(x.word),
                        "y": list(y.word),
                        "z": list(z.word),
                        "eta": list(eta),
                        "problems": problems,
                        "coeff": str(coeff),
                    }
                )
    return report
