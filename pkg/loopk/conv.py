"""
Structure constants of the convolution product on the equivariant K-homology
of the affine Grassmannian, in the basis of structure sheaves of Schubert
varieties indexed by minimal coset representatives.

The engine expands, for a reduced word s_{i1} ... s_{in} of u and every x in
W, the subset sum

    sum over J of | D'_{i1} ... s'_{ij} ... D'_{in} (zeta^x) |
        at key overline(s_{j1} * ... * s_{jp} * x * v)

as a binary tree processed from position n leftwards. Operators act on
localization vectors; tree nodes with the same (x, Demazure element) are
merged since everything downstream is linear in the class.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cartan import Weight
from .exceptions import ArgumentError, LengthCapExceeded
from .kclass import KContext, LocVector, loc_add, loc_dprime, loc_sprime
from .laurent import LaurentPoly, demazure_D, sum_polys, weyl_act
from .settings import loopk_settings
from .weyl import AffElem, WeylElem, is_minimal, reduced_word

__all__ = [
    "StructConstTable",
    "ConvolutionStats",
    "convolve_borel",
    "convolve",
    "structure_constant",
    "line_bundle_expansion",
    "pullback_expansion",
]

logger = logging.getLogger(__name__)

AffKey = Tuple[int, Tuple[int, ...]]


@dataclass
class ConvolutionStats:
    """
    Diagnostics only; nothing downstream depends on these counts.
    """

    word_length: int = 0
    nodes: int = 0
    merged: int = 0
    raw_terms: int = 0
    collapsed_terms: int = 0

    def as_dict(self) -> Dict[str, int]:
        return {
            "word_length": self.word_length,
            "nodes": self.nodes,
            "merged": self.merged,
            "raw_terms": self.raw_terms,
            "collapsed_terms": self.collapsed_terms,
        }


@dataclass(eq=False)
class StructConstTable:
    """
    A finitely supported map from W' to R(T); zero values are dropped.
    """

    entries: Dict[AffElem, LaurentPoly] = field(default_factory=dict)

    def __post_init__(self):
        for key in [k for k, v in self.entries.items() if not v]:
            del self.entries[key]

    def get(self, w: AffElem) -> LaurentPoly:
        return self.entries.get(w, LaurentPoly.zero())

    def keys(self) -> List[AffElem]:
        return [w for w, _ in self.items()]

    def items(self) -> List[Tuple[AffElem, LaurentPoly]]:
        """
        Entries ordered by length, then reduced word.
        """
        keyed = [(w.length, reduced_word(w), w, c) for w, c in self.entries.items()]
        keyed.sort(key=lambda t: (t[0], t[1]))
        return [(w, c) for _, _, w, c in keyed]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, w: AffElem) -> bool:
        return w in self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StructConstTable):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        body = ", ".join(f"{reduced_word(w)}: {c}" for w, c in self.items())
        return "StructConstTable({" + body + "})"


def _check_cap(word: Sequence[int], length_cap: Optional[int]) -> None:
    cap = loopk_settings.LENGTH_CAP if length_cap is None else length_cap
    if len(word) > cap:
        raise LengthCapExceeded(len(word), cap)


def _accumulate(states: Dict, key, vec: LocVector, stats: ConvolutionStats) -> None:
    if key in states:
        states[key] = loc_add(states[key], vec)
        stats.merged += 1
    else:
        states[key] = vec


def run_engine(
    ctx: KContext,
    word: Sequence[int],
    v: AffElem,
    stats: Optional[ConvolutionStats] = None,
) -> StructConstTable:
    """
    The subset-sum expansion for the Borel orbit closure of the element with
    reduced word `word`, convolved with v in W'.
    """
    group = ctx.group
    stats = stats if stats is not None else ConvolutionStats()
    stats.word_length = len(word)
    zero_q = (0,) * ctx.rs.rank

    states: Dict[Tuple[int, int, Tuple[int, ...]], LocVector] = {
        (x, 0, zero_q): ctx.zeta.vectors[x] for x in range(group.order)
    }
    for i in reversed(word):
        nxt: Dict[Tuple[int, int, Tuple[int, ...]], LocVector] = {}
        for (x, dk, dq), vec in states.items():
            unselected = loc_dprime(group, i, vec)
            stats.nodes += 1
            if any(unselected):
                _accumulate(nxt, (x, dk, dq), unselected, stats)
            selected = loc_sprime(group, i, vec)
            stats.nodes += 1
            if any(selected):
                nk, nq = group.affine_demazure_left(i, dk, dq)
                _accumulate(nxt, (x, nk, nq), selected, stats)
        states = nxt

    v_word = reduced_word(v)
    collapsed: Dict[AffKey, List[LaurentPoly]] = {}
    key_cache: Dict[Tuple[int, int, Tuple[int, ...]], AffKey] = {}
    for (x, dk, dq), vec in states.items():
        scalar = vec[0]
        if not scalar:
            continue
        stats.raw_terms += 1
        key = key_cache.get((x, dk, dq))
        if key is None:
            k, q = group.affine_demazure_right(dk, dq, group.words[x])
            k, q = group.affine_demazure_right(k, q, v_word)
            key = group.affine_min_coset_rep(k, q)
            key_cache[(x, dk, dq)] = key
        collapsed.setdefault(key, []).append(scalar)

    entries = {}
    for (k, q), parts in collapsed.items():
        total = sum_polys(parts)
        if total:
            entries[AffElem(WeylElem(group, k), q)] = total
    stats.collapsed_terms = len(entries)
    logger.debug(
        "engine: word length %d, %d nodes, %d merges, %d raw terms, %d keys",
        stats.word_length,
        stats.nodes,
        stats.merged,
        stats.raw_terms,
        stats.collapsed_terms,
    )
    return StructConstTable(entries)


def convolve_borel(
    ctx: KContext,
    u: AffElem,
    v: AffElem,
    length_cap: Optional[int] = None,
    stats: Optional[ConvolutionStats] = None,
) -> StructConstTable:
    """
    [O_{X^B_u}] (.) [O_{X_v}] for any affine u and v in W'.
    """
    if not is_minimal(v):
        raise ArgumentError(f"{v!r} is not a minimal coset representative")
    word = reduced_word(u)
    _check_cap(word, length_cap)
    return run_engine(ctx, word, v, stats)


def convolve(
    ctx: KContext,
    u: AffElem,
    v: AffElem,
    length_cap: Optional[int] = None,
    stats: Optional[ConvolutionStats] = None,
    storage=None,
) -> StructConstTable:
    """
    [O_{X_u}] (.) [O_{X_v}] for u, v in W', computed as the Borel product of
    u w_o with v.

    :param storage: optional result cache with `load_table`/`save_table`.
    :raises ArgumentError: if u or v is not minimal.
    :raises LengthCapExceeded: if l(u) + l(w_o) exceeds the cap.
    """
    for name, w in (("u", u), ("v", v)):
        if not is_minimal(w):
            raise ArgumentError(f"{name} = {w!r} is not a minimal coset representative")

    if storage is not None:
        cached = storage.load_table(ctx, u, v)
        if cached is not None:
            return cached

    # lengths add for u in W', so this word is reduced
    word = reduced_word(u) + list(ctx.group.longest.word)
    _check_cap(word, length_cap)
    table = run_engine(ctx, word, v, stats)

    if storage is not None:
        storage.save_table(ctx, u, v, table)
    return table


def structure_constant(
    ctx: KContext,
    u: AffElem,
    v: AffElem,
    w: AffElem,
    length_cap: Optional[int] = None,
    storage=None,
) -> LaurentPoly:
    """
    p^w_{u,v}; zero when w is absent from the product.
    """
    if not is_minimal(w):
        raise ArgumentError(f"w = {w!r} is not a minimal coset representative")
    return convolve(ctx, u, v, length_cap=length_cap, storage=storage).get(w)


def line_bundle_expansion(
    ctx: KContext, word: Sequence[int], weight: Weight
) -> Dict[AffElem, LaurentPoly]:
    """
    Coefficients of (z_{i1} ... z_{in}) . e^weight in the z-basis: the subset
    sum of mixed D / s words applied to e^weight, keyed by the Demazure
    product of the selected reflections.
    """
    group, rs = ctx.group, ctx.rs
    rank = rs.rank
    for i in word:
        if not 0 <= i <= rank:
            raise ArgumentError(f"reflection index {i} out of range 0..{rank}")
    states: Dict[AffKey, LaurentPoly] = {(0, (0,) * rank): LaurentPoly.monomial(weight)}
    for i in reversed(word):
        nxt: Dict[AffKey, List[LaurentPoly]] = {}
        for (dk, dq), f in states.items():
            unselected = demazure_D(rs, i, f)
            if unselected:
                nxt.setdefault((dk, dq), []).append(unselected)
            selected = weyl_act(i, f, rs)
            nxt.setdefault(group.affine_demazure_left(i, dk, dq), []).append(selected)
        states = {}
        for key, parts in nxt.items():
            total = sum_polys(parts)
            if total:
                states[key] = total
    return {AffElem(WeylElem(group, k), q): f for (k, q), f in states.items()}


def pullback_expansion(
    ctx: KContext, w: AffElem, weight: Weight
) -> Dict[AffElem, LaurentPoly]:
    """
    The pull-back of [O_{X_w}] to the Borel quotient, twisted by e^weight:
    the coefficients f(v, w w_o; weight).
    """
    if not is_minimal(w):
        raise ArgumentError(f"{w!r} is not a minimal coset representative")
    word = reduced_word(w) + list(ctx.group.longest.word)
    return line_bundle_expansion(ctx, word, weight)


def table_sum(
    tables: Iterable[Tuple[LaurentPoly, StructConstTable]]
) -> StructConstTable:
    """
    sum of coefficient * table, used for associativity checks.
    """
    acc: Dict[AffElem, List[LaurentPoly]] = {}
    for coeff, table in tables:
        for w, c in table.entries.items():
            acc.setdefault(w, []).append(coeff * c)
    return StructConstTable({w: sum_polys(parts) for w, parts in acc.items()})
