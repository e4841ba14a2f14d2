"""
Classes in R(T) (x)_{R(G)} R(T) = K_T(G/B).

A class is kept two ways: a witness list of tensors a (x) b, and its vector of
localizations at the torus fixed points, indexed like the Weyl group. The
tensor list is not canonical; equality always goes through localization,
loc_z(a (x) b) = a * (z b).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .cartan import RootSystem, Weight
from .exceptions import ArgumentError, IntegrityError, SingularMatrixError
from .laurent import (
    LaurentPoly,
    demazure_D,
    divide_one_minus_exp,
    solve_row_system,
    sum_polys,
    weyl_act,
)
from .weyl import WeylElem, WeylGroup, build_weyl_group

__all__ = [
    "TensorClass",
    "LocVector",
    "SteinbergBasis",
    "ZetaTable",
    "KContext",
    "build_context",
    "localize",
    "localization_vector",
    "sprime",
    "dprime",
    "dsecond",
    "frakD",
    "transpose",
    "build_steinberg",
    "build_zeta_table",
    "pairing",
    "opposite_structure_sheaf",
    "steinberg_coordinates",
]

logger = logging.getLogger(__name__)

LocVector = Tuple[LaurentPoly, ...]


class TensorClass:
    """
    A formal sum of tensors a (x) b over R(G).
    """

    __slots__ = ("pairs",)

    def __init__(self, pairs: Sequence[Tuple[LaurentPoly, LaurentPoly]] = ()):
        self.pairs: Tuple[Tuple[LaurentPoly, LaurentPoly], ...] = tuple(
            (a, b) for a, b in pairs if a and b
        )

    @classmethod
    def one(cls, rank: int) -> "TensorClass":
        return cls([(LaurentPoly.one(rank), LaurentPoly.one(rank))])

    @classmethod
    def pure(cls, left: Sequence[int], right: Sequence[int]) -> "TensorClass":
        """
        e^left (x) e^right.
        """
        return cls([(LaurentPoly.monomial(left), LaurentPoly.monomial(right))])

    def __add__(self, other: "TensorClass") -> "TensorClass":
        return TensorClass(self.pairs + other.pairs)

    def __neg__(self) -> "TensorClass":
        return TensorClass([(-a, b) for a, b in self.pairs])

    def __sub__(self, other: "TensorClass") -> "TensorClass":
        return self + (-other)

    def __mul__(self, other: "TensorClass") -> "TensorClass":
        return TensorClass(
            [(a1 * a2, b1 * b2) for a1, b1 in self.pairs for a2, b2 in other.pairs]
        )

    def scale(
        self, left: LaurentPoly, right: Optional[LaurentPoly] = None
    ) -> "TensorClass":
        """
        Multiply by left (x) right.
        """
        if right is None:
            return TensorClass([(left * a, b) for a, b in self.pairs])
        return TensorClass([(left * a, right * b) for a, b in self.pairs])

    def absolute(self) -> LaurentPoly:
        """
        |sum a (x) b| = sum a b, the localization at the identity.
        """
        return sum_polys(a * b for a, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        if not self.pairs:
            return "TensorClass(0)"
        return "TensorClass(" + " + ".join(f"({a})x({b})" for a, b in self.pairs) + ")"


def localize(c: TensorClass, z: WeylElem) -> LaurentPoly:
    """
    The restriction of c to the fixed point z: sum a * (z b).
    """
    return sum_polys(a * weyl_act(z, b) for a, b in c.pairs)


def localization_vector(c: TensorClass, group: WeylGroup) -> LocVector:
    return tuple(localize(c, z) for z in group)


# tensor-level operators


def sprime(rs: RootSystem, i: int, c: TensorClass) -> TensorClass:
    """
    s_i acting on the first factor; i = 0 acts as s_theta.
    """
    _check_affine_index(rs, i)
    return TensorClass([(weyl_act(i, a, rs), b) for a, b in c.pairs])


def dprime(rs: RootSystem, i: int, c: TensorClass) -> TensorClass:
    """
    D_i on the first factor, i in 0..l.
    """
    _check_affine_index(rs, i)
    return TensorClass([(demazure_D(rs, i, a), b) for a, b in c.pairs])


def dsecond(rs: RootSystem, i: int, c: TensorClass) -> TensorClass:
    """
    D_i on the second factor, i in 1..l.
    """
    _check_finite_index(rs, i)
    return TensorClass([(a, demazure_D(rs, i, b)) for a, b in c.pairs])


def frak_d(rs: RootSystem, i: int, f: LaurentPoly) -> LaurentPoly:
    """
    (f - e^{alpha_i} s_i f) / (1 - e^{alpha_i}).
    """
    alpha = rs.simple_root(i)
    numerator = f - weyl_act(i, f, rs).shift(alpha)
    if not numerator:
        return LaurentPoly.zero()
    return divide_one_minus_exp(numerator, alpha)


def frakD(rs: RootSystem, i: int, c: TensorClass) -> TensorClass:
    """
    The push-pull Demazure operator through G/P_i, on the second factor.
    """
    _check_finite_index(rs, i)
    return TensorClass([(a, frak_d(rs, i, b)) for a, b in c.pairs])


def transpose(c: TensorClass) -> TensorClass:
    return TensorClass([(b, a) for a, b in c.pairs])


def _check_affine_index(rs: RootSystem, i: int) -> None:
    if not 0 <= i <= rs.rank:
        raise ArgumentError(f"operator index {i} out of range 0..{rs.rank}")


def _check_finite_index(rs: RootSystem, i: int) -> None:
    if not 1 <= i <= rs.rank:
        raise ArgumentError(f"operator index {i} out of range 1..{rs.rank}")


# localization-vector operators


def loc_sprime(group: WeylGroup, i: int, vec: LocVector) -> LocVector:
    # loc_z(s'_i c) = s_i(loc_{s_i z} c)
    rs = group.rs
    return tuple(
        weyl_act(i, vec[group.left_index(i, z)], rs) for z in range(group.order)
    )


def loc_dprime(group: WeylGroup, i: int, vec: LocVector) -> LocVector:
    # loc_z(D'_i c) = (loc_z c - s_i loc_{s_i z} c) / (1 - e^{alpha_i})
    rs = group.rs
    alpha = rs.simple_root(i)
    out = []
    for z in range(group.order):
        numerator = vec[z] - weyl_act(i, vec[group.left_index(i, z)], rs)
        out.append(divide_one_minus_exp(numerator, alpha) if numerator else numerator)
    return tuple(out)


def loc_dsecond(group: WeylGroup, i: int, vec: LocVector) -> LocVector:
    # loc_z(D''_i c) = (loc_z c - loc_{z s_i} c) / (1 - e^{z alpha_i})
    rs = group.rs
    out = []
    for z in range(group.order):
        numerator = vec[z] - vec[group.right_index(z, i)]
        beta = group.act_weight(z, rs.simple_root(i))
        out.append(divide_one_minus_exp(numerator, beta) if numerator else numerator)
    return tuple(out)


def loc_frakD(group: WeylGroup, i: int, vec: LocVector) -> LocVector:
    rs = group.rs
    out = []
    for z in range(group.order):
        beta = group.act_weight(z, rs.simple_root(i))
        numerator = vec[z] - vec[group.right_index(z, i)].shift(beta)
        out.append(divide_one_minus_exp(numerator, beta) if numerator else numerator)
    return tuple(out)


def loc_transpose(group: WeylGroup, vec: LocVector) -> LocVector:
    # loc_z(t c) = z . loc_{z^-1}(c)
    return tuple(
        vec[group.inverses[z]].act(group.matrices[z]) for z in range(group.order)
    )


def loc_scale(
    group: WeylGroup,
    vec: LocVector,
    left: LaurentPoly,
    right: Optional[LaurentPoly] = None,
) -> LocVector:
    """
    Localizations of (left (x) right) . c.
    """
    if right is None:
        return tuple(left * v for v in vec)
    return tuple(
        left * right.act(group.matrices[z]) * vec[z] for z in range(group.order)
    )


def loc_add(*vectors: LocVector) -> LocVector:
    return tuple(sum_polys(parts) for parts in zip(*vectors))


def loc_neg(vec: LocVector) -> LocVector:
    return tuple(-v for v in vec)


def loc_one(group: WeylGroup) -> LocVector:
    one = LaurentPoly.one(group.rs.rank)
    return (one,) * group.order


# Steinberg basis and the zeta table


@dataclass(frozen=True)
class SteinbergBasis:
    delta: Tuple[Weight, ...]
    e_matrix: Tuple[Tuple[LaurentPoly, ...], ...]

    def element(self, x: int) -> LaurentPoly:
        return LaurentPoly.monomial(self.delta[x])


@dataclass(frozen=True)
class ZetaTable:
    """
    The classes zeta^x for x in W, by Weyl group index.
    """

    vectors: Tuple[LocVector, ...]
    classes: Tuple[TensorClass, ...]

    def vector(self, x: WeylElem) -> LocVector:
        return self.vectors[x.index]

    def tensor(self, x: WeylElem) -> TensorClass:
        return self.classes[x.index]


@dataclass(frozen=True)
class KContext:
    """
    Everything built once per type and shared read-only afterwards.
    """

    rs: RootSystem
    group: WeylGroup
    steinberg: SteinbergBasis
    zeta: ZetaTable

    @property
    def type_label(self) -> str:
        return self.rs.type_label


_SAMPLE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


def _numeric_determinant(matrix: Sequence[Sequence[LaurentPoly]]) -> sympy.Rational:
    # evaluate e^{omega_j} at distinct primes; a non-zero value proves det != 0
    def value(poly: LaurentPoly) -> sympy.Rational:
        total = sympy.Integer(0)
        for exponent, coeff in poly.terms.items():
            term = sympy.Integer(coeff)
            for p, n in zip(_SAMPLE_PRIMES, exponent):
                term *= sympy.Rational(p) ** n
            total += term
        return total

    return sympy.Matrix([[value(entry) for entry in row] for row in matrix]).det()


def build_steinberg(rs: RootSystem, group: WeylGroup) -> SteinbergBasis:
    """
    delta_x = x^-1 (sum of omega_i over i with x^-1 alpha_i < 0) and
    E_{x,y} = y . e^{delta_x}.

    :raises SingularMatrixError: if E fails the non-vanishing determinant check.
    """
    simple_positions = [rs.root_index(alpha)[0] for alpha in rs.simple_roots]
    deltas = []
    for x in range(group.order):
        x_inv = group.inverses[x]
        weight = [0] * rs.rank
        for i, position in enumerate(simple_positions):
            if position in group.inversion_sets[x_inv]:
                weight[i] = 1
        deltas.append(group.act_weight(x_inv, weight))
    e_matrix = tuple(
        tuple(
            LaurentPoly.monomial(group.act_weight(y, deltas[x]))
            for y in range(group.order)
        )
        for x in range(group.order)
    )
    if _numeric_determinant(e_matrix) == 0:
        raise SingularMatrixError(f"{rs.type_label}: Steinberg matrix is singular")
    return SteinbergBasis(delta=tuple(deltas), e_matrix=e_matrix)


def top_class_vector(group: WeylGroup) -> LocVector:
    """
    Localizations of zeta^{w_o}: zero off w_o, prod (1 - e^{-alpha}) at w_o.
    """
    rs = group.rs
    product = LaurentPoly.one(rs.rank)
    for alpha in rs.positive_roots:
        product = product * LaurentPoly(
            {rs.zero(): 1, tuple(-c for c in alpha): -1}
        )
    zero = LaurentPoly.zero()
    return tuple(zero for _ in range(group.order - 1)) + (product,)


def build_zeta_table(rs: RootSystem, group: WeylGroup, sb: SteinbergBasis) -> ZetaTable:
    """
    Solve for zeta^{w_o} in the Steinberg basis, then descend with
    zeta^{s_i y} = -D'_i zeta^y for s_i y < y.
    """
    top = top_class_vector(group)
    row = solve_row_system(sb.e_matrix, top)
    top_class = TensorClass([(r, sb.element(x)) for x, r in enumerate(row)])
    if localization_vector(top_class, group) != top:
        raise IntegrityError(f"{rs.type_label}: Steinberg solve does not localize back")

    w_o = group.order - 1
    vectors: Dict[int, LocVector] = {w_o: top}
    classes: Dict[int, TensorClass] = {w_o: top_class}
    for x in sorted(range(group.order), key=lambda k: -group.lengths[k]):
        if x == w_o:
            continue
        i = next(
            i
            for i in range(1, rs.rank + 1)
            if group.lengths[group.left_index(i, x)] > group.lengths[x]
        )
        y = group.left_index(i, x)
        vectors[x] = loc_neg(loc_dprime(group, i, vectors[y]))
        classes[x] = -dprime(rs, i, classes[y])

    table = ZetaTable(
        vectors=tuple(vectors[x] for x in range(group.order)),
        classes=tuple(classes[x] for x in range(group.order)),
    )
    _check_zeta_table(group, table)
    return table


def _check_zeta_table(group: WeylGroup, table: ZetaTable) -> None:
    label = group.type_label
    if loc_add(*table.vectors) != loc_one(group):
        raise IntegrityError(f"{label}: zeta classes do not sum to 1 (x) 1")
    for x, vec in enumerate(table.vectors):
        expected = 1 if x == 0 else 0
        if vec[0] != expected:
            raise IntegrityError(f"{label}: |zeta^{group.words[x]}| != {expected}")


@lru_cache(maxsize=None)
def build_context(type_label: str) -> KContext:
    group = build_weyl_group(type_label)
    rs = group.rs
    sb = build_steinberg(rs, group)
    zeta = build_zeta_table(rs, group, sb)
    logger.info("built K-theory context for %s (|W| = %d)", rs.type_label, group.order)
    return KContext(rs=rs, group=group, steinberg=sb, zeta=zeta)


# pairing and derived classes


def pairing(rs: RootSystem, c: TensorClass, y: WeylElem) -> LaurentPoly:
    """
    <a (x) b, O_{X_y}> = a * (d_{i1} o ... o d_{ik})(b) for a reduced word
    s_{i1} ... s_{ik} of y, where d_i is `frak_d`.
    """
    word = y.word
    total = []
    for a, b in c.pairs:
        f = b
        for i in reversed(word):
            f = frak_d(rs, i, f)
            if not f:
                break
        if f:
            total.append(a * f)
    return sum_polys(total)


def opposite_structure_sheaf(ctx: KContext, x: WeylElem) -> TensorClass:
    """
    O of the opposite Schubert variety through x: the sum of zeta^z over z >= x.
    """
    out = TensorClass()
    for z in ctx.group.upset(x.index):
        out = out + ctx.zeta.classes[z]
    return out


def opposite_structure_sheaf_vector(ctx: KContext, x: WeylElem) -> LocVector:
    return loc_add(*(ctx.zeta.vectors[z] for z in ctx.group.upset(x.index)))


@dataclass(frozen=True)
class SteinbergCoordinates:
    left: Tuple[LaurentPoly, ...]
    right: Tuple[LaurentPoly, ...]


def steinberg_coordinates(ctx: KContext, vec: LocVector) -> SteinbergCoordinates:
    """
    Both expansions c = sum r_x (x) e_x = sum e_x (x) q_x of a class given by
    its localizations.
    """
    group = ctx.group
    r = solve_row_system(ctx.steinberg.e_matrix, vec)
    hat = loc_transpose(group, vec)
    q = solve_row_system(ctx.steinberg.e_matrix, hat)
    return SteinbergCoordinates(left=tuple(r), right=tuple(q))


def from_steinberg_left(ctx: KContext, coords: Sequence[LaurentPoly]) -> TensorClass:
    sb = ctx.steinberg
    return TensorClass([(r, sb.element(x)) for x, r in enumerate(coords)])


def from_steinberg_right(ctx: KContext, coords: Sequence[LaurentPoly]) -> TensorClass:
    sb = ctx.steinberg
    return TensorClass([(sb.element(x), q) for x, q in enumerate(coords)])


# transpose identities for zeta^x


def descent_word_to_top(group: WeylGroup, x: WeylElem) -> List[int]:
    """
    A reduced word s_{i1} ... s_{in} with (s_{i1} ... s_{in}) x = w_o.
    """
    complement = group.multiply_index(group.order - 1, group.inverses[x.index])
    return list(group.words[complement])


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def transpose_by_dsecond(ctx: KContext, x: WeylElem) -> LocVector:
    """
    (-1)^l(x) (e^{2 rho} (x) 1) . (D''_{in} o ... o D''_{i1}) zeta^{w_o}.
    """
    group, rs = ctx.group, ctx.rs
    vec = ctx.zeta.vectors[-1]
    for i in descent_word_to_top(group, x):
        vec = loc_dsecond(group, i, vec)
    two_rho = LaurentPoly.monomial(tuple(2 * c for c in rs.rho), _sign(x.length))
    return loc_scale(group, vec, two_rho)


def transpose_by_frakD(ctx: KContext, x: WeylElem) -> LocVector:
    """
    (-1)^l(x) (e^rho (x) e^-rho) . (frakD_{in} o ... o frakD_{i1}) zeta^{w_o}.
    """
    group, rs = ctx.group, ctx.rs
    vec = ctx.zeta.vectors[-1]
    for i in descent_word_to_top(group, x):
        vec = loc_frakD(group, i, vec)
    left = LaurentPoly.monomial(rs.rho, _sign(x.length))
    right = LaurentPoly.monomial(tuple(-c for c in rs.rho))
    return loc_scale(group, vec, left, right)


def transpose_by_structure_sheaf(ctx: KContext, x: WeylElem) -> LocVector:
    """
    (-1)^l(x) (e^rho (x) e^-rho) . O_{opposite Schubert variety of x^-1}.
    """
    rs = ctx.rs
    vec = opposite_structure_sheaf_vector(ctx, x.inverse())
    left = LaurentPoly.monomial(rs.rho, _sign(x.length))
    right = LaurentPoly.monomial(tuple(-c for c in rs.rho))
    return loc_scale(ctx.group, vec, left, right)


def top_class_transposes(ctx: KContext) -> Tuple[LocVector, ...]:
    """
    The four expressions that must agree for zeta^{w_o}: its transpose, and
    (-1)^l(w_o) times (1 (x) e^{-2rho}), (e^rho (x) e^-rho), (e^{2rho} (x) 1)
    applied to it.
    """
    group, rs = ctx.group, ctx.rs
    top = ctx.zeta.vectors[-1]
    sign = _sign(group.lengths[-1])
    rho = rs.rho
    one = LaurentPoly.one(rs.rank)
    return (
        loc_transpose(group, top),
        loc_scale(
            group, top, one * sign, LaurentPoly.monomial(tuple(-2 * c for c in rho))
        ),
        loc_scale(
            group,
            top,
            LaurentPoly.monomial(rho, sign),
            LaurentPoly.monomial(tuple(-c for c in rho)),
        ),
        loc_scale(group, top, LaurentPoly.monomial(tuple(2 * c for c in rho), sign)),
    )
