import random

import pytest

from loopk.exceptions import ArgumentError
from loopk.kclass import (
    TensorClass,
    build_context,
    dprime,
    dsecond,
    from_steinberg_left,
    from_steinberg_right,
    frakD,
    loc_dprime,
    loc_dsecond,
    loc_frakD,
    loc_one,
    loc_scale,
    loc_sprime,
    loc_transpose,
    localization_vector,
    localize,
    opposite_structure_sheaf,
    pairing,
    sprime,
    steinberg_coordinates,
    top_class_transposes,
    transpose,
    transpose_by_dsecond,
    transpose_by_frakD,
    transpose_by_structure_sheaf,
)
from loopk.laurent import LaurentPoly, sum_polys

from .conftest import mono, random_poly

SEED = 31337


def _random_class(rng, rank, pairs=2):
    return TensorClass(
        [
            (random_poly(rng, rank, spread=2), random_poly(rng, rank, spread=2))
            for _ in range(pairs)
        ]
    )


def _combine(a, b, factor):
    return tuple(x + factor * y for x, y in zip(a, b))


def test_sl2_steinberg_basis(a1):
    assert a1.steinberg.delta == ((0,), (-1,))
    one = LaurentPoly.one(1)
    assert a1.steinberg.e_matrix == ((one, one), (mono(-1), mono(1)))


def test_sl2_zeta_classes(a1):
    group = a1.group
    e, s1 = group.identity, group.simple(1)
    ze, zs = a1.zeta.vector(e), a1.zeta.vector(s1)
    assert ze == localization_vector(TensorClass.pure((-1,), (1,)), group)
    e_rho = TensorClass.pure((-1,), (1,))
    assert zs == localization_vector(TensorClass.one(1) - e_rho, group)

    one = LaurentPoly.one(1)
    expected = localization_vector(TensorClass.pure((1,), (1,)), group)
    assert loc_sprime(group, 0, ze) == expected
    assert loc_sprime(group, 0, zs) == _combine(zs, ze, one - mono(2))
    assert loc_dprime(group, 0, ze) == loc_scale(group, ze, -mono(2))
    assert loc_dprime(group, 0, zs) == loc_scale(group, ze, mono(2))
    assert loc_dprime(group, 1, ze) == ze
    assert loc_dprime(group, 1, zs) == tuple(-v for v in ze)


def test_zeta_sum_and_counit(ctx):
    total = tuple(sum_polys(parts) for parts in zip(*ctx.zeta.vectors))
    assert total == loc_one(ctx.group)
    for x in ctx.group:
        assert ctx.zeta.vector(x)[0] == (1 if x == ctx.group.identity else 0)
        assert ctx.zeta.tensor(x).absolute() == ctx.zeta.vector(x)[0]


def test_zeta_tensors_match_vectors(ctx):
    for x in ctx.group:
        assert localization_vector(ctx.zeta.tensor(x), ctx.group) == ctx.zeta.vector(x)


def test_top_class_is_supported_at_longest(ctx):
    top = ctx.zeta.vectors[-1]
    assert all(not v for v in top[:-1])
    product = LaurentPoly.one(ctx.rs.rank)
    for alpha in ctx.rs.positive_roots:
        product = product * (LaurentPoly.one(ctx.rs.rank) - LaurentPoly.monomial(
            tuple(-c for c in alpha)
        ))
    assert top[-1] == product


def test_duality(ctx):
    for x in ctx.group:
        c = ctx.zeta.tensor(x)
        for y in ctx.group:
            assert pairing(ctx.rs, c, y) == (1 if x == y else 0)


def test_operators_on_zeta(ctx):
    group, rs = ctx.group, ctx.rs
    one = LaurentPoly.one(rs.rank)
    for x in group:
        vec = ctx.zeta.vector(x)
        for i in range(1, rs.rank + 1):
            alpha = LaurentPoly.monomial(rs.simple_root(i))
            sx = group.simple(i) * x
            other = ctx.zeta.vector(sx)
            if sx.length > x.length:
                assert loc_sprime(group, i, vec) == loc_scale(group, vec, alpha)
                assert loc_dprime(group, i, vec) == vec
            else:
                assert loc_sprime(group, i, vec) == _combine(vec, other, one - alpha)
                assert loc_dprime(group, i, vec) == tuple(-v for v in other)


def test_affine_operator_on_identity(ctx):
    rs = ctx.rs
    factor = sum_polys(
        LaurentPoly.monomial(tuple(k * c for c in rs.highest_root), -1)
        for k in range(1, rs.dual_coxeter_number)
    )
    ze = ctx.zeta.vectors[0]
    assert loc_dprime(ctx.group, 0, ze) == loc_scale(ctx.group, ze, factor)


def test_affine_operator_on_identity_a2(a2):
    ze = a2.zeta.vectors[0]
    factor = -mono(1, 1) - mono(2, 2)
    assert loc_dprime(a2.group, 0, ze) == loc_scale(a2.group, ze, factor)


def test_top_class_transposes(ctx):
    forms = top_class_transposes(ctx)
    assert all(form == forms[0] for form in forms[1:])


def test_transpose_identities(ctx):
    for x in ctx.group:
        expected = loc_transpose(ctx.group, ctx.zeta.vector(x))
        assert transpose_by_dsecond(ctx, x) == expected
        assert transpose_by_frakD(ctx, x) == expected
        assert transpose_by_structure_sheaf(ctx, x) == expected


@pytest.mark.parametrize("type_label", ["A1", "A2", "C2"])
def test_tensor_and_localized_operators_agree(type_label):
    ctx = build_context(type_label)
    group, rs = ctx.group, ctx.rs
    rng = random.Random(SEED)
    for _ in range(10):
        c = _random_class(rng, rs.rank)
        vec = localization_vector(c, group)
        assert localization_vector(transpose(c), group) == loc_transpose(group, vec)
        for i in range(rs.rank + 1):
            assert localization_vector(sprime(rs, i, c), group) == loc_sprime(
                group, i, vec
            )
            assert localization_vector(dprime(rs, i, c), group) == loc_dprime(
                group, i, vec
            )
        for i in range(1, rs.rank + 1):
            assert localization_vector(dsecond(rs, i, c), group) == loc_dsecond(
                group, i, vec
            )
            assert localization_vector(frakD(rs, i, c), group) == loc_frakD(
                group, i, vec
            )


def test_localization_is_multiplicative(a2):
    rng = random.Random(SEED + 1)
    for _ in range(10):
        c, d = _random_class(rng, 2), _random_class(rng, 2)
        for z in a2.group:
            assert localize(c * d, z) == localize(c, z) * localize(d, z)
            assert localize(c - d, z) == localize(c, z) - localize(d, z)


def test_scaling_matches_tensor_product(c2):
    rng = random.Random(SEED + 2)
    c = _random_class(rng, 2)
    left, right = random_poly(rng, 2), random_poly(rng, 2)
    vec = localization_vector(c, c2.group)
    assert localization_vector(c.scale(left, right), c2.group) == loc_scale(
        c2.group, vec, left, right
    )
    assert localization_vector(c.scale(left), c2.group) == loc_scale(c2.group, vec, left)


def test_steinberg_coordinates(ctx):
    for x in ctx.group:
        vec = ctx.zeta.vector(x)
        coords = steinberg_coordinates(ctx, vec)
        left = from_steinberg_left(ctx, coords.left)
        right = from_steinberg_right(ctx, coords.right)
        assert localization_vector(left, ctx.group) == vec
        assert localization_vector(right, ctx.group) == vec


def test_sl2_top_class_coordinates(a1):
    coords = steinberg_coordinates(a1, a1.zeta.vectors[-1])
    assert coords.left == (-mono(-2), mono(-1))


def test_opposite_structure_sheaf(ctx):
    group = ctx.group
    full = opposite_structure_sheaf(ctx, group.identity)
    assert localization_vector(full, group) == loc_one(group)
    top = opposite_structure_sheaf(ctx, group.longest)
    assert localization_vector(top, group) == ctx.zeta.vectors[-1]


def test_operator_index_checks(a1):
    c = TensorClass.one(1)
    with pytest.raises(ArgumentError):
        dsecond(a1.rs, 0, c)
    with pytest.raises(ArgumentError):
        frakD(a1.rs, 2, c)
    with pytest.raises(ArgumentError):
        sprime(a1.rs, 2, c)
