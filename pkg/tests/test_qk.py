import pytest

from loopk.cartan import build_root_system
from loopk.exceptions import ArgumentError
from loopk.kclass import build_context
from loopk.laurent import LaurentPoly
from loopk.qk import (
    QKTable,
    check_depth,
    default_depth,
    depth_stability_check,
    parity_cross_check,
    qk_product,
)

from .conftest import mono


def _sl2_square(a1):
    group = a1.group
    one = LaurentPoly.one(1)
    return {(group.identity, (1,)): mono(2), (group.simple(1), (0,)): one - mono(2)}


@pytest.mark.parametrize("depth", [(-1,), (-2,), (-3,)])
def test_sl2_quantum_square(a1, depth):
    s1 = a1.group.simple(1)
    table = qk_product(a1, s1, s1, depth)
    assert table.entries == _sl2_square(a1)


def test_independent_depths(a1):
    s1 = a1.group.simple(1)
    table = qk_product(a1, s1, s1, depth=(-1,), depth2=(-2,))
    assert table.entries == _sl2_square(a1)


def test_sources_decompose_keys(a1):
    s1 = a1.group.simple(1)
    table = qk_product(a1, s1, s1, (-1,))
    for (z, eta), w in table.sources.items():
        assert w.x == z
        assert tuple(b + 2 for b in w.q) == eta


@pytest.mark.parametrize(
    "type_label, expected",
    [("A1", (-1,)), ("A2", (-1, -1)), ("A3", (-2, -3, -2)), ("C2", (-2, -3))],
)
def test_default_depth(type_label, expected):
    rs = build_root_system(type_label)
    assert default_depth(rs) == expected
    assert rs.is_antidominant(expected, strict=True)


@pytest.mark.parametrize("type_label", ["A1", "A2"])
def test_identity_is_unit(type_label):
    ctx = build_context(type_label)
    zero = (0,) * ctx.rs.rank
    for y in ctx.group:
        table = qk_product(ctx, ctx.group.identity, y)
        assert table.entries == {(y, zero): LaurentPoly.one(ctx.rs.rank)}


def test_identity_is_unit_c2(c2):
    table = qk_product(c2, c2.group.identity, c2.group.simple(2))
    assert table.entries == {(c2.group.simple(2), (0, 0)): LaurentPoly.one(2)}


def test_quantum_product_commutes(a2):
    for x in a2.group:
        for y in a2.group:
            if x.index < y.index:
                assert qk_product(a2, x, y) == qk_product(a2, y, x)


def test_quantum_degrees_are_effective(a2):
    for x in a2.group:
        table = qk_product(a2, x, a2.group.longest)
        assert all(min(eta) >= 0 for _, eta in table.entries)


@pytest.mark.parametrize(
    "type_label, depths",
    [("A1", [(-1,), (-2,)]), ("A2", [(-1, -1), (-2, -2)])],
)
def test_depth_stability(type_label, depths):
    ctx = build_context(type_label)
    for x in ctx.group:
        report = depth_stability_check(ctx, x, ctx.group.simple(1), depths)
        assert report.stable, report.discrepancies
        assert report.discrepancies == []


def test_stability_trivial_for_identity(a2):
    e = a2.group.identity
    report = depth_stability_check(a2, e, e, [(-1, -1), (-2, -2)])
    assert report.stable


@pytest.mark.parametrize("type_label", ["A1", "A2"])
def test_parity_cross_check(type_label):
    report = parity_cross_check(build_context(type_label))
    assert report.ok, report.mismatches
    assert report.checked > 0


@pytest.mark.parametrize("depth", [(0,), (1,), (-1, -1)])
def test_bad_depth_for_sl2(a1, depth):
    s1 = a1.group.simple(1)
    with pytest.raises(ArgumentError):
        qk_product(a1, s1, s1, depth)


def test_depth_must_be_strict(a2):
    x = a2.group.simple(1)
    with pytest.raises(ArgumentError):
        check_depth(a2.rs, (-2, -1), "depth")
    with pytest.raises(ArgumentError):
        qk_product(a2, x, x, depth=(-1, -1), depth2=(-2, -1))


def test_table_helpers(a1):
    s1 = a1.group.simple(1)
    table = qk_product(a1, s1, s1)
    assert len(table) == 2
    assert table.get(a1.group.identity, (1,)) == mono(2)
    assert table.get(s1, (1,)) == 0
    assert [key for key, _ in table.items()] == [(a1.group.identity, (1,)), (s1, (0,))]
    assert table != QKTable()
