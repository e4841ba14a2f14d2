import pytest

from loopk.cartan import build_root_system, pair, parse_type_label, reflect
from loopk.exceptions import ConfigurationError


@pytest.mark.parametrize(
    "type_label, roots, theta, theta_coroot, h",
    [
        ("A1", 1, (2,), (1,), 2),
        ("A2", 3, (1, 1), (1, 1), 3),
        ("C2", 4, (2, 0), (1, 1), 3),
        ("A3", 6, (1, 0, 1), (1, 1, 1), 4),
    ],
)
def test_root_data(type_label, roots, theta, theta_coroot, h):
    rs = build_root_system(type_label)
    assert len(rs.positive_roots) == roots
    assert rs.highest_root == theta
    assert rs.theta_coroot == theta_coroot
    assert rs.dual_coxeter_number == h
    assert rs.rho == (1,) * rs.rank
    assert rs.simple_root(0) == tuple(-c for c in theta)
    assert rs.simple_coroot(0) == tuple(-c for c in theta_coroot)


def test_simple_roots_are_cartan_columns():
    rs = build_root_system("C2")
    assert rs.cartan_matrix == ((2, -2), (-1, 2))
    assert rs.simple_roots == ((2, -1), (-2, 2))
    assert pair(rs.simple_root(1), rs.simple_coroot(2)) == -1
    assert pair(rs.simple_root(2), rs.simple_coroot(1)) == -2


def test_positive_roots_sorted_by_height():
    rs = build_root_system("C2")
    heights = [sum(c) for c in rs.root_coordinates]
    assert heights == sorted(heights)
    assert rs.root_coordinates[-1] == (2, 1)


def test_root_coordinates():
    a1 = build_root_system("A1")
    assert a1.to_root_coordinates((2,)) == (1,)
    assert a1.to_root_coordinates((-4,)) == (-2,)
    assert a1.to_root_coordinates((1,)) is None
    c2 = build_root_system("C2")
    assert c2.to_root_coordinates((2, 0)) == (2, 1)
    assert c2.from_root_coordinates((2, 1)) == (2, 0)


def test_reflections():
    a1 = build_root_system("A1")
    a2 = build_root_system("A2")
    assert reflect(a1, (1,), 1) == (-1,)
    assert reflect(a2, (-1, 2), 1) == (1, 1)
    assert a2.reflect((1, 1), 0) == (-1, -1)
    assert a2.reflect_coroot((-1, -1), 1) == (0, -1)
    assert a2.reflect_coroot((0, 0), 0) == (0, 0)


def test_reflection_is_involution():
    rs = build_root_system("C2")
    weight = (3, -2)
    for i in range(rs.rank + 1):
        assert rs.reflect(rs.reflect(weight, i), i) == weight
        assert rs.reflect_coroot(rs.reflect_coroot(weight, i), i) == weight


def test_coroots_pair_to_two():
    for type_label in ("A2", "C2", "B2", "G2"):
        rs = build_root_system(type_label)
        for alpha, coroot in zip(rs.positive_roots, rs.positive_coroots):
            assert pair(alpha, coroot) == 2


def test_antidominance():
    rs = build_root_system("C2")
    assert rs.is_antidominant((-2, -3), strict=True)
    assert not rs.is_antidominant((-1, -1), strict=True)
    assert rs.is_antidominant((-1, -1))
    assert not rs.is_antidominant((1, 0))


@pytest.mark.parametrize("label", ["", "A0", "E6", "A9", "a", "D3"])
def test_bad_type_labels(label):
    with pytest.raises(ConfigurationError):
        parse_type_label(label)


def test_type_label_is_normalized():
    assert build_root_system("a2").type_label == "A2"
