"""
Cartan data for the supported simple types.

Convention (fixed here, used everywhere): a_ij = <alpha_j, alpha_i^vee>, so the
simple root alpha_j written in fundamental-weight coordinates is column j of A.
"""
import re
from typing import Callable, Dict, List, Tuple

CartanMatrix = Tuple[Tuple[int, ...], ...]

TYPE_LABEL_RE = re.compile(r"^([A-Z])(\d+)$")

# Lowest rank accepted for each family.
MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4, "G": 2}
MAX_RANK = {"A": 5, "B": 4, "C": 4, "D": 4, "G": 2}

# Types the selftest runs when none are named.
ACCEPTANCE_TYPES = ("A1", "A2", "C2")


def _chain(rank: int) -> List[List[int]]:
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
        if i + 1 < rank:
            a[i][i + 1] = -1
            a[i + 1][i] = -1
    return a


def _type_a(rank: int) -> List[List[int]]:
    return _chain(rank)


def _type_b(rank: int) -> List[List[int]]:
    # alpha_n short
    a = _chain(rank)
    a[rank - 1][rank - 2] = -2
    return a


def _type_c(rank: int) -> List[List[int]]:
    # alpha_n long
    a = _chain(rank)
    a[rank - 2][rank - 1] = -2
    return a


def _type_d(rank: int) -> List[List[int]]:
    a = _chain(rank)
    a[rank - 2][rank - 1] = a[rank - 1][rank - 2] = 0
    a[rank - 3][rank - 1] = a[rank - 1][rank - 3] = -1
    return a


def _type_g(rank: int) -> List[List[int]]:
    # alpha_1 short, alpha_2 long
    return [[2, -3], [-1, 2]]


CARTAN_BUILDERS: Dict[str, Callable[[int], List[List[int]]]] = {
    "A": _type_a,
    "B": _type_b,
    "C": _type_c,
    "D": _type_d,
    "G": _type_g,
}
