"""
Root-system data for simple types.

Weights are integer tuples in fundamental-weight coordinates, coroot-lattice
vectors are integer tuples in simple-coroot coordinates. With the convention of
`loopk.constants`, every pairing is an integer dot product.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from .constants import (
    CARTAN_BUILDERS,
    MAX_RANK,
    MIN_RANK,
    TYPE_LABEL_RE,
    CartanMatrix,
)
from .exceptions import ConfigurationError, IntegrityError

__all__ = [
    "Weight",
    "CorootVector",
    "RootSystem",
    "build_root_system",
    "parse_type_label",
    "reflect",
    "pair",
]

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]
CorootVector = Tuple[int, ...]


def pair(weight: Sequence[int], coroot: Sequence[int]) -> int:
    """
    Evaluate a weight on a coroot-lattice vector: sum of coords[j] * n_j.
    """
    return sum(a * b for a, b in zip(weight, coroot))


def _add(a: Sequence[int], b: Sequence[int], scale: int = 1) -> Tuple[int, ...]:
    return tuple(x + scale * y for x, y in zip(a, b))


@dataclass(frozen=True)
class RootSystem:
    """
    Lie data of a simple type.

    Positive roots are ordered by height, then lexicographically by their
    simple-root coordinates, so everything built on top serializes stably.
    """

    type_label: str
    cartan_matrix: CartanMatrix
    positive_roots: Tuple[Weight, ...]
    # simple-root coordinates of each positive root
    root_coordinates: Tuple[Tuple[int, ...], ...]
    # simple-coroot coordinates of each positive coroot
    positive_coroots: Tuple[CorootVector, ...]
    highest_root: Weight
    theta_coroot: CorootVector
    rho: Weight
    dual_coxeter_number: int
    _determinant: int = field(repr=False)
    _adjugate: Tuple[Tuple[int, ...], ...] = field(repr=False)
    _root_index: Dict[Weight, int] = field(repr=False, compare=False, hash=False)

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def simple_roots(self) -> Tuple[Weight, ...]:
        a = self.cartan_matrix
        return tuple(tuple(a[k][j] for k in range(self.rank)) for j in range(self.rank))

    def simple_root(self, i: int) -> Weight:
        """
        alpha_i for i in 1..l; alpha_0 = -theta.
        """
        if i == 0:
            return tuple(-c for c in self.highest_root)
        return self.simple_roots[i - 1]

    def simple_coroot(self, i: int) -> CorootVector:
        if i == 0:
            return tuple(-c for c in self.theta_coroot)
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def fundamental_weight(self, i: int) -> Weight:
        return tuple(1 if k == i - 1 else 0 for k in range(self.rank))

    def zero(self) -> Weight:
        return (0,) * self.rank

    def root_index(self, weight: Sequence[int]) -> Optional[Tuple[int, int]]:
        """
        Locate a root: returns (index into positive_roots, sign) or None.
        """
        weight = tuple(weight)
        idx = self._root_index.get(weight)
        if idx is not None:
            return idx, 1
        idx = self._root_index.get(tuple(-c for c in weight))
        if idx is not None:
            return idx, -1
        return None

    def is_root(self, weight: Sequence[int]) -> bool:
        return self.root_index(weight) is not None

    def coroot_of(self, root: Sequence[int]) -> CorootVector:
        located = self.root_index(root)
        if located is None:
            raise IntegrityError(f"{tuple(root)} is not a root of {self.type_label}")
        idx, sign = located
        return tuple(sign * c for c in self.positive_coroots[idx])

    def reflect(self, weight: Sequence[int], i: int) -> Weight:
        """
        s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i; index 0 is s_theta.
        """
        if i == 0:
            return self.reflect_by_root(weight, self.highest_root)
        self._check_index(i)
        return _add(weight, self.simple_roots[i - 1], -weight[i - 1])

    def reflect_by_root(self, weight: Sequence[int], root: Sequence[int]) -> Weight:
        coroot = self.coroot_of(root)
        return _add(weight, root, -pair(weight, coroot))

    def reflect_coroot(self, coroot: Sequence[int], i: int) -> CorootVector:
        """
        s_i(q) = q - alpha_i(q) alpha_i^vee on the coroot lattice.
        """
        if i == 0:
            theta = self.highest_root
            return _add(coroot, self.theta_coroot, -pair(theta, coroot))
        self._check_index(i)
        weight = -pair(self.simple_roots[i - 1], coroot)
        return _add(coroot, self.simple_coroot(i), weight)

    def root_values(self, coroot: Sequence[int]) -> Tuple[int, ...]:
        """
        alpha(q) for every positive root alpha, in positive_roots order.
        """
        return tuple(pair(alpha, coroot) for alpha in self.positive_roots)

    def is_antidominant(self, coroot: Sequence[int], strict: bool = False) -> bool:
        values = (pair(alpha, coroot) for alpha in self.simple_roots)
        if strict:
            return all(v < 0 for v in values)
        return all(v <= 0 for v in values)

    def to_root_coordinates(self, weight: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """
        Write a weight in simple-root coordinates; None when it is not in the
        root lattice.
        """
        det = self._determinant
        coords = []
        for row in self._adjugate:
            numerator = sum(a * b for a, b in zip(row, weight))
            if numerator % det:
                return None
            coords.append(numerator // det)
        return tuple(coords)

    def from_root_coordinates(self, coords: Sequence[int]) -> Weight:
        weight = self.zero()
        for j, n in enumerate(coords):
            if n:
                weight = _add(weight, self.simple_roots[j], n)
        return weight

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.rank:
            raise IntegrityError(f"simple index {i} out of range 1..{self.rank}")


def parse_type_label(type_label: str) -> Tuple[str, int]:
    match = TYPE_LABEL_RE.match(type_label.strip().upper())
    if not match:
        raise ConfigurationError(
            f"malformed type label {type_label!r}; expected e.g. A2"
        )
    family, rank = match.group(1), int(match.group(2))
    if family not in CARTAN_BUILDERS:
        raise ConfigurationError(f"unsupported type family {family!r}")
    if not MIN_RANK[family] <= rank <= MAX_RANK[family]:
        raise ConfigurationError(
            f"rank {rank} unsupported for type {family}; "
            f"allowed {MIN_RANK[family]}..{MAX_RANK[family]}"
        )
    return family, rank


def _enumerate_positive_roots(
    cartan: List[List[int]],
) -> List[Tuple[Weight, Tuple[int, ...], CorootVector]]:
    rank = len(cartan)
    simple = [tuple(cartan[k][j] for k in range(rank)) for j in range(rank)]

    def unit(i: int) -> Tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(rank))

    found = {}
    queue = []
    for i in range(rank):
        entry = (simple[i], unit(i), unit(i))
        found[simple[i]] = entry
        queue.append(entry)

    while queue:
        weight, coords, coroot = queue.pop(0)
        for j in range(rank):
            if weight == simple[j]:
                continue
            c = weight[j]
            image = _add(weight, simple[j], -c)
            if image in found:
                continue
            image_coords = tuple(n - c if k == j else n for k, n in enumerate(coords))
            if any(n < 0 for n in image_coords):
                raise IntegrityError("simple reflection produced a negative root")
            alpha_j_of_coroot = sum(cartan[k][j] * coroot[k] for k in range(rank))
            image_coroot = tuple(
                n - alpha_j_of_coroot if k == j else n for k, n in enumerate(coroot)
            )
            entry = (image, image_coords, image_coroot)
            found[image] = entry
            queue.append(entry)

    return sorted(found.values(), key=lambda e: (sum(e[1]), e[1]))


@lru_cache(maxsize=None)
def build_root_system(type_label: str) -> RootSystem:
    """
    Build the root system of a supported simple type.

    :param type_label: "A1", "A2", "C2", ... (see `loopk.constants`).
    :raises ConfigurationError: for an unknown or out-of-range label.
    """
    family, rank = parse_type_label(type_label)
    label = f"{family}{rank}"
    cartan = CARTAN_BUILDERS[family](rank)

    entries = _enumerate_positive_roots(cartan)
    roots = tuple(e[0] for e in entries)
    coords = tuple(e[1] for e in entries)
    coroots = tuple(e[2] for e in entries)

    # the highest root is the unique root of maximal height
    theta_idx = len(entries) - 1
    if len(entries) > 1 and sum(coords[-2]) == sum(coords[-1]):
        raise IntegrityError(f"{label}: highest root is not unique")
    theta, theta_coroot = roots[theta_idx], coroots[theta_idx]

    matrix = sympy.Matrix(cartan)
    determinant = int(matrix.det())
    adjugate = tuple(
        tuple(int(v) for v in matrix.adjugate().row(k)) for k in range(rank)
    )

    rs = RootSystem(
        type_label=label,
        cartan_matrix=tuple(tuple(row) for row in cartan),
        positive_roots=roots,
        root_coordinates=coords,
        positive_coroots=coroots,
        highest_root=theta,
        theta_coroot=theta_coroot,
        rho=(1,) * rank,
        dual_coxeter_number=1 + sum(theta_coroot),
        _determinant=determinant,
        _adjugate=adjugate,
        _root_index={root: k for k, root in enumerate(roots)},
    )
    _validate(rs)
    logger.debug("built root system %s with %d positive roots", label, len(roots))
    return rs


def _validate(rs: RootSystem) -> None:
    a = rs.cartan_matrix
    for i in range(rs.rank):
        if a[i][i] != 2 or any(a[i][j] > 0 for j in range(rs.rank) if j != i):
            raise IntegrityError(f"{rs.type_label}: malformed Cartan matrix")
    if any(c < 0 for c in rs.highest_root):
        raise IntegrityError(f"{rs.type_label}: highest root is not dominant")
    two_rho = rs.zero()
    for alpha in rs.positive_roots:
        two_rho = _add(two_rho, alpha)
    if two_rho != tuple(2 * c for c in rs.rho):
        raise IntegrityError(f"{rs.type_label}: positive roots do not sum to 2 rho")
    for alpha, coords in zip(rs.positive_roots, rs.root_coordinates):
        if rs.to_root_coordinates(alpha) != coords:
            raise IntegrityError(f"{rs.type_label}: root coordinate solve disagrees")


def reflect(rs: RootSystem, weight: Iterable[int], i: int) -> Weight:
    """
    Apply the simple reflection s_i (i in 1..l) to a weight.
    """
    return rs.reflect(tuple(weight), i)
