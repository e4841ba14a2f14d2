"""
The finite Weyl group W and the affine Weyl group W x| Q^vee.

Finite elements are indexed once per type (ordered by length, then by reduced
word) and carry their action matrices on the weight and coroot lattices.
Affine elements are pairs (x, q) standing for x . tau_q, with the group law
(x, p)(y, q) = (xy, y^-1 p + q) and s_0 = (s_theta, -theta^vee).
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cartan import CorootVector, RootSystem, Weight, build_root_system, pair
from .exceptions import ArgumentError, IntegrityError

__all__ = [
    "WeylGroup",
    "WeylElem",
    "AffElem",
    "StabilizerData",
    "build_weyl_group",
    "affine_simple",
    "affine_from_word",
    "translation",
    "length_affine",
    "reduced_word",
    "demazure_product",
    "min_coset_rep",
    "is_minimal",
    "is_minimal_by_shape",
    "stabilizer_data",
    "bruhat_leq",
    "enumerate_grassmannian",
]

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _apply(m: IntMatrix, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def _identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


class WeylGroup:
    """
    The finite Weyl group of a root system, fully enumerated.

    Element index 0 is the identity and the last index is w_o.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        rank = rs.rank
        weight_gens = [self._weight_reflection(i) for i in range(1, rank + 1)]
        coroot_gens = [self._coroot_reflection(i) for i in range(1, rank + 1)]

        # breadth-first over left multiplication
        ident = _identity(rank)
        found: Dict[IntMatrix, int] = {ident: 0}
        mats: List[IntMatrix] = [ident]
        comats: List[IntMatrix] = [ident]
        lengths = [0]
        queue = deque([0])
        while queue:
            k = queue.popleft()
            for i in range(rank):
                m = _matmul(weight_gens[i], mats[k])
                if m not in found:
                    found[m] = len(mats)
                    mats.append(m)
                    comats.append(_matmul(coroot_gens[i], comats[k]))
                    lengths.append(lengths[k] + 1)
                    queue.append(found[m])

        lmul = [[found[_matmul(g, m)] for m in mats] for g in weight_gens]
        words: List[Optional[Tuple[int, ...]]] = [None] * len(mats)
        for k in sorted(range(len(mats)), key=lambda t: lengths[t]):
            if lengths[k] == 0:
                words[k] = ()
                continue
            i = next(i for i in range(rank) if lengths[lmul[i][k]] < lengths[k])
            words[k] = (i + 1,) + words[lmul[i][k]]

        order = sorted(range(len(mats)), key=lambda t: (lengths[t], words[t]))
        self.matrices: Tuple[IntMatrix, ...] = tuple(mats[t] for t in order)
        self.coroot_matrices: Tuple[IntMatrix, ...] = tuple(comats[t] for t in order)
        self.lengths: Tuple[int, ...] = tuple(lengths[t] for t in order)
        self.words: Tuple[Tuple[int, ...], ...] = tuple(words[t] for t in order)
        self._index: Dict[IntMatrix, int] = {m: k for k, m in enumerate(self.matrices)}

        size = len(order)
        self.left_table: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(self._index[_matmul(g, m)] for m in self.matrices) for g in weight_gens
        )
        self.right_table: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(self._index[_matmul(m, g)] for m in self.matrices) for g in weight_gens
        )
        self.inverses: Tuple[int, ...] = tuple(self._inverse(k) for k in range(size))
        self.inversion_sets = tuple(self._inversions(m) for m in self.matrices)
        if any(len(inv) != n for inv, n in zip(self.inversion_sets, self.lengths)):
            raise IntegrityError(
                f"{rs.type_label}: inversion count disagrees with length"
            )
        if self.lengths[-1] != len(rs.positive_roots):
            raise IntegrityError(f"{rs.type_label}: l(w_o) != |R+|")

        self.theta_reflection = self._index[self._reflection_matrix(rs.highest_root)]
        self._downsets = self._bruhat_downsets()
        logger.debug("enumerated W(%s): %d elements", rs.type_label, size)

    # construction helpers

    def _weight_reflection(self, i: int) -> IntMatrix:
        rank = self.rs.rank
        cols = [
            self.rs.reflect(self.rs.fundamental_weight(j), i) for j in range(1, rank + 1)
        ]
        return tuple(tuple(cols[j][k] for j in range(rank)) for k in range(rank))

    def _coroot_reflection(self, i: int) -> IntMatrix:
        rank = self.rs.rank
        cols = [
            self.rs.reflect_coroot(self.rs.simple_coroot(j), i)
            for j in range(1, rank + 1)
        ]
        return tuple(tuple(cols[j][k] for j in range(rank)) for k in range(rank))

    def _reflection_matrix(self, root: Weight) -> IntMatrix:
        rank = self.rs.rank
        cols = [
            self.rs.reflect_by_root(self.rs.fundamental_weight(j), root)
            for j in range(1, rank + 1)
        ]
        return tuple(tuple(cols[j][k] for j in range(rank)) for k in range(rank))

    def _inverse(self, k: int) -> int:
        # s_in ... s_i1 for the word s_i1 ... s_in
        inv = 0
        for i in self.words[k]:
            inv = self.left_table[i - 1][inv]
        return inv

    def _product(self, a: int, b: int) -> int:
        return self._index[_matmul(self.matrices[a], self.matrices[b])]

    def _inversions(self, m: IntMatrix) -> frozenset:
        out = set()
        for k, alpha in enumerate(self.rs.positive_roots):
            located = self.rs.root_index(_apply(m, alpha))
            if located is None:
                raise IntegrityError("Weyl group element does not permute roots")
            if located[1] < 0:
                out.add(k)
        return frozenset(out)

    def _bruhat_downsets(self) -> Tuple[int, ...]:
        # {u <= s_i w'} = {u <= w'} union s_i{u <= w'} for a left descent s_i
        down = [0] * self.order
        down[0] = 1
        for k in range(1, self.order):
            i = self.words[k][0]
            rest = self.left_table[i - 1][k]
            mask = down[rest]
            shifted = 0
            for u in range(self.order):
                if mask >> u & 1:
                    shifted |= 1 << self.left_table[i - 1][u]
            down[k] = mask | shifted
        return tuple(down)

    # public API

    @property
    def order(self) -> int:
        return len(self.matrices)

    @property
    def type_label(self) -> str:
        return self.rs.type_label

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return (WeylElem(self, k) for k in range(self.order))

    def __repr__(self) -> str:
        return f"WeylGroup({self.rs.type_label})"

    def element(self, index: int) -> "WeylElem":
        return WeylElem(self, index)

    @property
    def identity(self) -> "WeylElem":
        return WeylElem(self, 0)

    @property
    def longest(self) -> "WeylElem":
        return WeylElem(self, self.order - 1)

    def simple(self, i: int) -> "WeylElem":
        if i == 0:
            return WeylElem(self, self.theta_reflection)
        return WeylElem(self, self.left_table[i - 1][0])

    def from_word(self, word: Iterable[int]) -> "WeylElem":
        k = 0
        for i in reversed(list(word)):
            if not 0 <= i <= self.rs.rank:
                raise ArgumentError(
                    f"reflection index {i} out of range 0..{self.rs.rank}"
                )
            k = self.left_index(i, k)
        return WeylElem(self, k)

    def from_matrix(self, matrix: Sequence[Sequence[int]]) -> "WeylElem":
        key = tuple(tuple(row) for row in matrix)
        if key not in self._index:
            raise ArgumentError("matrix is not an element of the Weyl group")
        return WeylElem(self, self._index[key])

    def left_index(self, i: int, k: int) -> int:
        if i == 0:
            return self._product(self.theta_reflection, k)
        return self.left_table[i - 1][k]

    def right_index(self, k: int, i: int) -> int:
        if i == 0:
            return self._product(k, self.theta_reflection)
        return self.right_table[i - 1][k]

    def multiply_index(self, a: int, b: int) -> int:
        return self._product(a, b)

    def act_weight(self, k: int, weight: Sequence[int]) -> Weight:
        return _apply(self.matrices[k], weight)

    def act_coroot(self, k: int, coroot: Sequence[int]) -> CorootVector:
        return _apply(self.coroot_matrices[k], coroot)

    def is_left_descent(self, i: int, k: int) -> bool:
        return self.lengths[self.left_index(i, k)] < self.lengths[k]

    def is_right_descent(self, k: int, i: int) -> bool:
        return self.lengths[self.right_index(k, i)] < self.lengths[k]

    def bruhat_leq_index(self, a: int, b: int) -> bool:
        return bool(self._downsets[b] >> a & 1)

    def upset(self, k: int) -> List[int]:
        return [z for z in range(self.order) if self._downsets[z] >> k & 1]

    # affine kernels on raw (x index, q) pairs

    def affine_length(self, k: int, q: Sequence[int]) -> int:
        inv = self.inversion_sets[k]
        total = 0
        for r, alpha in enumerate(self.rs.positive_roots):
            value = pair(alpha, q)
            total += abs(value + 1) if r in inv else abs(value)
        return total

    def affine_left(self, i: int, k: int, q: CorootVector) -> Tuple[int, CorootVector]:
        if i == 0:
            shift = self.act_coroot(self.inverses[k], self.rs.simple_coroot(0))
            return self._product(self.theta_reflection, k), tuple(
                a + b for a, b in zip(shift, q)
            )
        return self.left_table[i - 1][k], tuple(q)

    def affine_right(self, k: int, q: CorootVector, i: int) -> Tuple[int, CorootVector]:
        image = self.rs.reflect_coroot(q, i)
        if i == 0:
            image = tuple(a - b for a, b in zip(image, self.rs.theta_coroot))
            return self._product(k, self.theta_reflection), image
        return self.right_table[i - 1][k], image

    def affine_multiply(
        self, k1: int, p: Sequence[int], k2: int, q: Sequence[int]
    ) -> Tuple[int, CorootVector]:
        shifted = self.act_coroot(self.inverses[k2], p)
        return self._product(k1, k2), tuple(a + b for a, b in zip(shifted, q))

    def affine_min_coset_rep(self, k: int, q: CorootVector) -> Tuple[int, CorootVector]:
        length = self.affine_length(k, q)
        changed = True
        while changed:
            changed = False
            for i in range(1, self.rs.rank + 1):
                k2, q2 = self.affine_right(k, q, i)
                length2 = self.affine_length(k2, q2)
                if length2 < length:
                    k, q, length = k2, q2, length2
                    changed = True
                    break
        return k, q

    def affine_demazure_right(
        self, k: int, q: CorootVector, word: Iterable[int]
    ) -> Tuple[int, CorootVector]:
        """
        Fold (k, q) * s_i over a word with the Demazure product.
        """
        length = self.affine_length(k, q)
        for i in word:
            k2, q2 = self.affine_right(k, q, i)
            length2 = self.affine_length(k2, q2)
            if length2 > length:
                k, q, length = k2, q2, length2
        return k, q

    def affine_demazure_left(
        self, i: int, k: int, q: CorootVector
    ) -> Tuple[int, CorootVector]:
        """
        s_i * (k, q) with the Demazure product.
        """
        k2, q2 = self.affine_left(i, k, q)
        if self.affine_length(k2, q2) > self.affine_length(k, q):
            return k2, q2
        return k, q


@dataclass(frozen=True)
class WeylElem:
    """
    A finite Weyl group element, identified by its index in its group.

    Two elements are equal iff their action matrices agree; the index is a
    bijective stand-in for the matrix within one group.
    """

    group: WeylGroup
    index: int

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeylElem):
            return NotImplemented
        return self.index == other.index and self.group is other.group

    def __hash__(self) -> int:
        return hash((self.group.rs.type_label, self.index))

    def __lt__(self, other: "WeylElem") -> bool:
        return self.index < other.index

    @property
    def word(self) -> Tuple[int, ...]:
        return self.group.words[self.index]

    @property
    def matrix(self) -> IntMatrix:
        return self.group.matrices[self.index]

    @property
    def coroot_matrix(self) -> IntMatrix:
        return self.group.coroot_matrices[self.index]

    @property
    def length(self) -> int:
        return self.group.lengths[self.index]

    def inverse(self) -> "WeylElem":
        return WeylElem(self.group, self.group.inverses[self.index])

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        if not isinstance(other, WeylElem):
            return NotImplemented
        return WeylElem(self.group, self.group.multiply_index(self.index, other.index))

    def act(self, weight: Sequence[int]) -> Weight:
        return self.group.act_weight(self.index, weight)

    def act_coroot(self, coroot: Sequence[int]) -> CorootVector:
        return self.group.act_coroot(self.index, coroot)

    def __repr__(self) -> str:
        if not self.word:
            return "e"
        return "".join(f"s{i}" for i in self.word)


@dataclass(frozen=True)
class AffElem:
    """
    The affine element x . tau_q.
    """

    x: WeylElem
    q: CorootVector

    @property
    def group(self) -> WeylGroup:
        return self.x.group

    def __mul__(self, other: "AffElem") -> "AffElem":
        if not isinstance(other, AffElem):
            return NotImplemented
        k, q = self.group.affine_multiply(self.x.index, self.q, other.x.index, other.q)
        return AffElem(WeylElem(self.group, k), q)

    def inverse(self) -> "AffElem":
        # (x, q)^-1 = (x^-1, -x q)
        group = self.group
        image = group.act_coroot(self.x.index, self.q)
        return AffElem(self.x.inverse(), tuple(-c for c in image))

    @property
    def length(self) -> int:
        return length_affine(self)

    @property
    def word(self) -> List[int]:
        return reduced_word(self)

    def __repr__(self) -> str:
        return f"{self.x!r}.tau{list(self.q)}"


def _aff(group: WeylGroup, k: int, q: Sequence[int]) -> AffElem:
    return AffElem(WeylElem(group, k), tuple(q))


@lru_cache(maxsize=None)
def build_weyl_group(type_label: str) -> WeylGroup:
    group = WeylGroup(build_root_system(type_label))
    s0 = affine_simple(group, 0)
    if length_affine(s0) != 1:
        raise IntegrityError(
            f"{type_label}: s_0 = s_theta tau_(-theta^vee) has length != 1"
        )
    return group


def affine_simple(group: WeylGroup, i: int) -> AffElem:
    rank = group.rs.rank
    if not 0 <= i <= rank:
        raise ArgumentError(f"affine reflection index {i} out of range 0..{rank}")
    if i == 0:
        return _aff(group, group.theta_reflection, group.rs.simple_coroot(0))
    return _aff(group, group.left_table[i - 1][0], (0,) * rank)


def identity(group: WeylGroup) -> AffElem:
    return _aff(group, 0, (0,) * group.rs.rank)


def translation(group: WeylGroup, q: Sequence[int]) -> AffElem:
    if len(q) != group.rs.rank:
        raise ArgumentError(
            f"coroot vector {list(q)} must have {group.rs.rank} coordinates"
        )
    return _aff(group, 0, q)


def affine_from_word(group: WeylGroup, word: Iterable[int]) -> AffElem:
    """
    Multiply out s_{i1} ... s_{in}; the word need not be reduced.
    """
    k, q = 0, (0,) * group.rs.rank
    for i in word:
        if not 0 <= i <= group.rs.rank:
            raise ArgumentError(
                f"affine reflection index {i} out of range 0..{group.rs.rank}"
            )
        k, q = group.affine_right(k, q, i)
    return _aff(group, k, q)


def length_affine(w: AffElem) -> int:
    """
    sum over alpha > 0 with x alpha < 0 of |alpha(q) + 1|, plus sum over the
    other positive roots of |alpha(q)|.
    """
    return w.group.affine_length(w.x.index, w.q)


def left_multiply(i: int, w: AffElem) -> AffElem:
    k, q = w.group.affine_left(i, w.x.index, w.q)
    return _aff(w.group, k, q)


def right_multiply(w: AffElem, i: int) -> AffElem:
    k, q = w.group.affine_right(w.x.index, w.q, i)
    return _aff(w.group, k, q)


def reduced_word(w: AffElem) -> List[int]:
    """
    Greedy left descents, smallest index first.
    """
    group = w.group
    k, q = w.x.index, w.q
    length = group.affine_length(k, q)
    word = []
    while length:
        for i in range(group.rs.rank + 1):
            k2, q2 = group.affine_left(i, k, q)
            length2 = group.affine_length(k2, q2)
            if length2 < length:
                word.append(i)
                k, q, length = k2, q2, length2
                break
        else:
            raise IntegrityError(f"{w!r} has positive length but no left descent")
    return word


def demazure_product(u: AffElem, v: AffElem) -> AffElem:
    group = u.group
    k, q = group.affine_demazure_right(u.x.index, u.q, reduced_word(v))
    return _aff(group, k, q)


def min_coset_rep(w: AffElem) -> AffElem:
    """
    The length-minimal element of w W.
    """
    k, q = w.group.affine_min_coset_rep(w.x.index, w.q)
    return _aff(w.group, k, q)


def is_minimal(w: AffElem) -> bool:
    """
    True when w has no finite right descent, i.e. w is in W'.
    """
    group = w.group
    length = group.affine_length(w.x.index, w.q)
    for i in range(1, group.rs.rank + 1):
        k2, q2 = group.affine_right(w.x.index, w.q, i)
        if group.affine_length(k2, q2) < length:
            return False
    return True


@dataclass(frozen=True)
class StabilizerData:
    stabilizer: Tuple[WeylElem, ...]
    generators: Tuple[WeylElem, ...]
    minimal_representatives: Tuple[WeylElem, ...]


def stabilizer_data(group: WeylGroup, q: Sequence[int]) -> StabilizerData:
    """
    The stabilizer W_q of q, the reflections generating it, and the
    length-minimal representatives W'_q of W / W_q.
    """
    q = tuple(q)
    stab = [k for k in range(group.order) if group.act_coroot(k, q) == q]
    rs = group.rs
    gens = []
    for alpha in rs.positive_roots:
        if pair(alpha, q) == 0:
            gens.append(group.from_matrix(group._reflection_matrix(alpha)))
    reps = {}
    for k in range(group.order):
        coset = frozenset(group.multiply_index(k, s) for s in stab)
        best = min(coset, key=lambda t: (group.lengths[t], t))
        reps[coset] = best
    return StabilizerData(
        stabilizer=tuple(WeylElem(group, k) for k in stab),
        generators=tuple(sorted(gens)),
        minimal_representatives=tuple(WeylElem(group, k) for k in sorted(reps.values())),
    )


def is_minimal_by_shape(w: AffElem) -> bool:
    """
    w = x tau_q lies in W' iff q <= 0 and x is a minimal representative of
    x W_q.
    """
    if not w.group.rs.is_antidominant(w.q):
        return False
    return w.x in stabilizer_data(w.group, w.q).minimal_representatives


def bruhat_leq(x: WeylElem, y: WeylElem) -> bool:
    return x.group.bruhat_leq_index(x.index, y.index)


def enumerate_grassmannian(group: WeylGroup, max_len: int) -> List[AffElem]:
    """
    Every element of W' up to length max_len, ordered by length then word.
    """
    rank = group.rs.rank
    level = {(0, (0,) * rank)}
    found = [(0, (), 0, (0,) * rank)]
    for length in range(1, max_len + 1):
        nxt = set()
        for k, q in level:
            for i in range(rank + 1):
                k2, q2 = group.affine_left(i, k, q)
                if (k2, q2) in nxt or group.affine_length(k2, q2) != length:
                    continue
                if is_minimal(_aff(group, k2, q2)):
                    nxt.add((k2, q2))
        for k, q in nxt:
            found.append((length, tuple(reduced_word(_aff(group, k, q))), k, q))
        level = nxt
    found.sort(key=lambda t: (t[0], t[1]))
    return [_aff(group, k, q) for _, _, k, q in found]
