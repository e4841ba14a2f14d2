"""
The representation ring R(T) = Z[weight lattice] as sparse exact Laurent
polynomials, with the Weyl action, the operator D_i, exact division and a
fraction-free row solver.

Monomials are ordered graded-lexicographically on their exponent vectors
(total degree first, then lexicographic). The order is compatible with
multiplication, which is what leading-term division relies on.
"""
import logging
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .cartan import RootSystem, Weight
from .exceptions import NotDivisible, SingularMatrixError

__all__ = [
    "LaurentPoly",
    "monomial_key",
    "weyl_act",
    "demazure_D",
    "exact_div",
    "solve_row_system",
]

logger = logging.getLogger(__name__)

Matrix = Sequence[Sequence[int]]


def monomial_key(exponent: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    return sum(exponent), tuple(exponent)


class LaurentPoly:
    """
    An element of Z[Lambda]: a finitely supported map exponent -> integer.

    Instances are treated as immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Weight, int]] = None):
        if terms:
            self._terms: Dict[Weight, int] = {
                tuple(k): int(v) for k, v in terms.items() if v
            }
        else:
            self._terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Weight, int]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return cls({tuple(exponent): coeff})

    @classmethod
    def constant(cls, value: int, rank: int) -> "LaurentPoly":
        return cls({(0,) * rank: value})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls.constant(1, rank)

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    @property
    def terms(self) -> Dict[Weight, int]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Weight, int]]:
        """
        Terms sorted by the monomial order, leading term last.
        """
        return sorted(self._terms.items(), key=lambda kv: monomial_key(kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Weight]:
        return iter(sorted(self._terms, key=monomial_key))

    def coefficient(self, exponent: Sequence[int]) -> int:
        return self._terms.get(tuple(exponent), 0)

    def leading_term(self) -> Tuple[Weight, int]:
        exponent = max(self._terms, key=monomial_key)
        return exponent, self._terms[exponent]

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> int:
        for exponent, coeff in self._terms.items():
            if not any(exponent):
                return coeff
        return 0

    def max_abs_coefficient(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    def bounds(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """
        Coordinatewise minimum and maximum exponents of a non-zero polynomial.
        """
        exponents = list(self._terms)
        rank = len(exponents[0])
        lows = tuple(min(e[j] for e in exponents) for j in range(rank))
        highs = tuple(max(e[j] for e in exponents) for j in range(rank))
        return lows, highs

    # arithmetic

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(other._terms) > len(self._terms):
            self, other = other, self
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            value = terms.get(exponent, 0) + coeff
            if value:
                terms[exponent] = value
            else:
                terms.pop(exponent, None)
        return LaurentPoly._raw(terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["LaurentPoly", int]) -> "LaurentPoly":
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero()
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        terms: Dict[Weight, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                terms[exponent] = terms.get(exponent, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not Laurent polynomials in general")
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            base = base * base
            n >>= 1
        if result is None:
            rank = len(next(iter(self._terms))) if self._terms else 0
            return LaurentPoly.one(rank)
        return result

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """
        Multiply by the monomial e^exponent.
        """
        return LaurentPoly._raw(
            {
                tuple(a + b for a, b in zip(e, exponent)): c
                for e, c in self._terms.items()
            }
        )

    def act(self, matrix: Matrix) -> "LaurentPoly":
        """
        Apply a lattice automorphism to every exponent.
        """
        terms = {}
        for exponent, coeff in self._terms.items():
            image = tuple(sum(m * x for m, x in zip(row, exponent)) for row in matrix)
            terms[image] = coeff
        return LaurentPoly._raw(terms)

    def map_exponents(self, func) -> "LaurentPoly":
        terms: Dict[Weight, int] = {}
        for exponent, coeff in self._terms.items():
            image = tuple(func(exponent))
            terms[image] = terms.get(image, 0) + coeff
        return LaurentPoly._raw({e: c for e, c in terms.items() if c})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            if not other:
                return not self._terms
            return len(self._terms) == 1 and self.constant_value() == other
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exponent, coeff in reversed(self.items()):
            if any(exponent):
                body = "e^(" + ",".join(str(x) for x in exponent) + ")"
                if coeff == 1:
                    text = body
                elif coeff == -1:
                    text = "-" + body
                else:
                    text = f"{coeff}*{body}"
            else:
                text = str(coeff)
            parts.append(text)
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out


def sum_polys(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    terms: Dict[Weight, int] = {}
    for poly in polys:
        for exponent, coeff in poly._terms.items():
            terms[exponent] = terms.get(exponent, 0) + coeff
    return LaurentPoly._raw({e: c for e, c in terms.items() if c})


def weyl_act(w, f: LaurentPoly, rs: Optional[RootSystem] = None) -> LaurentPoly:
    """
    Act on f by a finite Weyl group element, or by a simple reflection index.

    :param w: a `WeylElem` (anything with an action `matrix`) or an index in
        0..l; index 0 acts as s_theta.
    :param rs: required when `w` is an index.
    """
    if isinstance(w, int):
        if rs is None:
            raise TypeError("weyl_act by index needs the root system")
        return f.map_exponents(lambda e: rs.reflect(e, w))
    return f.act(w.matrix)


def one_minus_exp(exponent: Sequence[int]) -> LaurentPoly:
    rank = len(exponent)
    return LaurentPoly({(0,) * rank: 1}) - LaurentPoly.monomial(exponent)


def divide_one_minus_exp(f: LaurentPoly, beta: Sequence[int]) -> LaurentPoly:
    """
    Exact quotient f / (1 - e^beta), by summing along beta-strings.
    """
    beta = tuple(beta)
    pivot = next(j for j, b in enumerate(beta) if b)
    strings: Dict[Weight, Dict[int, int]] = {}
    for exponent, coeff in f._terms.items():
        k = exponent[pivot] // beta[pivot]
        base = tuple(e - k * b for e, b in zip(exponent, beta))
        strings.setdefault(base, {})[k] = coeff

    terms: Dict[Weight, int] = {}
    for base, positions in strings.items():
        if sum(positions.values()):
            remainder = _string_remainder(base, positions, beta)
            raise NotDivisible(f, one_minus_exp(beta), remainder)
        running = 0
        for k in range(min(positions), max(positions)):
            running += positions.get(k, 0)
            if running:
                terms[tuple(e + k * b for e, b in zip(base, beta))] = running
    return LaurentPoly._raw(terms)


def _string_remainder(base, positions, beta) -> LaurentPoly:
    top = max(positions)
    return LaurentPoly.monomial(
        tuple(e + top * b for e, b in zip(base, beta)), sum(positions.values())
    )


def demazure_D(rs: RootSystem, i: int, f: LaurentPoly) -> LaurentPoly:
    """
    D_i(f) = (f - s_i f) / (1 - e^{alpha_i}); index 0 uses s_theta and
    alpha_0 = -theta.
    """
    numerator = f - weyl_act(i, f, rs)
    if not numerator:
        return LaurentPoly.zero()
    return divide_one_minus_exp(numerator, rs.simple_root(i))


def _as_one_minus_exp(g: LaurentPoly) -> Optional[Weight]:
    if len(g) != 2:
        return None
    (e1, c1), (e2, c2) = g._terms.items()
    if not any(e1) and c1 == 1 and c2 == -1:
        return e2
    if not any(e2) and c2 == 1 and c1 == -1:
        return e1
    return None


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """
    Return q with q * g == f exactly.

    :raises NotDivisible: with the remainder witness when no such q exists.
    :raises ZeroDivisionError: when g is zero.
    """
    if not g:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    if not f:
        return LaurentPoly.zero()

    beta = _as_one_minus_exp(g)
    if beta is not None:
        return divide_one_minus_exp(f, beta)

    # Newton polytopes add under multiplication, so every exponent of the
    # quotient lies in this box.
    f_low, f_high = f.bounds()
    g_low, g_high = g.bounds()
    low = tuple(a - b for a, b in zip(f_low, g_low))
    high = tuple(a - b for a, b in zip(f_high, g_high))

    g_lead, g_coeff = g.leading_term()
    quotient: Dict[Weight, int] = {}
    remainder = f
    while remainder:
        r_lead, r_coeff = remainder.leading_term()
        exponent = tuple(a - b for a, b in zip(r_lead, g_lead))
        if r_coeff % g_coeff or any(
            not lo <= x <= hi for x, lo, hi in zip(exponent, low, high)
        ):
            raise NotDivisible(f, g, remainder)
        coeff = r_coeff // g_coeff
        quotient[exponent] = quotient.get(exponent, 0) + coeff
        remainder = remainder - g.shift(exponent) * coeff
    return LaurentPoly._raw({e: c for e, c in quotient.items() if c})


def solve_row_system(
    matrix: Sequence[Sequence[LaurentPoly]], rhs: Sequence[LaurentPoly]
) -> List[LaurentPoly]:
    """
    Solve r . E = rhs for a row vector r with entries in R(T).

    Fraction-free (Bareiss) elimination on the transposed system followed by
    back-substitution with exact division. The solution must be polynomial;
    otherwise back-substitution raises `NotDivisible`.

    :raises SingularMatrixError: when E is singular.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("solve_row_system needs a square matrix and a matching row")

    # augmented transpose [E^T | rhs^T]
    m = [[matrix[j][i] for j in range(n)] + [rhs[i]] for i in range(n)]
    previous = None
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if m[i][k]), None)
        if pivot_row is None:
            raise SingularMatrixError(f"singular {n}x{n} system at column {k}")
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
        pivot = m[k][k]
        for i in range(k + 1, n):
            factor = m[i][k]
            for j in range(k + 1, n + 1):
                value = pivot * m[i][j] - factor * m[k][j]
                m[i][j] = exact_div(value, previous) if previous is not None else value
            m[i][k] = LaurentPoly.zero()
        previous = pivot
        logger.debug("bareiss step %d/%d done", k + 1, n)

    solution: List[Optional[LaurentPoly]] = [None] * n
    for i in reversed(range(n)):
        numerator = m[i][n]
        for j in range(i + 1, n):
            if m[i][j] and solution[j]:
                numerator = numerator - m[i][j] * solution[j]
        solution[i] = exact_div(numerator, m[i][i])
    return solution
