# wrretract - exact well-rounded retracts for GL2 and GL3 and their contraction
# Copyright (C) 2023 wrretract contributors
# SPDX-License-Identifier: GPL-3.0-or-later
#
# Wrretract is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Wrretract is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Wrretract. If not, see <https://www.gnu.org/licenses/>.

"""Handle exact integer vectors, sign classes, and the norm-lexicographic preorder."""

from __future__ import annotations

import enum
import itertools
import logging
import math
from functools import reduce
from typing import Iterable, Sequence, Tuple

from sympy import Matrix

from wrretract.exceptions import DomainError

logger = logging.getLogger(__name__)

IntVec = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
OrderKey = Tuple[int, Tuple[int, ...]]


class Order(enum.Enum):
    """Outcome of comparing two vectors or collections under the preorder."""

    LESS = -1
    APPROX = 0
    GREATER = 1


class SignClass(tuple):  # type: ignore[type-arg]
    """A primitive integer vector taken modulo sign.

    Instances are plain tuples in canonical form (first nonzero entry positive), so
    they hash and compare like tuples. Build them with :func:`canon`.
    """

    __slots__ = ()

    def __repr__(self) -> str:
        return "(" + ",".join(str(x) for x in self) + ")"

    @property
    def norm_sq(self) -> int:
        return norm_sq(self)

    @property
    def order_key(self) -> OrderKey:
        return order_key(self)


def norm_sq(v: Sequence[int]) -> int:
    return sum(x * x for x in v)


def dot(v: Sequence[int], w: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(v, w))


def add(v: Sequence[int], w: Sequence[int]) -> IntVec:
    return tuple(x + y for x, y in zip(v, w))


def sub(v: Sequence[int], w: Sequence[int]) -> IntVec:
    return tuple(x - y for x, y in zip(v, w))


def scale(c: int, v: Sequence[int]) -> IntVec:
    return tuple(c * x for x in v)


def combine(coeffs: Sequence[int], vectors: Sequence[Sequence[int]]) -> IntVec:
    """Return the integer linear combination sum(c_i * v_i).

    :param coeffs: integer coefficients
    :type coeffs: Sequence[int]
    :param vectors: vectors of equal length, one per coefficient
    :type vectors: Sequence[Sequence[int]]
    :return: the combination as a tuple
    :rtype: IntVec
    """
    size = len(vectors[0])
    return tuple(
        sum(c * v[i] for c, v in zip(coeffs, vectors)) for i in range(size)
    )


def is_primitive(v: Sequence[int]) -> bool:
    """Determine whether the entries of a nonzero vector are mutually prime.

    :param v: integer vector
    :type v: Sequence[int]
    :raises DomainError: the vector is zero
    :return: True if the gcd of the entries is 1
    :rtype: bool
    """
    if not any(v):
        msg = "The zero vector has no primitivity"
        raise DomainError(msg)
    return reduce(math.gcd, (abs(x) for x in v)) == 1


def canon(v: Sequence[int]) -> SignClass:
    """Return the canonical representative of the sign class of a primitive vector.

    The representative is the one of v and -v whose first nonzero entry is positive.

    :param v: primitive integer vector
    :type v: Sequence[int]
    :raises DomainError: the vector is zero or not primitive
    :return: canonical sign class
    :rtype: SignClass
    """
    if not is_primitive(v):
        msg = f"Vector {tuple(v)} is not primitive"
        raise DomainError(msg)
    lead = next(x for x in v if x)
    return SignClass(v if lead > 0 else (-x for x in v))


def order_key(v: Sequence[int]) -> OrderKey:
    """Return the sort key realising the preorder on vectors.

    Vectors are ordered first by squared Euclidean norm and then lexicographically by
    the absolute values of their entries in index order. Two vectors share a key
    exactly when they are Approx.

    :param v: integer vector
    :type v: Sequence[int]
    :return: (squared norm, absolute entries)
    :rtype: OrderKey
    """
    return norm_sq(v), tuple(abs(x) for x in v)


def _compare(a: object, b: object) -> Order:
    if a < b:  # type: ignore[operator]
        return Order.LESS
    if a > b:  # type: ignore[operator]
        return Order.GREATER
    return Order.APPROX


def vec_cmp(v: Sequence[int], w: Sequence[int]) -> Order:
    """Compare two vectors under the norm-lexicographic preorder.

    :param v: first vector
    :type v: Sequence[int]
    :param w: second vector
    :type w: Sequence[int]
    :return: LESS, APPROX or GREATER
    :rtype: Order
    """
    return _compare(order_key(v), order_key(w))


def collection_key(vectors: Iterable[Sequence[int]]) -> tuple[OrderKey, ...]:
    """Return the key comparing finite collections by iterated minimum extraction.

    Repeatedly removing the minima of two collections and comparing them is the same
    as comparing the sorted lists of their keys lexicographically.

    :param vectors: a finite collection of vectors
    :type vectors: Iterable[Sequence[int]]
    :return: sorted tuple of order keys
    :rtype: tuple[OrderKey, ...]
    """
    return tuple(sorted(order_key(v) for v in vectors))


def coll_cmp(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]]) -> Order:
    """Compare two collections of vectors of the same size.

    :param a: first collection
    :type a: Iterable[Sequence[int]]
    :param b: second collection
    :type b: Iterable[Sequence[int]]
    :raises DomainError: the collections differ in size
    :return: LESS, APPROX or GREATER
    :rtype: Order
    """
    key_a = collection_key(a)
    key_b = collection_key(b)
    if len(key_a) != len(key_b):
        msg = f"Cannot compare collections of sizes {len(key_a)} and {len(key_b)}"
        raise DomainError(msg)
    return _compare(key_a, key_b)


def independent(v: Sequence[int], w: Sequence[int]) -> bool:
    """Determine whether two vectors are linearly independent."""
    return any(
        v[i] * w[j] - v[j] * w[i] for i, j in itertools.combinations(range(len(v)), 2)
    )


def is_fundamental_pair(v: Sequence[int], w: Sequence[int]) -> bool:
    """Determine whether v and w form a fundamental pair.

    The pair is fundamental when both v+w and v-w are strictly greater than both v
    and w.

    :param v: primitive vector
    :type v: Sequence[int]
    :param w: primitive vector
    :type w: Sequence[int]
    :raises DomainError: the vectors are linearly dependent
    :return: True if the pair is fundamental
    :rtype: bool
    """
    if not independent(v, w):
        msg = f"Vectors {tuple(v)} and {tuple(w)} are linearly dependent"
        raise DomainError(msg)
    bound = max(order_key(v), order_key(w))
    return order_key(add(v, w)) > bound and order_key(sub(v, w)) > bound


def _require_nonzero(*vectors: Sequence[int]) -> None:
    for v in vectors:
        if not any(v):
            msg = "Norm lemmas are stated for nonzero vectors"
            raise DomainError(msg)


def lemma_sum_diff(v: Sequence[int], w: Sequence[int]) -> bool:
    """Check that |v+w| <= max(|v|,|w|) forces |v-w| > max(|v|,|w|).

    :return: whether the implication holds for this pair
    :rtype: bool
    """
    _require_nonzero(v, w)
    bound = max(norm_sq(v), norm_sq(w))
    return norm_sq(add(v, w)) > bound or norm_sq(sub(v, w)) > bound


def lemma_not_fundamental(v: Sequence[int], w: Sequence[int]) -> bool:
    """Check max|v±w| > max(|v|,|w|) >= min|v±w| for a non-fundamental pair.

    Fundamental pairs satisfy the statement vacuously.

    :return: whether the implication holds for this pair
    :rtype: bool
    """
    _require_nonzero(v, w)
    if is_fundamental_pair(v, w):
        return True
    plus, minus = norm_sq(add(v, w)), norm_sq(sub(v, w))
    bound = max(norm_sq(v), norm_sq(w))
    return max(plus, minus) > bound >= min(plus, minus)


def connected_one(v1: Sequence[int], v2: Sequence[int], v3: Sequence[int]) -> bool:
    """Check the first connectedness lemma on a triple of vectors.

    If |vi+vj| >= max(|vi|,|vj|) and (vk, vi+vj) >= 0 for some distinct i, j, k, then
    |v1+v2+v3| > max(|v1|,|v2|,|v3|).

    :return: whether the implication holds for this triple
    :rtype: bool
    """
    _require_nonzero(v1, v2, v3)
    triple = (v1, v2, v3)
    hypothesis = False
    for i, j, k in itertools.permutations(range(3)):
        pair = add(triple[i], triple[j])
        if (
            norm_sq(pair) >= max(norm_sq(triple[i]), norm_sq(triple[j]))
            and dot(triple[k], pair) >= 0
        ):
            hypothesis = True
            break
    total = norm_sq(add(add(v1, v2), v3))
    return not hypothesis or total > max(norm_sq(v) for v in triple)


def connected_two(v1: Sequence[int], v2: Sequence[int], v3: Sequence[int]) -> bool:
    """Check the second connectedness lemma on a triple of vectors.

    If |vi+vj| <= max(|vi|,|vj|) for all pairs, then |v1+v2+v3| < max(|v1|,|v2|,|v3|).

    :return: whether the implication holds for this triple
    :rtype: bool
    """
    _require_nonzero(v1, v2, v3)
    triple = (v1, v2, v3)
    squares = [norm_sq(v) for v in triple]
    hypothesis = all(
        norm_sq(add(triple[i], triple[j])) <= max(squares[i], squares[j])
        for i, j in itertools.combinations(range(3), 2)
    )
    total = norm_sq(add(add(v1, v2), v3))
    return not hypothesis or total < max(norm_sq(v) for v in triple)


def det(vectors: Sequence[Sequence[int]]) -> int:
    """Return the determinant of the matrix whose columns are the given vectors.

    Only sizes 2 and 3 occur in the retract.
    """
    if len(vectors) == 2:  # noqa: PLR2004
        (a, b), (c, d) = vectors
        return a * d - b * c
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = vectors
    return (
        a1 * (b2 * c3 - b3 * c2)
        - b1 * (a2 * c3 - a3 * c2)
        + c1 * (a2 * b3 - a3 * b2)
    )


def is_basis(vectors: Sequence[Sequence[int]]) -> bool:
    """Determine whether m vectors of length m form a Z-basis."""
    return abs(det(vectors)) == 1


def primitive_vectors(rank: int, bound: int) -> list[SignClass]:
    """Return the canonical primitive vectors with entries in [-bound, bound].

    :param rank: vector length
    :type rank: int
    :param bound: largest absolute entry
    :type bound: int
    :return: sorted list of sign classes
    :rtype: list[SignClass]
    """
    found = set()
    for v in itertools.product(range(-bound, bound + 1), repeat=rank):
        if any(v) and is_primitive(v):
            found.add(canon(v))
    return sorted(found)


def fundamental_bases(bound: int) -> list[tuple[SignClass, SignClass, SignClass]]:
    """Enumerate Z-bases of Z^3 whose three pairs are all fundamental.

    Bases are taken modulo order and signs of the vectors, with entries in
    [-bound, bound].

    :param bound: largest absolute entry
    :type bound: int
    :return: sorted triples of sign classes
    :rtype: list[tuple[SignClass, SignClass, SignClass]]
    """
    vectors = primitive_vectors(3, bound)
    neighbours: dict[SignClass, set[SignClass]] = {v: set() for v in vectors}
    for v, w in itertools.combinations(vectors, 2):
        if independent(v, w) and is_fundamental_pair(v, w):
            neighbours[v].add(w)
            neighbours[w].add(v)
    logger.debug(
        "%i fundamental pairs among %i vectors",
        sum(len(n) for n in neighbours.values()) // 2,
        len(vectors),
    )
    bases = []
    for v in vectors:
        for w in sorted(x for x in neighbours[v] if x > v):
            for u in sorted(x for x in neighbours[v] & neighbours[w] if x > w):
                if is_basis((v, w, u)):
                    bases.append((v, w, u))
    return bases


def identity(rank: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    size = len(b)
    return tuple(
        tuple(sum(row[k] * b[k][j] for k in range(size)) for j in range(len(b[0])))
        for row in a
    )


def mat_vec(a: IntMatrix, v: Sequence[int]) -> IntVec:
    return tuple(dot(row, v) for row in a)


def columns(a: IntMatrix) -> tuple[IntVec, ...]:
    return tuple(zip(*a))


def from_columns(vectors: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*vectors))


def mat_det(a: IntMatrix) -> int:
    return det(columns(a))


def unimodular_inverse(a: IntMatrix) -> IntMatrix:
    """Return the integer inverse of a matrix with determinant ±1.

    :param a: square integer matrix
    :type a: IntMatrix
    :raises DomainError: the determinant is not ±1
    :return: the inverse matrix
    :rtype: IntMatrix
    """
    if abs(mat_det(a)) != 1:
        msg = f"Matrix {a} is not unimodular"
        raise DomainError(msg)
    inverse = Matrix(a).inv()
    return tuple(
        tuple(int(inverse[i, j]) for j in range(inverse.cols))
        for i in range(inverse.rows)
    )


def signed_permutations(rank: int) -> list[IntMatrix]:
    """Return all monomial matrices with entries in {0, 1, -1}, sorted."""
    found = []
    for perm in itertools.permutations(range(rank)):
        for signs in itertools.product((1, -1), repeat=rank):
            found.append(
                tuple(
                    tuple(signs[i] if perm[i] == j else 0 for j in range(rank))
                    for i in range(rank)
                )
            )
    return sorted(found)


def rotation_group() -> list[IntMatrix]:
    """Return the 24 signed permutation matrices of determinant 1.

    Each acts on forms by g -> k g k^t, and -k acts the same way as k, so this group
    is the full chart symmetry group of the Soule cube.
    """
    return [k for k in signed_permutations(3) if mat_det(k) == 1]
