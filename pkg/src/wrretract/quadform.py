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

"""Work with positive definite forms, their minimal vectors, and the Soule chart."""

from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterator, NamedTuple, Sequence, Tuple, Union

import sympy
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from wrretract.exceptions import DomainError
from wrretract.intvec import (
    IntMatrix,
    IntVec,
    SignClass,
    canon,
    from_columns,
    independent,
    is_basis,
    unimodular_inverse,
)

if TYPE_CHECKING:
    from sympy import Expr

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, int, str]
Gram = Tuple[Tuple[Fraction, ...], ...]
ChartPoint = Tuple[Fraction, Fraction, Fraction]


def _gram(rows: Sequence[Sequence[Scalar]]) -> Gram:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def congruence(
    m: Sequence[Sequence[Scalar]], gram: Sequence[Sequence[Scalar]]
) -> Gram:
    """Return m^t * gram * m in exact rationals."""
    size = len(m)
    cols = len(m[0])
    left = [
        [
            sum(Fraction(m[k][i]) * Fraction(gram[k][j]) for k in range(size))
            for j in range(size)
        ]
        for i in range(cols)
    ]
    return tuple(
        tuple(
            sum(left[i][k] * Fraction(m[k][j]) for k in range(size))
            for j in range(cols)
        )
        for i in range(cols)
    )


class QuadForm:
    """A positive definite quadratic form given by its Gram matrix."""

    __slots__ = ("gram",)

    def __init__(self, gram: Sequence[Sequence[Scalar]]) -> None:
        """Validate and store the Gram matrix.

        :param gram: symmetric matrix of rationals (ints, Fractions or "p/q" strings)
        :type gram: Sequence[Sequence[Scalar]]
        :raises DomainError: the matrix is not square, not symmetric, or not positive
            definite
        """
        rows = _gram(gram)
        size = len(rows)
        if any(len(row) != size for row in rows):
            msg = f"Gram matrix {rows} is not square"
            raise DomainError(msg)
        if any(rows[i][j] != rows[j][i] for i in range(size) for j in range(i)):
            msg = f"Gram matrix {rows} is not symmetric"
            raise DomainError(msg)
        matrix = Matrix(rows)
        if any(matrix[:k, :k].det() <= 0 for k in range(1, size + 1)):
            msg = f"Gram matrix {rows} is not positive definite"
            raise DomainError(msg)
        self.gram: Gram = rows

    @classmethod
    def from_matrix(cls, g: IntMatrix) -> QuadForm:
        """Return the form Q_g = (g^t)^-1 g^-1 of the marked lattice g.

        :param g: unimodular integer matrix
        :type g: IntMatrix
        :raises DomainError: g is not unimodular
        :return: the form of the lattice spanned by the columns of g^-1
        :rtype: QuadForm
        """
        inverse = unimodular_inverse(g)
        return cls(congruence(inverse, identity_gram(len(g))))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def value(self, x: Sequence[Scalar]) -> Fraction:
        return self.bilinear(x, x)

    def bilinear(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Fraction:
        return sum(
            (
                self.gram[i][j] * Fraction(x[i]) * Fraction(y[j])
                for i in range(self.rank)
                for j in range(self.rank)
            ),
            Fraction(0),
        )

    def restrict(self, vectors: Sequence[Sequence[int]]) -> QuadForm:
        """Return the Gram matrix of the form on the span of the given vectors."""
        return QuadForm(
            [[self.bilinear(v, w) for w in vectors] for v in vectors],
        )

    def pullback(self, g: IntMatrix) -> QuadForm:
        """Return g^t Q g."""
        return QuadForm(congruence(g, self.gram))

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in row] for row in self.gram]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuadForm):
            return NotImplemented
        return self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.gram)
        return f"{self.__class__.__name__}([{rows}])"


def identity_gram(rank: int) -> Gram:
    return tuple(
        tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank)
    )


class MinimaResult(NamedTuple):
    min_sq: Fraction
    vectors: frozenset[SignClass]


def _decompose(gram: Gram) -> list[list[Fraction]]:
    # Q(x) = sum_i q[i][i] * (x_i + sum_{j>i} q[i][j] x_j)^2
    size = len(gram)
    q = [list(row) for row in gram]
    for i in range(size):
        for j in range(i + 1, size):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, size):
            for col in range(k, size):
                q[k][col] -= q[k][i] * q[i][col]
    return q


def short_vectors(form: QuadForm, bound: Fraction) -> Iterator[IntVec]:
    """Yield every nonzero integer vector x with Q(x) <= bound.

    Enumeration runs from the last coordinate down, keeping the remaining budget
    exact, and tests each integer candidate against the budget in rationals.

    :param form: positive definite form
    :type form: QuadForm
    :param bound: inclusive upper bound on Q(x)
    :type bound: Fraction
    :return: an iterator over vectors, both signs included
    :rtype: Iterator[IntVec]
    """
    q = _decompose(form.gram)
    size = form.rank

    def search(i: int, budget: Fraction, tail: dict[int, int]) -> Iterator[IntVec]:
        centre = -sum((q[i][j] * tail[j] for j in range(i + 1, size)), Fraction(0))
        reach = math.isqrt(math.floor(budget / q[i][i])) + 1
        for x in range(math.floor(centre) - reach, math.ceil(centre) + reach + 1):
            used = q[i][i] * (x - centre) ** 2
            if used > budget:
                continue
            point = {**tail, i: x}
            if i == 0:
                vector = tuple(point[k] for k in range(size))
                if any(vector):
                    yield vector
            else:
                yield from search(i - 1, budget - used, point)

    yield from search(size - 1, Fraction(bound), {})


def arithmetic_minimum(form: QuadForm) -> MinimaResult:
    """Return the arithmetic minimum of a form and its minimal vectors modulo sign.

    Minimal vectors are automatically primitive.

    :param form: positive definite form
    :type form: QuadForm
    :return: the squared minimum and the canonical minimal vectors
    :rtype: MinimaResult
    """
    bound = min(form.gram[i][i] for i in range(form.rank))
    values = {v: form.value(v) for v in short_vectors(form, bound)}
    least = min(values.values())
    vectors = frozenset(canon(v) for v, value in values.items() if value == least)
    return MinimaResult(least, vectors)


def is_well_rounded(form: QuadForm) -> bool:
    """Determine whether the minimal vectors of a form span Z^m as a Z-module.

    :param form: positive definite form
    :type form: QuadForm
    :return: True if the Hermite normal form of the minimal vectors is the identity
    :rtype: bool
    """
    vectors = sorted(arithmetic_minimum(form).vectors)
    matrix = Matrix(from_columns(vectors))
    if matrix.rank() < form.rank:
        return False
    hnf = hermite_normal_form(matrix)
    return hnf.shape == (form.rank, form.rank) and abs(hnf.det()) == 1


class FaceKind(enum.Enum):
    """Kind of a two-dimensional face of a Soule cube."""

    HEXAGON = "hexagon"
    TRIANGLE = "triangle"


class Facet(NamedTuple):
    """One of the ten facets of the Soule cube chart: normal . p <= bound."""

    normal: tuple[int, int, int]
    bound: int
    extra: tuple[int, int, int]  # coefficients of the new minimal vector
    kind: FaceKind


FACETS: tuple[Facet, ...] = (
    Facet((1, 0, 0), 1, (0, 1, -1), FaceKind.HEXAGON),
    Facet((-1, 0, 0), 1, (0, 1, 1), FaceKind.HEXAGON),
    Facet((0, 1, 0), 1, (1, 0, -1), FaceKind.HEXAGON),
    Facet((0, -1, 0), 1, (1, 0, 1), FaceKind.HEXAGON),
    Facet((0, 0, 1), 1, (1, -1, 0), FaceKind.HEXAGON),
    Facet((0, 0, -1), 1, (1, 1, 0), FaceKind.HEXAGON),
    Facet((-1, -1, -1), 2, (1, 1, 1), FaceKind.TRIANGLE),
    Facet((1, 1, -1), 2, (1, 1, -1), FaceKind.TRIANGLE),
    Facet((1, -1, 1), 2, (1, -1, 1), FaceKind.TRIANGLE),
    Facet((-1, 1, 1), 2, (1, -1, -1), FaceKind.TRIANGLE),
)


def facet_value(facet: Facet, point: Sequence[Scalar]) -> Fraction:
    return sum((n * Fraction(x) for n, x in zip(facet.normal, point)), Fraction(0))


def tight_facets(point: Sequence[Scalar]) -> frozenset[int]:
    """Return the ids of the facets whose constraint is an equality at the point."""
    return frozenset(
        i for i, facet in enumerate(FACETS) if facet_value(facet, point) == facet.bound
    )


def in_soule_cell(point: Sequence[Scalar]) -> bool:
    return all(facet_value(facet, point) <= facet.bound for facet in FACETS)


@dataclass(frozen=True)
class SoulePolytope:
    """Combinatorics of the closed Soule cube in the (u,v,w) chart.

    Every face is keyed by the set of facets that are tight on it; the cube itself
    is keyed by the empty set.
    """

    vertices: tuple[ChartPoint, ...]
    faces: dict[frozenset[int], tuple[int, ...]]

    def face_dim(self, face: frozenset[int]) -> int:
        return 3 - len(face)

    def faces_of_dim(self, dim: int) -> list[frozenset[int]]:
        return sorted(
            (face for face in self.faces if self.face_dim(face) == dim), key=sorted
        )

    def barycenter(self, face: frozenset[int]) -> ChartPoint:
        """Return the average of the vertices of a face."""
        indices = self.faces[face]
        return tuple(  # type: ignore[return-value]
            sum((self.vertices[i][k] for i in indices), Fraction(0)) / len(indices)
            for k in range(3)
        )

    def adjacent_facets(self, facet: int) -> list[int]:
        """Return the facets meeting the given one along an edge."""
        return sorted(
            next(iter(face - {facet}))
            for face in self.faces_of_dim(1)
            if facet in face
        )


def _chart_vertices() -> list[ChartPoint]:
    vertices = []
    for corner in itertools.product((1, -1), repeat=3):
        if corner[0] * corner[1] * corner[2] == 1:
            vertices.append(tuple(Fraction(c) for c in corner))
        else:
            for k in range(3):
                vertices.append(
                    tuple(Fraction(0 if i == k else c) for i, c in enumerate(corner))
                )
    return vertices  # type: ignore[return-value]


@lru_cache(maxsize=None)
def soule_polytope() -> SoulePolytope:
    """Build the face lattice of the Soule cube chart."""
    vertices = tuple(_chart_vertices())
    tight = [tight_facets(p) for p in vertices]
    faces: dict[frozenset[int], tuple[int, ...]] = {frozenset(): tuple(range(16))}
    for facet in range(len(FACETS)):
        faces[frozenset({facet})] = tuple(i for i, t in enumerate(tight) if facet in t)
    for i, j in itertools.combinations(range(len(vertices)), 2):
        common = tight[i] & tight[j]
        if len(common) == 2:  # noqa: PLR2004
            faces[common] = (i, j)
    for i, t in enumerate(tight):
        faces[t] = (i,)
    return SoulePolytope(vertices, faces)


def soule_matrix(point: Sequence[Scalar]) -> Gram:
    """Return the chart form Q(u, v, w) with diagonal 2."""
    u, v, w = (Fraction(x) for x in point)
    two = Fraction(2)
    return ((two, w, v), (w, two, u), (v, u, two))


@lru_cache(maxsize=4096)
def _basis_inverse(basis: tuple[IntVec, ...]) -> IntMatrix:
    return unimodular_inverse(from_columns(basis))


@dataclass(frozen=True)
class CubeChart:
    """A point of a Soule cube given by an ordered basis and (u,v,w) coordinates."""

    basis: tuple[IntVec, ...]
    coords: ChartPoint

    def __post_init__(self) -> None:
        if len(self.basis) != 3 or not is_basis(self.basis):  # noqa: PLR2004
            msg = f"{self.basis} is not a Z-basis of Z^3"
            raise DomainError(msg)
        coords = tuple(Fraction(x) for x in self.coords)
        if not in_soule_cell(coords):
            msg = f"Chart point {coords} lies outside the Soule cube"
            raise DomainError(msg)
        object.__setattr__(self, "coords", coords)


def soule_form(chart: CubeChart) -> QuadForm:
    """Return the form at a chart point, pulled back through the decorating basis.

    The result F satisfies B^t F B = Q(u,v,w) for the basis matrix B, so the basis
    vectors are the minimal vectors at the centre of the cube.

    :param chart: cube chart point
    :type chart: CubeChart
    :return: the form in standard coordinates
    :rtype: QuadForm
    """
    return QuadForm(congruence(_basis_inverse(chart.basis), soule_matrix(chart.coords)))


def chart_of_form(form: QuadForm, basis: Sequence[IntVec]) -> CubeChart:
    """Return the chart coordinates of a form inside the cube of an ordered basis.

    :param form: form normalized so that the basis vectors have value 2
    :type form: QuadForm
    :param basis: ordered Z-basis decorating the cube
    :type basis: Sequence[IntVec]
    :raises DomainError: the form does not lie in the closed cube of the basis
    :return: the chart point
    :rtype: CubeChart
    """
    local = congruence(from_columns(basis), form.gram)
    if any(local[i][i] != 2 for i in range(3)):  # noqa: PLR2004
        msg = f"Form {form} does not give value 2 on the basis {tuple(basis)}"
        raise DomainError(msg)
    return CubeChart(tuple(basis), (local[1][2], local[0][2], local[0][1]))


@dataclass(frozen=True)
class HPoint:
    """A point x + iy of the upper half-plane with rational x and y^2."""

    x: Fraction
    y_sq: Fraction

    def __post_init__(self) -> None:
        if self.y_sq <= 0:
            msg = f"Imaginary part squared {self.y_sq} is not positive"
            raise DomainError(msg)

    @property
    def y(self) -> Expr:
        return sympy.sqrt(sympy.Rational(self.y_sq.numerator, self.y_sq.denominator))


def _hpoint(gram: Gram) -> HPoint:
    # e1 -> 1 and e2 -> -x + iy, up to scaling
    a, b = gram[0]
    determinant = a * gram[1][1] - b * b
    return HPoint(-b / a, determinant / (a * a))


def upper_half_point(g: IntMatrix) -> HPoint:
    """Return the upper half-plane point of the marked lattice of g.

    :param g: 2x2 integer matrix with determinant ±1
    :type g: IntMatrix
    :raises DomainError: g is not unimodular
    :return: the point x + iy
    :rtype: HPoint
    """
    if len(g) != 2:  # noqa: PLR2004
        msg = "Upper half-plane points need a 2x2 matrix"
        raise DomainError(msg)
    return _hpoint(QuadForm.from_matrix(g).gram)


def project_to_sublattice(
    form: QuadForm, pair: tuple[Sequence[int], Sequence[int]]
) -> HPoint:
    """Return the upper half-plane point of the form restricted to a rank-2 sublattice.

    :param form: positive definite form
    :type form: QuadForm
    :param pair: linearly independent vectors spanning the sublattice
    :type pair: tuple[Sequence[int], Sequence[int]]
    :raises DomainError: the vectors are dependent
    :return: the point of the restricted marked lattice
    :rtype: HPoint
    """
    if not independent(*pair):
        msg = f"Vectors {pair} are linearly dependent"
        raise DomainError(msg)
    return _hpoint(form.restrict(pair).gram)


def on_fundamental_arc(point: HPoint) -> bool:
    """Determine whether x^2 + y^2 = 1 and -1/2 <= x <= 1/2 exactly."""
    return point.x**2 + point.y_sq == 1 and abs(point.x) <= Fraction(1, 2)
