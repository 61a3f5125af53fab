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

"""Trace the recursive contraction of W2 and W3 onto the fundamental cell.

Every top-dimensional cell is subdivided barycentrically, so a point is a convex
combination of cells (the barycentres of the faces it touches) and the same point
is described identically from every cube containing it. Inside a cube S every
tetrahedron of the subdivision has a tier. Stage I sends the Tier I tetrahedra,
those resting on 2-cells outside Xi(S), to the centre o. Stage II projects the Tier
II tetrahedra onto Xi(S) from poles fixed by the minimal 2-cells around them, and
Stage III carries o onto the centre target across the Tier III tetrahedra. The
fundamental cell retracts radially onto its centre.

Closed simplices (swept cells) and chains (the chain homotopy used for fillings)
follow the same stages as elementary collapses of the subdivision.
"""

from __future__ import annotations

import enum
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Dict, Sequence, Tuple

import sympy

from wrretract.complex import (
    TOP_DIM,
    Cell,
    DistanceRecord,
    cube_basis,
    cubes_at_cell,
    fundamental_cell,
    gamma_act,
    local_face_cell,
    minimal_cube,
    proper_faces,
    xi_local,
    xi_set,
)
from wrretract.exceptions import (
    DomainError,
    GeometryIntegrityError,
    IntegrityError,
    UnhandledConfigurationError,
)
from wrretract.intvec import (
    IntMatrix,
    det,
    from_columns,
    mat_mul,
    order_key,
    rotation_group,
    unimodular_inverse,
)
from wrretract.logging import CellLogAdapter
from wrretract.quadform import (
    FACETS,
    ChartPoint,
    FaceKind,
    in_soule_cell,
    soule_polytope,
    tight_facets,
)

if TYPE_CHECKING:
    from sympy import Expr

logger = logging.getLogger(__name__)

Simplex = Tuple[Cell, ...]
BaryPoint = Dict[Cell, Fraction]
Chain = Dict[Simplex, int]
LocalFace = frozenset  # frozenset[int] of tight facets

DEFAULT_DELTA = Fraction(1, 8)
MAX_DELTA = Fraction(1, 4)


class Stage(enum.Enum):
    """Part of the contraction that produced a segment."""

    I = "I"  # noqa: E741
    II = "II"
    III = "III"
    RADIAL = "radial"


class TierLabel(enum.Enum):
    I = "I"  # noqa: E741
    II = "II"
    III = "III"


# subdivision helpers


def canonical(cells: Sequence[Cell]) -> tuple[Simplex, int]:
    """Sort the vertices of an oriented simplex into flag order.

    Flag order lists the largest cell (fewest decorating vectors) first.

    :param cells: vertices of the subdivision, pairwise distinct
    :type cells: Sequence[Cell]
    :raises DomainError: the cells do not form a chain of faces
    :return: the sorted simplex and the sign of the sorting permutation
    :rtype: tuple[Simplex, int]
    """
    order = sorted(range(len(cells)), key=lambda i: len(cells[i].decoration))
    simplex = tuple(cells[i] for i in order)
    for big, small in zip(simplex, simplex[1:]):
        if not big.decoration < small.decoration:
            msg = f"{[str(c) for c in cells]} is not a chain of faces"
            raise DomainError(msg)
    inversions = sum(
        1
        for i, j in itertools.combinations(range(len(order)), 2)
        if order[i] > order[j]
    )
    return simplex, -1 if inversions % 2 else 1


def simplex_dim(simplex: Simplex) -> int:
    return len(simplex) - 1


def simplex_str(simplex: Simplex) -> str:
    return " < ".join(f"[{c}]" for c in simplex)


@lru_cache(maxsize=None)
def _local_faces(top: Cell) -> dict[Cell, LocalFace]:
    if top.rank == 2:  # noqa: PLR2004
        plus, minus = _arc_ends(top)
        return {top: frozenset(), plus: frozenset({0}), minus: frozenset({1})}
    return {
        local_face_cell(top, face): face for face in soule_polytope().faces
    }


def _arc_ends(arc: Cell) -> tuple[Cell, Cell]:
    plus, minus = proper_faces(arc)
    return plus, minus


def chart_of_cell(top: Cell, cell: Cell) -> tuple[Fraction, ...]:
    """Return the chart coordinates of the barycentre of a face of a top cell.

    Arcs of W2 use the coordinate u of the chart [[2, u], [u, 2]]: the arc centre is
    u = 0, the endpoint with v1 + v2 minimal u = -1 and the other u = 1.
    """
    try:
        face = _local_faces(top)[cell]
    except KeyError:
        msg = f"{cell} is not a face of {top}"
        raise DomainError(msg) from None
    if top.rank == 2:  # noqa: PLR2004
        return (Fraction(0),) if not face else (Fraction(-1 if 0 in face else 1),)
    return soule_polytope().barycenter(face)


def chart_of_point(top: Cell, point: BaryPoint) -> tuple[Fraction, ...]:
    """Return the chart coordinates of a point of the subdivision of a top cell."""
    coords = [Fraction(0)] * (3 if top.rank == 3 else 1)  # noqa: PLR2004
    for cell, weight in point.items():
        for k, x in enumerate(chart_of_cell(top, cell)):
            coords[k] += weight * x
    return tuple(coords)


@lru_cache(maxsize=None)
def _local_chains(rank: int) -> tuple[tuple[LocalFace, ...], ...]:
    if rank == 2:  # noqa: PLR2004
        faces = [frozenset(), frozenset({0}), frozenset({1})]
    else:
        faces = list(soule_polytope().faces)
    chains: list[tuple[LocalFace, ...]] = []

    def extend(chain: tuple[LocalFace, ...]) -> None:
        chains.append(chain)
        for face in faces:
            if chain[-1] < face:
                extend((*chain, face))

    for face in faces:
        extend((face,))
    return tuple(chains)


@lru_cache(maxsize=None)
def sd_simplices(top: Cell) -> frozenset[Simplex]:
    """Return every simplex of the barycentric subdivision of a closed top cell."""
    cells = {face: cell for cell, face in _local_faces(top).items()}
    return frozenset(
        tuple(cells[face] for face in chain) for chain in _local_chains(top.rank)
    )


def maximal_flags(top: Cell) -> list[Simplex]:
    return sorted(
        (s for s in sd_simplices(top) if len(s) == TOP_DIM[top.rank] + 1),
        key=lambda s: [c.sort_key() for c in s],
    )


def home_cube(simplex: Sequence[Cell]) -> Cell:
    """Return the cube whose collapses move a simplex: the minimal cube at its top."""
    top = min(simplex, key=lambda c: len(c.decoration))
    return minimal_cube(top)


def support(point: BaryPoint) -> Simplex:
    return canonical(list(point))[0]


# locating points


def locate(cube: Cell, coords: Sequence[Fraction | int | str]) -> BaryPoint:
    """Return the barycentric description of a point given in the chart of a cube.

    The point is written as (1 - s) o + s q with q on the facet F of largest gauge,
    q on the ray from the centre of F through the edge E it exits by, and the exit
    point between the centre of E and one of its endpoints V.

    :param cube: a cube of W3
    :type cube: Cell
    :param coords: (u, v, w) chart coordinates
    :type coords: Sequence[Fraction | int | str]
    :raises DomainError: the point lies outside the closed cube
    :return: weights on o, F, E and V (positive entries only)
    :rtype: BaryPoint
    """
    p = tuple(Fraction(x) for x in coords)
    if len(p) != 3 or not in_soule_cell(p):  # noqa: PLR2004
        msg = f"Chart point {p} does not lie in the Soule cube"
        raise DomainError(msg)
    polytope = soule_polytope()
    gauges = [
        sum((n * x for n, x in zip(f.normal, p)), Fraction(0)) / f.bound for f in FACETS
    ]
    s = max(gauges)
    local: dict[LocalFace, Fraction] = {frozenset(): 1 - s}
    if s > 0:
        facet = gauges.index(s)
        q = tuple(x / s for x in p)
        centre = polytope.barycenter(frozenset({facet}))
        direction = tuple(a - b for a, b in zip(q, centre))
        if not any(direction):
            local[frozenset({facet})] = s
        else:
            tau, other = min(
                (
                    (FACETS[g].bound - _dot(FACETS[g].normal, centre))
                    / _dot(FACETS[g].normal, direction),
                    g,
                )
                for g in polytope.adjacent_facets(facet)
                if _dot(FACETS[g].normal, direction) > 0
            )
            lam = 1 / tau
            edge = frozenset({facet, other})
            exit_point = tuple(c + tau * d for c, d in zip(centre, direction))
            mid = polytope.barycenter(edge)
            offset = tuple(a - b for a, b in zip(exit_point, mid))
            local[frozenset({facet})] = s * (1 - lam)
            if not any(offset):
                local[edge] = s * lam
            else:
                vertex, mu = _edge_position(edge, mid, offset)
                local[edge] = s * lam * (1 - mu)
                local[vertex] = s * lam * mu
    return {
        local_face_cell(cube, face): weight
        for face, weight in local.items()
        if weight > 0
    }


def _dot(a: Sequence[int | Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _edge_position(
    edge: LocalFace, mid: ChartPoint, offset: Sequence[Fraction]
) -> tuple[LocalFace, Fraction]:
    polytope = soule_polytope()
    for index in polytope.faces[edge]:
        vertex = polytope.vertices[index]
        span = tuple(a - b for a, b in zip(vertex, mid))
        if _dot(span, offset) > 0:
            k = next(i for i, x in enumerate(span) if x)
            return tight_facets(vertex), offset[k] / span[k]
    msg = f"Exit point {tuple(offset)} is not on edge {sorted(edge)}"
    raise GeometryIntegrityError(msg)


def locate_w2(arc: Cell, u: Fraction | int | str) -> BaryPoint:
    """Return the barycentric description of the point u of an arc of W2.

    :raises DomainError: u lies outside [-1, 1] or the cell is not an arc
    """
    u = Fraction(u)
    if arc.rank != 2 or not arc.is_top:  # noqa: PLR2004
        msg = f"{arc} is not an arc of W2"
        raise DomainError(msg)
    if abs(u) > 1:
        msg = f"Arc coordinate {u} lies outside [-1, 1]"
        raise DomainError(msg)
    plus, minus = _arc_ends(arc)
    end = plus if u < 0 else minus
    point = {arc: 1 - abs(u), end: abs(u)}
    return {c: w for c, w in point.items() if w > 0}


def sample_point(top: Cell, rng: random.Random) -> BaryPoint:
    """Draw a rational point in the interior of a random top simplex of a cell."""
    flags = maximal_flags(top)
    flag = flags[rng.randrange(len(flags))]
    weights = [rng.randint(1, 20) for _ in flag]
    total = sum(weights)
    return {c: Fraction(w, total) for c, w in zip(flag, weights)}


# centre targets, triangulation and tiers


def orient_arc_w2(arc: Cell) -> Cell:
    """Return the endpoint of a non-fundamental arc lying in Xi(A).

    :param arc: an arc of W2
    :type arc: Cell
    :raises DomainError: the arc is the fundamental arc
    :raises IntegrityError: Xi(A) is not a single vertex
    :return: the vertex the arc contracts towards
    :rtype: Cell
    """
    if arc == fundamental_cell(2):
        msg = "The fundamental arc contracts towards its centre, not an endpoint"
        raise DomainError(msg)
    xi = xi_set(arc)
    if len(xi) != 1:
        msg = f"Arc {arc} has {len(xi)} endpoints in Xi"
        raise IntegrityError(msg)
    return next(iter(xi))


def _hexagon_corner(hexes: Sequence[int]) -> list[int]:
    axes = [h // 2 for h in hexes]
    if len(set(axes)) != len(axes):
        msg = f"Opposite hexagons {sorted(hexes)} are both minimal"
        raise UnhandledConfigurationError(msg)
    corner = [0, 0, 0]
    for h in hexes:
        corner[h // 2] = 1 if h % 2 == 0 else -1
    return corner


def target_face(local: frozenset[LocalFace]) -> LocalFace:
    """Pick the local face of the centre target from the minimal faces of a cube.

    Three minimal hexagons meet at a corner of the chart: a truncated corner gives
    the centre of its triangle, which is then minimal, and an untruncated one gives
    the corner vertex. Two minimal hexagons give the vertex where their common edge
    meets a triangle and one gives its centre. Without minimal hexagons a single
    minimal triangle gives its centre.

    :param local: Xi(S) as faces of the chart
    :type local: frozenset[LocalFace]
    :raises IntegrityError: Xi(S) is empty
    :raises UnhandledConfigurationError: the minimal 2-cells fit no pattern
    :return: the face of the chart holding the target
    :rtype: LocalFace
    """
    hexes = [i for i in range(6) if frozenset({i}) in local]
    triangles = [i for i in range(6, 10) if frozenset({i}) in local]
    if len(hexes) > 3:  # noqa: PLR2004
        msg = f"{len(hexes)} minimal hexagons"
        raise UnhandledConfigurationError(msg)
    if len(hexes) == 3:  # noqa: PLR2004
        corner = _hexagon_corner(hexes)
        if corner[0] * corner[1] * corner[2] > 0:
            return tight_facets(corner)
        triangle = next(i for i in range(6, 10) if list(FACETS[i].normal) == corner)
        if triangle not in triangles:
            msg = f"Triangle {triangle} is not minimal next to 3 minimal hexagons"
            raise UnhandledConfigurationError(msg)
        return frozenset({triangle})
    if len(hexes) == 2:  # noqa: PLR2004
        return tight_facets(_hexagon_corner(hexes))
    if hexes:
        return frozenset({hexes[0]})
    if len(triangles) == 1:
        return frozenset(triangles)
    if triangles:
        msg = f"Minimal triangles {triangles} without a minimal hexagon"
        raise UnhandledConfigurationError(msg)
    if local:
        msg = "Xi has no 2-cell"
        raise UnhandledConfigurationError(msg)
    msg = "Xi is empty"
    raise IntegrityError(msg)


@lru_cache(maxsize=None)
def center_target(top: Cell) -> Cell:
    """Return the face of a cube whose barycentre the cube centre is sent to.

    For a cube of W3 see target_face; for an arc of W2 the target is its endpoint in
    Xi(A).

    :param top: a non-fundamental cube or arc
    :type top: Cell
    :raises DomainError: the cell is fundamental
    :raises IntegrityError: Xi(S) is empty
    :raises UnhandledConfigurationError: the minimal 2-cells fit no pattern
    :return: a cell of Xi(S)
    :rtype: Cell
    """
    if top.rank == 2:  # noqa: PLR2004
        return orient_arc_w2(top)
    if top == fundamental_cell(3):
        msg = "The fundamental cube has no centre target"
        raise DomainError(msg)
    adapter = CellLogAdapter(logger, {"cell": top})
    try:
        face = target_face(xi_local(top))
    except IntegrityError as err:
        adapter.error("No centre target: %s", err)
        msg = f"{top}: {err}"
        raise type(err)(msg) from err
    adapter.debug("Centre target %s", sorted(face))
    return local_face_cell(top, face)


@dataclass(frozen=True)
class Tetra:
    """A tetrahedron o < F < E < V of the barycentric subdivision of a cube."""

    cube: Cell
    flag: Simplex
    vertices: tuple[ChartPoint, ...]
    orbit_tag: tuple[IntMatrix, str]

    @property
    def local_flag(self) -> tuple[LocalFace, ...]:
        return tuple(_local_faces(self.cube)[c] for c in self.flag)

    @property
    def volume(self) -> Fraction:
        base = sympy.Matrix([_rational(x) for x in self.vertices[0]])
        edges = sympy.Matrix.hstack(
            *(sympy.Matrix([_rational(x) for x in v]) - base for v in self.vertices[1:])
        )
        return abs(_fraction(edges.det())) / 6


# local faces of the four fundamental tetrahedra
LABELS: dict[str, LocalFace] = {
    "o": frozenset(),
    "h": frozenset({0}),
    "t": frozenset({7}),
    "m1": frozenset({0, 2}),
    "m2": frozenset({0, 7}),
    "x": frozenset({0, 2, 4}),
    "y": frozenset({0, 2, 7}),
}
FUNDAMENTAL_TETRA: dict[str, tuple[str, ...]] = {
    "T1": ("o", "h", "m1", "x"),
    "T2": ("o", "h", "m1", "y"),
    "T3": ("o", "h", "m2", "y"),
    "T4": ("o", "t", "m2", "y"),
}
CUBE_VOLUME = 8 - 4 * Fraction(1, 6)  # cube minus four truncated corners


@lru_cache(maxsize=None)
def _rotations() -> tuple[tuple[IntMatrix, dict[LocalFace, LocalFace]], ...]:
    cube = fundamental_cell(3)
    faces = _local_faces(cube)
    return tuple(
        (k, {face: faces[gamma_act(k, cell)] for cell, face in faces.items()})
        for k in rotation_group()
    )


@lru_cache(maxsize=None)
def _labelled_cells() -> dict[str, tuple[LocalFace, ...]]:
    cells: dict[str, tuple[LocalFace, ...]] = {}
    for name in FUNDAMENTAL_TETRA.values():
        for size in range(1, 5):
            for combo in itertools.combinations(name, size):
                cells.setdefault("-".join(combo), tuple(LABELS[x] for x in combo))
    return cells


@lru_cache(maxsize=None)
def _catalogue_lookup() -> dict[frozenset[LocalFace], tuple[IntMatrix, str]]:
    cells = _labelled_cells()
    lookup: dict[frozenset[LocalFace], tuple[IntMatrix, str]] = {}
    for key in sorted(cells, key=lambda k: (k.count("-"), k)):
        for k, action in _rotations():
            lookup.setdefault(frozenset(action[face] for face in cells[key]), (k, key))
    cube = fundamental_cell(3)
    faces = _local_faces(cube)
    missing = [
        s for s in sd_simplices(cube) if frozenset(faces[c] for c in s) not in lookup
    ]
    if missing:
        msg = f"{len(missing)} simplices of the subdivision are not in the catalogue"
        raise GeometryIntegrityError(msg)
    return lookup


def fundamental_catalogue() -> dict[str, tuple[LocalFace, ...]]:
    """Return the cells of the four fundamental tetrahedra, keyed by label.

    A key joins the labels of the vertices in flag order, for example "o-h-m1".
    Every simplex of the subdivision of every cube is a translate of exactly one
    entry.
    """
    cells = _labelled_cells()
    used = {key for _, key in _catalogue_lookup().values()}
    return {key: cells[key] for key in sorted(used)}


def catalogue_simplex(key: str) -> Simplex:
    """Return the simplex of the fundamental cube listed under a catalogue key."""
    try:
        faces = fundamental_catalogue()[key]
    except KeyError:
        msg = f"Unknown catalogue cell '{key}'"
        raise DomainError(msg) from None
    cube = fundamental_cell(3)
    return canonical([local_face_cell(cube, face) for face in faces])[0]


def _positive_basis(cube: Cell) -> IntMatrix:
    basis = from_columns(cube_basis(cube))
    if det(cube_basis(cube)) < 0:
        basis = tuple(tuple(-x for x in row) for row in basis)
    return basis


def locate_simplex(simplex: Simplex) -> tuple[IntMatrix, str]:
    """Write a simplex of the subdivision of W3 as a translate of a catalogue cell.

    :param simplex: a simplex in flag order
    :type simplex: Simplex
    :raises DomainError: the simplex is not in the subdivision of any cube
    :return: a determinant one matrix gamma and the key of the catalogue cell it moves
        onto the simplex, preserving the vertex order
    :rtype: tuple[IntMatrix, str]
    """
    top = simplex[0]
    if top.rank != 3:  # noqa: PLR2004
        msg = "Only simplices of W3 belong to the catalogue"
        raise DomainError(msg)
    cube = top if top.is_top else min(cubes_at_cell(top))
    basis = _positive_basis(cube)
    inverse = unimodular_inverse(basis)
    origin = fundamental_cell(3)
    faces = _local_faces(origin)
    local = frozenset(faces.get(gamma_act(inverse, c), None) for c in simplex)
    try:
        k, key = _catalogue_lookup()[local]  # type: ignore[index]
    except KeyError:
        msg = f"{simplex_str(simplex)} is not a simplex of the subdivision"
        raise DomainError(msg) from None
    return mat_mul(basis, k), key


@lru_cache(maxsize=None)
def triangulate_cube(cube: Cell) -> tuple[Tetra, ...]:
    """Subdivide a cube into the 96 tetrahedra of its barycentric subdivision.

    :param cube: a cube of W3
    :type cube: Cell
    :raises GeometryIntegrityError: the volumes do not add up to the cube
    :return: the tetrahedra, each tagged with the rotation and fundamental
        tetrahedron it comes from
    :rtype: tuple[Tetra, ...]
    """
    lookup = _catalogue_lookup()
    faces = _local_faces(cube)
    tetras = []
    for flag in maximal_flags(cube):
        k, key = lookup[frozenset(faces[c] for c in flag)]
        name = next(
            n for n, labels in FUNDAMENTAL_TETRA.items() if "-".join(labels) == key
        )
        tetras.append(
            Tetra(
                cube,
                flag,
                tuple(chart_of_cell(cube, c) for c in flag),  # type: ignore[misc]
                (k, name),
            )
        )
    volumes = [t.volume for t in tetras]
    if 0 in volumes or sum(volumes) != CUBE_VOLUME:
        msg = f"Tetrahedra of {cube} have total volume {sum(volumes)}"
        raise GeometryIntegrityError(msg)
    return tuple(tetras)


def classify_tiers(cube: Cell) -> dict[Tetra, TierLabel]:
    """Label the tetrahedra of a non-fundamental cube by tier.

    Tier I tetrahedra rest on a 2-cell outside Xi(S). Tier III tetrahedra rest on an
    edge shared by two minimal hexagons, or by a minimal hexagon and the minimal
    triangle whose centre is the centre target. The rest are Tier II.

    :raises DomainError: the cube is fundamental
    """
    target = _local_faces(cube)[center_target(cube)]
    local = xi_local(cube)

    def minimal_hexagon(i: int) -> bool:
        return FACETS[i].kind is FaceKind.HEXAGON and frozenset({i}) in local

    def target_triangle(i: int) -> bool:
        return FACETS[i].kind is FaceKind.TRIANGLE and target == frozenset({i})

    labels = {}
    for tetra in triangulate_cube(cube):
        _, facet_face, edge, _ = tetra.local_flag
        (facet,) = facet_face
        (other,) = edge - facet_face
        if frozenset({facet}) not in local:
            labels[tetra] = TierLabel.I
        elif (
            minimal_hexagon(facet)
            and (minimal_hexagon(other) or target_triangle(other))
        ) or (target_triangle(facet) and minimal_hexagon(other)):
            labels[tetra] = TierLabel.III
        else:
            labels[tetra] = TierLabel.II
    return labels


def local_lift_consistent(cube: Cell) -> bool:
    """Check that the minimal hexagons of a cube follow the rank two contraction.

    For every pair v_i, v_j of the basis, the hexagon of v_i + s v_j lies in Xi(S)
    exactly when v_i + s v_j precedes the larger of v_i and v_j, at most one sign s
    qualifies, and none does exactly when the pair is fundamental.
    """
    basis = cube_basis(cube)
    local = xi_local(cube)
    for (i, vi), (j, vj) in itertools.combinations(enumerate(basis), 2):
        bound = max(order_key(vi), order_key(vj))
        minimal = set()
        for sign in (1, -1):
            vector = tuple(a + sign * b for a, b in zip(vi, vj))
            facet = next(
                f
                for f in range(6)
                if {FACETS[f].extra[i], FACETS[f].extra[j]} <= {1, -1}
                and FACETS[f].extra[i] * FACETS[f].extra[j] == sign
            )
            if (order_key(vector) < bound) != (frozenset({facet}) in local):
                return False
            if order_key(vector) < bound:
                minimal.add(sign)
        if len(minimal) > 1:
            return False
    return True


class Move(enum.Enum):
    """How the points of one tetrahedron of a non-fundamental cube move."""

    TO_CENTRE = "to centre"
    HEXAGON_CENTRE = "from hexagon centre"
    CORNER = "from corner"
    OPPOSITE_CORNER = "from opposite corner"
    EDGE_POINT = "from edge point"
    SEGMENT = "from segment"
    TARGET = "onto target"


# lower runs first when a point lies in several tetrahedra
_PRIORITY = {
    Move.TARGET: 1,
    Move.EDGE_POINT: 2,
    Move.SEGMENT: 2,
    Move.CORNER: 3,
    Move.OPPOSITE_CORNER: 3,
    Move.HEXAGON_CENTRE: 4,
    Move.TO_CENTRE: 5,
}
_STAGES = {TierLabel.I: Stage.I, TierLabel.II: Stage.II, TierLabel.III: Stage.III}


def _flanking_hexagons(triangle: int) -> list[int]:
    normal = FACETS[triangle].normal
    return [2 * axis + (0 if n > 0 else 1) for axis, n in enumerate(normal)]


def _corner_beyond(triangle: int, hexagon: int) -> ChartPoint:
    """Return the cube corner next to a truncated one, away from a flanking hexagon."""
    axis = hexagon // 2
    return tuple(  # type: ignore[return-value]
        Fraction(-n if k == axis else n) for k, n in enumerate(FACETS[triangle].normal)
    )


@lru_cache(maxsize=None)
def tetra_moves(cube: Cell) -> dict[Simplex, tuple[TierLabel, Move]]:
    """Give every tetrahedron of a non-fundamental cube its tier and its move.

    Tier I tetrahedra are sent to the centre o. Tier III tetrahedra, and those on a
    target triangle without minimal hexagons, carry o onto the centre target. The
    other tetrahedra on a minimal triangle project from a pole fixed by the minimal
    hexagons around the triangle: with one of them, the centre of the hexagon
    across the edge, or the cube corner beyond the truncation when that hexagon is
    the minimal one; with two, the corner opposite the truncation. On a minimal
    hexagon a tetrahedron next to Tier III projects from beyond the midpoint of o
    and its edge, the others from beyond a segment depending on the point.

    :param cube: a non-fundamental cube of W3
    :type cube: Cell
    :raises DomainError: the cube is fundamental
    :raises UnhandledConfigurationError: a minimal triangle off the target has no
        minimal hexagon next to it
    :return: tier and move keyed by maximal flag
    :rtype: dict[Simplex, tuple[TierLabel, Move]]
    """
    faces = _local_faces(cube)
    cells = {face: cell for cell, face in faces.items()}
    local = xi_local(cube)
    target = faces[center_target(cube)]
    tiers = {t.flag: label for t, label in classify_tiers(cube).items()}
    moves = {}
    for flag, tier in tiers.items():
        _, f, e, v = (faces[c] for c in flag)
        (facet,) = f
        if tier is TierLabel.I:
            move = Move.TO_CENTRE
        elif tier is TierLabel.III or (
            f == target and FACETS[facet].kind is FaceKind.TRIANGLE
        ):
            move = Move.TARGET
        elif FACETS[facet].kind is FaceKind.TRIANGLE:
            hexes = [h for h in _flanking_hexagons(facet) if frozenset({h}) in local]
            if len(hexes) == 1:
                move = Move.CORNER if e - f == {hexes[0]} else Move.HEXAGON_CENTRE
            elif len(hexes) == 2:  # noqa: PLR2004
                move = Move.OPPOSITE_CORNER
            else:
                msg = (
                    f"Minimal triangle {facet} of {cube} has {len(hexes)} minimal "
                    "hexagons next to it"
                )
                raise UnhandledConfigurationError(msg)
        else:
            neighbour = (flag[0], flag[1], cells[f | (v - e)], flag[3])
            beside_tier_three = tiers[neighbour] is TierLabel.III
            move = Move.EDGE_POINT if beside_tier_three else Move.SEGMENT
        moves[flag] = (tier, move)
    return moves


# collapses


@dataclass(frozen=True)
class Collapse:
    """Removal of a simplex and its free face, pushing them away from the face.

    The apex is the vertex of the simplex not in the free face.
    """

    simplex: Simplex
    free_face: Simplex
    apex: Cell
    stage: Stage


def _facets_of(simplex: Simplex) -> list[Simplex]:
    return [simplex[:i] + simplex[i + 1 :] for i in range(len(simplex))]


def _collapse_to(
    complex_: set[Simplex], target: Simplex, adapter: CellLogAdapter
) -> list[tuple[Simplex, Simplex]]:
    """Greedily collapse a simplicial complex onto one of its vertices."""
    remaining = set(complex_)
    steps = []
    while len(remaining) > 1:
        found = None
        for simplex in sorted(
            remaining, key=lambda s: (-len(s), [c.sort_key() for c in s])
        ):
            if len(simplex) == 1:
                break
            for face in _facets_of(simplex):
                if face == target:
                    continue
                cofaces = [
                    s
                    for s in remaining
                    if len(s) == len(simplex) and set(face) < set(s)
                ]
                if cofaces == [simplex]:
                    found = (simplex, face)
                    break
            if found:
                break
        if found is None:
            adapter.error("Xi is not collapsible (%i simplices left)", len(remaining))
            msg = f"Minimal set of {adapter.extra['cell']} does not collapse to a point"
            raise IntegrityError(msg)
        remaining -= set(found)
        steps.append(found)
    if remaining != {target}:
        msg = f"Collapse of Xi ended at {[simplex_str(s) for s in remaining]}"
        raise IntegrityError(msg)
    return steps


@lru_cache(maxsize=None)
def collapse_sequence(top: Cell) -> tuple[Collapse, ...]:
    """Return the elementary collapses retracting a cube onto Xi(S), in order.

    :param top: a non-fundamental cube or arc
    :type top: Cell
    :raises IntegrityError: Xi(S) is empty or does not collapse to a point
    :return: the collapses of Stages I, II and III
    :rtype: tuple[Collapse, ...]
    """
    adapter = CellLogAdapter(logger, {"cell": top})
    xi = xi_set(top)
    if not xi:
        msg = f"{top} has an empty minimal set"
        raise IntegrityError(msg)
    simplices = sd_simplices(top)
    boundary = [s for s in simplices if top not in s]
    minimal = {s for s in boundary if all(c in xi for c in s)}
    collapses = []
    for size in range(TOP_DIM[top.rank], 0, -1):
        for s in sorted(
            (s for s in boundary if len(s) == size and s not in minimal),
            key=lambda s: [c.sort_key() for c in s],
        ):
            collapses.append(Collapse((top, *s), s, top, Stage.I))
    target = center_target(top)
    for simplex, face in _collapse_to(minimal, (target,), adapter):
        (apex,) = set(simplex) - set(face)
        collapses.append(Collapse((top, *simplex), (top, *face), apex, Stage.II))
    collapses.append(Collapse((top, target), (top,), target, Stage.III))
    adapter.debug("%i elementary collapses", len(collapses))
    return tuple(collapses)


def _check_delta(delta: Fraction) -> Fraction:
    delta = Fraction(delta)
    if not 0 < delta < MAX_DELTA:
        msg = f"Delta {delta} must lie strictly between 0 and {MAX_DELTA}"
        raise DomainError(msg)
    return delta


# barycentric coordinates in one tetrahedron


def _rational(x: Fraction | int) -> sympy.Rational:
    x = Fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _fraction(x: Expr) -> Fraction:
    return Fraction(int(x.p), int(x.q))  # type: ignore[attr-defined]


@lru_cache(maxsize=None)
def _frame(
    flag: tuple[LocalFace, ...],
) -> tuple[ChartPoint, tuple[tuple[Fraction, ...], ...]]:
    """Return the first vertex of a local flag and the inverse of its edge matrix."""
    polytope = soule_polytope()
    origin, *corners = (polytope.barycenter(face) for face in flag)
    edges = sympy.Matrix(
        [[_rational(a - b) for a, b in zip(corner, origin)] for corner in corners]
    ).T
    if edges.det() == 0:
        msg = f"Flag {[sorted(face) for face in flag]} spans no tetrahedron"
        raise GeometryIntegrityError(msg)
    inverse = edges.inv()
    return origin, tuple(
        tuple(_fraction(inverse[i, j]) for j in range(3)) for i in range(3)
    )


def _barycentric(
    flag: tuple[LocalFace, ...], x: Sequence[Fraction], *, vector: bool = False
) -> tuple[Fraction, ...]:
    """Write a chart point, or a chart vector, in the barycentrics of a tetrahedron."""
    origin, inverse = _frame(flag)
    rel = tuple(x) if vector else tuple(a - b for a, b in zip(x, origin))
    lam = tuple(sum((r * y for r, y in zip(row, rel)), Fraction(0)) for row in inverse)
    return ((Fraction(0) if vector else Fraction(1)) - sum(lam), *lam)


def _chart(flag: tuple[LocalFace, ...], weights: Sequence[Fraction]) -> ChartPoint:
    polytope = soule_polytope()
    coords = [Fraction(0)] * 3
    for face, weight in zip(flag, weights):
        for k, x in enumerate(polytope.barycenter(face)):
            coords[k] += weight * x
    return tuple(coords)  # type: ignore[return-value]


def _project(
    weights: Sequence[Fraction], pole: Sequence[Fraction]
) -> tuple[Fraction, ...] | None:
    """Push a point away from a pole until a coordinate vanishes (None if stuck)."""
    ratios = [m / (z - m) for m, z in zip(weights, pole) if z > m]
    if not ratios or min(ratios) == 0:
        return None
    t = min(ratios)
    return tuple((1 + t) * m - t * z for m, z in zip(weights, pole))


# trajectories


@dataclass(frozen=True)
class Segment:
    """A straight piece of a trajectory inside one simplex of the subdivision."""

    cube: Cell
    simplex: Simplex
    stage: Stage
    start: tuple[Fraction, ...]
    end: tuple[Fraction, ...]
    exit_face: Simplex
    move: Move | None = None

    @property
    def carrier(self) -> Cell:
        return self.simplex[0]

    @property
    def length(self) -> Expr:
        squared = sum((a - b) ** 2 for a, b in zip(self.start, self.end))
        return sympy.sqrt(sympy.Rational(squared.numerator, squared.denominator))

    def to_json(self) -> dict[str, object]:
        data: dict[str, object] = {
            "cube": self.cube.to_json(),
            "simplex": [c.to_json() for c in self.simplex],
            "stage": self.stage.value,
            "start": [str(x) for x in self.start],
            "end": [str(x) for x in self.end],
            "exit": [c.to_json() for c in self.exit_face],
        }
        if self.move is not None:
            data["move"] = self.move.value
        return data


@dataclass
class Trajectory:
    """The path of a point under the contraction, as straight chart segments."""

    start: BaryPoint
    end: BaryPoint
    segments: list[Segment] = field(default_factory=list)
    times: list[tuple[Expr, Expr]] = field(default_factory=list)

    @property
    def total_length(self) -> Expr:
        return sympy.Add(*(s.length for s in self.segments))

    def carriers(self) -> list[Simplex]:
        return [s.simplex for s in self.segments]

    def carrier_cells(self) -> list[Cell]:
        """Return the cells carrying the segments, repeats merged."""
        found: list[Cell] = []
        for s in self.segments:
            if not found or found[-1] != s.carrier:
                found.append(s.carrier)
        return found

    def cubes(self) -> list[Cell]:
        found: list[Cell] = []
        for s in self.segments:
            if not found or found[-1] != s.cube:
                found.append(s.cube)
        return found

    def to_json(self) -> dict[str, object]:
        data: dict[str, object] = {
            "start": {str(c): str(w) for c, w in sorted(self.start.items())},
            "end": {str(c): str(w) for c, w in sorted(self.end.items())},
            "segments": [s.to_json() for s in self.segments],
        }
        if self.times:
            data["times"] = [[str(a), str(b)] for a, b in self.times]
        return data


MAX_MOVES = 32


def _target_point(top: Cell, flag: tuple[LocalFace, ...]) -> ChartPoint:
    """Return where a Tier III tetrahedron sends the cube centre.

    This is the centre target when it lies on the closed 2-cell of the tetrahedron,
    else the vertex of the 2-cell side nearest to it.
    """
    polytope = soule_polytope()
    target = _local_faces(top)[center_target(top)]
    goal = polytope.barycenter(target)
    if flag[1] <= target:
        return goal
    return min(
        (polytope.barycenter(face) for face in flag[1:]),
        key=lambda p: sum((a - b) ** 2 for a, b in zip(p, goal)),
    )


def _pole(
    top: Cell,
    flag: tuple[LocalFace, ...],
    move: Move,
    weights: Sequence[Fraction],
    delta: Fraction,
) -> tuple[Fraction, ...] | None:
    """Return the barycentrics of the point a projecting move pushes away from."""
    _, f, e, _ = flag
    (facet,) = f
    if move in (Move.EDGE_POINT, Move.SEGMENT):
        k = (1 + delta) / 2
        if move is Move.EDGE_POINT:
            return (k, -delta, k, Fraction(0))
        spread = weights[2] + weights[3]
        if not spread:
            return None
        return (k, -delta, k * weights[2] / spread, k * weights[3] / spread)
    if move is Move.HEXAGON_CENTRE:
        pole = soule_polytope().barycenter(e - f)
    elif move is Move.CORNER:
        (hexagon,) = e - f
        pole = _corner_beyond(facet, hexagon)
    else:
        normal = FACETS[facet].normal
        pole = tuple(Fraction(-n) for n in normal)  # type: ignore[assignment]
    return _barycentric(flag, pole)


def _move_end(
    top: Cell, flag: Simplex, move: Move, point: BaryPoint, delta: Fraction
) -> ChartPoint | None:
    """Return where a move of one tetrahedron takes a point of its closure."""
    faces = _local_faces(top)
    local = tuple(faces[c] for c in flag)
    weights = tuple(point.get(c, Fraction(0)) for c in flag)
    if move is Move.TO_CENTRE:
        xi = xi_set(top)
        outer = list(zip(flag[1:], weights[1:]))
        spent = sum((w for c, w in outer if c not in xi), Fraction(0))
        kept = [w if c in xi else Fraction(0) for c, w in outer]
        return _chart(local, (weights[0] + spent, *kept))
    if move is Move.TARGET:
        if not weights[0]:
            return None
        goal = _target_point(top, local)
        start = _chart(local, weights)
        centre = chart_of_cell(top, top)
        return tuple(  # type: ignore[return-value]
            x + weights[0] * (g - y) for x, g, y in zip(start, goal, centre)
        )
    pole = _pole(top, local, move, weights, delta)
    moved = None if pole is None else _project(weights, pole)
    if moved is None and move is Move.HEXAGON_CENTRE:
        # the vertex on two non-minimal hexagons lies in a plane with o and q
        (facet,) = local[1]
        minimal = xi_local(top)
        hexes = [h for h in _flanking_hexagons(facet) if frozenset({h}) in minimal]
        if not any(frozenset({h}) in minimal for h in local[3] - local[1]):
            corner = _corner_beyond(facet, hexes[0])
            moved = _project(weights, _barycentric(local, corner))
    return None if moved is None else _chart(local, moved)


def _choose_move(
    top: Cell, point: BaryPoint, delta: Fraction
) -> tuple[Stage, Move | None, ChartPoint]:
    """Pick the move a point of a cube makes next and return its chart end point."""
    target = center_target(top)
    start = chart_of_point(top, point)
    if top in point and set(point) <= {top, target}:
        return Stage.III, None, chart_of_cell(top, target)  # type: ignore[return-value]
    present = set(point)
    candidates = sorted(
        (
            (flag, tier, move)
            for flag, (tier, move) in tetra_moves(top).items()
            if present <= set(flag)
        ),
        key=lambda c: _PRIORITY[c[2]],
    )
    for flag, tier, move in candidates:
        end = _move_end(top, flag, move, point, delta)
        if end is not None and end != start:
            return _STAGES[tier], move, end
    weight = point.get(top, Fraction(0))
    xi = xi_set(top)
    if 0 < weight < 1 and all(c in xi for c in point if c != top):
        # nothing else moves it: push radially off o
        centre = chart_of_cell(top, top)
        end = tuple((x - weight * y) / (1 - weight) for x, y in zip(start, centre))
        return Stage.I, None, end  # type: ignore[return-value]
    msg = f"No move applies to the point on {simplex_str(support(point))}"
    raise GeometryIntegrityError(msg)


def _shift(
    flag: Simplex, weights: Sequence[Fraction], step: Sequence[Fraction], s: Fraction
) -> BaryPoint:
    moved = {}
    for cell, w, d in zip(flag, weights, step):
        value = w + s * d
        if value < 0:
            msg = f"Path left the tetrahedron {simplex_str(flag)}"
            raise GeometryIntegrityError(msg)
        if value:
            moved[cell] = value
    return moved


def _straight_pieces(
    top: Cell, point: BaryPoint, end: Sequence[Fraction]
) -> list[tuple[Simplex, BaryPoint]]:
    """Split the chart segment from a point to an end at the simplices it crosses.

    :return: the carrier of each piece with the point it ends at
    :rtype: list[tuple[Simplex, BaryPoint]]
    """
    faces = _local_faces(top)
    pieces = []
    current = dict(point)
    while True:
        here = chart_of_point(top, current)
        remaining = tuple(a - b for a, b in zip(end, here))
        if not any(remaining):
            return pieces
        for flag in maximal_flags(top):
            if not set(current) <= set(flag):
                continue
            local = tuple(faces[c] for c in flag)
            weights = [current.get(c, Fraction(0)) for c in flag]
            step = _barycentric(local, remaining, vector=True)
            if any(w == 0 and d < 0 for w, d in zip(weights, step)):
                continue
            exits = [w / -d for w, d in zip(weights, step) if d < 0]
            reach = min([Fraction(1), *exits])
            break
        else:
            msg = f"Chart path leaves {top} from {simplex_str(support(current))}"
            raise GeometryIntegrityError(msg)
        middle = _shift(flag, weights, step, reach / 2)
        current = _shift(flag, weights, step, reach)
        pieces.append((support(middle), current))


def _arc_moves(arc: Cell, point: BaryPoint) -> list[tuple[Stage, BaryPoint]]:
    target = orient_arc_w2(arc)
    moves = []
    if any(c not in (arc, target) for c in point):
        moves.append((Stage.I, {arc: Fraction(1)}))
    moves.append((Stage.III, {target: Fraction(1)}))
    return moves


def trace_in_cube(
    point: BaryPoint, top: Cell, *, delta: Fraction = DEFAULT_DELTA
) -> tuple[list[Segment], BaryPoint]:
    """Move a point of a cube until it reaches Xi(S), or the centre if fundamental.

    Each step applies the move of a tetrahedron whose closure holds the point:
    Tier III before Tier II before Tier I, and sliding o onto the centre target
    before all of them. Points left on the cone from o over Xi(S) with nothing to
    move them are pushed radially off o.

    :param point: barycentric point of the subdivision of the cube
    :type point: BaryPoint
    :param top: the cube (or arc) whose contraction applies
    :type top: Cell
    :param delta: relative distance of the projection poles beyond their faces
    :type delta: Fraction
    :raises DomainError: the point lies in Xi(S) and belongs to another cube
    :raises IntegrityError: the point does not reach Xi(S)
    :return: the segments and the final point
    :rtype: tuple[list[Segment], BaryPoint]
    """
    delta = _check_delta(delta)
    xi = xi_set(top)
    if xi and all(c in xi for c in point):
        msg = f"Point lies in Xi of {top}; it is traced from another cube"
        raise DomainError(msg)
    segments = []
    current = dict(point)
    if top == fundamental_cell(top.rank):
        centre = {top: Fraction(1)}
        if current != centre:
            simplex = canonical(list({*current, top}))[0]
            segments.append(
                Segment(
                    top,
                    simplex,
                    Stage.RADIAL,
                    chart_of_point(top, current),
                    chart_of_point(top, centre),
                    (top,),
                )
            )
        return segments, centre
    if top.rank == 2:  # noqa: PLR2004
        for stage, moved in _arc_moves(top, current):
            if moved == current:
                continue
            cells = {*current, *moved}
            middle = {c: current.get(c, 0) + moved.get(c, 0) for c in cells}
            segments.append(
                Segment(
                    top,
                    support(middle),
                    stage,
                    chart_of_point(top, current),
                    chart_of_point(top, moved),
                    support(moved),
                )
            )
            current = moved
        return segments, current
    adapter = CellLogAdapter(logger, {"cell": top})
    for _ in range(MAX_MOVES):
        if all(c in xi for c in current):
            return segments, current
        stage, move, end = _choose_move(top, current, delta)
        for simplex, moved in _straight_pieces(top, current, end):
            segments.append(
                Segment(
                    top,
                    simplex,
                    stage,
                    chart_of_point(top, current),
                    chart_of_point(top, moved),
                    support(moved),
                    move,
                )
            )
            current = moved
        adapter.debug("Stage %s move %s to %s", stage.value, move, support(current))
    msg = f"Point of {top} did not reach Xi after {MAX_MOVES} moves"
    raise IntegrityError(msg)


def trace(
    point: BaryPoint,
    record: DistanceRecord | None = None,
    *,
    delta: Fraction = DEFAULT_DELTA,
) -> Trajectory:
    """Follow a point through successive cubes to the centre of the fundamental cell.

    :param point: barycentric point of the subdivision
    :type point: BaryPoint
    :param record: distances used to check that every cube lies in a lower stratum
        than the one before
    :type record: DistanceRecord | None
    :param delta: relative distance of the projection poles beyond the free faces
    :type delta: Fraction
    :raises IntegrityError: a cube does not lower the stratum
    :raises RadiusExceededError: a cube lies beyond the radius of the record
    :return: the trajectory
    :rtype: Trajectory
    """
    if not point or sum(point.values()) != 1 or min(point.values()) <= 0:
        msg = "A point needs positive barycentric weights summing to 1"
        raise DomainError(msg)
    canonical(list(point))
    current = dict(point)
    trajectory = Trajectory(dict(point), current)
    top = home_cube(list(current))
    fundamental = fundamental_cell(top.rank)
    previous = None
    while True:
        if record is not None:
            level = record.cube_dist(top)
            if previous is not None and level >= previous:
                msg = f"Stratum of {top} ({level}) is not below {previous}"
                raise IntegrityError(msg)
            previous = level
        segments, current = trace_in_cube(current, top, delta=delta)
        trajectory.segments.extend(segments)
        if top == fundamental:
            break
        nxt = home_cube(list(current))
        if nxt == top:
            msg = f"Contraction of {top} did not reach its minimal set"
            raise IntegrityError(msg)
        top = nxt
    trajectory.end = current
    return trajectory


def trace_w2(
    arc: Cell, u: Fraction | int | str, record: DistanceRecord | None = None
) -> Trajectory:
    """Follow the point u of an arc of W2 to the point i of the fundamental arc."""
    return trace(locate_w2(arc, u), record)


def _schedule(trajectory: Trajectory, record: DistanceRecord) -> Trajectory:
    groups: dict[Cell, list[int]] = {}
    for index, segment in enumerate(trajectory.segments):
        groups.setdefault(segment.cube, []).append(index)
    times: list[tuple[Expr, Expr]] = [(sympy.Integer(0), sympy.Integer(0))] * len(
        trajectory.segments
    )
    for cube, indices in groups.items():
        n = record.cube_dist(cube)
        low = sympy.Rational(1, 2 ** (n + 1))
        high = sympy.Rational(1, 2**n)
        lengths = [trajectory.segments[i].length for i in indices]
        total = sympy.Add(*lengths)
        elapsed = sympy.Integer(0)
        for i, length in zip(indices, lengths):
            begin = low + (high - low) * elapsed / total
            elapsed += length
            times[i] = (begin, low + (high - low) * elapsed / total)
    trajectory.times = times
    return trajectory


def h3_schedule(
    point: BaryPoint, record: DistanceRecord, *, delta: Fraction = DEFAULT_DELTA
) -> Trajectory:
    """Trace a point of W3 and give every segment its time interval.

    Segments in a cube S at distance n run at constant chart speed during
    [2^-(n+1), 2^-n]; the point rests before its first interval.

    :raises RadiusExceededError: a needed cube lies beyond the record
    """
    return _schedule(trace(point, record, delta=delta), record)


def h2_schedule(
    arc: Cell, u: Fraction | int | str, record: DistanceRecord
) -> Trajectory:
    """Trace a point of W2 and give every segment its time interval."""
    return _schedule(trace_w2(arc, u, record), record)


# swept cells and chain homotopies


def _home_level(simplex: Simplex, record: DistanceRecord) -> tuple[int, Cell]:
    home = home_cube(simplex)
    return record.cube_dist(home), home


def swept_cells(simplex: Simplex, record: DistanceRecord) -> set[Simplex]:
    """Return the simplices of the subdivision met by trajectories from a simplex.

    :param simplex: a simplex of the subdivision in flag order
    :type simplex: Simplex
    :param record: distances up to a radius covering every cube involved
    :type record: DistanceRecord
    :raises RadiusExceededError: a needed cube lies beyond the record
    :return: every simplex swept, including the start and the final images
    :rtype: set[Simplex]
    """
    simplex = canonical(list(simplex))[0]
    swept = {simplex}
    current = {simplex}
    fundamental = fundamental_cell(simplex[0].rank)
    while True:
        level, top = max(_home_level(s, record) for s in current)
        if top == fundamental:
            break
        for collapse in collapse_sequence(top):
            hit = current & {collapse.simplex, collapse.free_face}
            if not hit:
                continue
            current -= hit
            swept.add(collapse.simplex)
            for cell in collapse.free_face:
                image = tuple(c for c in collapse.simplex if c != cell)
                current.add(image)
                swept.add(image)
        if any(home_cube(s) == top for s in current):
            msg = f"Swept images stayed in {top}"
            raise IntegrityError(msg)
    for s in current:
        if fundamental not in s:
            swept.add((fundamental, *s))
    swept.add((fundamental,))
    return swept


def _add(chain: Chain, simplex: Simplex, coeff: int) -> None:
    value = chain.get(simplex, 0) + coeff
    if value:
        chain[simplex] = value
    else:
        chain.pop(simplex, None)


def boundary(chain: Chain) -> Chain:
    """Return the simplicial boundary of a chain of oriented simplices."""
    result: Chain = {}
    for simplex, coeff in chain.items():
        if len(simplex) == 1:
            continue
        for i, face in enumerate(_facets_of(simplex)):
            _add(result, face, coeff * (-1) ** i)
    return result


def join(apex: Cell, simplex: Simplex) -> tuple[Simplex, int]:
    """Return the cone apex * simplex in flag order with its orientation sign."""
    return canonical([apex, *simplex])


def translate(gamma: IntMatrix, chain: Chain) -> Chain:
    """Apply an integer matrix of determinant ±1 to every simplex of a chain."""
    result: Chain = {}
    for simplex, coeff in chain.items():
        _add(result, tuple(gamma_act(gamma, c) for c in simplex), coeff)
    return result


def _collapse_chain(collapse: Collapse, current: Chain, homotopy: Chain) -> None:
    current.pop(collapse.simplex, None)
    coeff = current.pop(collapse.free_face, 0)
    if not coeff:
        return
    cone, sign = join(collapse.apex, collapse.free_face)
    # r(f) = f - d(a*f) and P(f) = -a*f
    _add(homotopy, cone, -coeff * sign)
    for face, value in boundary({cone: sign}).items():
        if face != collapse.free_face:
            _add(current, face, -coeff * value)


def contract_chain(chain: Chain, record: DistanceRecord) -> tuple[Chain, Chain]:
    """Apply the chain homotopy of the contraction to a chain of the subdivision.

    Cubes are processed from the highest stratum down, each by its elementary
    collapses, and the fundamental cell last by the cone from its centre o. The
    result satisfies dP + Pd = R - id.

    :param chain: oriented simplices in flag order with integer coefficients
    :type chain: Chain
    :param record: distances up to a radius covering every cube involved
    :type record: DistanceRecord
    :raises RadiusExceededError: a needed cube lies beyond the record
    :return: R(chain), supported on the centre o, and P(chain)
    :rtype: tuple[Chain, Chain]
    """
    current: Chain = {}
    for simplex, coeff in chain.items():
        ordered, sign = canonical(list(simplex))
        _add(current, ordered, coeff * sign)
    homotopy: Chain = {}
    if not current:
        return current, homotopy
    rank = next(iter(current))[0].rank
    fundamental = fundamental_cell(rank)
    while current:
        level, top = max(_home_level(s, record) for s in current)
        if top == fundamental:
            break
        for collapse in collapse_sequence(top):
            _collapse_chain(collapse, current, homotopy)
        for s in current:
            if home_cube(s) == top:
                msg = f"Chain terms stayed in {top}"
                raise IntegrityError(msg)
        logger.debug("Contracted %s at level %i", top, level)
    result: Chain = {}
    for simplex, coeff in current.items():
        if fundamental not in simplex:
            _add(homotopy, (fundamental, *simplex), -coeff)
        if len(simplex) == 1:
            _add(result, (fundamental,), coeff)
    return result, homotopy
