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

"""Index the cells of W2 and W3 by decorations and compute their distance strata.

A cell is identified by its decoration, the set of minimal vectors (modulo sign)
shared by every form in its interior. A cube of W3 is decorated by a Z-basis of Z^3;
its proper faces add one, two or three further minimal vectors, one for each tight
facet of the Soule chart. An arc of W2 is decorated by a Z-basis of Z^2 and its
endpoints by {v1, v2, v1 ± v2}.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence

from tqdm import tqdm

from wrretract.exceptions import DomainError, IntegrityError, RadiusExceededError
from wrretract.intvec import (
    IntMatrix,
    SignClass,
    add,
    canon,
    collection_key,
    combine,
    identity,
    is_basis,
    mat_vec,
    order_key,
    sub,
)
from wrretract.logging import CellLogAdapter
from wrretract.quadform import FACETS, FaceKind, soule_polytope

logger = logging.getLogger(__name__)

# number of vectors decorating a top-dimensional cell plus its dimension
_TOP_SIZE_PLUS_DIM = {2: 3, 3: 6}
TOP_DIM = {2: 1, 3: 3}


@total_ordering
class Cell:
    """A cell of W2 or W3 identified by its decoration."""

    __slots__ = ("decoration", "rank", "_hash")

    def __init__(self, vectors: Iterable[Sequence[int]]) -> None:
        """Canonicalize and validate a decoration.

        :param vectors: primitive integer vectors of length 2 or 3
        :type vectors: Iterable[Sequence[int]]
        :raises DomainError: the vectors do not decorate a cell
        """
        decoration = frozenset(canon(v) for v in vectors)
        ranks = {len(v) for v in decoration}
        if len(ranks) != 1 or not ranks <= {2, 3}:
            msg = f"Decoration {sorted(decoration)} mixes or uses unsupported ranks"
            raise DomainError(msg)
        rank = ranks.pop()
        size = len(decoration)
        if not rank <= size <= _TOP_SIZE_PLUS_DIM[rank]:
            msg = f"A rank {rank} decoration cannot have {size} vectors"
            raise DomainError(msg)
        if not any(is_basis(t) for t in itertools.combinations(decoration, rank)):
            msg = f"Decoration {sorted(decoration)} contains no Z-basis"
            raise DomainError(msg)
        self._set(decoration, rank)

    @classmethod
    def _make(cls, decoration: frozenset[SignClass], rank: int) -> Cell:
        cell = cls.__new__(cls)
        cell._set(decoration, rank)
        return cell

    def _set(self, decoration: frozenset[SignClass], rank: int) -> None:
        self.decoration = decoration
        self.rank = rank
        self._hash = hash((decoration, rank))

    @property
    def dim(self) -> int:
        return _TOP_SIZE_PLUS_DIM[self.rank] - len(self.decoration)

    @property
    def vectors(self) -> tuple[SignClass, ...]:
        return tuple(sorted(self.decoration))

    @property
    def is_top(self) -> bool:
        return self.dim == TOP_DIM[self.rank]

    @property
    def kind(self) -> FaceKind | None:
        """Return the kind of a two-dimensional cell of W3, None otherwise."""
        if self.rank != 3 or self.dim != 2:  # noqa: PLR2004
            return None
        dependent = sum(
            not is_basis(t) for t in itertools.combinations(self.decoration, 3)
        )
        return FaceKind.HEXAGON if dependent else FaceKind.TRIANGLE

    @property
    def type_name(self) -> str:
        if self.rank == 2:  # noqa: PLR2004
            return "arc" if self.dim == 1 else "vertex"
        kind = self.kind
        if kind is not None:
            return kind.value
        return {0: "vertex", 1: "edge", 3: "cube"}[self.dim]

    def sort_key(self) -> tuple[int, tuple[SignClass, ...]]:
        return len(self.decoration), self.vectors

    def to_json(self) -> list[list[int]]:
        return [list(v) for v in self.vectors]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cell):
            return NotImplemented
        return self.rank == other.rank and self.decoration == other.decoration

    def __lt__(self, other: Cell) -> bool:
        return self.sort_key() < other.sort_key()

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return ";".join(repr(v) for v in self.vectors)

    def __repr__(self) -> str:
        return f'{self.__class__.__name__}("{self}")'


def fundamental_cell(rank: int = 3) -> Cell:
    """Return the cube (or arc) decorated by the standard basis."""
    return Cell(identity(rank))


def cube_basis(cube: Cell) -> tuple[SignClass, ...]:
    """Return the ordered basis used for the chart of a top-dimensional cell."""
    if not cube.is_top:
        msg = f"{cube} is not top-dimensional"
        raise DomainError(msg)
    return cube.vectors


@lru_cache(maxsize=None)
def local_face_cell(cube: Cell, face: frozenset[int]) -> Cell:
    """Return the global cell of a face of the Soule chart of a cube.

    :param cube: a cube of W3
    :type cube: Cell
    :param face: the ids of the facets that are tight on the face
    :type face: frozenset[int]
    :return: the decorated cell
    :rtype: Cell
    """
    basis = cube_basis(cube)
    extras = {canon(combine(FACETS[f].extra, basis)) for f in face}
    return Cell._make(frozenset(basis) | extras, 3)


def local_face_of(cube: Cell, cell: Cell) -> frozenset[int]:
    """Return the set of tight facets describing a face of a cube in its chart.

    :raises DomainError: the cell is not a face of the cube
    """
    if not cube.decoration <= cell.decoration:
        msg = f"{cell} is not a face of {cube}"
        raise DomainError(msg)
    basis = cube_basis(cube)
    face = frozenset(
        i
        for i, facet in enumerate(FACETS)
        if canon(combine(facet.extra, basis)) in cell.decoration
    )
    if local_face_cell(cube, face) != cell:
        msg = f"{cell} is not a face of {cube}"
        raise DomainError(msg)
    return face


def arc_endpoints(arc: Cell) -> tuple[Cell, Cell]:
    """Return the two vertices of an arc of W2, the v1+v2 endpoint first."""
    if arc.rank != 2 or not arc.is_top:  # noqa: PLR2004
        msg = f"{arc} is not an arc of W2"
        raise DomainError(msg)
    v1, v2 = arc.vectors
    return (
        Cell._make(arc.decoration | {canon(add(v1, v2))}, 2),
        Cell._make(arc.decoration | {canon(sub(v1, v2))}, 2),
    )


@lru_cache(maxsize=None)
def proper_faces(top: Cell) -> tuple[Cell, ...]:
    """Return every proper face of a cube (50 cells) or arc (2 vertices)."""
    if top.rank == 2:  # noqa: PLR2004
        return arc_endpoints(top)
    polytope = soule_polytope()
    return tuple(local_face_cell(top, face) for face in polytope.faces if face)


def subcells_of_cube(cube: Cell) -> dict[int, list[Cell]]:
    """Return the proper faces of a cube grouped by dimension."""
    return group_by_dim(proper_faces(cube))


def census(cells: Iterable[Cell]) -> dict[str, int]:
    """Count cells by type name (vertex, edge, triangle, hexagon, cube, arc)."""
    counts: dict[str, int] = {}
    for cell in cells:
        counts[cell.type_name] = counts.get(cell.type_name, 0) + 1
    return counts


def faces_of_cube(cube: Cell) -> list[Cell]:
    """Return the ten 2-faces of a cube: six hexagons, then four triangles."""
    return [local_face_cell(cube, frozenset({i})) for i in range(len(FACETS))]


@lru_cache(maxsize=None)
def cubes_at_cell(cell: Cell) -> frozenset[Cell]:
    """Return the top-dimensional cells incident to a cell.

    These are the Z-bases contained in the decoration.
    """
    if cell.is_top:
        return frozenset({cell})
    return frozenset(
        Cell._make(frozenset(t), cell.rank)
        for t in itertools.combinations(sorted(cell.decoration), cell.rank)
        if is_basis(t)
    )


def cell_faces(cell: Cell) -> list[Cell]:
    """Return every proper face of a cell, found through one incident cube."""
    top = min(cubes_at_cell(cell))
    candidates = proper_faces(top)
    return sorted(
        c
        for c in candidates
        if c.decoration > cell.decoration
    )


def cell_cofaces(cell: Cell) -> list[Cell]:
    """Return every cell having the given cell as a proper face."""
    found = set()
    for top in cubes_at_cell(cell):
        if top != cell:
            found.add(top)
        for face in proper_faces(top):
            if face.decoration < cell.decoration:
                found.add(face)
    return sorted(found)


def gamma_act(gamma: IntMatrix, cell: Cell) -> Cell:
    """Apply an integer matrix of determinant ±1 to a cell."""
    return Cell._make(
        frozenset(canon(mat_vec(gamma, v)) for v in cell.decoration), cell.rank
    )


@lru_cache(maxsize=None)
def minimal_cube(cell: Cell) -> Cell:
    """Return the smallest top-dimensional cell in the star of a cell.

    :param cell: any cell
    :type cell: Cell
    :raises IntegrityError: two distinct incident cubes compare Approx
    :return: the minimal cube (or arc)
    :rtype: Cell
    """
    if cell.is_top:
        return cell
    ranked = sorted(
        (collection_key(top.decoration), top) for top in cubes_at_cell(cell)
    )
    if len(ranked) > 1 and ranked[0][0] == ranked[1][0]:
        msg = f"Cubes {ranked[0][1]} and {ranked[1][1]} at {cell} are not ordered"
        raise IntegrityError(msg)
    return ranked[0][1]


@lru_cache(maxsize=None)
def xi_set(top: Cell) -> frozenset[Cell]:
    """Return the proper faces of a cube whose minimal cube is a different cube."""
    return frozenset(c for c in proper_faces(top) if minimal_cube(c) != top)


def group_by_dim(cells: Iterable[Cell]) -> dict[int, list[Cell]]:
    grouped: dict[int, list[Cell]] = {}
    for cell in sorted(cells):
        grouped.setdefault(cell.dim, []).append(cell)
    return dict(sorted(grouped.items()))


def xi_local(cube: Cell) -> frozenset[frozenset[int]]:
    """Return Xi(S) as faces of the chart of the cube."""
    polytope = soule_polytope()
    xi = xi_set(cube)
    return frozenset(
        face for face in polytope.faces if face and local_face_cell(cube, face) in xi
    )


def xi_two_cells_connected(cube: Cell) -> bool:
    """Determine whether the 2-cells of Xi(S) are connected through shared edges."""
    polytope = soule_polytope()
    facets = sorted(next(iter(f)) for f in xi_local(cube) if len(f) == 1)
    if not facets:
        return True
    reached = {facets[0]}
    stack = [facets[0]]
    while stack:
        current = stack.pop()
        for other in polytope.adjacent_facets(current):
            if other in facets and other not in reached:
                reached.add(other)
                stack.append(other)
    return len(reached) == len(facets)


def opposite_faces_excluded(cube: Cell) -> bool:
    """Check that no pair of opposite faces of a cube lies in Xi(S).

    Hexagons v_i + v_j and v_i - v_j are opposite. Triangles are paired through
    the longest basis vector v_k: v1 + v2 + v3 with v_k minus the other two, and
    the remaining two triangles with each other.
    """
    local = xi_local(cube)
    for pair in ((0, 1), (2, 3), (4, 5)):
        if all(frozenset({f}) in local for f in pair):
            return False
    norms = [order_key(v)[0] for v in cube_basis(cube)]
    longest = norms.index(max(norms))
    partner = {0: 9, 1: 8, 2: 7}[longest]
    first = (6, partner)
    second = tuple(sorted({6, 7, 8, 9} - set(first)))
    return not any(
        all(frozenset({f}) in local for f in pair) for pair in (first, second)
    )


def three_hexagons_force_triangle(cube: Cell) -> bool:
    """Check that three minimal hexagons at a truncated corner force its triangle."""
    local = xi_local(cube)
    for tri in range(6, 10):
        corner = FACETS[tri].normal
        hexagons = [2 * axis + (0 if corner[axis] > 0 else 1) for axis in range(3)]
        if all(frozenset({h}) in local for h in hexagons) and (
            frozenset({tri}) not in local
        ):
            return False
    return True


def vertex_well_ordered(vertex: Cell) -> bool:
    """Check that the decorating vectors of a vertex are pairwise not Approx."""
    keys = [order_key(v) for v in vertex.decoration]
    return len(set(keys)) == len(keys)


def arcs_totally_ordered(vertex: Cell) -> bool:
    """Check that the three arcs at a vertex of W2 compare strictly."""
    keys = [collection_key(a.decoration) for a in cubes_at_cell(vertex)]
    return len(set(keys)) == len(keys)


TYPE_ORDER = ("vertex", "edge", "triangle", "hexagon", "cube")


def incidence_table() -> list[list[int | None]]:
    """Return the table of incidences of W3.

    Below the diagonal, entry (i, j) counts cells of type j in the boundary of a
    cell of type i; above it, the number of cells of type j containing a cell of
    type i. Entries between the two kinds of 2-cells are None.
    """
    cube = fundamental_cell(3)
    polytope = soule_polytope()
    representatives = {
        "vertex": local_face_cell(cube, polytope.faces_of_dim(0)[0]),
        "edge": local_face_cell(cube, polytope.faces_of_dim(1)[0]),
        "triangle": local_face_cell(cube, frozenset({6})),
        "hexagon": local_face_cell(cube, frozenset({0})),
        "cube": cube,
    }
    table: list[list[int | None]] = []
    for i, row_type in enumerate(TYPE_ORDER):
        cell = representatives[row_type]
        faces = census(cell_faces(cell))
        cofaces = census(cell_cofaces(cell))
        row: list[int | None] = []
        for j, col_type in enumerate(TYPE_ORDER):
            if i == j or {row_type, col_type} == {"triangle", "hexagon"}:
                row.append(None)
            elif j < i:
                row.append(faces.get(col_type, 0))
            else:
                row.append(cofaces.get(col_type, 0))
        table.append(row)
    return table


EXPECTED_INCIDENCES: list[list[int | None]] = [
    [None, 6, 3, 12, 16],
    [2, None, 1, 4, 8],
    [3, 3, None, None, 4],
    [6, 6, None, None, 3],
    [16, 24, 4, 6, None],
]

APPENDIX_VERTEX = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 0), (0, 1, -1))

# as printed; the fifth entry is a dependent triple
APPENDIX_PRINTED = (
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, 0), (0, 1, 0), (0, -1, 1)),
    ((1, 0, 0), (0, 1, 0), (1, 0, 1)),
    ((1, 0, 0), (0, 0, 1), (0, -1, 1)),
    ((1, 0, 0), (0, 0, 1), (-1, 0, -1)),
    ((0, 1, 0), (0, 0, 1), (1, 1, 0)),
    ((0, 1, 0), (0, 0, 1), (1, 0, 1)),
    ((1, 0, 0), (0, 1, -1), (1, 0, 1)),
    ((1, 0, 0), (0, 1, -1), (1, 1, 0)),
    ((1, 0, 0), (1, 0, 1), (-1, -1, 0)),
    ((0, 1, 0), (0, 1, -1), (-1, -1, 0)),
    ((0, 1, 0), (0, 1, -1), (-1, 0, -1)),
    ((0, 1, 0), (1, 1, 0), (-1, 0, -1)),
    ((0, 0, 1), (0, 1, -1), (-1, 0, -1)),
    ((0, 0, 1), (0, 1, -1), (-1, -1, 0)),
    ((0, 0, 1), (1, 1, 0), (-1, 0, -1)),
)
APPENDIX_TYPO_INDEX = 4
APPENDIX_CORRECTED = (
    *APPENDIX_PRINTED[:APPENDIX_TYPO_INDEX],
    ((1, 0, 0), (0, 0, 1), (-1, -1, 0)),
    *APPENDIX_PRINTED[APPENDIX_TYPO_INDEX + 1 :],
)


def appendix_cubes() -> frozenset[Cell]:
    """Return the sixteen cubes listed for the appendix vertex, corrected."""
    return frozenset(Cell(t) for t in APPENDIX_CORRECTED)


@dataclass
class DistanceRecord:
    """Distances D of top-dimensional cells and d of their faces, up to a radius."""

    rank: int
    radius: int
    cube_distance: dict[Cell, int] = field(default_factory=dict)
    cell_distance: dict[Cell, int] = field(default_factory=dict)
    frontier: frozenset[Cell] = frozenset()
    stalled: tuple[int, ...] = ()

    def cube_dist(self, cube: Cell) -> int:
        """Return D(S), raising if S lies beyond the explored radius."""
        try:
            return self.cube_distance[cube]
        except KeyError:
            msg = f"D({cube}) exceeds the explored radius {self.radius}"
            raise RadiusExceededError(msg) from None

    def cell_dist(self, cell: Cell) -> int:
        """Return d(C), raising if C lies beyond the explored radius."""
        if cell.is_top:
            return self.cube_dist(cell)
        try:
            return self.cell_distance[cell]
        except KeyError:
            msg = f"d({cell}) exceeds the explored radius {self.radius}"
            raise RadiusExceededError(msg) from None

    def cubes_at_distance(self, n: int) -> list[Cell]:
        return sorted(c for c, dist in self.cube_distance.items() if dist == n)

    def level_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for dist in self.cube_distance.values():
            counts[dist] = counts.get(dist, 0) + 1
        return dict(sorted(counts.items()))

    def minimal_cube_mismatches(self) -> list[Cell]:
        """Return faces whose d differs from D of their minimal cube."""
        return sorted(
            cell
            for cell, dist in self.cell_distance.items()
            if self.cube_distance.get(minimal_cube(cell)) != dist
        )

    def to_json(self) -> dict[str, object]:
        return {
            "rank": self.rank,
            "radius": self.radius,
            "counts": {str(k): v for k, v in self.level_counts().items()},
            "cubes": [
                {"decoration": c.to_json(), "distance": self.cube_distance[c]}
                for c in sorted(
                    self.cube_distance, key=lambda c: (self.cube_distance[c], c)
                )
            ],
            "frontier": len(self.frontier),
            "stalled": list(self.stalled),
        }


def _finalizable(top: Cell, cell_distance: dict[Cell, int]) -> bool:
    xi = xi_set(top)
    if not xi:
        adapter = CellLogAdapter(logger, {"cell": top})
        adapter.error("Non-fundamental cell has an empty minimal set")
        msg = f"{top} is not fundamental but Xi is empty"
        raise IntegrityError(msg)
    return all(c in cell_distance for c in xi)


def distance_fixpoint(
    radius: int, rank: int = 3, *, workers: int = 1, progress: bool = False
) -> DistanceRecord:
    """Compute D and d for every top-dimensional cell with D <= radius.

    Level n finalizes every cube incident to a cell of distance n - 1 whose minimal
    set is fully finalized; by induction each such cube has D = n. Faces receive
    the level of the first cube containing them.

    :param radius: largest distance to compute
    :type radius: int
    :param rank: 2 for W2, 3 for W3
    :type rank: int
    :param workers: threads used to evaluate candidates
    :type workers: int
    :param progress: show a progress bar per level
    :type progress: bool
    :raises DomainError: the radius is negative
    :raises IntegrityError: a non-fundamental cube has an empty minimal set
    :return: the distance record
    :rtype: DistanceRecord
    """
    if radius < 0:
        msg = f"Radius {radius} must be non-negative"
        raise DomainError(msg)
    fundamental = fundamental_cell(rank)
    record = DistanceRecord(rank, radius)
    record.cube_distance[fundamental] = 0
    layer = set(proper_faces(fundamental))
    for face in layer:
        record.cell_distance[face] = 0
    pending: list[Cell] = []
    for level in range(1, radius + 1):
        pending = sorted(
            {
                top
                for cell in layer
                for top in cubes_at_cell(cell)
                if top not in record.cube_distance
            }
        )
        with ThreadPoolExecutor(max_workers=workers) as executor:
            flags = list(
                tqdm(
                    executor.map(
                        lambda t: _finalizable(t, record.cell_distance), pending
                    ),
                    total=len(pending),
                    desc=f"level {level}",
                    disable=not progress,
                    leave=False,
                )
            )
        finalized = [top for top, ok in zip(pending, flags) if ok]
        pending = [top for top, ok in zip(pending, flags) if not ok]
        if not finalized:
            logger.error("No cube could be finalized at level %i", level)
            record.stalled = (*record.stalled, level)
            break
        layer = set()
        for top in finalized:
            record.cube_distance[top] = level
            for face in proper_faces(top):
                if face not in record.cell_distance:
                    record.cell_distance[face] = level
                    layer.add(face)
        logger.info("Level %i: %i cubes finalized", level, len(finalized))
    record.frontier = frozenset(pending)
    return record


def string_neighbours(top: Cell, r: int) -> list[Cell]:
    """Return the cubes meeting a cube exactly in a cell of codimension r."""
    if not 1 <= r <= TOP_DIM[top.rank]:
        msg = f"Codimension {r} is not available in rank {top.rank}"
        raise DomainError(msg)
    found = set()
    for face in proper_faces(top):
        if face.dim != TOP_DIM[top.rank] - r:
            continue
        for other in cubes_at_cell(face):
            if other != top and (top.decoration | other.decoration) == face.decoration:
                found.add(other)
    return sorted(found)


def naive_string_distance(
    r: int, radius: int, rank: int = 3, *, progress: bool = False
) -> dict[Cell, int]:
    """Return the naive string distance of every cube within a radius.

    Two cubes are adjacent when they meet in a cell of codimension r; distances
    come from a breadth-first search seeded at the fundamental cell.

    :param r: codimension of the shared cells
    :type r: int
    :param radius: largest distance to compute
    :type radius: int
    :param rank: 2 for W2, 3 for W3
    :type rank: int
    :return: map from cube to distance
    :rtype: dict[Cell, int]
    """
    fundamental = fundamental_cell(rank)
    distance = {fundamental: 0}
    layer = [fundamental]
    for level in range(1, radius + 1):
        found = set()
        bar = tqdm(layer, desc=f"level {level}", disable=not progress, leave=False)
        for top in bar:
            for other in string_neighbours(top, r):
                if other not in distance:
                    found.add(other)
        for other in found:
            distance[other] = level
        layer = sorted(found)
        logger.debug("Naive distance %i: %i cubes", level, len(layer))
    return distance


def face_profile(top: Cell, distance: dict[Cell, int]) -> dict[int, int]:
    """Count the codimension-one faces of a cube touching cubes at each distance."""
    profile: dict[int, int] = {}
    for face in proper_faces(top):
        if face.dim != TOP_DIM[top.rank] - 1:
            continue
        seen = {
            distance[other]
            for other in cubes_at_cell(face)
            if other != top and other in distance
        }
        for value in seen:
            profile[value] = profile.get(value, 0) + 1
    return dict(sorted(profile.items()))


def faces_touching_ball(top: Cell, distance: dict[Cell, int], radius: int) -> int:
    """Count codimension-one faces of a cube shared with a cube within a radius."""
    count = 0
    for face in proper_faces(top):
        if face.dim == TOP_DIM[top.rank] - 1 and any(
            other != top and distance.get(other, radius + 1) <= radius
            for other in cubes_at_cell(face)
        ):
            count += 1
    return count
