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

"""Serialize cube geometry, the fundamental tetrahedra and traced paths as OBJ or JSON.

Coordinates are exact rationals in the (u,v,w) chart. OBJ output rounds them to a
fixed number of significant digits; JSON output keeps them as "p/q" strings.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import sympy

from wrretract.complex import Cell, fundamental_cell, local_face_cell
from wrretract.contraction import (
    FUNDAMENTAL_TETRA,
    LABELS,
    Trajectory,
    simplex_str,
)
from wrretract.exceptions import DomainError
from wrretract.quadform import FACETS, soule_polytope

logger = logging.getLogger(__name__)

TARGETS = ("cube", "fundamental-domain", "path")
FORMATS = ("obj", "json")

Point = Sequence[Fraction]


def format_coordinate(x: Fraction, precision: int) -> str:
    text = f"{float(x):.{precision}g}"
    return "0" if text == "-0" else text


def _vertex_line(point: Point, precision: int) -> str:
    return "v " + " ".join(format_coordinate(x, precision) for x in point)


def _column(point: Sequence[Fraction | int]) -> sympy.Matrix:
    return sympy.Matrix(
        [sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in point]
    )


def _orientation(a: Point, b: Point, c: Point, d: sympy.Matrix) -> sympy.Expr:
    """Sign of the triple product (b - a) x (c - a) . d."""
    origin = _column(a)
    return sympy.Matrix.hstack(_column(b) - origin, _column(c) - origin, d).det()


def face_cycle(facet: int) -> list[int]:
    """Return the vertices of a facet of the cube chart in cyclic order.

    The cycle walks the edges of the facet and is oriented counterclockwise when
    seen from outside the cube.

    :param facet: index into FACETS
    :type facet: int
    :return: vertex indices (0-based)
    :rtype: list[int]
    """
    polytope = soule_polytope()
    edges = [
        polytope.faces[face] for face in polytope.faces_of_dim(1) if facet in face
    ]
    cycle = [min(polytope.faces[frozenset({facet})])]
    while len(cycle) < len(edges):
        tail = cycle[-1]
        for a, b in edges:
            step = b if a == tail else a if b == tail else None
            if step is not None and step not in cycle:
                cycle.append(step)
                break
    points = [polytope.vertices[i] for i in cycle]
    normal = _column(FACETS[facet].normal)
    if _orientation(points[0], points[1], points[2], normal) < 0:
        cycle = [cycle[0], *reversed(cycle[1:])]
    return cycle


def cube_obj(cube: Cell, precision: int = 12) -> str:
    """Write a cube as an OBJ mesh: 16 vertices, 10 faces, 24 edges.

    Faces are grouped by kind and annotated with the decoration of the two-cell.
    """
    polytope = soule_polytope()
    lines = [f"# cube {cube}", f"o {cube}"]
    lines.extend(_vertex_line(p, precision) for p in polytope.vertices)
    for kind in ("hexagon", "triangle"):
        lines.append(f"g {kind}")
        for i, facet in enumerate(FACETS):
            if facet.kind.value == kind:
                lines.append(f"# {local_face_cell(cube, frozenset({i}))}")
                lines.append("f " + " ".join(str(k + 1) for k in face_cycle(i)))
    lines.append("g edges")
    for face in polytope.faces_of_dim(1):
        a, b = polytope.faces[face]
        lines.append(f"l {a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def cube_json(cube: Cell) -> dict[str, object]:
    polytope = soule_polytope()
    return {
        "cube": cube.to_json(),
        "vertices": [[str(x) for x in p] for p in polytope.vertices],
        "faces": [
            {
                "kind": facet.kind.value,
                "cell": local_face_cell(cube, frozenset({i})).to_json(),
                "cycle": face_cycle(i),
            }
            for i, facet in enumerate(FACETS)
        ],
        "edges": [list(polytope.faces[face]) for face in polytope.faces_of_dim(1)],
    }


def _label_points() -> dict[str, tuple[Fraction, ...]]:
    polytope = soule_polytope()
    return {name: polytope.barycenter(face) for name, face in LABELS.items()}


def _tetra_faces(corners: Sequence[int], points: Sequence[Point]) -> list[list[int]]:
    faces = []
    for skip in range(4):
        tri = [corners[i] for i in range(4) if i != skip]
        a, b, c = (points[i] for i in tri)
        inward = _column(points[corners[skip]]) - _column(a)
        if _orientation(a, b, c, inward) > 0:
            tri = [tri[0], tri[2], tri[1]]
        faces.append(tri)
    return faces


def fundamental_domain_obj(precision: int = 12) -> str:
    """Write the four fundamental tetrahedra of the subdivided cube as OBJ groups."""
    labelled = _label_points()
    names = list(labelled)
    points = [labelled[name] for name in names]
    lines = [f"# fundamental tetrahedra of {fundamental_cell(3)}", "o fundamental"]
    for name in names:
        lines.append(f"# {name}")
        lines.append(_vertex_line(labelled[name], precision))
    for tetra, corners in FUNDAMENTAL_TETRA.items():
        lines.append(f"g {tetra}")
        indices = [names.index(c) for c in corners]
        for tri in _tetra_faces(indices, points):
            lines.append("f " + " ".join(str(k + 1) for k in tri))
    return "\n".join(lines) + "\n"


def fundamental_domain_json() -> dict[str, object]:
    labelled = _label_points()
    tetrahedra = {}
    for tetra, corners in FUNDAMENTAL_TETRA.items():
        a, b, c, d = (labelled[name] for name in corners)
        edges = sympy.Matrix.hstack(*(_column(p) - _column(a) for p in (b, c, d)))
        volume = abs(edges.det()) / 6
        tetrahedra[tetra] = {"vertices": list(corners), "volume": str(volume)}
    return {
        "vertices": {name: [str(x) for x in p] for name, p in labelled.items()},
        "tetrahedra": tetrahedra,
    }


def path_obj(trajectory: Trajectory, precision: int = 12) -> str:
    """Write a trajectory as one polyline object per cube chart it crosses.

    Every segment is its own line element, preceded by a comment with its stage
    and carrier simplex.
    """
    lines = ["# traced path"]
    offset = 0
    current: Cell | None = None
    points: list[tuple[Fraction, ...]] = []
    for number, segment in enumerate(trajectory.segments, start=1):
        if segment.cube != current:
            current = segment.cube
            offset += len(points)
            points = []
            lines.append(f"o {current}")
        indices = []
        for p in (segment.start, segment.end):
            if p not in points:
                points.append(p)
                lines.append(_vertex_line(p, precision))
            indices.append(offset + points.index(p) + 1)
        lines.append(
            f"# segment {number}: stage {segment.stage.value}, "
            f"carrier {simplex_str(segment.simplex)}"
        )
        lines.append(f"l {indices[0]} {indices[1]}")
    return "\n".join(lines) + "\n"


def export_geometry(
    target: str,
    fmt: str = "obj",
    precision: int = 12,
    *,
    cube: Cell | None = None,
    trajectory: Trajectory | None = None,
) -> str:
    """Serialize one of the exportable geometries.

    :param target: "cube", "fundamental-domain" or "path"
    :type target: str
    :param fmt: "obj" or "json"
    :type fmt: str
    :param precision: significant digits of OBJ coordinates
    :type precision: int
    :param cube: the cube to export for the "cube" target
    :type cube: Cell | None
    :param trajectory: the traced path for the "path" target
    :type trajectory: Trajectory | None
    :raises DomainError: unknown target or format, or the object is missing
    :return: the file contents
    :rtype: str
    """
    if target not in TARGETS or fmt not in FORMATS:
        msg = f"Cannot export '{target}' as '{fmt}'"
        raise DomainError(msg)
    if precision < 1:
        msg = f"Precision must be positive, got {precision}"
        raise DomainError(msg)
    if target == "cube":
        cube = cube or fundamental_cell(3)
        if not cube.is_top or cube.rank != 3:  # noqa: PLR2004
            msg = f"{cube} is not a cube of W3"
            raise DomainError(msg)
        if fmt == "obj":
            return cube_obj(cube, precision)
        data = cube_json(cube)
    elif target == "fundamental-domain":
        if fmt == "obj":
            return fundamental_domain_obj(precision)
        data = fundamental_domain_json()
    else:
        if trajectory is None:
            msg = "A path export needs a traced trajectory"
            raise DomainError(msg)
        if fmt == "obj":
            return path_obj(trajectory, precision)
        data = trajectory.to_json()
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def write_output(text: str, out: str | Path | None) -> Path | None:
    """Write text to a file, or return None when there is no destination.

    :raises OSError: the file could not be written
    """
    if out is None or str(out) == "-":
        return None
    dest = Path(out)
    with dest.open("w", encoding="utf-8") as fd:
        fd.write(text)
    logger.info("Wrote '%s'", dest)
    return dest
