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

"""Define tests related to the wrretract.export module."""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import TYPE_CHECKING

import pytest

from wrretract.complex import Cell, fundamental_cell, local_face_cell
from wrretract.contraction import CUBE_VOLUME, trace
from wrretract.exceptions import DomainError
from wrretract.export import (
    cube_obj,
    export_geometry,
    face_cycle,
    format_coordinate,
    fundamental_domain_json,
    fundamental_domain_obj,
    path_obj,
    write_output,
)
from wrretract.quadform import FACETS, soule_polytope

if TYPE_CHECKING:
    from pathlib import Path

    from wrretract.contraction import Trajectory

EXAMPLE_CUBE = Cell([(1, 0, 0), (4, 1, 0), (2, 1, 1)])


def _count(text: str, prefix: str) -> int:
    """Count the lines of an OBJ file starting with a prefix.

    :param text: OBJ contents
    :type text: str
    :param prefix: line prefix such as "v "
    :type prefix: str
    :return: number of matching lines
    :rtype: int
    """
    return sum(1 for line in text.splitlines() if line.startswith(prefix))


@pytest.fixture()
def radial_trajectory() -> Trajectory:
    """Trace a point halfway between the centre and a hexagon of the fundamental cube.

    :return: a single radial segment
    :rtype: wrretract.contraction.Trajectory
    """
    cube = fundamental_cell()
    hexagon = local_face_cell(cube, frozenset({0}))
    return trace({cube: Fraction(1, 2), hexagon: Fraction(1, 2)})


class TestCoordinates:
    """Define tests related to coordinate formatting and face cycles."""

    @pytest.mark.parametrize(
        ("x", "precision", "expected"),
        [
            (Fraction(1, 3), 4, "0.3333"),
            (Fraction(3, 2), 12, "1.5"),
            (Fraction(0), 12, "0"),
            (Fraction(-2, 3), 2, "-0.67"),
        ],
    )
    def test_format_coordinate(
        self, x: Fraction, precision: int, expected: str
    ) -> None:
        """Coordinates are rounded to significant digits."""
        assert format_coordinate(x, precision) == expected

    @pytest.mark.parametrize("facet", range(len(FACETS)))
    def test_face_cycle(self, facet: int) -> None:
        """Consecutive vertices of a face cycle share an edge of the face."""
        polytope = soule_polytope()
        cycle = face_cycle(facet)
        assert sorted(cycle) == sorted(polytope.faces[frozenset({facet})])
        edges = {
            frozenset(polytope.faces[face])
            for face in polytope.faces_of_dim(1)
            if facet in face
        }
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            assert frozenset({a, b}) in edges


class TestMeshes:
    """Define tests related to OBJ and JSON meshes."""

    def test_cube_obj(self) -> None:
        """A cube mesh has 16 vertices, 10 faces and 24 edges."""
        text = cube_obj(EXAMPLE_CUBE)
        assert text.startswith(f"# cube {EXAMPLE_CUBE}\n")
        assert _count(text, "v ") == 16
        assert _count(text, "f ") == 10
        assert _count(text, "l ") == 24
        assert "g hexagon" in text
        assert "g triangle" in text

    def test_cube_json(self) -> None:
        """The JSON mesh keeps exact coordinates and the face decorations."""
        data = json.loads(export_geometry("cube", "json", cube=EXAMPLE_CUBE))
        assert data["cube"] == EXAMPLE_CUBE.to_json()
        assert len(data["vertices"]) == 16
        assert len(data["edges"]) == 24
        kinds = [face["kind"] for face in data["faces"]]
        assert kinds.count("hexagon") == 6
        assert kinds.count("triangle") == 4

    def test_fundamental_domain_obj(self) -> None:
        """Seven labelled vertices and four tetrahedra of four faces each."""
        text = fundamental_domain_obj()
        assert _count(text, "v ") == 7
        assert _count(text, "f ") == 16
        assert _count(text, "g T") == 4

    def test_fundamental_domain_volume(self) -> None:
        """The four tetrahedra make up a twenty-fourth of the cube."""
        data = fundamental_domain_json()
        total = sum(Fraction(t["volume"]) for t in data["tetrahedra"].values())
        assert total * 24 == CUBE_VOLUME
        assert data["vertices"]["o"] == ["0", "0", "0"]

    def test_path_obj(self, radial_trajectory: Trajectory) -> None:
        """A radial path is one polyline in the fundamental cube."""
        text = path_obj(radial_trajectory)
        assert f"o {fundamental_cell()}" in text
        assert "v 0.5 0 0" in text
        assert "# segment 1: stage radial" in text
        assert text.endswith("l 1 2\n")

    def test_path_json(self, radial_trajectory: Trajectory) -> None:
        """The JSON path keeps exact endpoints."""
        data = json.loads(
            export_geometry("path", "json", trajectory=radial_trajectory)
        )
        assert data["segments"][0]["start"] == ["1/2", "0", "0"]
        assert data["segments"][0]["stage"] == "radial"


class TestExportGeometry:
    """Define tests related to wrretract.export.export_geometry."""

    @pytest.mark.parametrize(
        ("target", "fmt", "precision"),
        [("sphere", "obj", 12), ("cube", "stl", 12), ("cube", "obj", 0)],
    )
    def test_invalid_request(self, target: str, fmt: str, precision: int) -> None:
        """Unknown targets and formats and non-positive precisions are rejected."""
        with pytest.raises(DomainError):
            export_geometry(target, fmt, precision)

    def test_not_a_cube(self) -> None:
        """Only cubes of W3 export as cube meshes."""
        hexagon = local_face_cell(fundamental_cell(), frozenset({0}))
        with pytest.raises(DomainError):
            export_geometry("cube", cube=hexagon)
        with pytest.raises(DomainError):
            export_geometry("cube", cube=fundamental_cell(2))

    def test_path_without_trajectory(self) -> None:
        """Paths need a traced trajectory."""
        with pytest.raises(DomainError):
            export_geometry("path")

    def test_default_cube(self) -> None:
        """The cube target defaults to the fundamental cube."""
        assert export_geometry("cube") == cube_obj(fundamental_cell())


class TestWriteOutput:
    """Define tests related to wrretract.export.write_output."""

    @pytest.mark.parametrize("out", [None, "-"])
    def test_no_destination(self, out: str | None) -> None:
        """Without a destination nothing is written."""
        assert write_output("text", out) is None

    def test_write_file(self, caplog: pytest.LogCaptureFixture, tmp_path: Path) -> None:
        """Output files are written and logged."""
        caplog.set_level(logging.INFO)
        dest = tmp_path / "cube.obj"
        assert write_output("v 0 0 0\n", dest) == dest
        assert dest.read_text() == "v 0 0 0\n"
        assert f"Wrote '{dest}'" in caplog.text
