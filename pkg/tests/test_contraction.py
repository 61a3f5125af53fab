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

"""Define tests related to the wrretract.contraction module."""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from typing import TYPE_CHECKING

import pytest
import sympy

from wrretract.complex import (
    Cell,
    fundamental_cell,
    gamma_act,
    local_face_cell,
    proper_faces,
    xi_local,
    xi_set,
)
from wrretract.contraction import (
    CUBE_VOLUME,
    FUNDAMENTAL_TETRA,
    Move,
    Stage,
    TierLabel,
    boundary,
    canonical,
    catalogue_simplex,
    center_target,
    chart_of_cell,
    chart_of_point,
    classify_tiers,
    collapse_sequence,
    contract_chain,
    fundamental_catalogue,
    h2_schedule,
    h3_schedule,
    local_lift_consistent,
    locate,
    locate_simplex,
    locate_w2,
    maximal_flags,
    orient_arc_w2,
    sample_point,
    sd_simplices,
    simplex_str,
    swept_cells,
    target_face,
    tetra_moves,
    trace,
    trace_in_cube,
    trace_w2,
    triangulate_cube,
)
from wrretract.exceptions import (
    DomainError,
    IntegrityError,
    UnhandledConfigurationError,
)
from wrretract.intvec import identity

if TYPE_CHECKING:
    from wrretract.complex import DistanceRecord
    from wrretract.contraction import Chain

CUBE = fundamental_cell()
HEXAGON = local_face_cell(CUBE, frozenset({0}))
EXAMPLE_GAMMA = ((1, 4, 2), (0, 1, 1), (0, 0, 1))
EXAMPLE_CUBE = Cell(((1, 0, 0), (4, 1, 0), (2, 1, 1)))
DELTAS = (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32))


def _combine(*chains: Chain, signs: tuple[int, ...]) -> Chain:
    """Return the signed sum of chains, dropping zero coefficients.

    :param chains: chains to add
    :type chains: Chain
    :param signs: sign applied to each chain
    :type signs: tuple[int, ...]
    :return: the sum
    :rtype: Chain
    """
    total: Counter = Counter()
    for chain, sign in zip(chains, signs):
        for simplex, coeff in chain.items():
            total[simplex] += sign * coeff
    return {s: c for s, c in total.items() if c}


def _one_hexagon_cube(record: DistanceRecord) -> tuple[Cell, int]:
    """Return a level one cube with a single minimal hexagon, and that hexagon."""
    for cube in record.cubes_at_distance(1):
        hexes = [h for h in range(6) if frozenset({h}) in xi_local(cube)]
        if len(hexes) == 1:
            return cube, hexes[0]
    msg = "No level one cube has exactly one minimal hexagon"
    raise AssertionError(msg)


def _merged(items: list) -> list:
    """Drop consecutive repeats."""
    return [x for i, x in enumerate(items) if i == 0 or items[i - 1] != x]


class TestSubdivision:
    """Define tests related to the barycentric subdivision."""

    def test_canonical(self) -> None:
        """Flags list the largest cell first and track the permutation sign."""
        assert canonical([CUBE, HEXAGON]) == ((CUBE, HEXAGON), 1)
        assert canonical([HEXAGON, CUBE]) == ((CUBE, HEXAGON), -1)

    def test_canonical_not_a_chain(self) -> None:
        """Two faces that do not contain each other span no simplex."""
        other = local_face_cell(CUBE, frozenset({2}))
        with pytest.raises(DomainError):
            canonical([HEXAGON, other])

    def test_simplex_str(self) -> None:
        """Simplices print as bracketed cells in flag order."""
        assert simplex_str((CUBE,)) == "[(0,0,1);(0,1,0);(1,0,0)]"

    def test_maximal_flags(self) -> None:
        """Hexagons carry twelve flags each and triangles six."""
        assert len(maximal_flags(CUBE)) == 96
        assert len(maximal_flags(fundamental_cell(2))) == 2
        assert all(len(s) == 4 for s in maximal_flags(CUBE))
        assert (CUBE,) in sd_simplices(CUBE)

    def test_chart_of_cell(self) -> None:
        """Barycentres of the cube and of a hexagon in chart coordinates."""
        assert chart_of_cell(CUBE, CUBE) == (0, 0, 0)
        assert chart_of_cell(CUBE, HEXAGON) == (1, 0, 0)

    def test_chart_of_foreign_cell(self) -> None:
        """Cells outside the closed cube have no chart coordinates."""
        outside = Cell([(1, 0, 0), (4, 1, 0), (2, 1, 1)])
        with pytest.raises(DomainError):
            chart_of_cell(CUBE, outside)


class TestLocate:
    """Define tests related to barycentric descriptions of chart points."""

    @pytest.mark.parametrize(
        ("coords", "expected"),
        [
            ((0, 0, 0), {CUBE: Fraction(1)}),
            ((1, 0, 0), {HEXAGON: Fraction(1)}),
            ((Fraction(1, 2), 0, 0), {CUBE: Fraction(1, 2), HEXAGON: Fraction(1, 2)}),
        ],
    )
    def test_locate(
        self, coords: tuple[Fraction | int, ...], expected: dict[Cell, Fraction]
    ) -> None:
        """Points on the segment from the centre to a hexagon centre."""
        assert locate(CUBE, coords) == expected

    @pytest.mark.parametrize(
        "coords",
        [
            (Fraction(1, 3), Fraction(0), Fraction(1, 5)),
            (Fraction(-1, 2), Fraction(-1, 3), Fraction(-1, 4)),
            (Fraction(9, 10), Fraction(1, 2), Fraction(-1, 7)),
        ],
    )
    def test_locate_round_trip(self, coords: tuple[Fraction, ...]) -> None:
        """Barycentric weights reproduce the chart point and sum to one."""
        point = locate(CUBE, coords)
        assert sum(point.values()) == 1
        assert chart_of_point(CUBE, point) == coords
        canonical(list(point))

    def test_locate_outside(self) -> None:
        """Points outside the cube are rejected."""
        with pytest.raises(DomainError):
            locate(CUBE, (-1, -1, -1))

    def test_locate_w2(self) -> None:
        """Arc coordinates split between the arc and one endpoint."""
        arc = fundamental_cell(2)
        plus, minus = proper_faces(arc)
        assert locate_w2(arc, 0) == {arc: Fraction(1)}
        assert locate_w2(arc, "-1/2") == {arc: Fraction(1, 2), plus: Fraction(1, 2)}
        assert locate_w2(arc, 1) == {minus: Fraction(1)}
        with pytest.raises(DomainError):
            locate_w2(arc, 2)

    def test_sample_point(self) -> None:
        """Samples are interior points of a maximal flag."""
        point = sample_point(CUBE, random.Random(5))
        assert len(point) == 4
        assert sum(point.values()) == 1
        assert min(point.values()) > 0


class TestCatalogue:
    """Define tests related to the fundamental tetrahedra."""

    def test_triangulate_cube(self) -> None:
        """The 96 tetrahedra fill the cube, 24 from each fundamental tetrahedron."""
        tetras = triangulate_cube(CUBE)
        assert len(tetras) == 96
        assert sum(t.volume for t in tetras) == CUBE_VOLUME
        names = Counter(t.orbit_tag[1] for t in tetras)
        assert names == {name: 24 for name in FUNDAMENTAL_TETRA}

    def test_catalogue_keys(self) -> None:
        """The catalogue lists the four tetrahedra and their faces."""
        catalogue = fundamental_catalogue()
        for labels in FUNDAMENTAL_TETRA.values():
            assert "-".join(labels) in catalogue
        assert "o" in catalogue

    def test_catalogue_unknown_key(self) -> None:
        """Unknown keys are rejected."""
        with pytest.raises(DomainError):
            catalogue_simplex("o-q")

    def test_locate_fundamental_simplex(self) -> None:
        """A catalogue simplex is located at itself."""
        simplex = catalogue_simplex("o-h-m1-x")
        assert locate_simplex(simplex) == (identity(3), "o-h-m1-x")

    @pytest.mark.parametrize("key", ["o-h-m1-x", "o-h-m1-y", "o-h-m2-y", "o-t-m2-y"])
    def test_locate_translated_simplex(self, key: str) -> None:
        """A translated simplex is located with a matrix reproducing it."""
        simplex = tuple(gamma_act(EXAMPLE_GAMMA, c) for c in catalogue_simplex(key))
        gamma, found = locate_simplex(simplex)
        assert found == key
        assert tuple(gamma_act(gamma, c) for c in catalogue_simplex(key)) == simplex

    def test_locate_simplex_w2(self) -> None:
        """Simplices of W2 are not catalogued."""
        with pytest.raises(DomainError):
            locate_simplex((fundamental_cell(2),))


class TestCentreTargets:
    """Define tests related to centre targets, tiers and collapses."""

    def test_fundamental_has_no_target(self) -> None:
        """The fundamental cells retract radially."""
        with pytest.raises(DomainError):
            center_target(CUBE)
        with pytest.raises(DomainError):
            orient_arc_w2(fundamental_cell(2))

    def test_level_one_cubes(self, record_one: DistanceRecord) -> None:
        """Targets lie in the minimal set and the hexagons follow the rank two rule."""
        for cube in record_one.cubes_at_distance(1):
            assert center_target(cube) in xi_set(cube)
            assert local_lift_consistent(cube)

    def test_level_one_tiers(self, record_one: DistanceRecord) -> None:
        """Every tetrahedron gets a tier and some rest on non-minimal faces."""
        cube = record_one.cubes_at_distance(1)[0]
        tiers = classify_tiers(cube)
        assert len(tiers) == 96
        assert TierLabel.I in tiers.values()

    @pytest.mark.parametrize(
        ("faces", "expected"),
        [
            ([{0}], {0}),
            ([{0}, {2}, {0, 2}], {0, 2, 7}),
            ([{0}, {2}, {4}], {0, 2, 4}),
            ([{1}, {3}, {5}, {6}], {6}),
            ([{7}, {0, 7}], {7}),
        ],
    )
    def test_target_face(self, faces: list[set[int]], expected: set[int]) -> None:
        """The minimal 2-cells decide between a hexagon, a triangle and a vertex."""
        assert target_face(frozenset(frozenset(f) for f in faces)) == expected

    @pytest.mark.parametrize(
        "faces",
        [[{1}, {3}, {5}], [{6}, {7}], [{0, 2}, {0, 2, 7}], [{0}, {1}, {2}]],
    )
    def test_target_face_unhandled(self, faces: list[set[int]]) -> None:
        """Patterns without a well-defined target are reported, not guessed."""
        with pytest.raises(UnhandledConfigurationError):
            target_face(frozenset(frozenset(f) for f in faces))

    def test_target_face_empty(self) -> None:
        """An empty minimal set has no target."""
        with pytest.raises(IntegrityError):
            target_face(frozenset())

    def test_moves_follow_tiers(self, record_one: DistanceRecord) -> None:
        """Tier I tetrahedra go to the centre and Tier III ones onto the target."""
        for cube in record_one.cubes_at_distance(1):
            moves = tetra_moves(cube)
            assert len(moves) == 96
            for tier, move in moves.values():
                assert (tier is TierLabel.I) == (move is Move.TO_CENTRE)
                if tier is TierLabel.III:
                    assert move is Move.TARGET

    def test_example_cube_moves(self) -> None:
        """Triangles between two minimal hexagons project from the opposite corner."""
        moves = {move for _, move in tetra_moves(EXAMPLE_CUBE).values()}
        assert Move.OPPOSITE_CORNER in moves
        assert Move.TARGET in moves
        tiers = set(classify_tiers(EXAMPLE_CUBE).values())
        assert tiers == {TierLabel.I, TierLabel.II, TierLabel.III}

    def test_collapse_stages(self, record_one: DistanceRecord) -> None:
        """Collapses run through the stages in order and end at the target."""
        cube = record_one.cubes_at_distance(1)[0]
        collapses = collapse_sequence(cube)
        order = [Stage.I, Stage.II, Stage.III]
        stages = [order.index(c.stage) for c in collapses]
        assert stages == sorted(stages)
        assert collapses[-1].apex == center_target(cube)

    def test_arc_target(self, record_w2: DistanceRecord) -> None:
        """Arcs at distance one contract towards a vertex of the fundamental arc."""
        for arc in record_w2.cubes_at_distance(1):
            target = orient_arc_w2(arc)
            assert target in proper_faces(arc)
            assert record_w2.cell_dist(target) == 0


class TestTrace:
    """Define tests related to point trajectories."""

    def test_radial(self) -> None:
        """Points of the fundamental cube move straight to its centre."""
        trajectory = trace({CUBE: Fraction(1, 2), HEXAGON: Fraction(1, 2)})
        (segment,) = trajectory.segments
        assert segment.stage is Stage.RADIAL
        assert segment.start == (Fraction(1, 2), 0, 0)
        assert segment.end == (0, 0, 0)
        assert segment.length == sympy.Rational(1, 2)
        assert trajectory.end == {CUBE: 1}

    @pytest.mark.parametrize(
        "point",
        [{}, {CUBE: Fraction(1, 2)}, {CUBE: Fraction(3, 2), HEXAGON: Fraction(-1, 2)}],
    )
    def test_invalid_point(self, point: dict[Cell, Fraction]) -> None:
        """Points need positive weights summing to one."""
        with pytest.raises(DomainError):
            trace(point)

    @pytest.mark.parametrize("delta", [Fraction(0), Fraction(1, 4), Fraction(1, 2)])
    def test_invalid_delta(self, delta: Fraction) -> None:
        """Delta must lie strictly between 0 and 1/4."""
        with pytest.raises(DomainError):
            trace({CUBE: Fraction(1)}, delta=delta)

    def test_level_one_trace(self, record_one: DistanceRecord) -> None:
        """Sampled points of level one cubes reach the centre through lower strata."""
        rng = random.Random(2)
        for cube in record_one.cubes_at_distance(1)[:4]:
            trajectory = h3_schedule(sample_point(cube, rng), record_one)
            assert trajectory.end == {CUBE: 1}
            assert trajectory.cubes()[0] == cube
            assert trajectory.cubes()[-1] == CUBE
            assert trajectory.segments[-1].stage is Stage.RADIAL
            assert trajectory.times[0][0] == sympy.Rational(1, 4)
            assert trajectory.times[-1][1] == 1

    def test_w2_schedule(self, record_w2: DistanceRecord) -> None:
        """A point of an arc at distance one moves during [1/4, 1]."""
        arc = record_w2.cubes_at_distance(1)[0]
        trajectory = h2_schedule(arc, Fraction(1, 2), record_w2)
        assert trajectory.end == {fundamental_cell(2): 1}
        assert trajectory.times[0][0] == sympy.Rational(1, 4)
        assert trajectory.times[-1][1] == 1
        data = trajectory.to_json()
        assert len(data["times"]) == len(data["segments"])

    def test_trace_w2(self, record_w2: DistanceRecord) -> None:
        """A point of an arc at distance two passes through distance one."""
        arc = record_w2.cubes_at_distance(2)[0]
        trajectory = trace_w2(arc, "-1/3", record_w2)
        assert trajectory.end == {fundamental_cell(2): 1}
        assert trajectory.cubes()[0] == arc
        assert record_w2.cube_dist(trajectory.cubes()[-1]) == 0

    def test_trace_in_fundamental_cube(self) -> None:
        """Within the fundamental cube a point moves in one radial segment."""
        point = {CUBE: Fraction(1, 2), HEXAGON: Fraction(1, 2)}
        segments, end = trace_in_cube(point, CUBE)
        assert [s.stage for s in segments] == [Stage.RADIAL]
        assert end == {CUBE: 1}

    def test_trace_in_cube_stops_on_xi(self, record_one: DistanceRecord) -> None:
        """Within a cube at distance one a point moves onto its minimal set."""
        cube = record_one.cubes_at_distance(1)[0]
        xi = xi_set(cube)
        segments, end = trace_in_cube(sample_point(cube, random.Random(5)), cube)
        assert segments
        assert all(s.cube == cube for s in segments)
        assert all(c in xi for c in end)
        with pytest.raises(DomainError):
            trace_in_cube(end, cube)

    def test_segment_projection(self, record_one: DistanceRecord) -> None:
        """A point with no weight on the hexagon centre lands on the hexagon."""
        cube, _ = _one_hexagon_cube(record_one)
        moves = tetra_moves(cube)

        def beside_tier_one(flag: tuple[Cell, ...]) -> bool:
            (other,) = [f for f in moves if f[2:] == flag[2:] and f != flag]
            return moves[other][0] is TierLabel.I

        top, hexagon, edge, vertex = next(
            flag
            for flag, (_, move) in moves.items()
            if move is Move.SEGMENT and beside_tier_one(flag)
        )
        start = {top: Fraction(1, 4), edge: Fraction(1, 2), vertex: Fraction(1, 4)}
        segments, end = trace_in_cube(start, cube, delta=Fraction(1, 8))
        assert [s.stage for s in segments] == [Stage.II]
        assert segments[0].move is Move.SEGMENT
        assert segments[0].simplex == (top, hexagon, edge, vertex)
        assert end == {
            hexagon: Fraction(1, 10),
            edge: Fraction(3, 5),
            vertex: Fraction(3, 10),
        }

    def test_opposite_hexagon_centre(self, record_one: DistanceRecord) -> None:
        """The centre of a non-minimal hexagon goes through o to the minimal one."""
        cube, hexagon = _one_hexagon_cube(record_one)
        target = local_face_cell(cube, frozenset({hexagon}))
        opposite = local_face_cell(cube, frozenset({hexagon ^ 1}))
        assert center_target(cube) == target
        segments, end = trace_in_cube({opposite: Fraction(1)}, cube)
        assert [s.stage for s in segments] == [Stage.I, Stage.III]
        assert [s.simplex for s in segments] == [(cube, opposite), (cube, target)]
        assert end == {target: 1}
        trajectory = trace({opposite: Fraction(1)}, record_one)
        assert set(trajectory.carriers()) <= swept_cells((opposite,), record_one)

    def test_example_cube_centre(self) -> None:
        """The centre of the example cube slides straight onto its target vertex."""
        target = center_target(EXAMPLE_CUBE)
        segments, end = trace_in_cube({EXAMPLE_CUBE: Fraction(1)}, EXAMPLE_CUBE)
        assert [(s.stage, s.simplex) for s in segments] == [
            (Stage.III, (EXAMPLE_CUBE, target))
        ]
        assert end == {target: 1}
        assert target.dim == 0

    def test_triangle_between_minimal_hexagons(self) -> None:
        """Points over such a triangle are pushed from the opposite corner onto it."""
        top, triangle, edge, vertex = next(
            flag
            for flag, (_, move) in tetra_moves(EXAMPLE_CUBE).items()
            if move is Move.OPPOSITE_CORNER
        )
        start = {top: Fraction(1, 2), triangle: Fraction(1, 4), edge: Fraction(1, 4)}
        segments, end = trace_in_cube(start, EXAMPLE_CUBE)
        assert [(s.stage, s.move) for s in segments] == [
            (Stage.II, Move.OPPOSITE_CORNER)
        ]
        assert end == {triangle: Fraction(11, 16), edge: Fraction(5, 16)}

    def test_stages_follow_moves(self, record_one: DistanceRecord) -> None:
        """Going to the centre is Stage I and every projection is Stage II."""
        for n, cube in enumerate(record_one.cubes_at_distance(1)):
            segments, _ = trace_in_cube(sample_point(cube, random.Random(n)), cube)
            for segment in segments:
                if segment.move is Move.TO_CENTRE:
                    assert segment.stage is Stage.I
                elif segment.move is Move.TARGET:
                    assert segment.stage in (Stage.II, Stage.III)
                elif segment.move is not None:
                    assert segment.stage is Stage.II

    def test_delta_free_paths(self, record_one: DistanceRecord) -> None:
        """Interior points cross the same cells in the same moves for every delta."""
        for cube in record_one.cubes_at_distance(1)[:6]:
            for n in range(3):
                point = sample_point(cube, random.Random(f"{cube}:{n}"))
                moves = set()
                cells = set()
                for delta in DELTAS:
                    segments, _ = trace_in_cube(point, cube, delta=delta)
                    moves.add(tuple(_merged([(s.stage, s.move) for s in segments])))
                    cells.add(tuple(trace(point, delta=delta).carrier_cells()))
                assert len(moves) == 1
                assert len(cells) == 1


class TestChains:
    """Define tests related to swept cells and the chain homotopy."""

    def test_swept_centre(self, record_one: DistanceRecord) -> None:
        """The centre of a level one cube sweeps through its target to the origin."""
        cube = record_one.cubes_at_distance(1)[0]
        target = center_target(cube)
        assert swept_cells((cube,), record_one) == {
            (cube,),
            (cube, target),
            (target,),
            (CUBE, target),
            (CUBE,),
        }

    def test_boundary(self) -> None:
        """The boundary of a boundary vanishes."""
        simplex = maximal_flags(CUBE)[0]
        assert len(boundary({simplex: 1})) == 4
        assert boundary(boundary({simplex: 1})) == {}

    def test_contract_vertex(self, record_one: DistanceRecord) -> None:
        """A vertex chain contracts to the origin with dP = R - id."""
        for cube in record_one.cubes_at_distance(1):
            chain = {(cube,): 1}
            result, homotopy = contract_chain(chain, record_one)
            assert result == {(CUBE,): 1}
            assert boundary(homotopy) == _combine(result, chain, signs=(1, -1))

    def test_contract_edge(self, record_one: DistanceRecord) -> None:
        """The chain homotopy satisfies dP + Pd = R - id on an edge."""
        chain = {(CUBE, HEXAGON): 1}
        result, homotopy = contract_chain(chain, record_one)
        _, homotopy_of_boundary = contract_chain(boundary(chain), record_one)
        left = _combine(boundary(homotopy), homotopy_of_boundary, signs=(1, 1))
        assert left == _combine(result, chain, signs=(1, -1))

    def test_contract_empty(self, record_one: DistanceRecord) -> None:
        """The empty chain contracts to nothing."""
        assert contract_chain({}, record_one) == ({}, {})
