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

"""Run the named verification suites and assemble their reports."""

from __future__ import annotations

import json
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Callable, Iterable, Sequence, Tuple, TypeVar

from tqdm import tqdm

import wrretract
from wrretract.cohomology import (
    GENERATOR_CELLS,
    ChainTerm,
    FormalChain,
    SymTensor,
    cocycle_from_generators,
    dd_vanishes,
    face_identity_check,
    monomials,
    random_cochain,
    random_word,
    rho_sym,
)
from wrretract.complex import (
    APPENDIX_VERTEX,
    EXPECTED_INCIDENCES,
    TYPE_ORDER,
    Cell,
    DistanceRecord,
    appendix_cubes,
    arcs_totally_ordered,
    cubes_at_cell,
    distance_fixpoint,
    face_profile,
    fundamental_cell,
    group_by_dim,
    incidence_table,
    minimal_cube,
    naive_string_distance,
    opposite_faces_excluded,
    three_hexagons_force_triangle,
    xi_set,
    xi_two_cells_connected,
)
from wrretract.contraction import (
    MAX_DELTA,
    BaryPoint,
    home_cube,
    local_lift_consistent,
    locate_simplex,
    sample_point,
    sd_simplices,
    simplex_dim,
    simplex_str,
    swept_cells,
    trace,
    triangulate_cube,
)
from wrretract.exceptions import DomainError, IntegrityError, RadiusExceededError
from wrretract.intvec import (
    IntMatrix,
    canon,
    connected_one,
    connected_two,
    fundamental_bases,
    identity,
    independent,
    lemma_not_fundamental,
    lemma_sum_diff,
    primitive_vectors,
)
from wrretract.parse import parse_fraction
from wrretract.quadform import (
    CubeChart,
    in_soule_cell,
    on_fundamental_arc,
    project_to_sublattice,
    soule_form,
)

if TYPE_CHECKING:
    from argparse import Namespace

logger = logging.getLogger(__name__)

T = TypeVar("T")

FORMATS = ("json", "obj", "text")

# the cube whose minimal set is worked out by hand: columns of [[1,4,2],[0,1,1],[0,0,1]]
EXAMPLE_CUBE = Cell(((1, 0, 0), (4, 1, 0), (2, 1, 1)))
EXAMPLE_XI_EXTRAS = ((-3, -1, 0), (-1, -1, -1), (2, 0, -1), (-1, 0, 1), (3, 0, -1))
# a cube at naive distance 3 and its claimed face counts
DISTANCE_CUBE = Cell(((0, 0, 1), (1, 0, -1), (0, 1, -2)))
NAIVE_NEIGHBOURS = 24
NAIVE_LEVEL_THREE = 2400
DISTANCE_CUBE_LOWER_FACES = 5
DISTANCE_CUBE_BALL_FACES = 8

W2_ORDER_RADIUS = 8
W2_TRACE_RADIUS = 6
TRIPLE_BOUND = 50
DELTAS = (Fraction(1, 8), Fraction(1, 16), Fraction(1, 32))

DEFAULT_SAMPLES = {
    "lemmas": 100000,
    "trace": 100,
    "em": 100,
    "filling": 20,
    "projection": 100,
}
DEFAULT_BOUNDS = {"lemmas": 10, "theorem-basis": 3}
MIN_RADIUS = {"xi-structure": 1, "trace": 1, "sweep": 1, "filling": 1}


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by every command and suite.

    samples and bound fall back to per-suite defaults when left unset.
    """

    rank: int = 3
    radius: int = wrretract.DEFAULT_RADIUS
    delta: Fraction = Fraction(wrretract.DEFAULT_DELTA)
    seed: int = wrretract.DEFAULT_SEED
    output_format: str = "json"
    workers: int = 1
    samples: int | None = None
    bound: int | None = None
    precision: int = wrretract.DEFAULT_PRECISION
    out: str | None = None
    progress: bool = False

    def __post_init__(self) -> None:
        if self.rank not in (2, 3):
            msg = f"Rank must be 2 or 3, got {self.rank}"
            raise DomainError(msg)
        if self.radius < 0:
            msg = f"Radius {self.radius} must be non-negative"
            raise DomainError(msg)
        if not 0 < self.delta < MAX_DELTA:
            msg = f"Delta {self.delta} must lie strictly between 0 and {MAX_DELTA}"
            raise DomainError(msg)
        if self.output_format not in FORMATS:
            msg = f"Unknown output format '{self.output_format}'"
            raise DomainError(msg)
        if self.workers < 1 or self.precision < 1:
            msg = "Workers and precision must be positive"
            raise DomainError(msg)
        if (self.samples is not None and self.samples < 1) or (
            self.bound is not None and self.bound < 1
        ):
            msg = "Samples and bound must be positive"
            raise DomainError(msg)

    @classmethod
    def from_args(cls, args: Namespace) -> RunConfig:
        """Freeze parsed command-line arguments into a configuration.

        :param args: command-line arguments and their values
        :type args: argparse.Namespace
        :raises ParseError: the delta is not a fraction
        :raises DomainError: a value is out of range
        :return: the configuration
        :rtype: RunConfig
        """
        return cls(
            rank=args.rank,
            radius=args.radius,
            delta=parse_fraction(args.delta),
            seed=args.seed,
            output_format=args.format,
            workers=args.workers,
            samples=args.samples,
            bound=args.bound,
            precision=args.precision,
            out=args.out,
            progress=args.verbose >= wrretract.STD_VERBOSE,
        )

    def samples_for(self, suite: str) -> int:
        return self.samples or DEFAULT_SAMPLES[suite]

    def bound_for(self, suite: str) -> int:
        return self.bound or DEFAULT_BOUNDS[suite]

    def to_json(self) -> dict[str, object]:
        return {
            "rank": self.rank,
            "radius": self.radius,
            "delta": str(self.delta),
            "seed": self.seed,
            "samples": self.samples,
            "bound": self.bound,
        }


@dataclass
class Check:
    """Outcome of one claim checked over a number of cases.

    Informational checks report a value without passing or failing.
    """

    name: str
    tag: str
    count: int
    failures: int = 0
    counterexample: str | None = None
    value: object = None
    expected: object = None
    skipped: int = 0
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.informational or self.failures == 0

    def to_json(self) -> dict[str, object]:
        data: dict[str, object] = {
            "name": self.name,
            "tag": self.tag,
            "count": self.count,
            "failures": self.failures,
            "passed": self.passed,
        }
        if self.counterexample is not None:
            data["counterexample"] = self.counterexample
        if self.value is not None:
            data["value"] = self.value
            data["expected"] = self.expected
        if self.skipped:
            data["skipped"] = self.skipped
        if self.informational:
            data["informational"] = True
        return data


@dataclass
class SuiteReport:
    """Checks of one or more suites; timings stay out of the JSON form."""

    suite: str
    config: RunConfig
    checks: list[Check] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict[str, object]:
        return {
            "schema": wrretract.SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config.to_json(),
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = []
        for check in self.checks:
            if check.informational:
                status = "INFO"
            else:
                status = "PASS" if check.passed else "FAIL"
            line = f"{status} {check.name} [{check.tag}] ({check.count} cases)"
            if check.value is not None:
                line += f": {check.value} (expected {check.expected})"
            if check.skipped:
                line += f", {check.skipped} skipped"
            lines.append(line)
            if check.counterexample is not None:
                lines.append(f"     counterexample: {check.counterexample}")
        lines.extend(
            f"time {name}: {seconds:.2f}s" for name, seconds in self.timings.items()
        )
        return "\n".join(lines) + "\n"


# replayable counterexamples


def matrix_str(gamma: IntMatrix) -> str:
    return ";".join(",".join(str(x) for x in row) for row in gamma)


def vector_str(v: Sequence[int]) -> str:
    return ",".join(str(x) for x in v)


def point_str(point: Sequence[Fraction]) -> str:
    return ",".join(str(x) for x in point)


def _run_cases(
    name: str,
    tag: str,
    cases: Sequence[T],
    check: Callable[[T], str | None],
    cfg: RunConfig,
) -> Check:
    """Evaluate a check on every case, in parallel when workers allow.

    The check returns None on success and a counterexample otherwise. Cases it
    cannot evaluate for lack of radius are counted as skipped; integrity errors
    count as failures.
    """

    def guarded(case: T) -> str | None:
        try:
            return check(case)
        except RadiusExceededError as e:
            logger.debug("Skipping case in '%s': %s", name, e)
            return ""
        except IntegrityError as e:
            return str(e)

    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        outcomes = list(
            tqdm(
                executor.map(guarded, cases),
                total=len(cases),
                desc=name,
                disable=not cfg.progress,
                leave=False,
            )
        )
    failed = [o for o in outcomes if o]
    skipped = sum(1 for o in outcomes if o == "")
    if failed:
        logger.warning(
            "%s: %i failure%s, first counterexample %s",
            name,
            len(failed),
            "s"[: len(failed) ^ 1],
            failed[0],
        )
    return Check(
        name,
        tag,
        len(cases),
        failures=len(failed),
        counterexample=failed[0] if failed else None,
        skipped=skipped,
    )


def _value_check(
    name: str, tag: str, value: object, expected: object, ok: bool, replay: str
) -> Check:
    return Check(
        name,
        tag,
        1,
        failures=0 if ok else 1,
        counterexample=None if ok else replay,
        value=value,
        expected=expected,
    )


@lru_cache(maxsize=None)
def _distance_record(
    rank: int, radius: int, workers: int = 1, progress: bool = False
) -> DistanceRecord:
    return distance_fixpoint(radius, rank, workers=workers, progress=progress)


def distance_record(
    cfg: RunConfig, rank: int = 3, radius: int | None = None
) -> DistanceRecord:
    """Return the cached distance record for a configuration."""
    return _distance_record(
        rank, cfg.radius if radius is None else radius, cfg.workers, cfg.progress
    )


def _cubes_up_to(record: DistanceRecord, radius: int) -> list[Cell]:
    return sorted(c for c, d in record.cube_distance.items() if d <= radius)


# suites


def suite_incidence(cfg: RunConfig) -> list[Check]:
    table = incidence_table()
    cases = [
        (i, j)
        for i, row in enumerate(EXPECTED_INCIDENCES)
        for j, expected in enumerate(row)
        if expected is not None
    ]

    def entry(case: tuple[int, int]) -> str | None:
        i, j = case
        got, want = table[i][j], EXPECTED_INCIDENCES[i][j]
        if got == want:
            return None
        return f"{TYPE_ORDER[i]} x {TYPE_ORDER[j]}: {got} != {want}"

    return [_run_cases("incidence entries", "incidence table", cases, entry, cfg)]


def suite_appendix(cfg: RunConfig) -> list[Check]:  # noqa: ARG001
    vertex = Cell(APPENDIX_VERTEX)
    found = cubes_at_cell(vertex)
    difference = sorted(found ^ appendix_cubes())
    return [
        Check(
            "appendix cubes",
            "appendix list",
            len(appendix_cubes()),
            failures=len(difference),
            counterexample=str(difference[0]) if difference else None,
            value=len(found),
            expected=len(appendix_cubes()),
        )
    ]


def suite_example_xi(cfg: RunConfig) -> list[Check]:  # noqa: ARG001
    basis = tuple(EXAMPLE_CUBE.vectors)
    expected = {Cell((*basis, extra)) for extra in EXAMPLE_XI_EXTRAS}
    found = set(group_by_dim(xi_set(EXAMPLE_CUBE)).get(2, []))
    difference = sorted(found ^ expected)
    return [
        Check(
            "example minimal two-cells",
            "worked example",
            len(expected),
            failures=len(difference),
            counterexample=str(difference[0]) if difference else None,
            value=len(found),
            expected=len(expected),
        )
    ]


def suite_distance3(cfg: RunConfig) -> list[Check]:
    distance = naive_string_distance(1, 3, progress=cfg.progress)
    level_one = sum(1 for d in distance.values() if d == 1)
    level_three = sum(1 for d in distance.values() if d == 3)  # noqa: PLR2004
    profile = face_profile(DISTANCE_CUBE, distance)
    replay = f"naive-distance --r 1 --radius 3 --cube '{DISTANCE_CUBE}'"
    return [
        _value_check(
            "cubes at naive distance 1",
            "naive distance claims",
            level_one,
            NAIVE_NEIGHBOURS,
            level_one == NAIVE_NEIGHBOURS,
            "naive-distance --r 1 --radius 1",
        ),
        _value_check(
            "cubes at naive distance 3",
            "naive distance claims",
            level_three,
            f">{NAIVE_LEVEL_THREE}",
            level_three > NAIVE_LEVEL_THREE,
            "naive-distance --r 1 --radius 3",
        ),
        _value_check(
            "distance of the example cube",
            "naive distance claims",
            distance.get(DISTANCE_CUBE),
            3,
            distance.get(DISTANCE_CUBE) == 3,  # noqa: PLR2004
            replay,
        ),
        _value_check(
            "example faces touching distance 2",
            "naive distance claims",
            profile.get(2, 0),
            DISTANCE_CUBE_LOWER_FACES,
            profile.get(2, 0) == DISTANCE_CUBE_LOWER_FACES,
            replay,
        ),
        _value_check(
            "example faces touching distance 3",
            "naive distance claims",
            profile.get(3, 0),
            DISTANCE_CUBE_BALL_FACES,
            profile.get(3, 0) == DISTANCE_CUBE_BALL_FACES,
            replay,
        ),
    ]


def suite_lemmas(cfg: RunConfig) -> list[Check]:
    classes = primitive_vectors(3, cfg.bound_for("lemmas"))
    # flipping coordinate signs of both vectors changes neither lemma
    firsts = [v for v in classes if min(v) >= 0]
    rng = random.Random(f"{cfg.seed}:lemmas")
    triples = []
    while len(triples) < cfg.samples_for("lemmas"):
        triple = tuple(
            tuple(rng.randint(-TRIPLE_BOUND, TRIPLE_BOUND) for _ in range(3))
            for _ in range(3)
        )
        if all(any(v) for v in triple):
            triples.append(triple)

    def pair_check(oracle: Callable[..., bool]) -> Callable[..., str | None]:
        def check(v: tuple[int, ...]) -> str | None:
            for w in classes:
                if independent(v, w) and not oracle(v, w):
                    return f"{vector_str(v)};{vector_str(w)}"
            return None

        return check

    def oracle_check(oracle: Callable[..., bool]) -> Callable[..., str | None]:
        def check(case: tuple[tuple[int, ...], ...]) -> str | None:
            return None if oracle(*case) else ";".join(vector_str(v) for v in case)

        return check

    return [
        _run_cases(
            "sum and difference",
            "norm lemmas",
            firsts,
            pair_check(lemma_sum_diff),
            cfg,
        ),
        _run_cases(
            "non-fundamental pairs",
            "norm lemmas",
            firsts,
            pair_check(lemma_not_fundamental),
            cfg,
        ),
        _run_cases(
            "first connectedness",
            "norm lemmas",
            triples,
            oracle_check(connected_one),
            cfg,
        ),
        _run_cases(
            "second connectedness",
            "norm lemmas",
            triples,
            oracle_check(connected_two),
            cfg,
        ),
    ]


def suite_theorem_basis(cfg: RunConfig) -> list[Check]:
    standard = tuple(sorted(canon(v) for v in identity(3)))
    bases = fundamental_bases(cfg.bound_for("theorem-basis"))

    def trivial(basis: tuple[Sequence[int], ...]) -> str | None:
        if tuple(sorted(basis)) == standard:
            return None
        return ";".join(vector_str(v) for v in basis)

    return [
        _run_cases(
            "fundamental bases are trivial",
            "fundamental-basis theorem",
            bases,
            trivial,
            cfg,
        )
    ]


def _require_radius(name: str, cfg: RunConfig) -> None:
    if cfg.radius < MIN_RADIUS.get(name, 0):
        msg = f"Suite '{name}' needs a radius of at least {MIN_RADIUS[name]}"
        raise DomainError(msg)


def suite_xi_structure(cfg: RunConfig) -> list[Check]:
    _require_radius("xi-structure", cfg)
    record = distance_record(cfg)
    cubes = [c for c in _cubes_up_to(record, cfg.radius) if record.cube_dist(c) > 0]

    def structure(cube: Cell) -> str | None:
        two_cells = group_by_dim(xi_set(cube)).get(2, [])
        if len(two_cells) > 5:  # noqa: PLR2004
            return f"{cube}: {len(two_cells)} minimal two-cells"
        if not xi_two_cells_connected(cube):
            return f"{cube}: minimal two-cells disconnected"
        if not opposite_faces_excluded(cube):
            return f"{cube}: opposite faces both minimal"
        if not three_hexagons_force_triangle(cube):
            return f"{cube}: three minimal hexagons without a triangle"
        return None

    mismatches = record.minimal_cube_mismatches()
    return [
        _run_cases("minimal set shape", "minimal set structure", cubes, structure, cfg),
        Check(
            "face distances follow minimal cubes",
            "minimal set structure",
            len(record.cell_distance),
            failures=len(mismatches) + len(record.stalled),
            counterexample=str(mismatches[0]) if mismatches else None,
        ),
    ]


_Start = Tuple[Cell, int]


def suite_trace(cfg: RunConfig) -> list[Check]:
    _require_radius("trace", cfg)
    record = distance_record(cfg)
    fundamental = fundamental_cell(3)
    centre = {fundamental: Fraction(1)}
    cubes = _cubes_up_to(record, cfg.radius)
    starts = [(c, i) for c in cubes for i in range(cfg.samples_for("trace"))]

    def start_point(case: _Start) -> BaryPoint:
        cube, i = case
        return sample_point(cube, random.Random(f"{cfg.seed}:trace:{cube}:{i}"))

    def sampled(case: _Start) -> str | None:
        cube, i = case
        trajectory = trace(start_point(case), record, delta=cfg.delta)
        if trajectory.end != centre:
            return f"{cube} sample {i} ends at {trajectory.end}"
        return None

    def delta_free(case: _Start) -> str | None:
        point = start_point(case)
        paths = [trace(point, record, delta=d).carrier_cells() for d in DELTAS]
        if any(p != paths[0] for p in paths[1:]):
            cube, i = case
            return f"{cube} sample {i}: carrier cells depend on delta"
        return None

    def lifted(cube: Cell) -> str | None:
        triangulate_cube(cube)
        if cube != fundamental and not local_lift_consistent(cube):
            return f"{cube}: minimal hexagons disagree with the rank two contraction"
        return None

    return [
        _run_cases(
            "sampled traces reach the centre", "contraction", starts, sampled, cfg
        ),
        _run_cases(
            "carriers independent of delta", "contraction", starts, delta_free, cfg
        ),
        _run_cases("local lift consistency", "contraction", cubes, lifted, cfg),
    ]


def suite_sweep(cfg: RunConfig) -> list[Check]:
    _require_radius("sweep", cfg)
    record = distance_record(cfg)
    simplices = [
        s
        for cube in _cubes_up_to(record, cfg.radius)
        for s in sorted(sd_simplices(cube), key=lambda s: [c.sort_key() for c in s])
        if simplex_dim(s) <= 2 and home_cube(s) == cube  # noqa: PLR2004
    ]
    if cfg.samples is not None and cfg.samples < len(simplices):
        simplices = random.Random(f"{cfg.seed}:sweep").sample(simplices, cfg.samples)

    def swept(simplex: tuple[Cell, ...]) -> str | None:
        limit = simplex_dim(simplex) + 1
        for image in sorted(
            swept_cells(simplex, record), key=lambda s: [c.sort_key() for c in s]
        ):
            if simplex_dim(image) > limit:
                return f"{simplex_str(simplex)} sweeps {simplex_str(image)}"
            try:
                locate_simplex(image)
            except DomainError:
                return f"{simplex_str(simplex)} sweeps unlisted {simplex_str(image)}"
        return None

    return [
        _run_cases(
            "swept cells are catalogue cells", "swept cells", simplices, swept, cfg
        )
    ]


def _random_tensor(rng: random.Random, n: int) -> SymTensor:
    return SymTensor(3, n, {e: Fraction(rng.randint(-3, 3)) for e in monomials(3, n)})


def suite_em(cfg: RunConfig) -> list[Check]:
    samples = cfg.samples_for("em")

    def dd(i: int) -> str | None:
        rng = random.Random(f"{cfg.seed}:em:{i}")
        arity, n = rng.randint(0, 1), rng.randint(0, 3)
        f = random_cochain(arity, n, seed=cfg.seed + i)
        word = [random_word(rng, rng.randint(1, 2)) for _ in range(arity + 2)]
        if dd_vanishes(f, word):
            return None
        return f"arity {arity}, n {n}: " + " | ".join(matrix_str(g) for g in word)

    def equivariant(i: int) -> str | None:
        rng = random.Random(f"{cfg.seed}:equivariance:{i}")
        n = rng.randint(0, 3)
        values = {cell: _random_tensor(rng, n) for cell in GENERATOR_CELLS}
        chain = FormalChain(
            tuple(
                ChainTerm(rng.choice((1, -1)), random_word(rng, 2), cell, 3)
                for cell in rng.sample(GENERATOR_CELLS, 2)
            )
        )
        gamma = random_word(rng, 2)
        moved = cocycle_from_generators(values, chain.translate(gamma))
        expected = rho_sym(gamma, n, cocycle_from_generators(values, chain))
        return matrix_str(gamma) if moved - expected else None

    return [
        _run_cases("d of d vanishes", "bar complex", list(range(samples)), dd, cfg),
        _run_cases(
            "cocycle evaluation is equivariant",
            "bar complex",
            list(range(max(1, samples // 2))),
            equivariant,
            cfg,
        ),
    ]


def suite_filling(cfg: RunConfig) -> list[Check]:
    _require_radius("filling", cfg)
    record = distance_record(cfg)

    def identities(i: int) -> str | None:
        rng = random.Random(f"{cfg.seed}:filling:{i}")
        gammas = [random_word(rng, 1) for _ in range(rng.randint(1, 2))]
        if face_identity_check(gammas, record):
            return None
        return " | ".join(matrix_str(g) for g in gammas)

    check = _run_cases(
        "filling face identities",
        "fillings",
        list(range(cfg.samples_for("filling"))),
        identities,
        cfg,
    )
    if check.skipped == check.count:
        msg = f"Radius {cfg.radius} is too small for any filling sample"
        raise RadiusExceededError(msg)
    return [check]


def _chart_sample(rng: random.Random) -> tuple[Fraction, ...]:
    while True:
        q = rng.randint(1, 30)
        point = tuple(Fraction(rng.randint(-q, q), q) for _ in range(3))
        if in_soule_cell(point):
            return point


def suite_projection(cfg: RunConfig) -> list[Check]:
    rng = random.Random(f"{cfg.seed}:projection")
    points = [_chart_sample(rng) for _ in range(cfg.samples_for("projection"))]
    basis = tuple(tuple(row) for row in identity(3))
    e1, e2, e3 = basis

    def projected(point: tuple[Fraction, ...]) -> str | None:
        form = soule_form(CubeChart(basis, point))
        for pair in ((e2, e3), (e1, e3), (e1, e2)):
            if not on_fundamental_arc(project_to_sublattice(form, pair)):
                return f"{point_str(point)} off the arc for {pair}"
        if project_to_sublattice(form, (e2, e3)).x != -point[0] / 2:
            return f"{point_str(point)}: x is not -u/2"
        return None

    return [_run_cases("projections on the arc", "projections", points, projected, cfg)]


def suite_w2(cfg: RunConfig) -> list[Check]:
    record = distance_record(cfg, 2, W2_ORDER_RADIUS)
    fundamental = fundamental_cell(2)
    vertices = sorted(
        c for c, d in record.cell_distance.items() if c.dim == 0 and d > 0
    )

    def ordered(vertex: Cell) -> str | None:
        if not arcs_totally_ordered(vertex):
            return f"{vertex}: arcs are not totally ordered"
        minimal_cube(vertex)
        return None

    def traced(vertex: Cell) -> str | None:
        trajectory = trace({vertex: Fraction(1)}, record)
        if trajectory.end != {fundamental: Fraction(1)}:
            return f"{vertex} ends at {trajectory.end}"
        return None

    near = [
        c
        for c, d in sorted(record.cell_distance.items())
        if c.dim == 0 and d <= W2_TRACE_RADIUS
    ]
    return [
        _run_cases("arcs at a vertex are ordered", "rank two", vertices, ordered, cfg),
        _run_cases("vertex traces reach i", "rank two", near, traced, cfg),
    ]


SUITES: dict[str, Callable[[RunConfig], list[Check]]] = {
    "incidence": suite_incidence,
    "appendix": suite_appendix,
    "example-xi": suite_example_xi,
    "distance3": suite_distance3,
    "lemmas": suite_lemmas,
    "theorem-basis": suite_theorem_basis,
    "xi-structure": suite_xi_structure,
    "trace": suite_trace,
    "sweep": suite_sweep,
    "em": suite_em,
    "filling": suite_filling,
    "projection": suite_projection,
    "w2": suite_w2,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    """Run a named suite, or every suite for "all".

    :param name: suite name
    :type name: str
    :param cfg: run configuration
    :type cfg: RunConfig
    :raises DomainError: the suite is unknown or the radius is too small
    :raises RadiusExceededError: the radius does not cover the sampled cases
    :return: the report
    :rtype: SuiteReport
    """
    if name != "all" and name not in SUITES:
        msg = f"Unknown suite '{name}'"
        raise DomainError(msg)
    names: Iterable[str] = SUITES if name == "all" else (name,)
    report = SuiteReport(name, cfg)
    for suite in names:
        logger.info("Running suite '%s'", suite)
        started = time.perf_counter()
        report.checks.extend(SUITES[suite](cfg))
        report.timings[suite] = time.perf_counter() - started
    return report
