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

"""Carry out the subcommands given on the command line."""

from __future__ import annotations

import json
import logging
import sys
from fractions import Fraction
from typing import TYPE_CHECKING, Callable

from wrretract.cohomology import (
    coboundary,
    cocycle_from_generators,
    face_identity_check,
    filling_sigma,
    random_cochain,
)
from wrretract.complex import (
    APPENDIX_PRINTED,
    APPENDIX_TYPO_INDEX,
    APPENDIX_VERTEX,
    EXPECTED_INCIDENCES,
    TYPE_ORDER,
    Cell,
    appendix_cubes,
    cubes_at_cell,
    distance_fixpoint,
    face_profile,
    faces_touching_ball,
    fundamental_cell,
    group_by_dim,
    incidence_table,
    naive_string_distance,
    xi_set,
)
from wrretract.contraction import (
    BaryPoint,
    Trajectory,
    canonical,
    center_target,
    h2_schedule,
    h3_schedule,
    locate,
    locate_simplex,
    locate_w2,
    simplex_str,
    swept_cells,
    trace,
)
from wrretract.exceptions import DomainError, RetractError
from wrretract.export import cube_obj, export_geometry, write_output
from wrretract.intvec import IntMatrix
from wrretract.logging import CellLogAdapter
from wrretract.parse import (
    parse_cell,
    parse_fraction,
    parse_matrix,
    parse_point,
    read_gamma_file,
    read_values_file,
)
from wrretract.suites import (
    RunConfig,
    SuiteReport,
    distance_record,
    matrix_str,
    run_suite,
)

if TYPE_CHECKING:
    from argparse import Namespace

logger = logging.getLogger(__name__)


def dumps(data: object) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def emit(text: str, cfg: RunConfig) -> None:
    """Write command output to the configured file, or to stdout."""
    if write_output(text, cfg.out) is None:
        sys.stdout.write(text)


def read_gammas(args: Namespace) -> list[IntMatrix]:
    """Collect the matrices given with --gamma, then those of --gammas-file."""
    gammas = [parse_matrix(g) for g in args.gamma or []]
    if getattr(args, "gammas_file", None):
        gammas.extend(read_gamma_file(args.gammas_file).values())
    return gammas


def start_point(args: Namespace) -> tuple[BaryPoint, Cell | None, Fraction | None]:
    """Build the starting point of a trace from --cube/--at, --arc/--u or --cell.

    :raises DomainError: no usable combination of options was given
    :return: the point, and the arc and chart parameter for points of W2
    """
    if args.cube and args.at:
        return locate(parse_cell(args.cube), parse_point(args.at)), None, None
    if args.arc and args.u is not None:
        arc, u = parse_cell(args.arc), parse_fraction(args.u)
        return locate_w2(arc, u), arc, u
    if args.cell:
        return {parse_cell(args.cell): Fraction(1)}, None, None
    msg = "Give a starting point with --cube and --at, --arc and --u, or --cell"
    raise DomainError(msg)


def trajectory_text(trajectory: Trajectory) -> str:
    lines = []
    for i, segment in enumerate(trajectory.segments):
        start = ",".join(str(x) for x in segment.start)
        end = ",".join(str(x) for x in segment.end)
        carrier = simplex_str(segment.simplex)
        line = f"{segment.stage.value:>6}  ({start}) -> ({end})  {carrier}"
        if trajectory.times:
            begin, finish = trajectory.times[i]
            line += f"  t in [{begin}, {finish}]"
        lines.append(line)
    ends = ", ".join(f"{w} [{c}]" for c, w in sorted(trajectory.end.items()))
    lines.append(f"end: {ends}")
    return "\n".join(lines) + "\n"


def run_enumerate(args: Namespace, cfg: RunConfig) -> int:
    record = distance_fixpoint(
        cfg.radius, cfg.rank, workers=cfg.workers, progress=cfg.progress
    )
    if cfg.output_format == "text":
        lines = [f"D = {d}: {n} cells" for d, n in record.level_counts().items()]
        if record.stalled:
            lines.append(f"stalled at level {record.stalled[0]}")
        emit("\n".join(lines) + "\n", cfg)
    else:
        emit(dumps(record.to_json()), cfg)
    return 1 if record.stalled else 0


def run_incidence_table(args: Namespace, cfg: RunConfig) -> int:
    table = incidence_table()
    match = table == EXPECTED_INCIDENCES
    if cfg.output_format == "text":
        lines = ["          " + "".join(f"{t:>10}" for t in TYPE_ORDER)]
        for name, row in zip(TYPE_ORDER, table):
            cells = "".join(f"{'-' if x is None else x:>10}" for x in row)
            lines.append(f"{name:>10}{cells}")
        emit("\n".join(lines) + "\n", cfg)
    else:
        emit(dumps({"types": list(TYPE_ORDER), "table": table, "match": match}), cfg)
    return 0 if match else 1


def run_xi(args: Namespace, cfg: RunConfig) -> int:
    cube = parse_cell(args.cube)
    if not cube.is_top:
        msg = f"{cube} is not a top-dimensional cell"
        raise DomainError(msg)
    if cfg.output_format == "obj":
        emit(cube_obj(cube, cfg.precision), cfg)
        return 0
    grouped = group_by_dim(xi_set(cube))
    data: dict[str, object] = {
        "cube": cube.to_json(),
        "xi": {str(d): [c.to_json() for c in cells] for d, cells in grouped.items()},
    }
    if cube.rank == 3 and cube != fundamental_cell(3):  # noqa: PLR2004
        data["center_target"] = center_target(cube).to_json()
    if cfg.output_format == "text":
        lines = [f"Xi({cube}):"]
        for d, cells in grouped.items():
            lines.extend(f"  dim {d}: {c}" for c in cells)
        emit("\n".join(lines) + "\n", cfg)
    else:
        emit(dumps(data), cfg)
    return 0


def run_appendix_check(args: Namespace, cfg: RunConfig) -> int:
    found = cubes_at_cell(Cell(APPENDIX_VERTEX))
    expected = appendix_cubes()
    data = {
        "vertex": Cell(APPENDIX_VERTEX).to_json(),
        "found": [c.to_json() for c in sorted(found)],
        "missing": [c.to_json() for c in sorted(expected - found)],
        "unexpected": [c.to_json() for c in sorted(found - expected)],
        "corrected_entry": {
            "printed": [list(v) for v in APPENDIX_PRINTED[APPENDIX_TYPO_INDEX]],
            "index": APPENDIX_TYPO_INDEX,
        },
        "match": found == expected,
    }
    if cfg.output_format == "text":
        emit(
            f"{len(found)} cubes at the vertex; "
            f"{'match' if found == expected else 'MISMATCH'}\n",
            cfg,
        )
    else:
        emit(dumps(data), cfg)
    return 0 if found == expected else 1


def run_naive_distance(args: Namespace, cfg: RunConfig) -> int:
    distance = naive_string_distance(
        args.r, cfg.radius, cfg.rank, progress=cfg.progress
    )
    counts: dict[int, int] = {}
    for d in distance.values():
        counts[d] = counts.get(d, 0) + 1
    data: dict[str, object] = {
        "r": args.r,
        "radius": cfg.radius,
        "counts": {str(d): n for d, n in sorted(counts.items())},
    }
    if args.cube:
        cube = parse_cell(args.cube)
        data["cube"] = {
            "decoration": cube.to_json(),
            "distance": distance.get(cube),
            "face_profile": {
                str(d): n for d, n in face_profile(cube, distance).items()
            },
            "faces_touching_ball": faces_touching_ball(cube, distance, cfg.radius),
        }
    if cfg.output_format == "text":
        lines = [f"distance {d}: {n} cubes" for d, n in sorted(counts.items())]
        if args.cube:
            lines.append(f"{args.cube}: {data['cube']}")
        emit("\n".join(lines) + "\n", cfg)
    else:
        emit(dumps(data), cfg)
    return 0


def _traced(args: Namespace, cfg: RunConfig) -> Trajectory:
    point, arc, u = start_point(args)
    top = max(point, key=lambda c: c.dim)
    adapter = CellLogAdapter(logger, {"cell": top})
    record = distance_record(cfg, top.rank)
    adapter.info("Tracing from %s", ", ".join(str(w) for w in point.values()))
    if args.schedule:
        if arc is not None and u is not None:
            return h2_schedule(arc, u, record)
        return h3_schedule(point, record, delta=cfg.delta)
    return trace(point, record, delta=cfg.delta)


def run_trace(args: Namespace, cfg: RunConfig) -> int:
    trajectory = _traced(args, cfg)
    if cfg.output_format == "text":
        emit(trajectory_text(trajectory), cfg)
    elif cfg.output_format == "obj":
        emit(export_geometry("path", "obj", cfg.precision, trajectory=trajectory), cfg)
    else:
        emit(dumps(trajectory.to_json()), cfg)
    return 0


def run_sweep(args: Namespace, cfg: RunConfig) -> int:
    simplex, _ = canonical([parse_cell(c) for c in args.cell])
    record = distance_record(cfg, simplex[0].rank)
    swept = sorted(
        swept_cells(simplex, record), key=lambda s: [c.sort_key() for c in s]
    )
    entries = []
    for s in swept:
        entry: dict[str, object] = {"simplex": [c.to_json() for c in s]}
        if s[0].rank == 3:  # noqa: PLR2004
            gamma, key = locate_simplex(s)
            entry["catalogue"] = {"cell": key, "gamma": [list(r) for r in gamma]}
        entries.append(entry)
    if cfg.output_format == "text":
        emit("\n".join(simplex_str(s) for s in swept) + "\n", cfg)
    else:
        emit(dumps({"simplex": [c.to_json() for c in simplex], "swept": entries}), cfg)
    return 0


def run_export(args: Namespace, cfg: RunConfig) -> int:
    target = args.target or ("path" if args.command == "export-path" else "cube")
    fmt = "json" if cfg.output_format == "json" else "obj"
    if target == "path":
        trajectory = _traced(args, cfg)
        text = export_geometry("path", fmt, cfg.precision, trajectory=trajectory)
    elif target == "cube":
        cube = parse_cell(args.cube) if args.cube else None
        text = export_geometry("cube", fmt, cfg.precision, cube=cube)
    else:
        text = export_geometry(target, fmt, cfg.precision)
    emit(text, cfg)
    return 0


def run_em_check(args: Namespace, cfg: RunConfig) -> int:
    gammas = read_gammas(args)
    if not gammas:
        return _report(run_suite("em", cfg), cfg)
    arity = len(gammas) - 2
    if arity < 0:
        msg = "d(d(f)) needs at least two group elements"
        raise DomainError(msg)
    f = random_cochain(arity, args.n, seed=cfg.seed)
    value = coboundary(coboundary(f))(*gammas)
    data = {
        "arity": arity,
        "n": args.n,
        "gammas": [matrix_str(g) for g in gammas],
        "value": value.to_json(),
        "vanishes": not value,
    }
    emit(dumps(data), cfg)
    return 1 if value else 0


def run_sigma(args: Namespace, cfg: RunConfig) -> int:
    gammas = read_gammas(args)
    record = distance_record(cfg)
    chain = filling_sigma(gammas, record)
    data: dict[str, object] = {
        "gammas": [matrix_str(g) for g in gammas],
        "chain": chain.to_json(),
    }
    faces_ok = True
    if gammas:
        faces_ok = face_identity_check(gammas, record)
        data["faces_ok"] = faces_ok
    emit(dumps(data), cfg)
    return 0 if faces_ok else 1


def run_evaluate(args: Namespace, cfg: RunConfig) -> int:
    values = read_values_file(args.values)
    gammas = read_gammas(args)
    record = distance_record(cfg)
    chain = filling_sigma(gammas, record)
    value = cocycle_from_generators(values, chain)
    data = {"gammas": [matrix_str(g) for g in gammas], "value": value.to_json()}
    emit(dumps(data), cfg)
    return 0


def _report(report: SuiteReport, cfg: RunConfig) -> int:
    if cfg.output_format == "text":
        emit(report.to_text(), cfg)
    else:
        emit(report.dumps(), cfg)
    for name, seconds in report.timings.items():
        logger.info("Suite '%s' took %.2fs", name, seconds)
    if not report.passed:
        failures = len(report.failures)
        logger.warning("%i check%s failed", failures, "s"[: failures ^ 1])
    return 0 if report.passed else 1


def run_suites(args: Namespace, cfg: RunConfig) -> int:
    report = SuiteReport(",".join(args.names), cfg)
    for name in args.names:
        part = run_suite(name, cfg)
        report.checks.extend(part.checks)
        report.timings.update(part.timings)
    return _report(report, cfg)


COMMANDS: dict[str, Callable[[Namespace, RunConfig], int]] = {
    "enumerate": run_enumerate,
    "incidence-table": run_incidence_table,
    "xi": run_xi,
    "appendix-check": run_appendix_check,
    "naive-distance": run_naive_distance,
    "trace": run_trace,
    "sweep": run_sweep,
    "export": run_export,
    "export-path": run_export,
    "em-check": run_em_check,
    "sigma": run_sigma,
    "evaluate": run_evaluate,
    "suite": run_suites,
}


def process_command(args: Namespace) -> int:
    """Run the subcommand given in the CLI args.

    Errors raised by the library are logged and turn into exit code 1; so does any
    failed check.

    :param args: command-line arguments and their values
    :type args: argparse.Namespace
    :return: program exit code (1 if there were any problems or 0 otherwise)
    :rtype: int
    """
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except RetractError as e:
        logger.error(e)
    except OSError as e:
        logger.error("File could not be read or written: %s", str(e))
    return 1
