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

"""Set up the command-line interface and handle program start and exit."""

from __future__ import annotations

import argparse
import logging
import sys

import wrretract
from wrretract.commands import process_command
from wrretract.logging import configure_logging
from wrretract.suites import SUITES


def _add_start_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cube", help="cube holding the start, or the cube to export")
    parser.add_argument(
        "--at", help="(u,v,w) chart coordinates in the cube, e.g. --at=-1/3,0,1/5"
    )
    parser.add_argument("--arc", help="arc of W2 containing the start, e.g. '1,0;0,1'")
    parser.add_argument("--u", help="chart parameter on the arc, e.g. --u=-1/2")
    parser.add_argument("--cell", help="start at the centre of this cell")
    parser.add_argument(
        "--schedule",
        help="assign every segment its time interval",
        action="store_true",
    )


def _add_gamma_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-g",
        "--gamma",
        action="append",
        help="integer matrix given row by row, e.g. '0,-1,0;1,0,0;0,0,1'; repeatable",
    )
    parser.add_argument(
        "--gammas-file",
        help="file with one matrix per line ('-' for stdin); read after any --gamma",
    )


def parse_args(argv: list[str]) -> argparse.Namespace:
    """Parse the given argument list.

    :param argv: a list of arguments in string form
    :type argv: list[str]
    :return: a Namespace containing the arguments and their values
    :rtype: argparse.Namespace
    """
    parser = argparse.ArgumentParser(
        description="""
        Compute the well-rounded retract of GL2 and GL3 in exact arithmetic, trace its
        contraction and check its properties.
        """,
        epilog="""
        License GPLv3+: GNU GPL version 3 or later
        <http://www.gnu.org/licenses/gpl.html>. This is free software; you are free to
        change and redistribute it under certain conditions. There is NO WARRANTY, to
        the extent permitted by law.
        """,
        prog="wrretract",
    )
    parser.add_argument(
        "-V",
        "--version",
        action="version",
        version=f"%(prog)s {wrretract.__version__}",
    )
    message_options = parser.add_mutually_exclusive_group()
    message_options.add_argument(
        "-q", "--quiet", help="suppress warning messages", action="store_true"
    )
    message_options.add_argument(
        "-v",
        "--verbose",
        help="print detailed information; use -vv for even more detail",
        action="count",
        default=0,
    )
    parser.add_argument(
        "-l", "--logfile", default="", help="save log output to LOGFILE"
    )
    parser.add_argument(
        "--rank",
        default=3,
        type=int,
        choices=(2, 3),
        help="work in W2 or W3 (default: %(default)s)",
    )
    parser.add_argument(
        "--radius",
        default=wrretract.DEFAULT_RADIUS,
        type=int,
        help="largest distance stratum to compute (default: %(default)s)",
    )
    parser.add_argument(
        "--delta",
        default=wrretract.DEFAULT_DELTA,
        help="relative distance of projection poles in (0, 1/4) (default: %(default)s)",
    )
    parser.add_argument(
        "--seed",
        default=wrretract.DEFAULT_SEED,
        type=int,
        help="seed for sampled checks (default: %(default)s)",
    )
    parser.add_argument(
        "--format",
        default="json",
        choices=("json", "obj", "text"),
        help="output format (default: %(default)s)",
    )
    parser.add_argument(
        "-j",
        "--workers",
        default=1,
        type=int,
        help="number of threads used for enumerations and suites",
    )
    parser.add_argument("-o", "--out", help="write output to OUT instead of stdout")
    parser.add_argument(
        "--samples", type=int, help="number of sampled cases per check in suites"
    )
    parser.add_argument(
        "--bound", type=int, help="entry bound of exhaustive enumerations in suites"
    )
    parser.add_argument(
        "--precision",
        default=wrretract.DEFAULT_PRECISION,
        type=int,
        help="significant digits of OBJ coordinates (default: %(default)s)",
    )

    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    commands.add_parser("enumerate", help="compute distance strata up to the radius")
    commands.add_parser("incidence-table", help="print the table of incidences of W3")
    xi = commands.add_parser("xi", help="list the minimal set of a top cell")
    xi.add_argument("--cube", required=True, help="decoration of the top cell")
    commands.add_parser(
        "appendix-check", help="compare the cubes at the appendix vertex"
    )
    naive = commands.add_parser(
        "naive-distance", help="breadth-first string distance between cubes"
    )
    naive.add_argument(
        "--r", type=int, default=1, help="codimension of shared cells (default: 1)"
    )
    naive.add_argument("--cube", help="also report this cube's distance and faces")
    trace = commands.add_parser("trace", help="trace a point under the contraction")
    _add_start_options(trace)
    sweep = commands.add_parser("sweep", help="list the cells swept by a simplex")
    sweep.add_argument(
        "--cell",
        action="append",
        required=True,
        help="a vertex of the simplex, as a cell decoration; repeatable",
    )
    export = commands.add_parser(
        "export", aliases=["export-path"], help="write cube or path geometry"
    )
    export.add_argument(
        "target",
        nargs="?",
        choices=("cube", "fundamental-domain", "path"),
        help="what to export (default: cube, or path for export-path)",
    )
    _add_start_options(export)
    em = commands.add_parser("em-check", help="check that d(d(f)) vanishes")
    em.add_argument("--n", type=int, default=2, help="symmetric power (default: 2)")
    _add_gamma_options(em)
    sigma = commands.add_parser("sigma", help="compute a filling simplex")
    _add_gamma_options(sigma)
    evaluate = commands.add_parser(
        "evaluate", help="evaluate a cocycle given on the fundamental tetrahedra"
    )
    evaluate.add_argument("--values", required=True, help="JSON file of values")
    _add_gamma_options(evaluate)
    suite = commands.add_parser("suite", help="run verification suites")
    suite.add_argument(
        "names",
        nargs="+",
        choices=(*SUITES, "all"),
        metavar="NAME",
        help=f"suites to run: {', '.join(SUITES)} or all",
    )

    return parser.parse_args(argv)


def cli() -> int:
    """Set up the command-line environment and run the requested command."""
    args = parse_args(sys.argv[1:])
    configure_logging(verbosity=args.verbose, logfile=args.logfile, quiet=args.quiet)

    logger = logging.getLogger(__name__)

    # log events are appended to the file if it already exists, so note the start of a
    # new session
    logger.info("Starting '%s' using wrretract %s", args.command, wrretract.__version__)

    try:
        exit_code = process_command(args)
    except KeyboardInterrupt:
        logger.critical("Interrupted by user")
        exit_code = 130
    return exit_code
