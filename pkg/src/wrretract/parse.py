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

"""Parse cells, matrices, chart points and input files given on the command line."""

from __future__ import annotations

import fileinput
import json
import logging
import re
from fractions import Fraction
from pathlib import Path

from wrretract.cohomology import SymTensor
from wrretract.complex import Cell
from wrretract.exceptions import DomainError, ParseError
from wrretract.intvec import IntMatrix, IntVec

logger = logging.getLogger(__name__)

_VECTOR = re.compile(r"^\(?\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)?$")


def parse_vector(text: str) -> IntVec:
    """Parse an integer vector written as "1,0,-1" or "(1,0,-1)".

    :param text: the vector
    :type text: str
    :raises ParseError: the text is not a list of integers
    :return: the vector
    :rtype: IntVec
    """
    match = _VECTOR.match(text.strip())
    if not match:
        msg = f"Could not parse '{text}' as an integer vector"
        raise ParseError(msg)
    return tuple(int(x) for x in match.group(1).split(","))


def parse_cell(text: str) -> Cell:
    """Parse a decoration written as vectors separated by semicolons.

    :param text: for example "1,0,0;4,1,0;2,1,1"
    :type text: str
    :raises ParseError: the vectors are unreadable or do not decorate a cell
    :return: the cell
    :rtype: Cell
    """
    vectors = [parse_vector(part) for part in text.split(";") if part.strip()]
    try:
        return Cell(vectors)
    except DomainError as e:
        msg = f"Could not parse '{text}' as a cell: {e}"
        raise ParseError(msg) from e


def parse_matrix(text: str) -> IntMatrix:
    """Parse a square integer matrix written row by row, rows separated by semicolons.

    :param text: for example "0,-1;1,0"
    :type text: str
    :raises ParseError: the rows are unreadable or the matrix is not square
    :return: the matrix
    :rtype: IntMatrix
    """
    rows = tuple(parse_vector(part) for part in text.split(";") if part.strip())
    if not rows or any(len(row) != len(rows) for row in rows):
        msg = f"Could not parse '{text}' as a square matrix"
        raise ParseError(msg)
    return rows


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        msg = f"Could not parse '{text}' as a rational number"
        raise ParseError(msg) from e


def parse_point(text: str) -> tuple[Fraction, ...]:
    """Parse chart coordinates such as "1/3,0,-1/5"."""
    return tuple(parse_fraction(part) for part in text.split(","))


def read_gamma_file(gamma_file: str) -> dict[int, IntMatrix]:
    """Parse a file or stdin holding one matrix per line.

    Any blank lines or lines starting with '#' are skipped.

    :param gamma_file: name of the file to parse or "-" for stdin
    :type gamma_file: str
    :raises ParseError: a line is not a square matrix
    :return: the matrices keyed by line number
    :rtype: dict[int, IntMatrix]
    """
    matrices = {}

    if gamma_file == "-":
        logger.info("Reading matrices from stdin")
    else:
        logger.info("Reading matrices from '%s'", gamma_file)

    with fileinput.input(gamma_file) as fd:
        for line_num, line in enumerate(fd, start=1):
            line_s = line.strip()
            # ignore blank lines and lines starting with "#" (for comments)
            if line_s and not line_s.startswith("#"):
                try:
                    matrices[line_num] = parse_matrix(line_s)
                except ParseError as e:
                    msg = f"{e} (line {line_num})"
                    raise ParseError(msg) from e

    return matrices


def read_values_file(values_file: str | Path) -> dict[str, SymTensor]:
    """Read generator values for cocycle evaluation from a JSON file.

    The file holds {"m": 3, "n": 2, "values": {cell: {"2,0,0": "1/2", ...}}} with
    cells named by catalogue key.

    :raises ParseError: the file is not valid JSON of that shape
    """
    try:
        data = json.loads(Path(values_file).read_text(encoding="utf-8"))
        m, n = int(data["m"]), int(data["n"])
        return {
            str(cell): SymTensor.from_json(m, n, tensor)
            for cell, tensor in data["values"].items()
        }
    except (ValueError, KeyError, TypeError, AttributeError, DomainError) as e:
        msg = f"Could not read generator values from '{values_file}': {e}"
        raise ParseError(msg) from e
