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

"""Define tests related to the wrretract.parse module."""

from __future__ import annotations

import io
import logging
from fractions import Fraction
from typing import TYPE_CHECKING

import pytest

from wrretract.complex import Cell
from wrretract.exceptions import ParseError
from wrretract.parse import (
    parse_cell,
    parse_fraction,
    parse_matrix,
    parse_point,
    parse_vector,
    read_gamma_file,
    read_values_file,
)

if TYPE_CHECKING:
    from pathlib import Path

    from wrretract.intvec import IntMatrix


class TestParseText:
    """Define tests related to parsing command-line values."""

    @pytest.mark.parametrize("text", ["1,0,-1", "(1, 0, -1)", " 1 ,0,-1 "])
    def test_parse_vector(self, text: str) -> None:
        """Vectors may carry parentheses and spaces."""
        assert parse_vector(text) == (1, 0, -1)

    @pytest.mark.parametrize("text", ["", "1,,0", "1.5,0", "a,b"])
    def test_parse_vector_invalid(self, text: str) -> None:
        """Anything but a list of integers is rejected."""
        with pytest.raises(ParseError):
            parse_vector(text)

    def test_parse_cell(self) -> None:
        """Cells are vectors separated by semicolons."""
        cell = parse_cell("1,0,0;4,1,0;2,1,1")
        assert cell == Cell([(1, 0, 0), (4, 1, 0), (2, 1, 1)])

    def test_parse_cell_not_a_cell(self) -> None:
        """Readable vectors that do not decorate a cell are a parse error."""
        with pytest.raises(ParseError, match="as a cell"):
            parse_cell("1,1,0;1,-1,0;0,0,1")

    def test_parse_matrix(self) -> None:
        """Matrices are rows separated by semicolons."""
        assert parse_matrix("0,-1;1,0") == ((0, -1), (1, 0))

    @pytest.mark.parametrize("text", ["1,0;0", "1,0,0;0,1,0", ""])
    def test_parse_matrix_not_square(self, text: str) -> None:
        """Matrices must be square."""
        with pytest.raises(ParseError):
            parse_matrix(text)

    def test_parse_fraction(self) -> None:
        """Fractions are read exactly."""
        assert parse_fraction("-1/3") == Fraction(-1, 3)
        with pytest.raises(ParseError):
            parse_fraction("1/0")
        with pytest.raises(ParseError):
            parse_fraction("half")

    def test_parse_point(self) -> None:
        """Chart points are comma separated fractions."""
        assert parse_point("1/3,0,-1/5") == (Fraction(1, 3), 0, Fraction(-1, 5))


class TestReadGammaFile:
    """Define tests related to wrretract.parse.read_gamma_file."""

    @pytest.fixture()
    def gammas(self, gamma_file: Path) -> dict[int, IntMatrix]:
        """Process a test matrix file with three lines.

        :param gamma_file: test matrix file
        :type gamma_file: pathlib.Path
        :return: dictionary representation of the input file
        :rtype: dict[int, IntMatrix]
        """
        return read_gamma_file(str(gamma_file))

    def test_gamma_file_log(
        self, caplog: pytest.LogCaptureFixture, gamma_file: Path
    ) -> None:
        """Test that reading a matrix file creates an info log message.

        Reading in a matrix file should create an info log message containing the
        name of the file.
        """
        caplog.set_level(logging.INFO)
        _ = read_gamma_file(str(gamma_file))
        assert f"Reading matrices from '{gamma_file}'" in caplog.text

    def test_gamma_file_length(self, gammas: dict[int, IntMatrix]) -> None:
        """Test that every line of the file gives a matrix."""
        assert len(gammas) == 3

    def test_gamma_file_contents(self, gammas: dict[int, IntMatrix]) -> None:
        """Test that matrices are keyed by their line numbers."""
        assert gammas[2] == ((0, -1, 0), (1, 0, 0), (0, 0, 1))
        assert sorted(gammas) == [1, 2, 3]

    def test_gamma_file_with_comment(self, gamma_file_with_comment: Path) -> None:
        """Test that blank lines and comments are skipped.

        Line numbers still count the skipped lines.
        """
        gammas = read_gamma_file(str(gamma_file_with_comment))
        assert gammas == {1: ((1, 1, 0), (0, 1, 0), (0, 0, 1)), 4: ((0, 1), (1, 0))}

    def test_gamma_stdin(
        self, caplog: pytest.LogCaptureFixture, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test that matrices can be read from stdin with an info log message."""
        caplog.set_level(logging.INFO)
        monkeypatch.setattr("sys.stdin", io.StringIO("1,0;0,1\n\n0,1;1,0\n"))
        gammas = read_gamma_file("-")
        assert gammas == {1: ((1, 0), (0, 1)), 3: ((0, 1), (1, 0))}
        assert "Reading matrices from stdin" in caplog.text

    def test_gamma_file_bad_line(self, tmp_path: Path) -> None:
        """Test that an unreadable line reports its line number."""
        bad_file = tmp_path / "bad.txt"
        bad_file.write_text("1,0;0,1\n1,0;0\n")
        with pytest.raises(ParseError, match="line 2"):
            read_gamma_file(str(bad_file))


class TestReadValuesFile:
    """Define tests related to wrretract.parse.read_values_file."""

    def test_values_file(self, values_file: Path) -> None:
        """Test that generator values are read as symmetric tensors."""
        values = read_values_file(values_file)
        assert sorted(values) == ["o-h-m1-x", "o-h-m1-y", "o-h-m2-y", "o-t-m2-y"]
        assert values["o-h-m1-y"].coefficients == {(0, 1, 0): Fraction(1, 2)}
        assert values["o-t-m2-y"].n == 1

    @pytest.mark.parametrize(
        "content",
        [
            "not json",
            '{"m": 3, "values": {}}',
            '{"m": 3, "n": 1, "values": {"o-h-m1-x": {"2,0,0": "1"}}}',
            '{"m": 3, "n": 1, "values": []}',
        ],
    )
    def test_values_file_invalid(self, tmp_path: Path, content: str) -> None:
        """Test that malformed value files are a parse error."""
        bad_file = tmp_path / "values.json"
        bad_file.write_text(content)
        with pytest.raises(ParseError):
            read_values_file(bad_file)
