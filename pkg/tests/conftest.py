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

"""Define fixtures used across all tests in this folder."""

from __future__ import annotations

import json
from typing import TYPE_CHECKING

import pytest

from wrretract.complex import DistanceRecord, distance_fixpoint

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture(autouse=True)
def _chdir_to_tmp_dir(
    tmp_path_factory: pytest.TempPathFactory, monkeypatch: pytest.MonkeyPatch
) -> None:
    """Change to the base temporary directory before running tests.

    :param tmp_path_factory: temporary path generator
    :type tmp_path_factory: pytest.TempPathFactory
    :param monkeypatch: Pytest monkeypatch helper
    :type monkeypatch: pytest.MonkeyPatch
    """
    monkeypatch.chdir(tmp_path_factory.getbasetemp())


@pytest.fixture(scope="session")
def record_one() -> DistanceRecord:
    """Compute the distance strata of W3 up to radius 1.

    :return: distance record
    :rtype: wrretract.complex.DistanceRecord
    """
    return distance_fixpoint(1)


@pytest.fixture(scope="session")
def record_two() -> DistanceRecord:
    """Compute the distance strata of W3 up to radius 2.

    :return: distance record
    :rtype: wrretract.complex.DistanceRecord
    """
    return distance_fixpoint(2)


@pytest.fixture(scope="session")
def record_w2() -> DistanceRecord:
    """Compute the distance strata of W2 up to radius 6.

    :return: distance record
    :rtype: wrretract.complex.DistanceRecord
    """
    return distance_fixpoint(6, rank=2)


@pytest.fixture(scope="session")
def gamma_file(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Create a temporary file of matrices for testing.

    :param tmp_path_factory: temporary path generator
    :type tmp_path_factory: pytest.TempPathFactory
    :return: test matrix file
    :rtype: pathlib.Path
    """
    tmp_file = tmp_path_factory.getbasetemp() / "gammas.txt"
    tmp_file.write_text("1,1,0;0,1,0;0,0,1\n0,-1,0;1,0,0;0,0,1\n1,0,0;0,1,0;0,0,1\n")
    return tmp_file


@pytest.fixture(scope="session")
def gamma_file_with_comment(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Create a temporary file of matrices with comments for testing.

    :param tmp_path_factory: temporary path generator
    :type tmp_path_factory: pytest.TempPathFactory
    :return: test matrix file
    :rtype: pathlib.Path
    """
    tmp_file = tmp_path_factory.getbasetemp() / "gammas_with_comment.txt"
    tmp_file.write_text("1,1,0;0,1,0;0,0,1\n\n#0,-1,0;1,0,0;0,0,1\n0,1;1,0\n")
    return tmp_file


@pytest.fixture(scope="session")
def values_file(tmp_path_factory: pytest.TempPathFactory) -> Path:
    """Create a JSON file of generator values in Sym^1(Q^3).

    :param tmp_path_factory: temporary path generator
    :type tmp_path_factory: pytest.TempPathFactory
    :return: test values file
    :rtype: pathlib.Path
    """
    tmp_file = tmp_path_factory.getbasetemp() / "values.json"
    values = {
        "o-h-m1-x": {"1,0,0": "1"},
        "o-h-m1-y": {"0,1,0": "1/2"},
        "o-h-m2-y": {"0,0,1": "-1"},
        "o-t-m2-y": {"1,0,0": "2", "0,0,1": "1"},
    }
    tmp_file.write_text(json.dumps({"m": 3, "n": 1, "values": values}))
    return tmp_file
