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

"""Wrretract computes the well-rounded retract of GL2 and GL3 in exact arithmetic.

Cells of the retract are identified by their decorations, the sets of minimal vectors
shared by every form in the cell. On top of the cell complex, wrretract computes the
distance strata, traces the recursive contraction of the retract onto the
fundamental cell, and turns the contraction into Eilenberg-MacLane fillings and
cochains with symmetric-power coefficients.

Further documentation can be found in the accompanying README.md file.

Basic usage::

    wrretract [options] COMMAND [command options]
    wrretract [options] suite NAME [NAME ...]

Examples::

    wrretract incidence-table
    wrretract xi --cube "1,0,0;4,1,0;2,1,1"
    wrretract --radius 2 trace --cube "1,0,0;4,1,0;2,1,1" --at "1/3,0,1/5"
    wrretract -j4 --seed 7 suite all

"""

from wrretract.version import __version__

# set some global constants
STD_VERBOSE = 1
VERY_VERBOSE = 2
DEFAULT_RADIUS = 2
DEFAULT_DELTA = "1/8"
DEFAULT_SEED = 0
DEFAULT_PRECISION = 12
SCHEMA_VERSION = 1

__all__ = ["__version__"]
