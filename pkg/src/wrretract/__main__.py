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

from wrretract.cli import cli  # no cov

if __name__ == "__main__":
    raise SystemExit(cli())
