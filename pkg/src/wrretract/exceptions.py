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

"""Define exceptions specific to the program."""


class RetractError(Exception):
    """Base class for every error raised by wrretract."""


class DomainError(RetractError, ValueError):
    """Raised when an input lies outside the domain of an operation."""


class ParseError(RetractError):
    """Raised when some input is unable to be parsed as valid."""


class IntegrityError(RetractError):
    """Raised when a structural property of the retract fails to hold."""


class GeometryIntegrityError(IntegrityError):
    """Raised when the subdivision of a cube overlaps itself or leaves a gap."""


class UnhandledConfigurationError(IntegrityError):
    """Raised when the minimal faces of a cube match none of the known patterns."""


class RadiusExceededError(RetractError):
    """Raised when a computation needs a stratum beyond the explored radius."""


class SupportError(RetractError, LookupError):
    """Raised when a cochain is evaluated outside its tabulated support."""
