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


"""Set up console and file logging that coexists with progress bars."""

from __future__ import annotations

import logging
from typing import Any, MutableMapping

from tqdm import tqdm

import wrretract

CONSOLE_FORMAT = "[%(levelname)s] %(message)s"
FILE_FORMAT = "%(asctime)s [%(levelname)-7s] %(message)s"


class CellLogAdapter(logging.LoggerAdapter):
    """Prefix messages with the decoration of the cell they concern."""

    def process(
        self, msg: Any, kwargs: MutableMapping[str, Any]
    ) -> tuple[str, MutableMapping[str, Any]]:
        return f"[{self.extra['cell']}] {msg}", kwargs


class TqdmHandler(logging.StreamHandler):
    """Write records through tqdm so they land above any running progress bar."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
            self.flush()
        except RecursionError:
            raise
        except Exception:
            self.handleError(record)


def console_level(verbosity: int, *, quiet: bool) -> int:
    """Map the -v count and -q flag to the level of the console handler.

    :param verbosity: number of -v flags given
    :type verbosity: int
    :param quiet: whether -q was given
    :type quiet: bool
    :return: a logging level
    :rtype: int
    """
    if verbosity >= wrretract.VERY_VERBOSE:
        # per-cube tracing and fixpoint bookkeeping
        return logging.DEBUG
    if verbosity >= wrretract.STD_VERBOSE:
        return logging.INFO
    return logging.ERROR if quiet else logging.WARNING


def configure_logging(verbosity: int, logfile: str, *, quiet: bool) -> None:
    """Attach a console handler and, if asked for, a file handler to the root logger.

    The root logger passes everything; the console handler filters by
    :func:`console_level` and the file handler keeps DEBUG records.

    :param verbosity: how verbose the log messages should be
    :type verbosity: int
    :param logfile: file to append log messages to, if any
    :type logfile: str
    :param quiet: True if warnings should be suppressed or False otherwise
    :type quiet: bool
    """
    root = logging.getLogger("")
    root.setLevel(logging.DEBUG)

    console = TqdmHandler()
    console.setLevel(console_level(verbosity, quiet=quiet))
    console.setFormatter(logging.Formatter(CONSOLE_FORMAT))
    root.addHandler(console)

    if logfile:
        logged = logging.FileHandler(logfile)
        logged.setLevel(logging.DEBUG)
        logged.setFormatter(logging.Formatter(FILE_FORMAT))
        root.addHandler(logged)
