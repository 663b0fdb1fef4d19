#!/usr/bin/env python3 -u
# copyright: stram developers, BSD-3-Clause License (see LICENSE file)
"""Exceptions raised by ``stram``."""
from typing import List, Optional

__author__: List[str] = ["stram-developers"]
__all__: List[str] = [
    "StramError",
    "InstanceError",
    "PathGenerationError",
    "ProgramBuildError",
    "ModelFormatError",
    "NoSolutionError",
]


class StramError(Exception):
    """Base class of all errors raised by ``stram``."""


class InstanceError(StramError, ValueError):
    """Instance data is missing, malformed or inconsistent.

    Parameters
    ----------
    message : str
        Description of the problem.
    file : str, default=None
        Name of the offending input file.
    row : int, default=None
        1-based data row (header excluded) of the offending record.
    """

    def __init__(
        self, message: str, file: Optional[str] = None, row: Optional[int] = None
    ) -> None:
        self.file = file
        self.row = row
        prefix = ""
        if file is not None:
            prefix = f"{file}"
            if row is not None:
                prefix += f", row {row}"
            prefix += ": "
        super().__init__(prefix + message)


class PathGenerationError(StramError, ValueError):
    """Path generation received invalid costs or cannot serve some demand."""


class ProgramBuildError(StramError, ValueError):
    """The optimization program cannot be assembled from the given inputs."""


class ModelFormatError(StramError, ValueError):
    """A model or solution file cannot be written or read."""


class NoSolutionError(StramError, ValueError):
    """A workflow needs values a solve did not return.

    Parameters
    ----------
    message : str
        Description of the problem.
    status : str, default="infeasible"
        Solver status of the failed solve.
    """

    def __init__(self, message: str, status: str = "infeasible") -> None:
        self.status = status
        super().__init__(message)
