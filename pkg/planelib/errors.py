#
# Copyright 2021 Jaroslav Chmurny
#
# This file is part of Library of Plane Set Algorithms for Python.
#
# Library of Plane Set Algorithms for Python is free software developed for
# educational and experimental purposes. It is licensed under the Apache
# License, Version 2.0 (the "License"); you may not use this file except
# in compliance with the License. You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""This module provides the exceptions raised by the library.

All of them are subclasses of ValueError, so callers interested only in
"invalid input" can keep catching ValueError.
"""

from typing import Optional


class PlaneSetError(ValueError):
    """Base class of all errors raised by this library.
    """


class DomainError(PlaneSetError):
    """Raised when a point lies outside the domain of an operation, for
    instance outside a plane set, or on the branch cut of a principal power.
    """

    def __init__(self, message: str, point: Optional[complex] = None):
        super().__init__(message)
        self.point = point


class UnreachableError(DomainError):
    """Raised when two points of a plane set cannot be joined by a path
    inside the set.
    """


class ParameterError(PlaneSetError):
    """Raised when the parameters of a gallery construction or of a sequence
    rule are invalid.
    """


class PreconditionError(PlaneSetError):
    """Raised when the precondition of an operation does not hold (wrong
    quadrant configuration, invalid dent specification etc.).
    """


class ConstructionError(PlaneSetError):
    """Raised when a test function cannot be constructed on the given path.
    """


class InsufficientLengthError(ConstructionError):
    """Raised when a path is too short for the requested chained test
    function.
    """
