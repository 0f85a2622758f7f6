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

"""This module provides points and admissible polyline paths in the plane,
together with arc length, arc-length reparametrization and subpaths.

Points of the plane are identified with complex numbers; most functions
accept either :class: Point instances or Python complex numbers.
"""

from dataclasses import dataclass
from math import isfinite
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
import shapely
from shapely.geometry import LineString


DEFAULT_CHORDS_PER_QUARTER = 64


@dataclass(frozen=True)
class Point:
    """Immutable structure representing a point of the plane.
    """
    re: float
    im: float

    def __post_init__(self):
        if not (isfinite(self.re) and isfinite(self.im)):
            message = f'Point coordinates must be finite, got ({self.re}, {self.im}).'
            raise ValueError(message)

    @staticmethod
    def of(value: 'PointLike') -> 'Point':
        """Converts a complex number (or a Point) to a Point.
        """
        if isinstance(value, Point):
            return value
        value = complex(value)
        return Point(value.real, value.imag)

    @property
    def z(self) -> complex:
        """This point as a complex number.
        """
        return complex(self.re, self.im)

    def distance(self, other: 'PointLike') -> float:
        """Euclidean distance to the other point.
        """
        return abs(self.z - as_complex(other))


PointLike = Union[Point, complex, float, int]


def as_complex(value: PointLike) -> complex:
    """Converts a Point or a number to a complex number.
    """
    if isinstance(value, Point):
        return value.z
    return complex(value)


def as_complex_array(values: Iterable[PointLike]) -> np.ndarray:
    """Converts a sequence of points to a one-dimensional complex array.
    """
    return np.array([as_complex(value) for value in values], dtype=complex)


def is_admissible(vertices: Sequence[PointLike]) -> bool:
    """Verifies whether the given raw vertex sequence describes an admissible
    path, i.e. a rectifiable path without constant subpaths.

    Consecutive vertices are compared by exact equality of coordinates;
    self-retracing paths are admissible.

    Args:
        vertices (Sequence[PointLike]): The raw vertex sequence (may contain
                                        repeats).

    Returns:
        bool: True if there are at least two vertices, no two consecutive
              vertices coincide, and the total length is finite and positive.
    """
    try:
        points = as_complex_array(vertices)
    except (TypeError, ValueError):
        return False
    if len(points) < 2 or not np.all(np.isfinite(points)):
        return False
    steps = np.diff(points)
    if np.any(steps == 0):
        return False
    length = float(np.sum(np.abs(steps)))
    return isfinite(length) and length > 0


class PolyPath:
    """Admissible polyline path given by its ordered vertices.

    Instances are immutable; the cumulative arc lengths are computed once on
    construction (cumlen[0] == 0, cumlen[-1] == total length).
    """

    __slots__ = ('_points', '_cumlen')

    def __init__(self, vertices: Sequence[PointLike]):
        """Constructs a new path.

        Args:
            vertices (Sequence[PointLike]): The vertices of the path.

        Raises:
            ValueError: If the vertices do not describe an admissible path.
        """
        if not is_admissible(vertices):
            message = 'Path is not admissible (fewer than two vertices, repeated consecutive vertex, or zero length).'
            raise ValueError(message)
        points = as_complex_array(vertices)
        cumlen = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(points)))))
        points.setflags(write=False)
        cumlen.setflags(write=False)
        self._points = points
        self._cumlen = cumlen

    @property
    def points(self) -> np.ndarray:
        """The vertices as a read-only complex array.
        """
        return self._points

    @property
    def vertices(self) -> Tuple[Point, ...]:
        """The vertices as Point instances.
        """
        return tuple(Point(z.real, z.imag) for z in self._points)

    @property
    def cumlen(self) -> np.ndarray:
        """The cumulative arc lengths as a read-only array.
        """
        return self._cumlen

    @property
    def start(self) -> complex:
        """The initial point of this path.
        """
        return complex(self._points[0])

    @property
    def end(self) -> complex:
        """The terminal point of this path.
        """
        return complex(self._points[-1])

    @property
    def length(self) -> float:
        """The length of this path.
        """
        return float(self._cumlen[-1])

    @property
    def segment_count(self) -> int:
        """The number of segments of this path.
        """
        return len(self._points) - 1

    def reversed(self) -> 'PolyPath':
        """Returns the same path traversed in the opposite direction.
        """
        return PolyPath(self._points[::-1])

    def __len__(self) -> int:
        return len(self._points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyPath):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    def __hash__(self) -> int:
        return hash(self._points.tobytes())

    def __repr__(self) -> str:
        return f'PolyPath({len(self._points)} vertices, length={self.length:.6g})'


def arc_length(path: PolyPath) -> float:
    """Returns the length of the given path (the sum of its segment lengths).
    """
    return path.length


@dataclass(frozen=True)
class ArcLengthParam:
    """Piecewise-linear parametrization of a polyline path by arc length on
    the interval [0, |path|].

    The map is Lipschitz with constant 1 and maps cumlen[k] to the k-th
    vertex. Calling an instance evaluates the map; both scalars and arrays
    of parameters are accepted.
    """
    path: PolyPath

    @property
    def length(self) -> float:
        """The length of the parametrized path.
        """
        return self.path.length

    def __call__(self, s):
        s = np.clip(np.asarray(s, dtype=float), 0.0, self.path.length)
        cumlen, points = self.path.cumlen, self.path.points
        result = np.interp(s, cumlen, points.real) + 1j * np.interp(s, cumlen, points.imag)
        # exact vertex hits, np.interp may round on repeated abscissae
        index = np.searchsorted(cumlen, s)
        index = np.clip(index, 0, len(cumlen) - 1)
        exact = cumlen[index] == s
        result = np.where(exact, points[index], result)
        if result.ndim == 0:
            return complex(result)
        return result


def reparametrize_by_arclength(path: PolyPath) -> ArcLengthParam:
    """Returns the arc-length parametrization of the given path.
    """
    return ArcLengthParam(path)


def subpath(path: PolyPath, s0: float, s1: float) -> PolyPath:
    """Restricts the given path to the arc-length interval [s0, s1].

    Args:
        path (PolyPath): The path to be restricted.
        s0 (float):      Start parameter, 0 <= s0.
        s1 (float):      End parameter, s0 < s1 <= |path|.

    Raises:
        ValueError: If the interval is degenerate or outside [0, |path|];
                    constant subpaths are not admissible.

    Returns:
        PolyPath: The subpath; its length equals s1 - s0 up to rounding.
    """
    length = path.length
    if not (0.0 <= s0 < s1 <= length):
        message = f'Invalid subpath interval [{s0}, {s1}] for a path of length {length}.'
        raise ValueError(message)
    parametrization = ArcLengthParam(path)
    cumlen, points = path.cumlen, path.points
    inner = (cumlen > s0) & (cumlen < s1)
    vertices = [parametrization(s0)] + list(points[inner]) + [parametrization(s1)]
    cleaned = [vertices[0]]
    for vertex in vertices[1:]:
        if vertex != cleaned[-1]:
            cleaned.append(vertex)
    if len(cleaned) < 2:
        message = f'Subpath [{s0}, {s1}] collapses to a single point.'
        raise ValueError(message)
    return PolyPath(cleaned)


def concatenate(paths: Sequence[PolyPath]) -> PolyPath:
    """Joins paths whose consecutive endpoints coincide into a single path.

    Raises:
        ValueError: If the end of a path differs from the start of the next one.
    """
    vertices = list(paths[0].points)
    for path in paths[1:]:
        if path.start != vertices[-1]:
            message = f'Cannot concatenate paths, {vertices[-1]} != {path.start}.'
            raise ValueError(message)
        vertices.extend(path.points[1:])
    return PolyPath(vertices)


_DENSE_PROJECTION_LIMIT = 500_000


def project(path: PolyPath, z) -> Tuple[np.ndarray, np.ndarray]:
    """Projects points onto the path.

    Small problems are solved by a dense nearest-segment search; large ones
    (long Koch prefixes, many query points) by shapely's linear referencing.

    Args:
        path (PolyPath): The path.
        z:               A complex scalar or array of points.

    Returns:
        Tuple[np.ndarray, np.ndarray]: For every point, the arc-length
                                       parameter of the nearest point of the
                                       path, and the distance to it.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if len(z) * path.segment_count > _DENSE_PROJECTION_LIMIT:
        line = LineString(np.column_stack((path.points.real, path.points.imag)))
        points = shapely.points(z.real, z.imag)
        parameters = shapely.line_locate_point(line, points)
        return np.asarray(parameters, dtype=float), np.asarray(shapely.distance(line, points), dtype=float)
    starts, ends = path.points[:-1], path.points[1:]
    directions = ends - starts
    seg_lengths = np.abs(directions)
    offsets = z[:, None] - starts[None, :]
    t = (offsets * np.conj(directions)[None, :]).real / (seg_lengths ** 2)[None, :]
    t = np.clip(t, 0.0, 1.0)
    nearest = starts[None, :] + t * directions[None, :]
    distances = np.abs(z[:, None] - nearest)
    best = np.argmin(distances, axis=1)
    rows = np.arange(len(z))
    parameters = path.cumlen[best] + t[rows, best] * seg_lengths[best]
    return parameters, distances[rows, best]


def polyline_arc(center: complex, radius: float, theta0: float, theta1: float,
                 chords_per_quarter: int = DEFAULT_CHORDS_PER_QUARTER) -> np.ndarray:
    """Returns the vertices of a polyline approximating the circular arc
    center + radius * exp(i*theta) for theta running from theta0 to theta1.

    The chord count is proportional to the swept angle, with the given number
    of chords per quarter circle (at least one chord).
    """
    if radius <= 0 or chords_per_quarter < 1:
        message = f'Invalid arc (radius {radius}, {chords_per_quarter} chords per quarter).'
        raise ValueError(message)
    chords = max(1, int(np.ceil(abs(theta1 - theta0) / (np.pi / 2) * chords_per_quarter)))
    theta = np.linspace(theta0, theta1, chords + 1)
    return complex(center) + radius * np.exp(1j * theta)


def polyline_circle(center: complex, radius: float,
                    chords_per_quarter: int = DEFAULT_CHORDS_PER_QUARTER) -> np.ndarray:
    """Returns the vertices of the regular polygon inscribed in the given
    circle, counter-clockwise, without repeating the first vertex.
    """
    return polyline_arc(center, radius, 0.0, 2 * np.pi, chords_per_quarter)[:-1]


def koch_arc(level: int, start: complex = 0j, end: complex = 1 + 0j) -> PolyPath:
    """Returns the level-th polygonal approximation of the Koch curve joining
    the given endpoints (4**level segments, length (4/3)**level times the
    distance of the endpoints).
    """
    if level < 0:
        message = f'Koch level must be non-negative, got {level}.'
        raise ValueError(message)
    points = np.array([start, end], dtype=complex)
    rotation = np.exp(1j * np.pi / 3)
    for _ in range(level):
        a, b = points[:-1], points[1:]
        step = (b - a) / 3
        p1, p3 = a + step, a + 2 * step
        p2 = p1 + step * rotation
        refined = np.empty(4 * len(a) + 1, dtype=complex)
        refined[0:-1:4], refined[1::4], refined[2::4], refined[3::4] = a, p1, p2, p3
        refined[-1] = points[-1]
        points = refined
    return PolyPath(points)
