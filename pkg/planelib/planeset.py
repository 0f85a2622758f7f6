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

"""This module provides the representations of compact plane sets (polygonal
regions with holes, skeletons of polyline arcs, compounds of both) and the
materialization of the gallery of constructed sets at a finite depth.

Every gallery construction keeps its limit points as explicit vertices, so
the materialized sets are compact at every depth.
"""

from dataclasses import dataclass, field
from enum import Enum, unique
from fractions import Fraction
from functools import cached_property
from logging import getLogger
from math import isfinite, sqrt
import re
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from shapely.geometry import GeometryCollection, LineString, MultiLineString, Polygon
from shapely.geometry import Point as ShapelyPoint
from shapely.geometry.polygon import orient
from shapely.ops import polygonize, unary_union
from shapely.validation import explain_validity

from planelib.errors import DomainError, ParameterError
from planelib.funcexpr import Const, CosY, FunctionExpr, Piecewise, Poly, evaluate_exact, exact_modulus
from planelib.geom import DEFAULT_CHORDS_PER_QUARTER, ArcLengthParam, PointLike, PolyPath, as_complex, as_complex_array
from planelib.geom import koch_arc, polyline_arc, polyline_circle
from planelib.graph import VertexRegistry
from planelib.util import UnionFind


logger = getLogger(__name__)


DEPTH_R_CAP = 0.95

_CANTOR_FLOAT_DIGITS = 64


# ---------------------------------------------------------------------------
# materialized sets
# ---------------------------------------------------------------------------

def _ring_tuple(vertices: Iterable[PointLike]) -> Tuple[complex, ...]:
    ring = [complex(z) for z in as_complex_array(vertices)]
    if len(ring) > 1 and ring[0] == ring[-1]:
        ring.pop()
    return tuple(ring)


def _coords(ring: Sequence[complex]) -> List[Tuple[float, float]]:
    return [(z.real, z.imag) for z in ring]


@dataclass(frozen=True)
class Region:
    """Immutable structure representing a closed polygonal region: the
    closed polygon bounded by the outer ring, minus the open interiors of
    the holes.

    Rings are stored without repeating the first vertex. The shapely polygon
    built from the rings is oriented so that the region lies on the left of
    every ring (outer ring counter-clockwise, holes clockwise).
    """
    outer: Tuple[complex, ...]
    holes: Tuple[Tuple[complex, ...], ...] = ()

    def __post_init__(self):
        if len(self.outer) < 3:
            message = f'Outer ring needs at least 3 vertices, got {len(self.outer)}.'
            raise ParameterError(message)
        for ring in (self.outer,) + tuple(self.holes):
            if not all(isfinite(z.real) and isfinite(z.imag) for z in ring):
                message = 'Region vertices must be finite.'
                raise ParameterError(message)
        if not self.polygon.is_valid:
            message = f'Invalid region: {explain_validity(self.polygon)}.'
            raise ParameterError(message)

    @staticmethod
    def of(outer: Iterable[PointLike], holes: Iterable[Iterable[PointLike]] = ()) -> 'Region':
        """Creates a region from arbitrary point sequences (a closing vertex
        equal to the first one is dropped).
        """
        return Region(_ring_tuple(outer), tuple(_ring_tuple(hole) for hole in holes))

    @staticmethod
    def from_polygon(polygon: Polygon) -> 'Region':
        """Creates a region from a shapely polygon.
        """
        exterior = [complex(x, y) for x, y in polygon.exterior.coords]
        interiors = [[complex(x, y) for x, y in ring.coords] for ring in polygon.interiors]
        return Region.of(exterior, interiors)

    @cached_property
    def polygon(self) -> Polygon:
        """The region as an oriented shapely polygon.
        """
        polygon = Polygon(_coords(self.outer), [_coords(hole) for hole in self.holes])
        return orient(polygon, sign=1.0)

    @property
    def geometry(self):
        """The shapely geometry of this region.
        """
        return self.polygon

    @property
    def rings(self) -> Tuple[np.ndarray, ...]:
        """All rings as complex arrays oriented with the region on the left.
        """
        polygon = self.polygon
        rings = [polygon.exterior] + list(polygon.interiors)
        return tuple(_ring_array(ring) for ring in rings)

    @property
    def vertices(self) -> Tuple[complex, ...]:
        """All vertices of the outer ring and of the holes.
        """
        result = list(self.outer)
        for hole in self.holes:
            result.extend(hole)
        return tuple(result)

    @property
    def is_convex(self) -> bool:
        """True if the region has no holes and equals its convex hull.
        """
        if self.holes:
            return False
        polygon = self.polygon
        return polygon.convex_hull.area - polygon.area <= 1e-12 * max(polygon.area, 1e-300)


def _ring_array(ring) -> np.ndarray:
    coords = np.asarray(ring.coords)[:-1]
    return coords[:, 0] + 1j * coords[:, 1]


@dataclass(frozen=True)
class Skeleton:
    """Immutable structure representing a finite union of polyline arcs,
    joined into a connected graph at shared vertices (exact coordinate
    equality).
    """
    arcs: Tuple[PolyPath, ...]

    def __post_init__(self):
        if not self.arcs:
            message = 'Skeleton needs at least one arc.'
            raise ParameterError(message)
        registry = VertexRegistry()
        for arc in self.arcs:
            for z in arc.points:
                registry.get_id(complex(z), generate_if_unknown=True)
        union_find = UnionFind(len(registry))
        for arc in self.arcs:
            ids = [registry.get_id(complex(z)) for z in arc.points]
            for first, second in zip(ids, ids[1:]):
                union_find.union(first, second)
        if union_find.subset_count != 1:
            message = f'Skeleton is not connected ({union_find.subset_count} components).'
            raise ParameterError(message)

    @cached_property
    def geometry(self) -> MultiLineString:
        """The skeleton as a shapely multi-line-string.
        """
        return MultiLineString([_coords(arc.points) for arc in self.arcs])

    @property
    def vertices(self) -> Tuple[complex, ...]:
        """All distinct vertices of the arcs, in order of appearance.
        """
        seen = dict.fromkeys(complex(z) for arc in self.arcs for z in arc.points)
        return tuple(seen)

    @property
    def length(self) -> float:
        """Total length of the arcs.
        """
        return sum(arc.length for arc in self.arcs)


@dataclass(frozen=True)
class Compound:
    """Immutable structure representing a union of regions and skeletons
    that meet at shared vertices.
    """
    parts: Tuple[Union[Region, Skeleton], ...]

    def __post_init__(self):
        if not self.parts:
            message = 'Compound needs at least one part.'
            raise ParameterError(message)
        owners: Dict[complex, int] = {}
        union_find = UnionFind(len(self.parts))
        for index, part in enumerate(self.parts):
            for z in part.vertices:
                if z in owners:
                    union_find.union(owners[z], index)
                else:
                    owners[z] = index
        if union_find.subset_count != 1:
            message = f'Compound parts do not form a connected set ({union_find.subset_count} components).'
            raise ParameterError(message)

    @cached_property
    def geometry(self) -> GeometryCollection:
        """The compound as a shapely geometry collection.
        """
        return GeometryCollection([part.geometry for part in self.parts])

    @property
    def regions(self) -> Tuple[Region, ...]:
        return tuple(part for part in self.parts if isinstance(part, Region))

    @property
    def skeletons(self) -> Tuple[Skeleton, ...]:
        return tuple(part for part in self.parts if isinstance(part, Skeleton))

    @property
    def vertices(self) -> Tuple[complex, ...]:
        """All distinct vertices of all parts.
        """
        seen = dict.fromkeys(z for part in self.parts for z in part.vertices)
        return tuple(seen)


MaterializedSet = Union[Region, Skeleton, Compound]


# ---------------------------------------------------------------------------
# sequence rules
# ---------------------------------------------------------------------------

@unique
class SequenceKind(Enum):
    """Enumeration of named sequence presets.
    """
    GEOMETRIC = 'geometric'
    POWER = 'power'
    TABLE = 'table'
    S_ODD = 's-odd'
    LINEAR = 'linear'
    SQRT = 'sqrt'
    CONST = 'const'


_RELATIVE_KINDS = (SequenceKind.S_ODD, SequenceKind.LINEAR, SequenceKind.SQRT)


@dataclass(frozen=True)
class SequenceRule:
    """Immutable structure representing a named rule n -> value of a
    sequence parameter of a gallery construction.

    Absolute rules: geometric (scale * base**-n), power (scale * n**-exponent),
    table (explicit values, 1-based), const (scale). Relative rules are
    evaluated against a reference value, which is s_{2n-1} for dent depths:
    s-odd (scale * reference), linear (scale * n * reference), sqrt
    (scale * sqrt(reference)).
    """
    kind: SequenceKind
    scale: float = 1.0
    base: float = 2.0
    exponent: float = 1.0
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if not (isfinite(self.scale) and self.scale > 0):
            message = f'Sequence scale must be positive, got {self.scale}.'
            raise ParameterError(message)
        if self.kind == SequenceKind.GEOMETRIC and not self.base > 1:
            message = f'Geometric base must be greater than 1, got {self.base}.'
            raise ParameterError(message)
        if self.kind == SequenceKind.POWER and not self.exponent > 0:
            message = f'Power exponent must be positive, got {self.exponent}.'
            raise ParameterError(message)
        if self.kind == SequenceKind.TABLE and not self.values:
            message = 'Table sequence rule without values.'
            raise ParameterError(message)

    @property
    def is_relative(self) -> bool:
        """True if the rule needs a reference value.
        """
        return self.kind in _RELATIVE_KINDS

    def value(self, n: int, reference: Optional[float] = None) -> float:
        """Evaluates the rule at the 1-based index n.

        Raises:
            ParameterError: If n is out of range of a table, or if a relative
                            rule is evaluated without reference.
        """
        if n < 1:
            message = f'Sequence index must be positive, got {n}.'
            raise ParameterError(message)
        if self.is_relative and reference is None:
            message = f'Sequence rule {self.kind.value} needs a reference value.'
            raise ParameterError(message)
        if self.kind == SequenceKind.GEOMETRIC:
            return self.scale * self.base ** -n
        if self.kind == SequenceKind.POWER:
            return self.scale * n ** -self.exponent
        if self.kind == SequenceKind.TABLE:
            if n > len(self.values):
                message = f'Table sequence has {len(self.values)} values, index {n} requested.'
                raise ParameterError(message)
            return self.scale * self.values[n - 1]
        if self.kind == SequenceKind.CONST:
            return self.scale
        if self.kind == SequenceKind.S_ODD:
            return self.scale * reference
        if self.kind == SequenceKind.LINEAR:
            return self.scale * n * reference
        return self.scale * sqrt(reference)

    def to_json(self) -> Dict[str, Any]:
        """Returns the JSON form {"rule": name, ...} of this rule.
        """
        result: Dict[str, Any] = {'rule': self.kind.value, 'scale': self.scale}
        if self.kind == SequenceKind.GEOMETRIC:
            result['base'] = self.base
        elif self.kind == SequenceKind.POWER:
            result['exponent'] = self.exponent
        elif self.kind == SequenceKind.TABLE:
            result['values'] = list(self.values)
        return result


_NUMBER = r'(\d+(?:\.\d*)?|\.\d+)'


def parse_sequence_rule(spec: Union[str, Mapping[str, Any], SequenceRule]) -> SequenceRule:
    """Parses the text form ("2^-n", "4^-n", "n^-2", "s", "2s", "ns", "sqrt",
    "0.5") or the JSON form {"rule": name, ...} of a sequence rule.

    Raises:
        ParameterError: If the given specification cannot be parsed.
    """
    if isinstance(spec, SequenceRule):
        return spec
    if isinstance(spec, Mapping):
        return _read_sequence_rule(spec)
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return SequenceRule(SequenceKind.CONST, scale=float(spec))
    text = str(spec).replace(' ', '').lower()
    match = re.fullmatch(_NUMBER + r'\^-n', text)
    if match:
        return SequenceRule(SequenceKind.GEOMETRIC, base=float(match.group(1)))
    match = re.fullmatch(r'n\^-' + _NUMBER, text)
    if match:
        return SequenceRule(SequenceKind.POWER, exponent=float(match.group(1)))
    match = re.fullmatch(_NUMBER + r'?\*?s', text)
    if match:
        return SequenceRule(SequenceKind.S_ODD, scale=float(match.group(1) or 1.0))
    match = re.fullmatch(_NUMBER + r'?\*?ns', text)
    if match:
        return SequenceRule(SequenceKind.LINEAR, scale=float(match.group(1) or 1.0))
    match = re.fullmatch(_NUMBER + r'?\*?sqrt(?:\(s\))?', text)
    if match:
        return SequenceRule(SequenceKind.SQRT, scale=float(match.group(1) or 1.0))
    match = re.fullmatch(_NUMBER, text)
    if match:
        return SequenceRule(SequenceKind.CONST, scale=float(match.group(1)))
    message = f'Cannot parse sequence rule "{spec}".'
    raise ParameterError(message)


def _read_sequence_rule(json_data: Mapping[str, Any]) -> SequenceRule:
    if 'rule' not in json_data:
        raise ParameterError('Sequence rule without "rule" attribute.')
    try:
        kind = SequenceKind(json_data['rule'])
    except ValueError:
        message = f'Unknown sequence rule: {json_data["rule"]}.'
        raise ParameterError(message)
    try:
        return SequenceRule(
            kind,
            scale=float(json_data.get('scale', 1.0)),
            base=float(json_data.get('base', 2.0)),
            exponent=float(json_data.get('exponent', 1.0)),
            values=tuple(float(value) for value in json_data.get('values', ())))
    except (TypeError, ValueError) as error:
        if isinstance(error, ParameterError):
            raise
        message = f'Invalid sequence rule {dict(json_data)}: {error}.'
        raise ParameterError(message)


def _decreasing_sequence(rule: SequenceRule, count: int, name: str) -> np.ndarray:
    values = np.array([rule.value(n) for n in range(1, count + 1)], dtype=float)
    if np.any(values <= 0) or np.any(values >= 1):
        message = f'Sequence {name} must take values in (0, 1).'
        raise ParameterError(message)
    if np.any(np.diff(values) >= 0):
        message = f'Sequence {name} must be strictly decreasing.'
        raise ParameterError(message)
    return values


# ---------------------------------------------------------------------------
# galleries
# ---------------------------------------------------------------------------

@unique
class GalleryKind(Enum):
    """Enumeration of the constructed sets of the gallery.
    """
    BAD_ARC = 'bad-arc'
    CANTOR_SQUARES = 'cantor-squares'
    DENTED_SQUARE = 'dented-square'
    RSA_DISC = 'rsa-disc'
    CROSSED_SQUARE = 'crossed-square'
    SUPERMAN = 'superman'
    DISC_DELETION = 'disc-deletion'
    FATTENED_TRIANGLE_ARC = 'fattened-triangle-arc'
    TRIANGLE_ARC = 'triangle-arc'
    KOCH_ARC = 'koch-arc'


_DEFAULT_TRIANGLE_Y = {'rule': 'power', 'scale': 0.5, 'exponent': 1.0}

_PARAM_DEFAULTS: Dict[GalleryKind, Dict[str, Any]] = {
    GalleryKind.BAD_ARC: {},
    GalleryKind.CANTOR_SQUARES: {},
    GalleryKind.DENTED_SQUARE: {'r': 's', 's': '2^-n'},
    GalleryKind.RSA_DISC: {'chords': DEFAULT_CHORDS_PER_QUARTER},
    GalleryKind.CROSSED_SQUARE: {'y': '2^-n'},
    GalleryKind.SUPERMAN: {'y': _DEFAULT_TRIANGLE_Y, 'fatness': 0.2},
    GalleryKind.DISC_DELETION: {'discs': None, 'chords': DEFAULT_CHORDS_PER_QUARTER},
    GalleryKind.FATTENED_TRIANGLE_ARC: {'y': _DEFAULT_TRIANGLE_Y, 'fatness': 0.25},
    GalleryKind.TRIANGLE_ARC: {'y': _DEFAULT_TRIANGLE_Y},
    GalleryKind.KOCH_ARC: {},
}


@dataclass(frozen=True)
class Gallery:
    """Immutable structure representing a parametrized gallery construction
    truncated at the given depth.

    The parameters are kept in their JSON form (sequence rules as text or as
    {"rule": ...} objects), so a gallery round-trips through JSON unchanged.
    For the Koch arc, the depth is the refinement level.
    """
    kind: GalleryKind
    params: Dict[str, Any] = field(default_factory=dict, hash=False)
    depth: int = 1

    def __post_init__(self):
        if isinstance(self.depth, bool) or not isinstance(self.depth, int) or self.depth < 1:
            message = f'Gallery depth must be a positive integer, got {self.depth}.'
            raise ParameterError(message)
        unknown = set(self.params) - set(_PARAM_DEFAULTS[self.kind])
        if unknown:
            message = f'Unknown parameters for {self.kind.value}: {", ".join(sorted(unknown))}.'
            raise ParameterError(message)

    def param(self, name: str) -> Any:
        """Returns the given parameter, or its default value.
        """
        return self.params.get(name, _PARAM_DEFAULTS[self.kind][name])

    def with_depth(self, depth: int) -> 'Gallery':
        """Returns the same construction truncated at another depth.
        """
        return Gallery(self.kind, dict(self.params), depth)

    def materialize(self) -> MaterializedSet:
        """Materializes this gallery construction.
        """
        return materialize(self.kind, self.params, self.depth)


PlaneSet = Union[Region, Skeleton, Compound, Gallery]


def resolve(plane_set: PlaneSet) -> MaterializedSet:
    """Materializes the given set if it is a gallery construction; other sets
    are returned as they are.
    """
    if isinstance(plane_set, Gallery):
        return plane_set.materialize()
    return plane_set


def materialize(kind: GalleryKind, params: Optional[Mapping[str, Any]], depth: int) -> MaterializedSet:
    """Materializes the finite-depth truncation of a gallery construction.

    Args:
        kind (GalleryKind): The construction to be materialized.
        params (Mapping):   Construction parameters in JSON form; missing
                            parameters take their defaults.
        depth (int):        The truncation depth N >= 1.

    Raises:
        ParameterError: If the parameters are invalid (for instance a
                        sequence s that is not strictly decreasing).

    Returns:
        MaterializedSet: A Region, Skeleton or Compound holding all features
                         with index n <= N plus the limit points.
    """
    gallery = Gallery(kind, dict(params or {}), depth)
    builder = _MATERIALIZERS[kind]
    result = builder(gallery)
    logger.debug('Materialized %s at depth %d: %s with %d vertices', kind.value, depth,
                 type(result).__name__, len(result.vertices))
    return result


def bad_arc_exact_vertices(n: int) -> Tuple[Tuple[Fraction, Fraction], ...]:
    """Returns the exact vertices z_n, w_n, w'_n, z'_n, z_{n+1} of the n-th
    piece J_n of the bad arc, as pairs of rational coordinates.
    """
    if n < 1:
        message = f'Piece index must be positive, got {n}.'
        raise ParameterError(message)
    x = Fraction(1, 2 ** n)
    shift = Fraction(1, 2 ** (3 * n))
    zero = Fraction(0)
    return ((x, zero), (x, x), (x - shift, x), (x - shift, zero), (x / 2, zero))


def _complex_of(vertex: Tuple[Fraction, Fraction]) -> complex:
    return complex(float(vertex[0]), float(vertex[1]))


def _bad_arc_path(depth: int) -> PolyPath:
    vertices = []
    for n in range(1, depth + 1):
        vertices.extend(_complex_of(vertex) for vertex in bad_arc_exact_vertices(n)[:4])
    vertices.append(_complex_of(bad_arc_exact_vertices(depth)[4]))
    vertices.append(0j)
    return PolyPath(vertices)


def _materialize_bad_arc(gallery: Gallery) -> MaterializedSet:
    return Skeleton((_bad_arc_path(gallery.depth),))


def _bad_arc_level(n: int) -> Fraction:
    return Fraction(1, n * 2 ** n)


def bad_arc_function(depth: int) -> Tuple[FunctionExpr, FunctionExpr]:
    """Returns the function f on the bad arc truncated at the given depth,
    together with its derivative along the arc.

    With c_n = 2**-n / n, f equals c_{n+1} on J_n, except on the vertical
    segment from z_n to w_n, where f = a + b cos(2**n pi y) with
    a = (c_n + c_{n+1}) / 2 and b = (c_n - c_{n+1}) / 2. On the closing
    segment from z_{N+1} to 0, f is linear with f(0) = 0.
    """
    path = _bad_arc_path(depth)
    pieces: List[FunctionExpr] = []
    derivatives: List[FunctionExpr] = []
    for n in range(1, depth + 1):
        current, following = _bad_arc_level(n), _bad_arc_level(n + 1)
        cosine = CosY((current + following) / 2, (current - following) / 2, Fraction(2 ** n), Fraction(0))
        pieces.append(cosine)
        derivatives.append(cosine.derivative())
        for _ in range(3):
            pieces.append(Const(following))
            derivatives.append(Const(Fraction(0)))
    last = _bad_arc_level(depth + 1)
    slope = last * 2 ** (depth + 1)
    pieces.append(Poly((Fraction(0), slope)))
    derivatives.append(Const(slope))
    breaks = tuple(float(s) for s in path.cumlen[:-1])
    return Piecewise(path, breaks, tuple(pieces)), Piecewise(path, breaks, tuple(derivatives))


def bad_arc_quotient_exact(n: int) -> Fraction:
    """Returns the Lipschitz quotient |f(z_n) - f(z'_n)| / |z_n - z'_n| of
    the bad-arc function, computed in exact rational arithmetic.
    """
    f, _ = bad_arc_function(n)
    z_n, _, _, z_prime, _ = bad_arc_exact_vertices(n)
    value_re, value_im = evaluate_exact(f, *z_n)
    other_re, other_im = evaluate_exact(f, *z_prime)
    numerator = exact_modulus(value_re - other_re, value_im - other_im)
    denominator = exact_modulus(z_n[0] - z_prime[0], z_n[1] - z_prime[1])
    return numerator / denominator


def cantor_intervals(depth: int) -> List[Tuple[int, Fraction, Fraction]]:
    """Returns the complementary open intervals of the Cantor set with level
    at most depth, as (level, start, end) sorted by start.
    """
    remaining = [(Fraction(0), Fraction(1))]
    result = []
    for level in range(1, depth + 1):
        refined = []
        for start, end in remaining:
            third = (end - start) / 3
            result.append((level, start + third, end - third))
            refined.append((start, start + third))
            refined.append((end - third, end))
        remaining = refined
    return sorted(result, key=lambda interval: interval[1])


def _materialize_cantor_squares(gallery: Gallery) -> MaterializedSet:
    intervals = cantor_intervals(gallery.depth)
    base = [0.0]
    squares = []
    for _, start, end in intervals:
        a, b, side = float(start), float(end), float(end - start)
        base.extend((a, b))
        squares.append(Region.of([complex(a, 0), complex(b, 0), complex(b, side), complex(a, side)]))
    base.append(1.0)
    interval = Skeleton((PolyPath([complex(x, 0) for x in base]),))
    return Compound((interval,) + tuple(squares))


def _dent_sequences(gallery: Gallery) -> Tuple[np.ndarray, np.ndarray]:
    depth = gallery.depth
    s_rule = parse_sequence_rule(gallery.param('s'))
    r_rule = parse_sequence_rule(gallery.param('r'))
    if s_rule.is_relative:
        message = 'Sequence s of the dented square cannot be relative.'
        raise ParameterError(message)
    s = _decreasing_sequence(s_rule, 2 * depth, 's')
    r = np.array([r_rule.value(n, s[2 * n - 2]) for n in range(1, depth + 1)], dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        message = 'Dent depths r_n must be positive.'
        raise ParameterError(message)
    return np.minimum(r, DEPTH_R_CAP), s


def dented_square_sequences(gallery: Gallery) -> Tuple[np.ndarray, np.ndarray]:
    """Returns the dent depths r_1..r_N (capped below 1) and the heights
    s_1..s_2N of a dented square construction.
    """
    if gallery.kind != GalleryKind.DENTED_SQUARE:
        message = f'Expected a dented square, got {gallery.kind.value}.'
        raise ParameterError(message)
    return _dent_sequences(gallery)


def _materialize_dented_square(gallery: Gallery) -> MaterializedSet:
    r, s = _dent_sequences(gallery)
    outer = [0j, 1 + 0j, 1 + 1j, 1j]
    for n in range(1, gallery.depth + 1):
        top, bottom, depth = s[2 * n - 2], s[2 * n - 1], r[n - 1]
        outer.extend((complex(0, top), complex(depth, top), complex(depth, bottom), complex(0, bottom)))
    return Region.of(outer)


def rsa_parameters(n: int) -> Tuple[float, complex, complex, complex]:
    """Returns r_n, w_n, z_n and a_n of the radially self-absorbing disc.
    """
    r_n = 1 / (4 * sqrt(n))
    alpha_n, alpha_next = np.pi / (4 * n * n), np.pi / (4 * (n + 1) ** 2)
    beta_n = (alpha_n + alpha_next) / 2
    w_n = complex(np.exp(1j * alpha_n))
    z_n = complex((1 - 2 * r_n) * np.exp(1j * beta_n))
    a_n = complex((1 - r_n) * np.exp(1j * beta_n))
    return r_n, w_n, z_n, a_n


def _materialize_rsa_disc(gallery: Gallery) -> MaterializedSet:
    depth, chords = gallery.depth, _positive_int(gallery.param('chords'), 'chords')
    alpha_first = np.pi / 4
    alpha_last = np.pi / (4 * (depth + 1) ** 2)
    upper = polyline_arc(0j, 1.0, alpha_first, 2 * np.pi, chords)
    lower = polyline_arc(0j, 1.0, 0.0, alpha_last, chords)
    outer = [rsa_parameters(1)[1]] + list(upper[1:-1]) + [1 + 0j] + list(lower[1:-1])
    outer.append(rsa_parameters(depth + 1)[1])
    for n in range(depth, 0, -1):
        _, w_n, z_n, _ = rsa_parameters(n)
        outer.append(z_n)
        if n > 1:
            outer.append(w_n)
    return Region.of(outer)


def _materialize_crossed_square(gallery: Gallery) -> MaterializedSet:
    y = _decreasing_sequence(parse_sequence_rule(gallery.param('y')), gallery.depth, 'y')
    heights = [0.0] + sorted(float(value) for value in y) + [1.0]
    left = PolyPath([complex(0, h) for h in heights])
    right = PolyPath([complex(1, h) for h in heights])
    crossings = tuple(PolyPath([complex(0, h), complex(1, h)]) for h in heights)
    return Skeleton((left, right) + crossings)


def _positive_int(value: Any, name: str) -> int:
    try:
        result = int(value)
    except (TypeError, ValueError):
        result = 0
    if result < 1:
        message = f'Parameter {name} must be a positive integer, got {value}.'
        raise ParameterError(message)
    return result


def _positive_float(value: Any, name: str, upper: float) -> float:
    try:
        result = float(value)
    except (TypeError, ValueError):
        result = float('nan')
    if not 0 < result < upper:
        message = f'Parameter {name} must lie in (0, {upper}), got {value}.'
        raise ParameterError(message)
    return result


def disc_deletion_discs(gallery: Gallery) -> Tuple[Tuple[complex, float], ...]:
    """Returns the deleted open discs (center, radius); by default the n-th
    disc has center 1 - 1.5 * 2**-n and radius 2**-n / 4.
    """
    discs = gallery.param('discs')
    if discs is None:
        return tuple((complex(1 - 1.5 * 2.0 ** -n, 0), 2.0 ** -n / 4) for n in range(1, gallery.depth + 1))
    result = []
    for disc in discs:
        try:
            re_part, im_part, radius = (float(value) for value in disc)
        except (TypeError, ValueError):
            message = f'Disc must be given as [re, im, radius], got {disc}.'
            raise ParameterError(message)
        result.append((complex(re_part, im_part), radius))
    return tuple(result)


def _materialize_disc_deletion(gallery: Gallery) -> MaterializedSet:
    chords = _positive_int(gallery.param('chords'), 'chords')
    discs = disc_deletion_discs(gallery)
    for index, (center, radius) in enumerate(discs):
        if not (radius > 0 and abs(center) + radius < 1):
            message = f'Disc {index} must be a closed disc inside the open unit disc.'
            raise ParameterError(message)
        for other_center, other_radius in discs[:index]:
            if abs(center - other_center) <= radius + other_radius:
                message = f'Disc {index} intersects another deleted disc.'
                raise ParameterError(message)
    holes = [polyline_circle(center, radius, chords) for center, radius in discs]
    return Region.of(polyline_circle(0j, 1.0, chords), holes)


def _triangle_heights(gallery: Gallery) -> np.ndarray:
    y = _decreasing_sequence(parse_sequence_rule(gallery.param('y')), gallery.depth, 'y')
    return np.concatenate(([1.0], y))


def _side(k: int) -> int:
    return 1 if k % 2 == 0 else -1


def _triangle_arc_vertices(heights: np.ndarray) -> List[complex]:
    vertices = []
    for k in range(len(heights) - 1):
        height = heights[k]
        vertices.append(complex(_side(k) * height, height))
        vertices.append(complex(-_side(k) * height, height))
    last = heights[-1]
    vertices.append(complex(_side(len(heights) - 1) * last, last))
    vertices.append(0j)
    return vertices


def _materialize_triangle_arc(gallery: Gallery) -> MaterializedSet:
    return Skeleton((PolyPath(_triangle_arc_vertices(_triangle_heights(gallery))),))


def _materialize_fattened_triangle_arc(gallery: Gallery) -> MaterializedSet:
    heights = _triangle_heights(gallery)
    fatness = _positive_float(gallery.param('fatness'), 'fatness', 1.0)
    parts: List[Union[Region, Skeleton]] = []
    for k in range(len(heights) - 1):
        top, following = heights[k], heights[k + 1]
        bottom = top - fatness * (top - following)
        parts.append(Region.of([complex(-bottom, bottom), complex(bottom, bottom),
                                complex(top, top), complex(-top, top)]))
        side = -_side(k)
        run = [complex(side * bottom, bottom), complex(side * following, following)]
        if k == len(heights) - 2:
            run.append(0j)
        parts.append(Skeleton((PolyPath(run),)))
    return Compound(tuple(parts))


def _materialize_superman(gallery: Gallery) -> MaterializedSet:
    heights = _triangle_heights(gallery)
    fatness = _positive_float(gallery.param('fatness'), 'fatness', 0.5)
    vertices = _triangle_arc_vertices(heights)
    pieces = []
    for index, (start, end) in enumerate(zip(vertices, vertices[1:])):
        k = index // 2
        gap = heights[k] - heights[k + 1] if k + 1 < len(heights) else heights[-1]
        segment = LineString([(start.real, start.imag), (end.real, end.imag)])
        pieces.append(segment.buffer(fatness * gap / 2, quad_segs=2))
    union = unary_union(pieces)
    if not isinstance(union, Polygon):
        message = 'Fattened arc does not form a single polygon.'
        raise ParameterError(message)
    return Region.from_polygon(union)


def _materialize_koch_arc(gallery: Gallery) -> MaterializedSet:
    return Skeleton((koch_arc(gallery.depth),))


_MATERIALIZERS = {
    GalleryKind.BAD_ARC: _materialize_bad_arc,
    GalleryKind.CANTOR_SQUARES: _materialize_cantor_squares,
    GalleryKind.DENTED_SQUARE: _materialize_dented_square,
    GalleryKind.RSA_DISC: _materialize_rsa_disc,
    GalleryKind.CROSSED_SQUARE: _materialize_crossed_square,
    GalleryKind.SUPERMAN: _materialize_superman,
    GalleryKind.DISC_DELETION: _materialize_disc_deletion,
    GalleryKind.FATTENED_TRIANGLE_ARC: _materialize_fattened_triangle_arc,
    GalleryKind.TRIANGLE_ARC: _materialize_triangle_arc,
    GalleryKind.KOCH_ARC: _materialize_koch_arc,
}


# ---------------------------------------------------------------------------
# witnesses and junctions
# ---------------------------------------------------------------------------

def gallery_centre(gallery: Gallery) -> complex:
    """Returns the point z0 at which the construction concentrates its
    features (the limit point of the witness sequence).
    """
    if gallery.kind == GalleryKind.RSA_DISC:
        return 1 + 0j
    if gallery.kind == GalleryKind.DISC_DELETION:
        discs = disc_deletion_discs(gallery)
        return 1 + 0j if gallery.param('discs') is None else discs[-1][0]
    if gallery.kind == GalleryKind.CROSSED_SQUARE:
        return 0.5 + 0j
    return 0j


def gallery_witnesses(gallery: Gallery) -> Tuple[complex, ...]:
    """Returns the construction points approaching the centre of the gallery
    at which irregularity is witnessed: dent corners i*s_{2n-1} (dented
    square), w_n (radially self-absorbing disc), 1/2 + i*y_n (crossed
    square), junctions v_n (triangle arcs), z_n (bad arc), 3**-n (Koch arc).
    """
    depth = gallery.depth
    kind = gallery.kind
    if kind == GalleryKind.DENTED_SQUARE:
        _, s = _dent_sequences(gallery)
        return tuple(complex(0, s[2 * n - 2]) for n in range(1, depth + 1))
    if kind == GalleryKind.RSA_DISC:
        return tuple(rsa_parameters(n)[1] for n in range(1, depth + 1))
    if kind == GalleryKind.CROSSED_SQUARE:
        y = _decreasing_sequence(parse_sequence_rule(gallery.param('y')), depth, 'y')
        return tuple(complex(0.5, value) for value in y)
    if kind in (GalleryKind.TRIANGLE_ARC, GalleryKind.FATTENED_TRIANGLE_ARC, GalleryKind.SUPERMAN):
        return blodge_vertices(gallery)
    if kind == GalleryKind.BAD_ARC:
        return tuple(_complex_of(bad_arc_exact_vertices(n)[0]) for n in range(1, depth + 1))
    if kind == GalleryKind.KOCH_ARC:
        return tuple(complex(3.0 ** -n, 0) for n in range(0, depth + 1))
    if kind == GalleryKind.DISC_DELETION:
        return tuple(center + 1.5j * radius for center, radius in disc_deletion_discs(gallery))
    return tuple(complex((start + end) / 2, 0) for _, start, end in cantor_intervals(depth))


def blodge_vertices(gallery: Gallery) -> Tuple[complex, ...]:
    """Returns the junction points v_1..v_N of consecutive blocks of a
    triangle arc construction; v_n lies on the triangle edge at height y_n.
    """
    if gallery.kind not in (GalleryKind.TRIANGLE_ARC, GalleryKind.FATTENED_TRIANGLE_ARC, GalleryKind.SUPERMAN):
        message = f'Construction {gallery.kind.value} has no block junctions.'
        raise ParameterError(message)
    heights = _triangle_heights(gallery)
    return tuple(complex(_side(k) * heights[k], heights[k]) for k in range(1, len(heights)))


def blodge_blocks(gallery: Gallery) -> Tuple[MaterializedSet, ...]:
    """Returns the blocks B_0..B_N of a triangle arc construction, block k
    ending in the junction v_{k+1} where block k + 1 starts. The first block
    starts at the top corner 1 + i, the last one is the segment from v_N to
    0 standing in for the blocks beyond the truncation.

    For the Jordan arc the blocks are the subarcs between consecutive
    junctions; for the fattened arc a block is a fattened crossing together
    with the edge run down to the next junction.

    Raises:
        ParameterError: If the construction is neither a triangle arc nor a
                        fattened triangle arc.
    """
    if gallery.kind == GalleryKind.TRIANGLE_ARC:
        arc = gallery.materialize().arcs[0]
        cuts = [int(np.flatnonzero(arc.points == v)[0]) for v in blodge_vertices(gallery)]
        cuts = [0] + cuts + [arc.segment_count]
        return tuple(Skeleton((PolyPath(arc.points[first:second + 1]),)) for first, second in zip(cuts, cuts[1:]))
    if gallery.kind == GalleryKind.FATTENED_TRIANGLE_ARC:
        parts = gallery.materialize().parts
        blocks: List[MaterializedSet] = [Compound((region, run)) for region, run in zip(parts[0::2], parts[1::2])]
        tail = parts[-1].arcs[0].points
        blocks[-1] = Compound((parts[-2], Skeleton((PolyPath(tail[:2]),))))
        blocks.append(Skeleton((PolyPath(tail[1:]),)))
        return tuple(blocks)
    message = f'Construction {gallery.kind.value} is not split into blocks.'
    raise ParameterError(message)


# ---------------------------------------------------------------------------
# set operations
# ---------------------------------------------------------------------------

def contains(plane_set: PlaneSet, p: PointLike, tol: float = 1e-9) -> bool:
    """Verifies whether the given point belongs to the given set, up to the
    given distance tolerance (point-in-polygon with holes for regions,
    distance to the arcs for skeletons).
    """
    if tol < 0:
        message = f'Tolerance must be non-negative, got {tol}.'
        raise ParameterError(message)
    z = as_complex(p)
    geometry = resolve(plane_set).geometry
    point = ShapelyPoint(z.real, z.imag)
    if tol == 0:
        return bool(shapely.intersects(geometry, point))
    return bool(shapely.dwithin(geometry, point, tol))


def require_member(plane_set: MaterializedSet, p: PointLike, tol: float = 1e-9) -> complex:
    """Returns the given point as a complex number.

    Raises:
        DomainError: If the point does not belong to the set.
    """
    z = as_complex(p)
    if not contains(plane_set, z, tol):
        message = f'Point {z} does not belong to the set.'
        raise DomainError(message, point=z)
    return z


def _filled(geometry):
    if isinstance(geometry, Polygon):
        return Polygon(geometry.exterior)
    return unary_union([Polygon(polygon.exterior) for polygon in geometry.geoms])


def hull(plane_set: PlaneSet) -> MaterializedSet:
    """Returns the polygonal version of the polynomially convex hull: holes
    of regions are removed and faces enclosed by skeleton arcs are filled.

    Arcs that do not bound a face are kept as skeleton parts. The operation
    is idempotent; sets without holes or enclosed faces are returned as they
    are.
    """
    materialized = resolve(plane_set)
    if isinstance(materialized, Region):
        return materialized if not materialized.holes else Region(materialized.outer)
    parts = materialized.parts if isinstance(materialized, Compound) else (materialized,)
    regions = [part for part in parts if isinstance(part, Region)]
    arcs = [arc for part in parts if isinstance(part, Skeleton) for arc in part.arcs]
    linework = unary_union([LineString(_coords(arc.points)) for arc in arcs]) if arcs else None
    faces = list(polygonize(linework)) if linework is not None else []
    if not faces and all(not region.holes for region in regions):
        return materialized
    filled = _filled(unary_union([region.polygon for region in regions] + faces))
    polygons = [filled] if isinstance(filled, Polygon) else list(filled.geoms)
    covering = filled.buffer(1e-12 * max(1.0, _extent(filled)))
    dangling = [arc for arc in arcs if not covering.covers(LineString(_coords(arc.points)))]
    new_parts: List[Union[Region, Skeleton]] = [Region.from_polygon(polygon) for polygon in polygons]
    if dangling:
        new_parts.append(Skeleton(tuple(dangling)))
    if len(new_parts) == 1:
        return new_parts[0]
    logger.debug('Hull keeps %d dangling arcs', len(dangling))
    return Compound(tuple(new_parts))


def _extent(geometry) -> float:
    min_x, min_y, max_x, max_y = geometry.bounds
    return max(max_x - min_x, max_y - min_y)


def extent(plane_set: PlaneSet) -> float:
    """Returns the larger side of the bounding box of the given set.
    """
    return _extent(resolve(plane_set).geometry)


def sample_set(plane_set: PlaneSet, budget: int = 256, seed: int = 0) -> np.ndarray:
    """Returns sample points of the given set: all construction vertices plus
    (at most) budget quasi-uniform samples of region interiors and arcs.

    The samples are reproducible for a fixed seed.
    """
    materialized = resolve(plane_set)
    rng = np.random.default_rng(seed)
    parts = materialized.parts if isinstance(materialized, Compound) else (materialized,)
    per_part = max(1, budget // len(parts)) if budget > 0 else 0
    samples = [np.array(materialized.vertices, dtype=complex)]
    for part in parts:
        if per_part == 0:
            break
        if isinstance(part, Region):
            samples.append(_sample_region(part, per_part, rng))
        else:
            samples.append(_sample_skeleton(part, per_part))
    return np.concatenate(samples)


def _sample_region(region: Region, count: int, rng) -> np.ndarray:
    min_x, min_y, max_x, max_y = region.polygon.bounds
    prepared = region.polygon
    shapely.prepare(prepared)
    result = np.empty(0, dtype=complex)
    for _ in range(20):
        x = rng.uniform(min_x, max_x, 4 * count)
        y = rng.uniform(min_y, max_y, 4 * count)
        inside = shapely.contains_xy(prepared, x, y)
        result = np.concatenate((result, x[inside] + 1j * y[inside]))
        if len(result) >= count:
            break
    return result[:count]


def _sample_skeleton(skeleton: Skeleton, count: int) -> np.ndarray:
    total = skeleton.length
    result = []
    for arc in skeleton.arcs:
        share = max(1, int(round(count * arc.length / total)))
        s = (np.arange(share) + 0.5) * arc.length / share
        result.append(np.atleast_1d(ArcLengthParam(arc)(s)))
    return np.concatenate(result)[:max(count, 1)]


# ---------------------------------------------------------------------------
# Cantor function
# ---------------------------------------------------------------------------

def cantor_function(x: Union[float, int, Fraction]) -> Union[float, Fraction]:
    """Evaluates the Cantor function g on [0, 1].

    The ternary digits of x are mapped to binary digits (2 -> 1) up to the
    first digit 1, which contributes its binary weight and terminates the
    expansion. Rational input (int or Fraction) is processed exactly, the
    periodic tail being summed as a geometric series; float input is
    expanded to 64 ternary digits.

    Raises:
        DomainError: If x lies outside [0, 1].

    Returns:
        Fraction for rational input, float otherwise.
    """
    exact = isinstance(x, (int, Fraction)) and not isinstance(x, bool)
    try:
        value = Fraction(x)
    except (TypeError, ValueError, OverflowError):
        message = f'Cantor function is defined on [0, 1], got {x}.'
        raise DomainError(message)
    if not 0 <= value <= 1:
        message = f'Cantor function is defined on [0, 1], got {x}.'
        raise DomainError(message, point=complex(float(value), 0))
    result = _cantor_exact(value) if exact else _cantor_digits(value, _CANTOR_FLOAT_DIGITS)
    return result if exact else float(result)


def _cantor_exact(value: Fraction) -> Fraction:
    if value == 1:
        return Fraction(1)
    seen: Dict[Fraction, int] = {}
    bits: List[int] = []
    remainder = value
    while remainder not in seen:
        seen[remainder] = len(bits)
        remainder *= 3
        digit = int(remainder)
        remainder -= digit
        if digit == 1:
            return _binary_value(bits) + Fraction(1, 2 ** (len(bits) + 1))
        bits.append(digit // 2)
    start = seen[remainder]
    period = len(bits) - start
    prefix = _binary_value(bits[:start])
    # block of length period repeating from position start + 1 on
    cycle = _binary_value(bits[start:]) / 2 ** start
    return prefix + cycle * Fraction(2 ** period, 2 ** period - 1)


def _binary_value(bits: Sequence[int]) -> Fraction:
    result = Fraction(0)
    for position, bit in enumerate(bits, start=1):
        if bit:
            result += Fraction(1, 2 ** position)
    return result


def _cantor_digits(value: Fraction, digits: int) -> Fraction:
    if value == 1:
        return Fraction(1)
    result = Fraction(0)
    remainder = value
    for position in range(1, digits + 1):
        remainder *= 3
        digit = int(remainder)
        remainder -= digit
        if digit == 1:
            return result + Fraction(1, 2 ** position)
        if digit == 2:
            result += Fraction(1, 2 ** position)
    return result


def cantor_function_array(x: np.ndarray, digits: int = 40) -> np.ndarray:
    """Vectorized float version of :func: cantor_function; values are
    clipped to [0, 1].
    """
    remainder = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    result = np.zeros_like(remainder)
    active = remainder < 1.0
    result[~active] = 1.0
    weight = 0.5
    for _ in range(digits):
        remainder = remainder * 3
        digit = np.floor(remainder)
        remainder = remainder - digit
        result = np.where(active & (digit >= 1), result + weight, result)
        active = active & (digit != 1)
        weight /= 2
    return result
