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

"""This module provides lower bounds of the quasiconvexity quotients of plane
sets, built from explicit test functions with a controlled derivative, and
the completeness report combining them.

Three families of test functions are supported:

* branches of z**(1 + i) behind a half-line missing the set (dents),
* bump functions constructed along Jordan polylines (arcs),
* chains of such bumps along long arcs, including the blodge series.

Every bound is a finite-depth certificate; divergence of a whole family is
decided by the shared slope rule of :mod: planelib.util.
"""

from collections import Counter
from dataclasses import dataclass, field, replace
from logging import getLogger
from math import exp, pi, sqrt
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from shapely.geometry import LineString

from planelib.errors import ConstructionError, DomainError, InsufficientLengthError, ParameterError
from planelib.errors import PlaneSetError, PreconditionError
from planelib.funcexpr import Affine, Const, FunctionExpr, PPow, Piecewise, mul, polynomial, zpow
from planelib.geodesic import RegularityReport, regularity_at, star_centre
from planelib.geom import PointLike, PolyPath, as_complex, as_complex_array, project, subpath
from planelib.planeset import Compound, Gallery, GalleryKind, MaterializedSet, PlaneSet, Region, Skeleton
from planelib.planeset import blodge_blocks, blodge_vertices, contains, dented_square_sequences, extent
from planelib.planeset import gallery_centre, gallery_witnesses, hull, resolve, rsa_parameters, sample_set
from planelib.util import SlopeFit, SlopeRule


logger = getLogger(__name__)


C_Q = 1 / (sqrt(2) * exp(pi))

C_Q_PRIME = 1 / sqrt(2)

ARC_DERIVATIVE_BOUND = 3.0

INCOMPLETE = 'incomplete-certified'

NO_DIVERGENCE = 'no-divergence-found'

INCONCLUSIVE = 'inconclusive'

_ZPOW_DERIVATIVE_BOUND = sqrt(2) * exp(pi)

_ARC_SPLIT_RATIO = 0.01

_NEARBY_SAMPLES = 24

_F = zpow(1 + 1j)


@dataclass(frozen=True)
class TestConstants:
    """Constants of the lower bound C_Q |z| / |z - w| - C'_Q, valid for z in
    the open second quadrant and w in the open third quadrant.

    The defaults follow from |F(z) - F(w)| >= |z| - e**pi |z - w| and
    |F'| <= sqrt(2) e**pi for F(z) = z**(1 + i) on the cut plane.
    """
    __test__ = False

    c_q: float = C_Q
    c_q_prime: float = C_Q_PRIME


TEST_CONSTANTS = TestConstants()


def _in_second_quadrant(z: complex) -> bool:
    return z.real < 0 < z.imag


def _in_third_quadrant(z: complex) -> bool:
    return z.real < 0 and z.imag < 0


def _tolerance(materialized: MaterializedSet) -> float:
    return 1e-9 * max(1.0, extent(materialized))


# ---------------------------------------------------------------------------
# z**(1 + i) and half-lines
# ---------------------------------------------------------------------------

def zpow_direct_quotient(z: PointLike, w: PointLike) -> float:
    """Returns |F(z) - F(w)| / (sqrt(2) e**pi |z - w|) for F(z) = z**(1 + i),
    i.e. the Lipschitz quotient of a test function whose derivative is at
    most 1 in modulus on the plane cut along the negative real axis.

    Raises:
        DomainError: If z = w, or if a point lies on the closed negative
                     real axis.
    """
    z, w = as_complex(z), as_complex(w)
    if z == w:
        message = f'Quotient undefined for coinciding points {z}.'
        raise DomainError(message, point=z)
    values = _F(np.array([z, w]))
    return float(abs(values[0] - values[1]) / (_ZPOW_DERIVATIVE_BOUND * abs(z - w)))


def zpow_bound(z: PointLike, w: PointLike, constants: TestConstants = TEST_CONSTANTS) -> float:
    """Returns the certified lower bound max(0, C_Q |z| / |z - w| - C'_Q) of
    the quasiconvexity quotient at z.

    The points are expected on opposite sides of the negative real axis: z
    in the open second quadrant and w in the open third one, or the other
    way round (the configuration is then conjugated).

    Raises:
        PreconditionError: If the points are not in that configuration.
    """
    z, w = as_complex(z), as_complex(w)
    if _in_third_quadrant(z) and _in_second_quadrant(w):
        z, w = z.conjugate(), w.conjugate()
    if not (_in_second_quadrant(z) and _in_third_quadrant(w)):
        message = (f'Expected z in the open second quadrant and w in the open third quadrant, '
                   f'got z = {z}, w = {w}.')
        raise PreconditionError(message)
    return max(0.0, constants.c_q * abs(z) / abs(z - w) - constants.c_q_prime)


def _unit(direction: PointLike) -> complex:
    direction = as_complex(direction)
    if direction == 0 or not np.isfinite(direction):
        message = f'Half-line direction must be a finite non-zero vector, got {direction}.'
        raise ParameterError(message)
    return direction / abs(direction)


def _rotation(direction: PointLike) -> complex:
    # maps the direction onto the negative real axis
    return -_unit(direction).conjugate()


def normalize_halfline(z: PointLike, w: PointLike, a: PointLike, direction: PointLike) -> Tuple[complex, complex]:
    """Applies the rigid motion taking a to the origin and the half-line from
    a in the given direction onto the negative real axis; the images are
    reflected in the real axis if that brings z into the upper half-plane.

    Returns:
        Tuple[complex, complex]: The images of z and w.
    """
    z, w, a = as_complex(z), as_complex(w), as_complex(a)
    rotation = _rotation(direction)
    z_image, w_image = (z - a) * rotation, (w - a) * rotation
    if z_image.imag < 0:
        return z_image.conjugate(), w_image.conjugate()
    return z_image, w_image


def halfline_test_function(z: PointLike, a: PointLike, direction: PointLike) -> FunctionExpr:
    """Returns the test function F(q(p)) / (sqrt(2) e**pi) behind the
    half-line, q being the motion of :func: normalize_halfline (z**(1 - i)
    replaces F when the motion includes a reflection). The derivative of the
    function is at most 1 in modulus off the half-line.
    """
    a = as_complex(a)
    rotation = _rotation(direction)
    alpha = 1 - 1j if ((as_complex(z) - a) * rotation).imag < 0 else 1 + 1j
    return mul(Const(1 / _ZPOW_DERIVATIVE_BOUND), PPow(Affine(rotation, a), alpha))


@dataclass(frozen=True)
class DentItem:
    """Immutable structure representing one dent: the witness w in the set,
    the point a outside the set and the direction of the half-line from a
    that misses the set.
    """
    w: complex
    a: complex
    direction: complex

    def __post_init__(self):
        object.__setattr__(self, 'w', as_complex(self.w))
        object.__setattr__(self, 'a', as_complex(self.a))
        object.__setattr__(self, 'direction', _unit(self.direction))


@dataclass(frozen=True)
class DentSpec:
    """Immutable structure representing a sequence of dents approaching the
    point z0.
    """
    z0: complex
    items: Tuple[DentItem, ...]


def _halfline_reach(geometry, a: complex) -> float:
    min_x, min_y, max_x, max_y = geometry.bounds
    corners = (complex(min_x, min_y), complex(min_x, max_y), complex(max_x, min_y), complex(max_x, max_y))
    return 2 * max(abs(corner - a) for corner in corners) + 1


def _dent_problem(materialized: MaterializedSet, z0: complex, item: DentItem, tol: float) -> Optional[str]:
    """Describes why the dent violates the conditions of the half-line bound,
    or returns None for a valid dent.
    """
    geometry = materialized.geometry
    if contains(materialized, item.a, tol=0):
        return f'a = {item.a} belongs to the set'
    end = item.a + _halfline_reach(geometry, item.a) * item.direction
    ray = LineString([(item.a.real, item.a.imag), (end.real, end.imag)])
    if shapely.intersects(geometry, ray):
        return f'the half-line from {item.a} meets the set'
    for name, point in (('z0', z0), ('w', item.w)):
        if not contains(materialized, point, tol):
            return f'{name} = {point} does not belong to the set'
    z_image, w_image = normalize_halfline(z0, item.w, item.a, item.direction)
    if not (_in_second_quadrant(z_image) and _in_third_quadrant(w_image)):
        return f'z0 and w = {item.w} do not lie on opposite sides of the half-line from {item.a}'
    return None


def halfline_bound(plane_set: PlaneSet, z: PointLike, w: PointLike, a: PointLike, direction: PointLike,
                   constants: TestConstants = TEST_CONSTANTS) -> float:
    """Returns the lower bound of the quasiconvexity quotient at z witnessed
    by the branch of z**(1 + i) behind the half-line from a.

    Args:
        plane_set (PlaneSet):  The set.
        z (PointLike):         The point at which the quotient is bounded.
        w (PointLike):         The witness point of the set.
        a (PointLike):         The origin of the half-line; not in the set.
        direction (PointLike): The direction of the half-line.
        constants (TestConstants, optional): The constants of the bound.

    Raises:
        PreconditionError: If the half-line meets the set, a belongs to the
                           set, z or w does not, or z and w are not on
                           opposite sides of the half-line near a.

    Returns:
        float: The non-negative lower bound.
    """
    materialized = resolve(plane_set)
    z = as_complex(z)
    item = DentItem(w, a, direction)
    problem = _dent_problem(materialized, z, item, _tolerance(materialized))
    if problem is not None:
        message = f'Invalid half-line configuration: {problem}.'
        raise PreconditionError(message)
    z_image, w_image = normalize_halfline(z, item.w, item.a, item.direction)
    return zpow_bound(z_image, w_image, constants)


def gallery_dents(gallery: Gallery) -> Optional[DentSpec]:
    """Returns the dent sequence of the constructions built from dents (the
    dented square and the radially self-absorbing disc), None for the other
    constructions.
    """
    if gallery.kind == GalleryKind.RSA_DISC:
        items = []
        for n in range(1, gallery.depth + 1):
            _, w_n, _, a_n = rsa_parameters(n)
            items.append(DentItem(w_n, a_n, a_n))
        return DentSpec(1 + 0j, tuple(items))
    if gallery.kind == GalleryKind.DENTED_SQUARE:
        r, s = dented_square_sequences(gallery)
        items = []
        for n in range(1, gallery.depth + 1):
            top, bottom = s[2 * n - 2], s[2 * n - 1]
            items.append(DentItem(complex(0, top), complex(r[n - 1] / 2, (top + bottom) / 2), -1))
        return DentSpec(0j, tuple(items))
    return None


def find_dents(region: Region, z0: PointLike, budget: int = 256, seed: int = 0) -> DentSpec:
    """Searches the dents of a region that may witness incompleteness at z0.

    Every reflex vertex of the outer boundary spawns a candidate point a just
    outside the region on the exterior bisector, the half-line following the
    bisector. The witness w is the vertex or sample nearest to z0 among those
    lying on the other side of the half-line. Candidates violating the
    conditions of :func: halfline_bound are discarded.

    Returns:
        DentSpec: The valid dents, ordered by decreasing distance of the
                  witness from z0.
    """
    z0 = as_complex(z0)
    ring = region.rings[0]
    incoming = ring - np.roll(ring, 1)
    outgoing = np.roll(ring, -1) - ring
    reflex = np.nonzero((np.conj(incoming) * outgoing).imag < 0)[0]
    points = np.unique(np.concatenate((np.array(region.vertices, dtype=complex), sample_set(region, budget, seed))))
    tol = _tolerance(region)
    items = []
    for index in reflex:
        bisector = outgoing[index] / abs(outgoing[index]) - incoming[index] / abs(incoming[index])
        if abs(bisector) == 0:
            continue
        direction = bisector / abs(bisector)
        step = 1e-3 * min(abs(incoming[index]), abs(outgoing[index]))
        a = complex(ring[index] + step * direction)
        rotation = _rotation(direction)
        images = (points - a) * rotation
        if ((z0 - a) * rotation).imag < 0:
            images = np.conj(images)
        opposite = points[(images.real < 0) & (images.imag < 0)]
        if len(opposite) == 0:
            continue
        w = complex(opposite[np.argmin(np.abs(opposite - z0))])
        item = DentItem(w, a, direction)
        if _dent_problem(region, z0, item, tol) is None:
            items.append(item)
    items.sort(key=lambda item: -abs(item.w - z0))
    logger.debug('Found %d dents at %s among %d reflex vertices', len(items), z0, len(reflex))
    return DentSpec(z0, tuple(items))


@dataclass(frozen=True)
class LongDentsReport:
    """Immutable structure representing the half-line bounds of a dent
    sequence together with the ratios |z0 - a_n| / |z0 - w_n|.
    """
    bounds: Tuple[float, ...]
    ratios: Tuple[float, ...]
    fit: SlopeFit

    @property
    def verdict(self) -> str:
        return INCOMPLETE if self.fit.diverging else INCONCLUSIVE


def long_dents_verdict(plane_set: PlaneSet, dents: DentSpec, rule: SlopeRule = SlopeRule(),
                       constants: TestConstants = TEST_CONSTANTS) -> LongDentsReport:
    """Evaluates the half-line bound for every dent of the sequence and fits
    the bounds against the dent index.

    Raises:
        PreconditionError: If a dent violates the conditions of the bound.

    Returns:
        LongDentsReport: The bounds, the ratios and the verdict, which is
                         'incomplete-certified' if and only if the bounds
                         diverge.
    """
    materialized = resolve(plane_set)
    shapely.prepare(materialized.geometry)
    tol = _tolerance(materialized)
    bounds, ratios = [], []
    for index, item in enumerate(dents.items, start=1):
        problem = _dent_problem(materialized, dents.z0, item, tol)
        if problem is not None:
            message = f'Dent {index} is invalid: {problem}.'
            raise PreconditionError(message)
        z_image, w_image = normalize_halfline(dents.z0, item.w, item.a, item.direction)
        bounds.append(zpow_bound(z_image, w_image, constants))
        ratios.append(abs(dents.z0 - item.a) / abs(dents.z0 - item.w))
    fit = rule.fit(bounds, np.arange(1, len(bounds) + 1))
    logger.info('Long dents at %s: %d dents, largest bound %.6g, %s', dents.z0, len(bounds),
                max(bounds, default=0.0), fit.verdict)
    return LongDentsReport(tuple(bounds), tuple(ratios), fit)


# ---------------------------------------------------------------------------
# test functions along arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcTestFunction:
    """Immutable structure representing a test function constructed along a
    Jordan polyline from z0 to w0: f(z0) = start_value, f(w0) = start_value
    + gap, f' vanishes at both endpoints and |f'| <= derivative_bound on the
    polyline.
    """
    f: Piecewise
    fprime: FunctionExpr
    start_value: float
    gap: float
    derivative_bound: float = ARC_DERIVATIVE_BOUND

    @property
    def path(self) -> PolyPath:
        return self.f.path

    @property
    def end_value(self) -> float:
        return self.start_value + self.gap


def _coords(points: np.ndarray) -> np.ndarray:
    return np.column_stack((points.real, points.imag))


def _require_jordan(path: PolyPath) -> None:
    if path.start == path.end:
        message = f'Arc test function needs distinct endpoints, got a closed path at {path.start}.'
        raise ConstructionError(message)
    if not LineString(_coords(path.points)).is_simple:
        message = 'Arc test function needs a Jordan path.'
        raise ConstructionError(message)


def _first_exit(points: np.ndarray, cumlen: np.ndarray, radius: float) -> Tuple[float, complex]:
    # arc-length parameter and position of the first point at the given distance from the start
    center = points[0]
    index = int(np.argmax(np.abs(points - center) >= radius))
    start, end = points[index - 1], points[index]
    direction = end - start
    offset = start - center
    a = abs(direction) ** 2
    b = (offset * direction.conjugate()).real
    c = abs(offset) ** 2 - radius ** 2
    t = min(max((-b + sqrt(max(b * b - a * c, 0.0))) / a, 0.0), 1.0)
    return float(cumlen[index - 1] + t * abs(direction)), complex(start + t * direction)


def _arc_test_function(path: PolyPath, start_value: float) -> ArcTestFunction:
    z0, w0 = path.start, path.end
    eta = abs(w0 - z0) * _ARC_SPLIT_RATIO
    s1, z1 = _first_exit(path.points, path.cumlen, eta)
    reversed_path = path.reversed()
    tail, w1 = _first_exit(reversed_path.points, reversed_path.cumlen, eta)
    s2 = path.length - tail
    if not 0 < s1 < s2 < path.length:
        message = f'Split points {s1} and {s2} do not separate the path of length {path.length}.'
        raise ConstructionError(message)
    first_scale = 1 / (2 * (z0 - z1))
    last_scale = 1 / (2 * (w0 - w1))
    g_pieces = (
        (-z0 - first_scale * z1 ** 2, 1 + 2 * first_scale * z1, -first_scale),
        (-z0, 1),
        (-z0 - last_scale * w1 ** 2, 1 + 2 * last_scale * w1, -last_scale),
    )
    g_start = -(z0 - z1) / 2
    g_end = w0 - z0 - (w0 - w1) / 2
    delta = g_end - g_start
    rotation = delta.conjugate() / abs(delta)
    pieces = []
    for coeffs in g_pieces:
        rotated = [rotation * c for c in coeffs]
        rotated[0] += start_value - rotation * g_start
        pieces.append(polynomial([complex(c) for c in rotated]))
    f = Piecewise(path, [0.0, s1, s2], pieces)
    return ArcTestFunction(f, f.derivative(), float(start_value), float(abs(delta)))


def arc_test_function(path: PolyPath, start_value: float = 0.0) -> ArcTestFunction:
    """Constructs the test function of a Jordan polyline from z0 to w0.

    With eta = |z0 - w0| / 100, z1 the first point of the path at distance
    eta from z0 and w1 the last point at distance eta from w0, the function
    g is z - z0 - (z - z1)**2 / (2 (z0 - z1)) up to z1, z - z0 between z1
    and w1, and z - z0 - (z - w1)**2 / (2 (w0 - w1)) after w1. The result
    is start_value plus g - g(z0) rotated so that f(w0) is real.

    Args:
        path (PolyPath):             The Jordan polyline.
        start_value (float, optional): The value at the start of the path.

    Raises:
        ConstructionError: If the endpoints coincide or the path is not a
                           Jordan path.

    Returns:
        ArcTestFunction: The function, its derivative and the gap f(w0) -
                         f(z0), which is at least 0.99 |w0 - z0|.
    """
    _require_jordan(path)
    return _arc_test_function(path, start_value)


@dataclass(frozen=True)
class ChainedArcFunction:
    """Immutable structure representing a chain of arc test functions along
    consecutive subarcs, joined at the knots.
    """
    f: Piecewise
    fprime: FunctionExpr
    knots: Tuple[complex, ...]
    gap: float
    derivative_bound: float = ARC_DERIVATIVE_BOUND


def _strided(count: int, stride: int) -> np.ndarray:
    indices = list(range(0, count + 1, stride))
    if indices[-1] != count:
        indices.append(count)
    return np.array(indices)


def _chain_indices(path: PolyPath, length: float) -> np.ndarray:
    points, count = path.points, path.segment_count
    stride = 1
    while 2 * stride <= count and np.sum(np.abs(np.diff(points[_strided(count, 2 * stride)]))) > length:
        stride *= 2
    return _strided(count, stride)


def chained_arc_bound(path: PolyPath, length: float) -> ChainedArcFunction:
    """Chains arc test functions along a Jordan polyline longer than the
    given length: the knots are every k-th vertex, k being the largest power
    of two for which the chord sum still exceeds the length, and each link
    starts at the value the previous one ended with.

    Raises:
        ParameterError:          If the length is not positive.
        InsufficientLengthError: If the path is not longer than the length.
        ConstructionError:       If the path is not a Jordan path.

    Returns:
        ChainedArcFunction: The chained function; its gap exceeds 0.99
                            times the given length.
    """
    if not length > 0:
        message = f'Chain length must be positive, got {length}.'
        raise ParameterError(message)
    if path.length <= length:
        message = f'Path of length {path.length} is not longer than {length}.'
        raise InsufficientLengthError(message)
    _require_jordan(path)
    indices = _chain_indices(path, length)
    breaks: List[float] = []
    pieces: List[FunctionExpr] = []
    value = 0.0
    for first, second in zip(indices, indices[1:]):
        link = _arc_test_function(PolyPath(path.points[first:second + 1]), value)
        breaks.extend(path.cumlen[first] + link.f.breaks)
        pieces.extend(link.f.pieces)
        value = link.end_value
    breaks[0] = 0.0
    f = Piecewise(path, breaks, pieces)
    logger.debug('Chained %d links over length %.6g, gap %.6g', len(indices) - 1, path.length, value)
    return ChainedArcFunction(f, f.derivative(), tuple(complex(z) for z in path.points[indices]), value)


@dataclass(frozen=True)
class ArcScheduleReport:
    """Immutable structure representing the chained arc bounds of an arc at
    increasing depths: the arc lengths, the witnesses w chosen at arc length
    beyond the chain length and the quotients gap / (3 |z0 - w|).
    """
    depths: Tuple[int, ...]
    lengths: Tuple[float, ...]
    witnesses: Tuple[complex, ...]
    quotients: Tuple[float, ...]
    length_fit: SlopeFit
    quotient_fit: SlopeFit
    functions: Tuple[ChainedArcFunction, ...] = field(default=(), compare=False, repr=False)

    @property
    def verdict(self) -> str:
        if self.length_fit.diverging and self.quotient_fit.diverging:
            return INCOMPLETE
        return INCONCLUSIVE


def _arc_from(materialized: Union[MaterializedSet, PolyPath], z0: Optional[complex]) -> PolyPath:
    if isinstance(materialized, PolyPath):
        arc = materialized
    elif isinstance(materialized, Skeleton) and len(materialized.arcs) == 1:
        arc = materialized.arcs[0]
    else:
        message = 'Arc schedule needs a set consisting of a single arc.'
        raise ParameterError(message)
    if z0 is None or arc.start == z0:
        return arc
    if arc.end == z0:
        return arc.reversed()
    message = f'Point {z0} is not an endpoint of the arc.'
    raise ParameterError(message)


def nonrectifiable_arc_verdict(arc: Union[Gallery, Skeleton, PolyPath], z0: Optional[PointLike] = None,
                               depths: Optional[Iterable[int]] = None, length: float = 6.0,
                               rule: SlopeRule = SlopeRule()) -> ArcScheduleReport:
    """Chains arc test functions from the endpoint z0 of an arc at increasing
    depths of its construction.

    At every depth the chain length is min(length, 0.9 |arc|) and the
    witness w is the vertex nearest to z0 among those beyond that arc
    length; the chain is laid along the subarc from z0 to w.

    Args:
        arc:                          A single-arc gallery construction, skeleton or
                                      path.
        z0 (PointLike, optional):     The endpoint; the centre of a gallery or the
                                      start of the arc by default.
        depths (Iterable, optional):  The depths to evaluate (galleries only);
                                      1..depth by default.
        length (float, optional):     The chain length.
        rule (SlopeRule, optional):   Rule deciding the divergence verdicts.

    Returns:
        ArcScheduleReport: The schedule; it certifies incompleteness if both
                           the arc lengths and the quotients diverge.
    """
    if isinstance(arc, Gallery):
        z0 = gallery_centre(arc) if z0 is None else as_complex(z0)
        depths = tuple(range(1, arc.depth + 1)) if depths is None else tuple(depths)
        paths = [(depth, _arc_from(arc.with_depth(depth).materialize(), z0)) for depth in depths]
    else:
        path = _arc_from(arc, None if z0 is None else as_complex(z0))
        z0 = path.start
        paths = [(1, path)]
    lengths, witnesses, quotients, functions = [], [], [], []
    for _, path in paths:
        effective = min(length, 0.9 * path.length)
        eligible = np.nonzero(path.cumlen > effective)[0]
        index = int(eligible[np.argmin(np.abs(path.points[eligible] - z0))])
        chain = chained_arc_bound(PolyPath(path.points[:index + 1]), effective)
        w = complex(path.points[index])
        lengths.append(path.length)
        witnesses.append(w)
        quotients.append(chain.gap / (chain.derivative_bound * abs(w - z0)))
        functions.append(chain)
    abscissae = [depth for depth, _ in paths]
    length_fit = rule.fit(lengths, abscissae)
    quotient_fit = rule.fit(quotients, abscissae)
    logger.info('Arc schedule at %s: lengths %s, quotients %s', z0, length_fit.verdict, quotient_fit.verdict)
    return ArcScheduleReport(tuple(abscissae), tuple(lengths), tuple(witnesses), tuple(quotients),
                             length_fit, quotient_fit, tuple(functions))


# ---------------------------------------------------------------------------
# blodges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockPremises:
    """Immutable structure representing the geometric premises of a blodge
    sequence checked on its finitely many blocks: blocks that are not
    neighbours are disjoint, neighbours meet exactly in their junction, and
    the blocks shrink towards z0.
    """
    disjoint: bool
    junctions: bool
    accumulating: bool
    violations: Tuple[str, ...] = ()

    @property
    def hold(self) -> bool:
        return self.disjoint and self.junctions and self.accumulating


def _part_geometries(block: MaterializedSet) -> list:
    return [part.geometry for part in _parts(block)]


def block_premises(blocks: Sequence[MaterializedSet], junctions: Sequence[PointLike], z0: PointLike,
                   tol: float = 1e-9) -> BlockPremises:
    """Checks the premises of the blodge construction on the given blocks,
    the j-th junction being the point shared by the blocks j and j + 1.

    Every block but the last must stay away from z0, and the distance of
    the farthest vertex of a block from z0 must not increase along the
    sequence. The predicates are evaluated part by part, as compound blocks
    have no polygonal geometry of their own.

    Raises:
        ParameterError: If there are fewer than two blocks, or fewer
                        junctions than pairs of neighbouring blocks.
    """
    z0 = as_complex(z0)
    junctions = as_complex_array(junctions)
    if len(blocks) < 2 or len(junctions) < len(blocks) - 1:
        message = (f'Expected at least two blocks and a junction per pair of neighbours, '
                   f'got {len(blocks)} blocks and {len(junctions)} junctions.')
        raise ParameterError(message)
    geometries = [_part_geometries(block) for block in blocks]
    flat = [geometry for parts in geometries for geometry in parts]
    owners = np.repeat(np.arange(len(blocks)), [len(parts) for parts in geometries])

    first, second = shapely.STRtree(flat).query(flat, predicate='intersects')
    distant = owners[second] - owners[first] > 1
    overlaps = sorted({(int(owners[i]), int(owners[k])) for i, k in zip(first[distant], second[distant])})
    violations = [f'blocks {j} and {k} intersect' for j, k in overlaps]

    meetings = []
    for index in range(len(blocks) - 1):
        meeting = shapely.union_all([shapely.intersection(a, b)
                                     for a in geometries[index] for b in geometries[index + 1]])
        junction = shapely.Point(junctions[index].real, junctions[index].imag)
        meets = not meeting.is_empty and shapely.hausdorff_distance(meeting, junction) <= tol
        if not meets:
            violations.append(f'blocks {index} and {index + 1} do not meet exactly in {complex(junctions[index])}')
        meetings.append(meets)

    accumulating = True
    for index, block in enumerate(blocks[:-1]):
        if any(contains(part, z0, tol) for part in _parts(block)):
            violations.append(f'block {index} meets {z0}')
            accumulating = False
    reach = [float(np.max(np.abs(np.asarray(block.vertices) - z0))) for block in blocks]
    for index in np.flatnonzero(np.diff(reach) > tol):
        violations.append(f'block {index + 1} reaches farther from {z0} than block {index}')
        accumulating = False
    return BlockPremises(not overlaps, all(meetings), accumulating, tuple(violations))


@dataclass(frozen=True)
class BlodgesReport:
    """Immutable structure representing the series condition of a blodge
    sequence: for every truncation m, the supremum over n <= m of the tail
    sum of steps from n to m divided by the distance of v_n from z0. The
    verdict concerns the series only; the premises on the blocks are
    reported separately when blocks were given.
    """
    sups: Tuple[float, ...]
    maximizers: Tuple[int, ...]
    fit: SlopeFit
    converging: bool = True
    premises: Optional[BlockPremises] = None

    @property
    def verdict(self) -> str:
        return 'condition-vi-holds' if self.fit.diverging else 'fails'


def blodges_series_condition(steps: Sequence[float], distances: Sequence[float],
                             rule: SlopeRule = SlopeRule()) -> BlodgesReport:
    """Evaluates the series condition for steps |v_{n+1} - v_n| and distances
    |z0 - v_n|.

    Raises:
        ParameterError: If the sequences are empty, of different lengths, or
                        contain negative values.

    Returns:
        BlodgesReport: The suprema M(m) (maximizer indices are 0-based) and
                       the verdict of the slope rule applied to them.
    """
    steps = np.asarray(steps, dtype=float)
    distances = np.asarray(distances, dtype=float)
    if len(steps) == 0 or steps.shape != distances.shape:
        message = (f'Expected non-empty sequences of equal length, '
                   f'got {len(steps)} steps and {len(distances)} distances.')
        raise ParameterError(message)
    if np.any(steps < 0) or np.any(distances < 0):
        message = 'Steps and distances must be non-negative.'
        raise ParameterError(message)
    partial = np.concatenate(([0.0], np.cumsum(steps)))
    sups, maximizers = [], []
    for m in range(len(steps)):
        tails = partial[m + 1] - partial[:m + 1]
        with np.errstate(divide='ignore', invalid='ignore'):
            ratios = np.where(distances[:m + 1] > 0, tails / distances[:m + 1], -np.inf)
        best = int(np.argmax(ratios))
        sups.append(float(ratios[best]) if np.isfinite(ratios[best]) else 0.0)
        maximizers.append(best)
    fit = rule.fit(sups, np.arange(1, len(sups) + 1))
    return BlodgesReport(tuple(sups), tuple(maximizers), fit)


def blodges_condition(v: Sequence[PointLike], z0: PointLike, count: Optional[int] = None,
                      rule: SlopeRule = SlopeRule(),
                      blocks: Optional[Sequence[MaterializedSet]] = None) -> BlodgesReport:
    """Evaluates the series condition for the junction points v_1, v_2, ...
    converging to z0, truncated at count steps if given. If the blocks are
    given, their premises are checked against all the junctions.

    A warning is logged if the last junction is not close to z0, since the
    condition is then meaningless.
    """
    z0 = as_complex(z0)
    points = as_complex_array(v)
    premises = None if blocks is None else block_premises(blocks, points, z0)
    if count is not None:
        points = points[:count + 1]
    if len(points) < 2:
        message = f'Blodge condition needs at least two junction points, got {len(points)}.'
        raise ParameterError(message)
    steps = np.abs(np.diff(points))
    distances = np.abs(z0 - points[:-1])
    converging = bool(abs(z0 - points[-1]) <= 1e-2 * max(float(np.max(distances)), 1e-300))
    if not converging:
        logger.warning('Junction points end at %s, far from %s', complex(points[-1]), z0)
    if premises is not None and not premises.hold:
        logger.warning('Blodge premises violated: %s', '; '.join(premises.violations))
    return replace(blodges_series_condition(steps, distances, rule), converging=converging, premises=premises)


def _blodge_witnesses(arc: PolyPath, junctions: Sequence[complex], z0: complex) -> List['QxWitness']:
    # for every junction v_m, the earlier v_n maximizing the arc length from v_n to v_m over |z0 - v_n|;
    # the chain extends by its end value beyond v_m, so f(z0) = f(v_m) and v_m is the anchor
    positions = {complex(z): index for index, z in enumerate(arc.points)}
    indices = np.array([positions[complex(v)] for v in junctions])
    distances = np.abs(z0 - as_complex_array(junctions))
    along = arc.cumlen[indices]
    witnesses = []
    for m in range(1, len(indices)):
        n = int(np.argmax((along[m] - along[:m]) / distances[:m]))
        path = PolyPath(arc.points[indices[n]:indices[m] + 1])
        chain = chained_arc_bound(path, float(np.sum(np.abs(np.diff(arc.points[indices[n:m + 1]])))))
        values = chain.f(np.array([path.end, path.start]))
        bound = float(abs(values[0] - values[1]) / (chain.derivative_bound * abs(z0 - path.start)))
        witnesses.append(QxWitness('blodges', path.start, bound, chain.f, chain.derivative_bound, path.end))
    return witnesses


# ---------------------------------------------------------------------------
# other quotients
# ---------------------------------------------------------------------------

def c1_ratio_estimate(plane_set: PlaneSet, z0: PointLike, family: Iterable[Tuple[FunctionExpr, FunctionExpr]],
                      samples: Optional[Sequence[PointLike]] = None, budget: int = 256, seed: int = 0) -> float:
    """Estimates sup |f| / sup |f'| over a family of test functions vanishing
    at z0, the suprema being taken over sample points of the set.

    Raises:
        PreconditionError: If a function of the family does not vanish at z0.
    """
    z0 = as_complex(z0)
    points = sample_set(plane_set, budget, seed) if samples is None else as_complex_array(samples)
    best = 0.0
    for index, (f, fprime) in enumerate(family):
        value = abs(f(z0))
        if value > 1e-12:
            message = f'Test function {index} does not vanish at {z0} (|f(z0)| = {value:.3g}).'
            raise PreconditionError(message)
        denominator = float(np.max(np.abs(fprime(points))))
        if denominator > 0:
            best = max(best, float(np.max(np.abs(f(points)))) / denominator)
    return best


def az_quotient(f: FunctionExpr, z: PointLike, w: PointLike, value_bound: float, derivative_bound: float) -> float:
    """Returns |f(z) - f(w)| / ((sup |f| + sup |f'|) |z - w|), the quotient
    measured in the norm of the algebra A(X).

    Raises:
        ParameterError: If the bounds are not admissible.
        DomainError:    If z = w.
    """
    if value_bound < 0 or derivative_bound <= 0:
        message = f'Invalid bounds sup|f| = {value_bound}, sup|f\'| = {derivative_bound}.'
        raise ParameterError(message)
    z, w = as_complex(z), as_complex(w)
    if z == w:
        message = f'Quotient undefined for coinciding points {z}.'
        raise DomainError(message, point=z)
    values = f(np.array([z, w]))
    return float(abs(values[0] - values[1]) / ((value_bound + derivative_bound) * abs(z - w)))


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QxWitness:
    """Immutable structure representing one certified lower bound of the
    quasiconvexity quotient at a centre: the test family, the witness point,
    the bound and (if available) the test function producing it.
    """
    test: str
    w: complex
    bound: float
    function: Optional[FunctionExpr] = field(default=None, compare=False, repr=False)
    derivative_bound: float = 1.0
    anchor: Optional[complex] = None
    az: Optional[float] = None

    def reproduce(self, center: PointLike) -> float:
        """Re-evaluates the bound from the stored test function as
        |f(anchor) - f(w)| / (derivative_bound |center - w|); the anchor is
        the centre unless the function takes its centre value elsewhere.

        Raises:
            PlaneSetError: If no test function is stored.
        """
        if self.function is None:
            message = f'Witness {self.w} of {self.test} carries no test function.'
            raise PlaneSetError(message)
        center = as_complex(center)
        anchor = center if self.anchor is None else self.anchor
        values = self.function(np.array([anchor, self.w]))
        return float(abs(values[0] - values[1]) / (self.derivative_bound * abs(center - self.w)))


@dataclass(frozen=True)
class QxEstimate:
    """Immutable structure representing the quasiconvexity estimate at a
    probe point: the witnesses per test family, the slope fit of every
    family and the geodesic regularity diagnostic.
    """
    center: complex
    witnesses: Tuple[QxWitness, ...]
    fits: Tuple[Tuple[str, SlopeFit], ...]
    regularity: Optional[RegularityReport] = None
    notes: Tuple[str, ...] = ()

    @property
    def best(self) -> float:
        return max((witness.bound for witness in self.witnesses), default=0.0)

    @property
    def diverging_families(self) -> Tuple[str, ...]:
        return tuple(family for family, fit in self.fits if fit.diverging)

    @property
    def verdict(self) -> str:
        return 'diverging' if self.diverging_families else 'finite-consistent'

    @property
    def completeness(self) -> str:
        return INCOMPLETE if self.diverging_families else NO_DIVERGENCE

    @property
    def slope(self) -> float:
        return max((fit.slope for _, fit in self.fits), default=0.0)


@dataclass(frozen=True)
class CompletenessReport:
    """Immutable structure representing the completeness report of a set: the
    estimates at the probe points, the star centre (if any) and the verdict
    obtained for the hull.
    """
    estimates: Tuple[QxEstimate, ...]
    star_centre: Optional[complex] = None
    hull_verdict: Optional[str] = None
    notes: Tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        """Either 'incomplete-certified' (some family diverges at some probe)
        or 'no-divergence-found'.
        """
        if any(estimate.completeness == INCOMPLETE for estimate in self.estimates):
            return INCOMPLETE
        return NO_DIVERGENCE


def _parts(materialized: MaterializedSet) -> Tuple[Union[Region, Skeleton], ...]:
    return materialized.parts if isinstance(materialized, Compound) else (materialized,)


def _nearby_samples(materialized: MaterializedSet, z: complex, budget: int, seed: int) -> np.ndarray:
    points = np.unique(sample_set(materialized, budget, seed))
    points = points[points != z]
    nearest = points[np.argsort(np.abs(points - z), kind='stable')[:_NEARBY_SAMPLES]]
    return nearest[::-1]


def _skeleton_pieces(materialized: MaterializedSet) -> List[PolyPath]:
    # arcs split at vertices shared with other arcs or with regions
    parts = _parts(materialized)
    occurrences: Counter = Counter()
    for part in parts:
        if isinstance(part, Region):
            occurrences.update(set(part.vertices))
        else:
            for arc in part.arcs:
                occurrences.update({complex(z) for z in arc.points})
                occurrences.update({arc.start, arc.end})
    pieces = []
    for part in parts:
        if isinstance(part, Region):
            continue
        for arc in part.arcs:
            points = arc.points
            cuts = [0] + [k for k in range(1, len(points) - 1) if occurrences[complex(points[k])] > 1]
            cuts.append(len(points) - 1)
            pieces.extend(PolyPath(points[first:second + 1]) for first, second in zip(cuts, cuts[1:]))
    return pieces


def _isolated(piece: PolyPath, others: list, tol: float) -> bool:
    # the piece meets the rest of the set at most in its endpoints
    line = LineString(_coords(piece.points))
    points = []
    for other in others:
        meeting = line.intersection(other)
        if meeting.is_empty:
            continue
        if meeting.geom_type == 'Point':
            points.append(meeting)
        elif meeting.geom_type == 'MultiPoint':
            points.extend(meeting.geoms)
        else:
            return False
    return all(min(abs(complex(p.x, p.y) - piece.start), abs(complex(p.x, p.y) - piece.end)) <= tol
               for p in points)


def _bump_witness(piece: PolyPath, others: list, z0: complex, w: complex, tol: float) -> Optional[QxWitness]:
    length = piece.length
    params, distances = project(piece, np.array([w, z0]))
    s = float(params[0])
    if distances[0] > tol or s <= tol or s >= length - tol:
        return None
    if distances[1] <= tol and tol < params[1] < length - tol:
        return None
    if not _isolated(piece, others, tol):
        return None
    try:
        left = _arc_test_function(subpath(piece, 0.0, s), 0.0)
        right = _arc_test_function(subpath(piece, s, length).reversed(), 0.0)
    except (ConstructionError, ValueError):
        return None
    height = min(left.gap, right.gap)
    pieces = [mul(Const(height / left.gap), p) for p in left.f.pieces]
    pieces.extend(mul(Const(height / right.gap), p) for p in reversed(right.f.pieces))
    breaks = list(left.f.breaks) + [s] + [length - b for b in reversed(right.f.breaks[1:])]
    f = Piecewise(piece, breaks, pieces)
    bound = height / (ARC_DERIVATIVE_BOUND * abs(z0 - w))
    az = height / (ARC_DERIVATIVE_BOUND * (length + 1) * abs(z0 - w))
    return QxWitness('arc-chain', w, bound, f, ARC_DERIVATIVE_BOUND, piece.start, az)


def _bump_witnesses(materialized: MaterializedSet, z0: complex, targets: Sequence[complex]) -> List[QxWitness]:
    pieces = _skeleton_pieces(materialized)
    if not pieces:
        return []
    tol = _tolerance(materialized)
    lines = [LineString(_coords(piece.points)) for piece in pieces]
    regions = [part.geometry for part in _parts(materialized) if isinstance(part, Region)]
    witnesses = []
    for w in targets:
        for index, piece in enumerate(pieces):
            others = lines[:index] + lines[index + 1:] + regions
            witness = _bump_witness(piece, others, z0, complex(w), tol)
            if witness is not None:
                witnesses.append(witness)
                break
    return witnesses


def _halfline_value_bound(materialized: MaterializedSet, a: complex) -> float:
    min_x, min_y, max_x, max_y = materialized.geometry.bounds
    corners = (complex(min_x, min_y), complex(min_x, max_y), complex(max_x, min_y), complex(max_x, max_y))
    return max(abs(corner - a) for corner in corners) / sqrt(2)


def _dent_witnesses(materialized: MaterializedSet, dents: DentSpec, notes: List[str]) -> List[QxWitness]:
    shapely.prepare(materialized.geometry)
    tol = _tolerance(materialized)
    witnesses = []
    for index, item in enumerate(dents.items, start=1):
        problem = _dent_problem(materialized, dents.z0, item, tol)
        if problem is not None:
            notes.append(f'dent {index} skipped: {problem}')
            continue
        function = halfline_test_function(dents.z0, item.a, item.direction)
        bound = zpow_direct_quotient(*normalize_halfline(dents.z0, item.w, item.a, item.direction))
        test = 'zpow' if item.a == 0 and item.direction == -1 else 'halfline'
        az = az_quotient(function, dents.z0, item.w, _halfline_value_bound(materialized, item.a), 1.0)
        witnesses.append(QxWitness(test, item.w, bound, function, 1.0, None, az))
    return witnesses


def _regularity(plane_set: PlaneSet, materialized: MaterializedSet, z: complex, at_centre: bool,
                geodesic_depth: int, rule: SlopeRule, budget: int, seed: int,
                notes: List[str]) -> Optional[RegularityReport]:
    try:
        if isinstance(plane_set, Gallery):
            capped = plane_set.with_depth(min(plane_set.depth, geodesic_depth))
            if at_centre:
                witnesses = gallery_witnesses(capped)
            else:
                witnesses = _nearby_samples(capped.materialize(), z, budget, seed)
            return regularity_at(capped, z, witnesses, rule)
        return regularity_at(materialized, z, _nearby_samples(materialized, z, budget, seed), rule)
    except PlaneSetError as error:
        notes.append(f'regularity at {z} not evaluated: {error}')
        return None


def _probe(plane_set: PlaneSet, materialized: MaterializedSet, z: complex, rule: SlopeRule,
           geodesic_depth: int, budget: int, seed: int) -> QxEstimate:
    gallery = plane_set if isinstance(plane_set, Gallery) else None
    at_centre = gallery is not None and z == gallery_centre(gallery)
    notes: List[str] = []
    families: Dict[str, List[QxWitness]] = {}
    fits: Dict[str, SlopeFit] = {}
    regularity = _regularity(plane_set, materialized, z, at_centre, geodesic_depth, rule, budget, seed, notes)

    dents = gallery_dents(gallery) if gallery is not None else None
    if dents is None or dents.z0 != z:
        dents = find_dents(materialized, z, budget, seed) if isinstance(materialized, Region) else None
    if dents is not None and dents.items:
        witnesses = _dent_witnesses(materialized, dents, notes)
        if witnesses:
            families['dents'] = witnesses

    if any(isinstance(part, Skeleton) for part in _parts(materialized)):
        targets = gallery_witnesses(gallery) if at_centre else tuple(_nearby_samples(materialized, z, budget, seed))
        witnesses = _bump_witnesses(materialized, z, targets)
        if witnesses:
            families['arc-bumps'] = witnesses

    if at_centre and isinstance(materialized, Skeleton) and len(materialized.arcs) == 1 \
            and z in (materialized.arcs[0].start, materialized.arcs[0].end):
        schedule = nonrectifiable_arc_verdict(gallery, z, rule=rule)
        families['arc-schedule'] = [QxWitness('arc-chain', w, quotient, chain.f, chain.derivative_bound)
                                    for w, quotient, chain in zip(schedule.witnesses, schedule.quotients,
                                                                  schedule.functions)]
        fit = schedule.quotient_fit
        fits['arc-schedule'] = fit if schedule.verdict == INCOMPLETE else replace(fit, diverging=False)

    if at_centre and gallery.kind in (GalleryKind.TRIANGLE_ARC, GalleryKind.FATTENED_TRIANGLE_ARC):
        junctions = blodge_vertices(gallery)
        if len(junctions) >= 2:
            blodges = blodges_condition(junctions, z, rule=rule, blocks=blodge_blocks(gallery))
            premises = 'hold' if blodges.premises.hold else 'fail: ' + '; '.join(blodges.premises.violations[:3])
            summary = f'blodges: series condition {blodges.verdict}, block premises {premises}'
            if gallery.kind == GalleryKind.TRIANGLE_ARC:
                families['blodges'] = _blodge_witnesses(materialized.arcs[0], junctions, z)
                notes.append(summary)
            else:
                notes.append(f'{summary}; no test function is built on the fattened blocks, nothing is certified')
    elif at_centre and gallery.kind == GalleryKind.SUPERMAN:
        notes.append('superman: no test family certifies incompleteness, see the geodesic diagnostic')

    for family, witnesses in families.items():
        if family not in fits:
            fits[family] = rule.fit([witness.bound for witness in witnesses])
    all_witnesses = tuple(witness for witnesses in families.values() for witness in witnesses)
    estimate = QxEstimate(z, all_witnesses, tuple(fits.items()), regularity, tuple(notes))
    logger.info('Probe %s: %d witnesses, best bound %.6g, %s', z, len(all_witnesses), estimate.best,
                estimate.completeness)
    return estimate


def completeness_report(plane_set: PlaneSet, probes: Optional[Sequence[PointLike]] = None,
                        rule: SlopeRule = SlopeRule(), geodesic_depth: int = 8, sample_budget: int = 256,
                        seed: int = 0, compare_hull: bool = False) -> CompletenessReport:
    """Builds the completeness report of a set.

    At every probe point the applicable test families are evaluated (dents
    and half-lines for regions, bumps along skeleton arcs, chained schedules
    along single arcs, the blodge series for triangle arcs) together with
    the geodesic regularity diagnostic on the construction truncated at
    geodesic_depth. The set is certified incomplete if some family diverges
    at some probe; otherwise the report only states that no divergence was
    found.

    Args:
        plane_set (PlaneSet):          The set.
        probes (Sequence, optional):   The probe points; the centre of a gallery
                                       or the vertices of other sets by default.
        rule (SlopeRule, optional):    Rule deciding the divergence verdicts.
        geodesic_depth (int, optional): Depth cap of the geodesic diagnostic.
        sample_budget (int, optional): Number of sample points of the set.
        seed (int, optional):          Seed of the sampling.
        compare_hull (bool, optional): Whether to evaluate the hull as well.

    Returns:
        CompletenessReport: The estimates and the verdict.
    """
    materialized = resolve(plane_set)
    if probes is None:
        probes = (gallery_centre(plane_set),) if isinstance(plane_set, Gallery) else materialized.vertices
    notes = []
    centre = None
    if isinstance(materialized, Region) and not materialized.holes:
        centre = star_centre(materialized)
        if centre is not None:
            notes.append(f'star-shaped about {centre}: complete if and only if pointwise regular')
    estimates = tuple(_probe(plane_set, materialized, as_complex(z), rule, geodesic_depth, sample_budget, seed)
                      for z in probes)
    report = CompletenessReport(estimates, centre, None, tuple(notes))
    if compare_hull:
        filled = hull(materialized)
        if filled == materialized:
            hull_verdict = report.verdict
        else:
            hull_probes = [estimate.center for estimate in estimates if contains(filled, estimate.center)]
            hull_verdict = completeness_report(filled, hull_probes, rule, geodesic_depth, sample_budget, seed).verdict
        report = replace(report, hull_verdict=hull_verdict)
    logger.info('Completeness report over %d probes: %s', len(estimates), report.verdict)
    return report
