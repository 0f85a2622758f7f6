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

"""This module provides geodesic distances inside plane sets and the
regularity constants derived from them.

Geodesics in regions are shortest paths in the visibility graph of the
reflex vertices; geodesics in skeletons are shortest paths along the arcs.
Both graphs are searched by the Dijkstra implementation of the
:mod: planelib.algorithms module. A dense-grid Dijkstra (scipy) serves as an
independent oracle.
"""

from dataclasses import dataclass
from enum import Enum, unique
from functools import lru_cache
from itertools import combinations
from logging import getLogger
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
import shapely
from shapely.geometry import Polygon

from planelib.algorithms import ShortestPathSearchRequest, find_shortest_path
from planelib.errors import DomainError, ParameterError, UnreachableError
from planelib.geom import PointLike, PolyPath, as_complex
from planelib.graph import WeightedGraph
from planelib.planeset import Compound, Gallery, GalleryKind, MaterializedSet, PlaneSet, Region, Skeleton
from planelib.planeset import contains, dented_square_sequences, extent, gallery_witnesses, require_member, resolve
from planelib.planeset import sample_set
from planelib.util import SlopeFit, SlopeRule


logger = getLogger(__name__)


_VISIBILITY_EPS = 1e-12

_MEMBERSHIP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GeodesicResult:
    """Immutable structure representing a shortest path inside a set. The
    path is None if the query points coincide; the geodesic then degenerates
    to the single point and has zero length.
    """
    path: Optional[PolyPath]
    length: float
    point: Optional[complex] = None

    @property
    def points(self) -> np.ndarray:
        """The vertices of the geodesic, a single vertex for coinciding
        query points.
        """
        if self.path is None:
            return np.array([self.point], dtype=complex)
        return self.path.points

    @property
    def start(self) -> complex:
        return complex(self.points[0])

    @property
    def end(self) -> complex:
        return complex(self.points[-1])


def _cross(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    return (np.conj(first) * second).imag


def bend_candidates(region: Region) -> np.ndarray:
    """Returns the vertices at which a geodesic of the region may bend: the
    reflex vertices of the outer ring and the convex vertices of the holes
    (both are right turns of rings oriented with the region on the left).
    """
    result = []
    for ring in region.rings:
        incoming = ring - np.roll(ring, 1)
        outgoing = np.roll(ring, -1) - ring
        result.append(ring[_cross(incoming, outgoing) < 0])
    return np.concatenate(result) if result else np.empty(0, dtype=complex)


@lru_cache(maxsize=64)
def _visibility_domain(region: Region):
    scale = max(1.0, extent(region))
    domain = region.polygon.buffer(_VISIBILITY_EPS * scale, join_style='mitre')
    shapely.prepare(domain)
    return domain


def _visible(region: Region, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Vectorized test whether the segments from starts to ends stay in the
    region.
    """
    if len(starts) == 0:
        return np.zeros(0, dtype=bool)
    coords = np.stack((np.column_stack((starts.real, starts.imag)),
                       np.column_stack((ends.real, ends.imag))), axis=1)
    lines = shapely.linestrings(coords)
    return np.asarray(shapely.covers(_visibility_domain(region), lines), dtype=bool)


@dataclass(frozen=True)
class _BaseGraph:
    """Edges of the graph of a materialized set without the query points,
    together with the nodes of every region part.
    """
    edges: Tuple[Tuple[complex, complex, float], ...]
    region_nodes: Tuple[Tuple[Region, np.ndarray], ...]


def _parts(materialized: MaterializedSet) -> Tuple:
    return materialized.parts if isinstance(materialized, Compound) else (materialized,)


@lru_cache(maxsize=32)
def _base_graph(materialized: MaterializedSet) -> _BaseGraph:
    parts = _parts(materialized)
    owners: Dict[complex, int] = {}
    for part in parts:
        for z in part.vertices:
            owners[z] = owners.get(z, 0) + 1
    junctions = {z for z, count in owners.items() if count > 1}
    edges: List[Tuple[complex, complex, float]] = []
    region_nodes = []
    for part in parts:
        if isinstance(part, Skeleton):
            for arc in part.arcs:
                points = arc.points
                for first, second in zip(points[:-1], points[1:]):
                    edges.append((complex(first), complex(second), float(abs(second - first))))
            continue
        nodes = np.array(list(dict.fromkeys(
            list(bend_candidates(part)) + [z for z in part.vertices if z in junctions])), dtype=complex)
        region_nodes.append((part, nodes))
        if len(nodes) < 2:
            continue
        pairs = np.array(list(combinations(range(len(nodes)), 2)), dtype=int)
        starts, ends = nodes[pairs[:, 0]], nodes[pairs[:, 1]]
        visible = _visible(part, starts, ends)
        for start, end in zip(starts[visible], ends[visible]):
            edges.append((complex(start), complex(end), float(abs(end - start))))
    logger.debug('Base graph of %s: %d edges, %d region parts', type(materialized).__name__,
                 len(edges), len(region_nodes))
    return _BaseGraph(tuple(edges), tuple(region_nodes))


def _skeleton_segment_of(skeleton: Skeleton, z: complex, tol: float) -> List[Tuple[int, int]]:
    result = []
    for arc_index, arc in enumerate(skeleton.arcs):
        starts, ends = arc.points[:-1], arc.points[1:]
        directions = ends - starts
        t = np.clip(((z - starts) * np.conj(directions)).real / np.abs(directions) ** 2, 0.0, 1.0)
        distances = np.abs(starts + t * directions - z)
        result.extend((arc_index, int(index)) for index in np.nonzero(distances <= tol)[0])
    return result


def _attach_to_skeleton(graph: WeightedGraph, skeleton: Skeleton, z: complex, tol: float) -> bool:
    segments = _skeleton_segment_of(skeleton, z, tol)
    for arc_index, index in segments:
        points = skeleton.arcs[arc_index].points
        for endpoint in (complex(points[index]), complex(points[index + 1])):
            if endpoint != z:
                graph.add_edge(z, endpoint, abs(endpoint - z))
    return bool(segments)


def _attach_to_region(graph: WeightedGraph, region: Region, nodes: np.ndarray, z: complex) -> None:
    others = nodes[nodes != z]
    visible = _visible(region, np.full(len(others), z), others)
    for node in others[visible]:
        graph.add_edge(z, complex(node), abs(complex(node) - z))
    graph.add_vertex(z)


def _query_graph(materialized: MaterializedSet, z: complex, w: complex) -> WeightedGraph:
    base = _base_graph(materialized)
    graph = WeightedGraph()
    for start, end, weight in base.edges:
        graph.add_edge(start, end, weight)
    tol = _MEMBERSHIP_TOLERANCE * max(1.0, extent(materialized))
    for query in (z, w):
        member = False
        for region, nodes in base.region_nodes:
            if contains(region, query, tol):
                _attach_to_region(graph, region, nodes, query)
                member = True
        for part in _parts(materialized):
            if isinstance(part, Skeleton) and _attach_to_skeleton(graph, part, query, tol):
                member = True
        if not member:
            message = f'Point {query} does not belong to the set.'
            raise DomainError(message, point=query)
    for region, _ in base.region_nodes:
        if contains(region, z, tol) and contains(region, w, tol) and _visible(region, np.array([z]), np.array([w]))[0]:
            graph.add_edge(z, w, abs(w - z))
    for part in _parts(materialized):
        if isinstance(part, Skeleton):
            shared = set(_skeleton_segment_of(part, z, tol)) & set(_skeleton_segment_of(part, w, tol))
            if shared:
                graph.add_edge(z, w, abs(w - z))
    return graph


def geodesic_distance(plane_set: PlaneSet, z: PointLike, w: PointLike) -> GeodesicResult:
    """Computes the geodesic distance of two points of a set, together with a
    shortest path realizing it.

    Args:
        plane_set (PlaneSet): The set (gallery constructions are materialized).
        z (PointLike):        The first point.
        w (PointLike):        The second point.

    Raises:
        DomainError:      If one of the points does not belong to the set.
        UnreachableError: If the points lie in different components.

    Returns:
        GeodesicResult: The shortest path from z to w and its length; zero
                        length without a path if z = w.
    """
    z, w = as_complex(z), as_complex(w)
    materialized = resolve(plane_set)
    if z == w:
        tol = _MEMBERSHIP_TOLERANCE * max(1.0, extent(materialized))
        return GeodesicResult(None, 0.0, require_member(materialized, z, tol))
    graph = _query_graph(materialized, z, w)
    try:
        result = find_shortest_path(ShortestPathSearchRequest(graph, z, w))
    except UnreachableError:
        message = f'There is no path from {z} to {w} inside the set.'
        raise UnreachableError(message, point=w)
    path = PolyPath(result.vertices())
    return GeodesicResult(path, path.length)


def geodesic_diameter(plane_set: PlaneSet, sample_budget: int = 2048, seed: int = 0) -> float:
    """Returns the maximum of the geodesic distance over sampled pairs of
    points, a lower bound of the geodesic diameter.

    All construction vertices are sampled; further sample points are added
    as long as the number of pairs stays within the budget. If the vertices
    alone exceed the budget, the Euclidean-farthest pairs are evaluated
    together with random pairs.
    """
    materialized = resolve(plane_set)
    points = np.array(list(dict.fromkeys(materialized.vertices)), dtype=complex)
    capacity = int((1 + np.sqrt(1 + 8 * sample_budget)) / 2)
    if len(points) < capacity:
        extra = sample_set(materialized, capacity - len(points), seed)
        extra = extra[~np.isin(extra, points)]
        points = np.concatenate((points, extra[:capacity - len(points)]))
    pairs = np.array(list(combinations(range(len(points)), 2)), dtype=int)
    if len(pairs) > sample_budget:
        rng = np.random.default_rng(seed)
        distances = np.abs(points[pairs[:, 0]] - points[pairs[:, 1]])
        order = np.argsort(-distances)
        farthest = order[:sample_budget // 2]
        rest = rng.choice(order[sample_budget // 2:], sample_budget - len(farthest), replace=False)
        pairs = pairs[np.concatenate((farthest, rest))]
    best = 0.0
    for first, second in pairs:
        best = max(best, geodesic_distance(materialized, points[first], points[second]).length)
    logger.debug('Geodesic diameter over %d pairs: %.17g', len(pairs), best)
    return best


@dataclass(frozen=True)
class RegularityReport:
    """Immutable structure representing the sampled regularity quotients
    delta(z, w) / |z - w| at a point z.
    """
    center: complex
    samples: Tuple[Tuple[complex, float], ...]
    kz_estimate: float
    fit: SlopeFit

    @property
    def verdict(self) -> str:
        return self.fit.verdict

    @property
    def quotients(self) -> Tuple[float, ...]:
        return tuple(quotient for _, quotient in self.samples)


def regularity_at(plane_set: PlaneSet, z: PointLike, witnesses: Optional[Sequence[PointLike]] = None,
                  rule: SlopeRule = SlopeRule()) -> RegularityReport:
    """Samples the regularity quotients delta(z, w) / |z - w| at z.

    Args:
        plane_set (PlaneSet):          The set.
        z (PointLike):                 The point at which regularity is probed.
        witnesses (Sequence, optional): Points approaching z; the construction
                                       witnesses of a gallery by default.
        rule (SlopeRule, optional):    Rule deciding the divergence verdict.

    Raises:
        DomainError: If z or a witness does not belong to the set.

    Returns:
        RegularityReport: The quotients (never below 1), their maximum and
                          the divergence verdict.
    """
    z = as_complex(z)
    if witnesses is None:
        if not isinstance(plane_set, Gallery):
            message = 'Witnesses must be given for sets that are not gallery constructions.'
            raise ParameterError(message)
        witnesses = gallery_witnesses(plane_set)
    materialized = resolve(plane_set)
    samples = []
    for witness in witnesses:
        w = as_complex(witness)
        if w == z:
            continue
        length = geodesic_distance(materialized, z, w).length
        samples.append((w, max(1.0, length / abs(w - z))))
    quotients = [quotient for _, quotient in samples]
    fit = rule.fit(quotients)
    kz_estimate = max(quotients, default=1.0)
    logger.debug('Regularity at %s: %d witnesses, kz %.6g, %s', z, len(samples), kz_estimate, fit.verdict)
    return RegularityReport(z, tuple(samples), kz_estimate, fit)


@unique
class DentedSquareVerdict(Enum):
    """Enumeration of the possible outcomes of the dented square ratio test.
    """
    COMPLETE = 'complete/pointwise-regular'
    INCOMPLETE = 'incomplete/irregular-at-0'

    @property
    def completeness(self) -> str:
        """The corresponding verdict of a completeness report.
        """
        return 'incomplete-certified' if self == DentedSquareVerdict.INCOMPLETE else 'no-divergence-found'


@dataclass(frozen=True)
class DentClassification:
    ratios: Tuple[float, ...]
    fit: SlopeFit

    @property
    def verdict(self) -> DentedSquareVerdict:
        return DentedSquareVerdict.INCOMPLETE if self.fit.diverging else DentedSquareVerdict.COMPLETE


def classify_dented_square(params: Dict, depth: int, rule: SlopeRule = SlopeRule()) -> DentClassification:
    """Classifies a dented square by the ratio test on r_n / s_{2n-1}: the
    set is regular at 0 (and the algebra complete) iff the ratios stay
    bounded.
    """
    r, s = dented_square_sequences(Gallery(GalleryKind.DENTED_SQUARE, dict(params or {}), depth))
    ratios = tuple(float(r[n] / s[2 * n]) for n in range(depth))
    fit = rule.fit(ratios)
    logger.debug('Dented square ratios up to %d: growth %.3g, slope %.3g', depth, fit.growth, fit.slope)
    return DentClassification(ratios, fit)


def is_star_centre(region: Region, a: PointLike) -> bool:
    """Verifies that a belongs to the region and sees every vertex of it; for
    a region without holes this means the region is star-shaped about a.
    """
    a = as_complex(a)
    if region.holes or not contains(region, a):
        return False
    vertices = np.array(region.outer, dtype=complex)
    others = vertices[vertices != a]
    return bool(np.all(_visible(region, np.full(len(others), a), others)))


def _kernel(region: Region) -> Optional[Polygon]:
    ring = region.rings[0]
    scale = 4 * max(1.0, extent(region))
    kernel = shapely.box(*region.polygon.bounds)
    for start, end in zip(ring, np.roll(ring, -1)):
        direction = (end - start) / abs(end - start)
        normal = 1j * direction
        corners = [start - scale * direction, end + scale * direction,
                   end + scale * direction + scale * normal, start - scale * direction + scale * normal]
        kernel = kernel.intersection(Polygon([(c.real, c.imag) for c in corners]))
        if kernel.is_empty:
            return None
    return kernel


def star_centre(plane_set: PlaneSet) -> Optional[complex]:
    """Returns a star centre of a region (a point of the kernel of its
    polygon, verified to see every vertex), or None if there is none.
    """
    region = resolve(plane_set)
    if not isinstance(region, Region) or region.holes:
        return None
    kernel = _kernel(region)
    if kernel is None:
        return None
    for candidate in (kernel.centroid, kernel.representative_point()):
        a = complex(candidate.x, candidate.y)
        if is_star_centre(region, a):
            return a
    return None


def grid_geodesic_distance(region: Region, z: PointLike, w: PointLike, pixel: float = 1 / 1024,
                           neighborhood: int = 4) -> float:
    """Approximates the geodesic distance by Dijkstra on a lattice graph:
    lattice nodes inside the region, joined along all primitive lattice
    offsets of size at most the neighborhood whose segments stay inside.

    The query points are snapped to the nearest lattice node inside the
    region and the snapping distances are added.

    Raises:
        DomainError:      If a query point does not belong to the region.
        UnreachableError: If the snapped points are not connected.
    """
    z, w = as_complex(z), as_complex(w)
    for query in (z, w):
        if not contains(region, query):
            message = f'Point {query} does not belong to the set.'
            raise DomainError(message, point=query)
    min_x, min_y, max_x, max_y = region.polygon.bounds
    columns = int(np.floor((max_x - min_x) / pixel + 1e-9)) + 1
    rows = int(np.floor((max_y - min_y) / pixel + 1e-9)) + 1
    xs, ys = min_x + pixel * np.arange(columns), min_y + pixel * np.arange(rows)
    grid_x, grid_y = np.meshgrid(xs, ys)
    domain = region.polygon.buffer(pixel * 1e-6)
    shapely.prepare(domain)
    inside = shapely.contains_xy(domain, grid_x, grid_y)
    index = -np.ones(inside.shape, dtype=int)
    index[inside] = np.arange(np.count_nonzero(inside))
    nodes = grid_x[inside] + 1j * grid_y[inside]
    boundary_distance = shapely.distance(region.polygon.boundary, shapely.points(nodes.real, nodes.imag))
    offsets = [(dx, dy) for dx in range(0, neighborhood + 1) for dy in range(-neighborhood, neighborhood + 1)
               if gcd(dx, abs(dy)) == 1 and (dx > 0 or dy > 0)]
    sources, targets, weights = [], [], []
    for dx, dy in offsets:
        first = index[max(0, -dy):rows - max(0, dy), 0:columns - dx]
        second = index[max(0, dy):rows + min(0, dy), dx:columns]
        valid = (first >= 0) & (second >= 0)
        a, b = first[valid], second[valid]
        step = pixel * float(np.hypot(dx, dy))
        near = boundary_distance[a] <= step
        keep = ~near
        if np.any(near):
            keep[near] = _visible(region, nodes[a[near]], nodes[b[near]])
        sources.append(a[keep])
        targets.append(b[keep])
        weights.append(np.full(np.count_nonzero(keep), step))
    count = len(nodes)
    matrix = coo_matrix((np.concatenate(weights), (np.concatenate(sources), np.concatenate(targets))),
                        shape=(count, count)).tocsr()
    start = int(np.argmin(np.abs(nodes - z)))
    end = int(np.argmin(np.abs(nodes - w)))
    distances = dijkstra(matrix, directed=False, indices=start)
    if not np.isfinite(distances[end]):
        message = f'Grid nodes near {z} and {w} are not connected.'
        raise UnreachableError(message, point=w)
    logger.debug('Grid oracle: %d nodes, %d edges', count, matrix.nnz)
    return float(distances[end] + abs(nodes[start] - z) + abs(nodes[end] - w))
