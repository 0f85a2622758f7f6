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

"""This module provides Dijkstra's shortest path search over the weighted
graphs of the :mod: planelib.graph module. Geodesics of plane sets are
computed as shortest paths in visibility graphs and arc graphs.
"""

from collections import deque
from dataclasses import dataclass
from logging import getLogger
from typing import Dict, Hashable, Tuple

from planelib.errors import UnreachableError
from planelib.graph import Edge, WeightedGraph
from planelib.util import QueueableItem, RepriorizablePriorityQueue


logger = getLogger(__name__)


@dataclass(frozen=True)
class ShortestPathSearchRequest:
    """Immutable structure representing a request to search the shortest path
    from the given start vertex to the specified destination vertex in the
    given graph.
    """
    graph: WeightedGraph
    start: Hashable
    destination: Hashable


@dataclass(frozen=True)
class ShortestPathSearchResult:
    """Immutable structure representing the result of a shortest-path
    search.
    """
    path: Tuple[Edge, ...]

    @property
    def start(self) -> Hashable:
        """The start vertex of the found shortest path.
        """
        return self.path[0].start

    @property
    def destination(self) -> Hashable:
        """The destination vertex of the found shortest path.
        """
        return self.path[-1].destination

    @property
    def overall_distance(self) -> float:
        """The sum of the weights of all edges comprising the path.
        """
        return sum(edge.weight for edge in self.path)

    def vertices(self) -> Tuple[Hashable, ...]:
        """Returns the sequence of vertices visited by the path.
        """
        if not self.path:
            return ()
        return (self.path[0].start,) + tuple(edge.destination for edge in self.path)


@dataclass
class _DistanceTableEntry:
    vertex: Hashable
    predecessor: Hashable
    distance_from_start: float

    def update(self, predecessor: Hashable, distance_from_start: float) -> bool:
        if self.distance_from_start > distance_from_start:
            self.distance_from_start = distance_from_start
            self.predecessor = predecessor
            return True
        return False


class _DistanceTable:
    """Distance table supporting the implementation of Dijkstra's algorithm.
    """

    def __init__(self, starting_vertex: Hashable):
        """Constructs a new distance table whose only entry is the starting
        vertex, with distance zero and itself as predecessor.
        """
        self._entries: Dict[Hashable, _DistanceTableEntry] = {
            starting_vertex: _DistanceTableEntry(starting_vertex, starting_vertex, 0.0)
        }
        self._starting_vertex = starting_vertex

    def get_distance_from_start(self, vertex: Hashable) -> float:
        """Returns the currently known shortest distance of the given vertex
        from the starting vertex.

        Raises:
            ValueError: If there is no entry for the given vertex.
        """
        return self._get_entry(vertex).distance_from_start

    def get_predecessor(self, vertex: Hashable) -> Hashable:
        """Returns the predecessor of the given vertex on the currently known
        shortest path.

        Raises:
            ValueError: If there is no entry for the given vertex.
        """
        return self._get_entry(vertex).predecessor

    def _get_entry(self, vertex: Hashable) -> _DistanceTableEntry:
        if vertex not in self._entries:
            message = f'No distance table entry found for the vertex {vertex}.'
            raise ValueError(message)
        return self._entries[vertex]

    def update(self, vertex: Hashable, predecessor: Hashable, distance: float) -> bool:
        """Records a path of the given length to the given vertex, unless a
        path at least as short is already known.

        Returns:
            bool: True if the entry has been created or updated; False otherwise.
        """
        if vertex in self._entries:
            return self._entries[vertex].update(predecessor, distance)
        self._entries[vertex] = _DistanceTableEntry(vertex, predecessor, distance)
        return True

    def backtrack_shortest_path(self, destination: Hashable) -> ShortestPathSearchResult:
        """Backtracks the shortest path from the starting vertex to the given
        destination vertex.

        Raises:
            UnreachableError: If the destination has not been reached.

        Returns:
            ShortestPathSearchResult: The backtracked path (empty if the
                                      destination is the starting vertex).
        """
        if destination not in self._entries:
            message = f'There is no path from {self._starting_vertex} to {destination}.'
            raise UnreachableError(message)
        path: deque = deque()
        current = destination
        while current != self._starting_vertex:
            predecessor = self._entries[current].predecessor
            weight = (self._entries[current].distance_from_start
                      - self._entries[predecessor].distance_from_start)
            path.appendleft(Edge(predecessor, current, weight))
            current = predecessor
        return ShortestPathSearchResult(tuple(path))

    def __contains__(self, vertex: Hashable) -> bool:
        return vertex in self._entries


def _build_distance_table(request: ShortestPathSearchRequest) -> _DistanceTable:
    distance_table = _DistanceTable(request.start)
    queue = RepriorizablePriorityQueue()
    queue.enqueue(QueueableItem(key=request.start, priority=0.0, value=0.0))
    explored_vertices = set()
    graph = request.graph

    while queue.is_not_empty():
        item = queue.dequeue()
        current_vertex = item.key
        if current_vertex == request.destination:
            break
        explored_vertices.add(current_vertex)
        for adjacent_vertex in graph.get_adjacent_vertices(current_vertex):
            if adjacent_vertex in explored_vertices:
                continue
            distance = item.value + graph.get_edge_weight(current_vertex, adjacent_vertex)
            if distance_table.update(adjacent_vertex, current_vertex, distance):
                queue.enqueue(QueueableItem(key=adjacent_vertex, priority=distance, value=distance))

    return distance_table


def find_shortest_path(request: ShortestPathSearchRequest) -> ShortestPathSearchResult:
    """Finds and returns the shortest path from the given start vertex to the
    specified destination vertex in the given graph (Dijkstra's algorithm).

    Args:
        request (ShortestPathSearchRequest): Search request carrying the start
                                             and destination vertices as well
                                             as the graph.

    Raises:
        ValueError:       If the start vertex is not present in the graph.
        UnreachableError: If the destination cannot be reached from the start.

    Returns:
        ShortestPathSearchResult: The found shortest path.
    """
    if request.start not in request.graph:
        message = f'Start vertex {request.start} not found.'
        raise ValueError(message)
    distance_table = _build_distance_table(request)
    result = distance_table.backtrack_shortest_path(request.destination)
    logger.debug('Shortest path %s -> %s: %d edges, length %.17g', request.start,
                 request.destination, len(result.path), result.overall_distance)
    return result
