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

"""This module provides the weighted undirected graph used to compute
geodesics (visibility graphs of regions, arc graphs of skeletons), plus a
registry assigning dense integer IDs to plane points.
"""

from dataclasses import dataclass
from typing import Dict, Hashable, Tuple


@dataclass(frozen=True)
class Edge:
    """Immutable structure representing a single edge of a graph.
    """
    start: Hashable
    destination: Hashable
    weight: float


class VertexRegistry:
    """Collection of plane points (or any other hashable keys) mapped to dense
    integer vertex IDs.

    Points are compared by exact equality, so two arcs share a vertex only if
    they carry bit-identical coordinates.
    """

    def __init__(self):
        """Constructs a new empty vertex registry instance.
        """
        self._key_to_id: Dict[Hashable, int] = {}

    def get_id(self, key: Hashable, generate_if_unknown: bool = False) -> int:
        """Returns the unique ID of the given key.

        Args:
            key (Hashable):                       The key (typically a complex
                                                  coordinate) whose ID is to be
                                                  returned.
            generate_if_unknown (bool, optional): True if a new ID is to be
                                                  generated for an unknown key;
                                                  False (default) if ValueError
                                                  is to be raised instead.

        Raises:
            ValueError: If the key is unknown and generation is not requested.

        Returns:
            int: The unique ID of the given key.
        """
        if key not in self._key_to_id:
            if not generate_if_unknown:
                message = f'Vertex {key} not found.'
                raise ValueError(message)
            self._key_to_id[key] = len(self._key_to_id)
        return self._key_to_id[key]

    def __len__(self) -> int:
        return len(self._key_to_id)


class _AdjacencySet:
    """Adjacent vertices of a single vertex, together with the weights of
    the corresponding edges.
    """

    def __init__(self, vertex: Hashable):
        self._vertex = vertex
        self._adjacent_vertices: Dict[Hashable, float] = {}

    def add_edge(self, destination: Hashable, weight: float):
        """Adds an edge to the given destination; when the edge is already
        present, the smaller of the two weights is kept.
        """
        current = self._adjacent_vertices.get(destination)
        if current is None or weight < current:
            self._adjacent_vertices[destination] = weight

    def get_adjacent_vertices(self) -> Tuple[Hashable, ...]:
        return tuple(self._adjacent_vertices)

    def get_edge_weight(self, destination: Hashable) -> float:
        if destination not in self._adjacent_vertices:
            message = f'There is no edge between {self._vertex} and {destination}.'
            raise ValueError(message)
        return self._adjacent_vertices[destination]


class WeightedGraph:
    """Undirected graph with non-negative real edge weights, represented by
    adjacency sets.
    """

    def __init__(self):
        """Constructs a new empty graph.
        """
        self._adjacency_sets: Dict[Hashable, _AdjacencySet] = {}

    def add_vertex(self, vertex: Hashable):
        """Adds the given vertex if it is not present yet.
        """
        if vertex not in self._adjacency_sets:
            self._adjacency_sets[vertex] = _AdjacencySet(vertex)

    def add_edge(self, vertex_one: Hashable, vertex_two: Hashable, weight: float):
        """Adds an undirected edge between the two given vertices.

        Both vertices are added to the graph if they are not present yet.

        Args:
            vertex_one (Hashable): One endpoint of the edge.
            vertex_two (Hashable): The other endpoint of the edge.
            weight (float):        The weight (length) of the edge.

        Raises:
            ValueError: If the weight is negative or not finite, or if the edge
                        would be a loop.
        """
        if not weight >= 0 or weight == float('inf'):
            message = f'Invalid weight {weight} of the edge {vertex_one} - {vertex_two}.'
            raise ValueError(message)
        if vertex_one == vertex_two:
            message = f'Loop edges are not supported (vertex {vertex_one}).'
            raise ValueError(message)
        self.add_vertex(vertex_one)
        self.add_vertex(vertex_two)
        self._adjacency_sets[vertex_one].add_edge(vertex_two, weight)
        self._adjacency_sets[vertex_two].add_edge(vertex_one, weight)

    def get_adjacent_vertices(self, vertex: Hashable) -> Tuple[Hashable, ...]:
        """Returns the vertices adjacent to the given vertex.

        Raises:
            ValueError: If the given vertex is not present in this graph.
        """
        return self._get_adjacency_set(vertex).get_adjacent_vertices()

    def get_edge_weight(self, vertex_one: Hashable, vertex_two: Hashable) -> float:
        """Returns the weight of the edge between the two given vertices.

        Raises:
            ValueError: If either vertex is unknown or there is no such edge.
        """
        return self._get_adjacency_set(vertex_one).get_edge_weight(vertex_two)

    def _get_adjacency_set(self, vertex: Hashable) -> _AdjacencySet:
        if vertex not in self._adjacency_sets:
            message = f'Vertex {vertex} not found.'
            raise ValueError(message)
        return self._adjacency_sets[vertex]

    def __contains__(self, vertex: Hashable) -> bool:
        return vertex in self._adjacency_sets
