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


"""Unit tests for the planelib.algorithms module.
"""

from pytest import raises

from planelib.algorithms import ShortestPathSearchRequest, ShortestPathSearchResult, _DistanceTable
from planelib.algorithms import find_shortest_path
from planelib.errors import UnreachableError
from planelib.graph import Edge, WeightedGraph


def _build_graph(*edges) -> WeightedGraph:
    graph = WeightedGraph()
    for start, destination, weight in edges:
        graph.add_edge(start, destination, weight)
    return graph


class TestDistanceTable: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the class :class:
    planelib.algorithms._DistanceTable.
    """

    def test_starting_vertex_has_zero_distance_and_is_its_own_predecessor(self):
        distance_table = _DistanceTable('A')
        assert distance_table.get_distance_from_start('A') == 0.0
        assert distance_table.get_predecessor('A') == 'A'
        assert 'A' in distance_table

    def test_first_update_of_vertex_creates_entry(self):
        distance_table = _DistanceTable('A')
        assert distance_table.update('B', 'A', 5.0)
        assert distance_table.get_distance_from_start('B') == 5.0
        assert distance_table.get_predecessor('B') == 'A'

    def test_update_with_shorter_distance_changes_entry(self):
        distance_table = _DistanceTable('A')
        distance_table.update('B', 'A', 5.0)
        assert distance_table.update('B', 'C', 3.0)
        assert distance_table.get_distance_from_start('B') == 3.0
        assert distance_table.get_predecessor('B') == 'C'

    def test_update_with_longer_or_equal_distance_is_ignored(self):
        distance_table = _DistanceTable('A')
        distance_table.update('B', 'A', 5.0)
        assert distance_table.update('B', 'C', 7.0) == False
        assert distance_table.update('B', 'D', 5.0) == False
        assert distance_table.get_predecessor('B') == 'A'

    def test_backtracking_restores_edges_with_their_weights(self):
        distance_table = _DistanceTable('A')
        distance_table.update('B', 'A', 2.0)
        distance_table.update('C', 'B', 5.0)
        distance_table.update('D', 'C', 6.0)

        result = distance_table.backtrack_shortest_path('D')
        assert result == ShortestPathSearchResult((Edge('A', 'B', 2.0), Edge('B', 'C', 3.0), Edge('C', 'D', 1.0)))

    def test_backtracking_to_starting_vertex_gives_empty_path(self):
        distance_table = _DistanceTable('A')
        assert distance_table.backtrack_shortest_path('A').path == ()

    def test_attempt_to_get_distance_of_unknown_vertex_leads_to_error(self):
        distance_table = _DistanceTable('A')
        with raises(ValueError, match=r'No distance table entry found for the vertex X\.'):
            distance_table.get_distance_from_start('X')

    def test_attempt_to_backtrack_to_unreached_vertex_leads_to_error(self):
        distance_table = _DistanceTable('A')
        with raises(UnreachableError, match=r'There is no path from A to X\.'):
            distance_table.backtrack_shortest_path('X')


class TestShortestPathSearchResult: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the class :class:
    planelib.algorithms.ShortestPathSearchResult.
    """

    def test_result_provides_endpoints_distance_and_vertices(self):
        result = ShortestPathSearchResult((Edge('A', 'B', 1.5), Edge('B', 'C', 2.0)))
        assert result.start == 'A'
        assert result.destination == 'C'
        assert result.overall_distance == 3.5
        assert result.vertices() == ('A', 'B', 'C')

    def test_empty_result_has_no_vertices(self):
        assert ShortestPathSearchResult(()).vertices() == ()


class TestShortestPathSearch: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the method :method:
    planelib.algorithms.find_shortest_path.
    """

    def test_direct_edge_is_found(self):
        graph = _build_graph(('A', 'B', 4))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'B'))
        assert result == ShortestPathSearchResult((Edge('A', 'B', 4),))

    def test_detour_shorter_than_direct_edge_is_preferred(self):
        graph = _build_graph(('A', 'B', 10), ('A', 'C', 3), ('C', 'B', 4))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'B'))
        assert result == ShortestPathSearchResult((Edge('A', 'C', 3), Edge('C', 'B', 4)))
        assert result.overall_distance == 7

    def test_edges_can_be_traversed_in_both_directions(self):
        graph = _build_graph(('B', 'A', 1), ('C', 'B', 2), ('D', 'C', 3))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'D'))
        assert result.vertices() == ('A', 'B', 'C', 'D')
        assert result.overall_distance == 6

    def test_shortest_path_in_larger_graph(self):
        graph = _build_graph(
            ('A', 'B', 7), ('A', 'C', 9), ('A', 'F', 14), ('B', 'C', 10), ('B', 'D', 15),
            ('C', 'D', 11), ('C', 'F', 2), ('D', 'E', 6), ('E', 'F', 9))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'E'))
        assert result == ShortestPathSearchResult((Edge('A', 'C', 9), Edge('C', 'F', 2), Edge('F', 'E', 9)))

    def test_plane_points_can_serve_as_vertices(self):
        graph = _build_graph((0j, 1 + 0j, 1.0), (1 + 0j, 1 + 1j, 1.0), (0j, 1 + 1j, 2 ** 0.5))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 0j, 1 + 1j))
        assert result.vertices() == (0j, 1 + 1j)
        assert result.overall_distance == 2 ** 0.5

    def test_path_from_vertex_to_itself_is_empty(self):
        graph = _build_graph(('A', 'B', 1))
        result = find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'A'))
        assert result.path == ()
        assert result.overall_distance == 0

    def test_attempt_to_search_from_unknown_vertex_leads_to_error(self):
        graph = _build_graph(('A', 'B', 1))
        with raises(ValueError, match=r'Start vertex X not found\.'):
            find_shortest_path(ShortestPathSearchRequest(graph, 'X', 'A'))

    def test_attempt_to_reach_vertex_of_another_component_leads_to_error(self):
        graph = _build_graph(('A', 'B', 1), ('C', 'D', 1))
        with raises(UnreachableError, match=r'There is no path from A to D\.'):
            find_shortest_path(ShortestPathSearchRequest(graph, 'A', 'D'))
