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


"""Unit tests for the planelib.util module.
"""

from hypothesis import given, strategies as st
from pytest import raises

from planelib.util import QueueableItem, RepriorizablePriorityQueue, SlopeRule, UnionFind


class TestRepriorizablePriorityQueue: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the class :class:
    planelib.util.RepriorizablePriorityQueue.
    """

    def test_virgin_priority_queue_is_empty(self):
        queue = RepriorizablePriorityQueue()
        assert queue.is_not_empty() == False
        assert len(queue) == 0

    def test_priority_queue_with_elements_is_not_empty(self):
        queue = RepriorizablePriorityQueue()

        queue.enqueue(QueueableItem(key='D', priority=4))
        queue.enqueue(QueueableItem(key='A', priority=5))
        assert queue.is_not_empty()

        queue.dequeue()
        assert queue.is_not_empty()
        assert len(queue) == 1

    def test_priority_queue_after_removal_of_last_element_is_empty(self):
        queue = RepriorizablePriorityQueue()

        queue.enqueue(QueueableItem(key='A', priority=5))
        queue.enqueue(QueueableItem(key='B', priority=3))
        queue.dequeue()
        queue.dequeue()
        assert queue.is_not_empty() == False

    def test_dequeing_from_priority_queue_reflects_priority(self):
        queue = RepriorizablePriorityQueue()
        queue.enqueue(QueueableItem(key='D', priority=4.5))
        queue.enqueue(QueueableItem(key='A', priority=0.5))
        queue.enqueue(QueueableItem(key='C', priority=2.25))
        queue.enqueue(QueueableItem(key='B', priority=1.0))

        assert [queue.dequeue().key for _ in range(4)] == ['A', 'B', 'C', 'D']

    def test_items_with_equal_priority_are_dequeued_in_insertion_order(self):
        queue = RepriorizablePriorityQueue()
        for key in 'XYZW':
            queue.enqueue(QueueableItem(key=key, priority=1.0))

        assert [queue.dequeue().key for _ in range(4)] == ['X', 'Y', 'Z', 'W']

    def test_dequeing_from_priority_queue_reflects_modification_of_priority(self):
        queue = RepriorizablePriorityQueue()
        queue.enqueue(QueueableItem(key='A', priority=5))
        queue.enqueue(QueueableItem(key='B', priority=3))
        queue.enqueue(QueueableItem(key='A', priority=1, value=1 + 1j))

        item = queue.dequeue()
        assert item == QueueableItem(key='A', priority=1, value=1 + 1j)
        assert queue.dequeue().key == 'B'

    def test_items_with_modified_priority_are_counted_just_once(self):
        queue = RepriorizablePriorityQueue()
        queue.enqueue(QueueableItem(key='A', priority=5))
        queue.enqueue(QueueableItem(key='A', priority=2))
        queue.enqueue(QueueableItem(key='A', priority=7))

        assert len(queue) == 1
        assert queue.dequeue().priority == 7
        assert queue.is_not_empty() == False

    def test_attempt_to_deque_from_virgin_queue_leads_to_error(self):
        queue = RepriorizablePriorityQueue()
        with raises(IndexError, match=r'Cannot dequeue from empty queue\.'):
            queue.dequeue()

    def test_attempt_to_deque_from_empty_queue_after_reprioritization_leads_to_error(self):
        queue = RepriorizablePriorityQueue()
        queue.enqueue(QueueableItem(key='A', priority=5))
        queue.enqueue(QueueableItem(key='A', priority=3))
        queue.dequeue()
        with raises(IndexError, match=r'Cannot dequeue from empty queue\.'):
            queue.dequeue()

    @given(st.lists(st.floats(min_value=-1e6, max_value=1e6), min_size=1, max_size=50))
    def test_dequeued_priorities_are_sorted(self, priorities):
        queue = RepriorizablePriorityQueue()
        for index, priority in enumerate(priorities):
            queue.enqueue(QueueableItem(key=index, priority=priority))

        dequeued = [queue.dequeue().priority for _ in range(len(priorities))]
        assert dequeued == sorted(priorities)


class TestUnionFind: # pylint: disable=R0201,C0116,C0301,C0121
    """Collection of test methods exercising the class :class:
    planelib.util.UnionFind.
    """

    def test_each_element_has_its_own_subset_in_virgin_union_find_instance(self):
        union_find = UnionFind(10)
        assert union_find.element_count == 10
        assert union_find.subset_count == 10
        for element in range(10):
            assert union_find.find_subset(element) == element
            assert union_find.subset_size(element) == 1

    def test_union_of_elements_belonging_to_distinct_subsets_returns_true(self):
        union_find = UnionFind(10)
        assert union_find.union(2, 7)

    def test_union_of_elements_belonging_to_distinct_subsets_merges_their_subsets(self):
        union_find = UnionFind(10)
        union_find.union(2, 7)
        union_find.union(7, 4)

        assert union_find.find_subset(2) == union_find.find_subset(4) == union_find.find_subset(7)
        assert union_find.subset_count == 8
        assert union_find.subset_size(4) == 3
        assert union_find.subset_size(5) == 1

    def test_union_of_elements_already_belonging_to_the_same_subset_returns_false(self):
        union_find = UnionFind(10)
        union_find.union(1, 3)
        union_find.union(3, 5)

        assert union_find.union(1, 5) == False
        assert union_find.subset_count == 8
        assert union_find.subset_size(1) == 3

    def test_chain_of_unions_leaves_single_subset(self):
        union_find = UnionFind(6)
        for element in range(5):
            union_find.union(element, element + 1)

        assert union_find.subset_count == 1
        assert union_find.subset_size(0) == 6


class TestSlopeRule: # pylint: disable=R0201,C0116,C0121
    """Collection of test methods exercising the class :class:
    planelib.util.SlopeRule.
    """

    def test_linearly_growing_sequence_is_diverging(self):
        fit = SlopeRule().fit([float(n) for n in range(1, 21)])
        assert fit.diverging
        assert fit.verdict == 'diverging'
        assert abs(fit.slope - 1.0) < 1e-9
        assert fit.growth == 20.0
        assert fit.points == 20

    def test_constant_sequence_is_bounded(self):
        fit = SlopeRule().fit([3.0] * 12)
        assert fit.diverging == False
        assert fit.verdict == 'bounded'
        assert fit.growth == 1.0

    def test_slowly_converging_sequence_is_bounded(self):
        fit = SlopeRule().fit([2.0 - 1.0 / n for n in range(1, 31)])
        assert fit.verdict == 'bounded'

    def test_too_short_sequence_is_never_diverging(self):
        fit = SlopeRule().fit([1.0, 10.0, 100.0])
        assert fit.diverging == False

    def test_growth_below_growth_factor_is_not_diverging(self):
        # slope 1 but growth only 2
        fit = SlopeRule().fit([1.0, 1.2, 1.4, 1.6, 1.8, 2.0], abscissae=[1.0, 1.2, 1.4, 1.6, 1.8, 2.0])
        assert fit.slope > 0.9
        assert fit.diverging == False

    def test_non_positive_and_infinite_values_are_ignored(self):
        fit = SlopeRule().fit([0.0, -1.0, float('inf'), 1.0, 2.0, 4.0, 8.0, 16.0])
        assert fit.points == 5
        assert fit.diverging

    def test_single_usable_value_gives_bounded_fit(self):
        fit = SlopeRule().fit([0.0, 5.0])
        assert fit.points == 1
        assert fit.verdict == 'bounded'

    def test_explicit_abscissae_are_used_for_slope(self):
        abscissae = [2.0 ** k for k in range(1, 11)]
        fit = SlopeRule().fit([x ** 0.5 for x in abscissae], abscissae=abscissae)
        assert abs(fit.slope - 0.5) < 1e-9
        assert fit.diverging

    def test_mismatching_abscissae_lead_to_error(self):
        with raises(ValueError, match=r'Got 3 values but 2 abscissae\.'):
            SlopeRule().fit([1.0, 2.0, 3.0], abscissae=[1.0, 2.0])

    def test_invalid_parameters_lead_to_error(self):
        with raises(ValueError, match=r'Invalid slope rule'):
            SlopeRule(slope_threshold=-0.1)
        with raises(ValueError, match=r'Invalid slope rule'):
            SlopeRule(growth_factor=1.0)
        with raises(ValueError, match=r'Invalid slope rule'):
            SlopeRule(min_points=1)
