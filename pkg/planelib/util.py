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

"""This module provides helper functionalities which support the geodesic
and completeness computations of this library: a priority queue for
Dijkstra's algorithm, a union-find structure for connectivity checks, and
the log-log slope rule deciding whether a finite sequence of estimates
diverges.
"""

from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import Any, Dict, Hashable, Optional, Sequence

import numpy as np


@dataclass(frozen=True)
class QueueableItem:
    """Immutable structure carrying a single item that can be enqueued to an
    instance of the :class: RepriorizablePriorityQueue class.

    The structure is comprised of the following fields:
    * Unique key of the value carried by this queueable item.
    * Priority of the value (lower value means higher priority).
    * Optional data, which is to be used if the item has to carry more than
      just the unique key.
    """
    key: Hashable
    priority: float
    value: Any = None


@dataclass(order=True)
class _QueueEntry:
    priority: float
    sequence: int
    item: Any = field(compare=False)
    irrelevant: bool = field(default=False, compare=False)


class RepriorizablePriorityQueue:
    """Priority queue allowing to modify the priority of elements present in
    the queue.

    Entries with equal priority are dequeued in insertion order, so runs over
    the same input are reproducible.
    """

    def __init__(self):
        """Constructs a new empty repriorizable priority queue.
        """
        self._heap = []
        self._size = 0
        self._sequence = 0
        self._entry_map: Dict[Hashable, _QueueEntry] = {}

    def is_not_empty(self) -> bool:
        """Verifies whether this queue is not empty.

        Returns:
            bool: True if this queue currently contains at least one element;
                  False if this queue is currently empty.
        """
        return self._size > 0

    def __len__(self) -> int:
        return self._size

    def enqueue(self, item: QueueableItem):
        """Adds the given item to this queue.

        If an item with the same key is already present, the new priority
        replaces the old one and the old entry is discarded lazily.

        Args:
            item (QueueableItem): The item to be added to this queue.
        """
        entry = _QueueEntry(item.priority, self._sequence, item)
        self._sequence += 1
        heappush(self._heap, entry)
        if item.key in self._entry_map:
            self._entry_map[item.key].irrelevant = True
        else:
            self._size += 1
        self._entry_map[item.key] = entry

    def dequeue(self) -> QueueableItem:
        """Dequeues the item with the lowest priority value.

        Raises:
            IndexError: If this queue is empty.

        Returns:
            QueueableItem: The dequeued item.
        """
        while self._heap:
            entry = heappop(self._heap)
            if entry.irrelevant:
                continue
            self._entry_map.pop(entry.item.key)
            self._size -= 1
            return entry.item
        message = 'Cannot dequeue from empty queue.'
        raise IndexError(message)


class UnionFind:
    """Union-find (aka disjoint-set) structure with path compression and
    union by size.
    """

    def __init__(self, size: int):
        """Constructs a new instance of union-find with the given capacity.

        Args:
            size (int): The number of elements the constructed instance has to
                        support.
        """
        self._parents = list(range(size))
        self._sizes = [1] * size
        self._subset_count = size

    @property
    def element_count(self) -> int:
        """The number of elements present in this union-find instance.
        """
        return len(self._parents)

    @property
    def subset_count(self) -> int:
        """The number of disjoint subsets currently present.
        """
        return self._subset_count

    def find_subset(self, element: int) -> int:
        """Finds the root element of the subset the given element belongs to.

        Args:
            element (int): The element whose subset is to be found.

        Returns:
            int: The root element of the subset.
        """
        root = element
        while self._parents[root] != root:
            root = self._parents[root]
        # path compression
        while self._parents[element] != root:
            self._parents[element], element = root, self._parents[element]
        return root

    def subset_size(self, element: int) -> int:
        """Returns the size of the subset the given element belongs to.
        """
        return self._sizes[self.find_subset(element)]

    def union(self, element_one: int, element_two: int) -> bool:
        """Merges the subsets the two given elements belong to.

        Args:
            element_one (int): Element of the first subset.
            element_two (int): Element of the second subset.

        Returns:
            bool: True if two subsets have been merged; False if both elements
                  already belonged to the same subset.
        """
        subset_one = self.find_subset(element_one)
        subset_two = self.find_subset(element_two)
        if subset_one == subset_two:
            return False
        if self._sizes[subset_one] < self._sizes[subset_two]:
            subset_one, subset_two = subset_two, subset_one
        self._parents[subset_two] = subset_one
        self._sizes[subset_one] += self._sizes[subset_two]
        self._subset_count -= 1
        return True


@dataclass(frozen=True)
class SlopeFit:
    """Immutable structure representing the outcome of the slope rule applied
    to a sequence of estimates.
    """
    slope: float
    growth: float
    points: int
    diverging: bool

    @property
    def verdict(self) -> str:
        """Either 'diverging' or 'bounded'.
        """
        return 'diverging' if self.diverging else 'bounded'


@dataclass(frozen=True)
class SlopeRule:
    """Decision rule shared by every asymptotic verdict of the library.

    A finite sequence of positive estimates is declared diverging when it
    has at least `min_points` positive terms, the least-squares slope of
    log(value) against log(abscissa) over the second half of those terms
    exceeds `slope_threshold`, and the largest term is at least
    `growth_factor` times the first positive term.
    """
    slope_threshold: float = 0.1
    growth_factor: float = 5.0
    min_points: int = 4

    def __post_init__(self):
        if self.slope_threshold < 0 or self.growth_factor <= 1 or self.min_points < 2:
            message = (f'Invalid slope rule (slope threshold {self.slope_threshold}, '
                       f'growth factor {self.growth_factor}, min points {self.min_points}).')
            raise ValueError(message)

    def fit(self, values: Sequence[float], abscissae: Optional[Sequence[float]] = None) -> SlopeFit:
        """Applies this rule to the given sequence.

        Args:
            values (Sequence[float]):              The estimates, ordered so that
                                                   the asymptotic end comes last.
            abscissae (Sequence[float], optional): Positive abscissae of the
                                                   estimates; the 1-based index
                                                   is used if omitted.

        Returns:
            SlopeFit: The fitted slope, the growth and the verdict.
        """
        y = np.asarray(values, dtype=float)
        if abscissae is None:
            x = np.arange(1, len(y) + 1, dtype=float)
        else:
            x = np.asarray(abscissae, dtype=float)
        if x.shape != y.shape:
            message = f'Got {len(y)} values but {len(x)} abscissae.'
            raise ValueError(message)
        usable = np.isfinite(y) & (y > 0) & np.isfinite(x) & (x > 0)
        x, y = x[usable], y[usable]
        if len(y) < 2:
            return SlopeFit(slope=0.0, growth=1.0, points=len(y), diverging=False)
        growth = float(np.max(y) / y[0])
        tail = len(y) // 2
        log_x, log_y = np.log(x[tail:]), np.log(y[tail:])
        if len(log_x) < 2 or np.ptp(log_x) == 0:
            log_x, log_y = np.log(x), np.log(y)
        slope = float(np.polyfit(log_x, log_y, 1)[0]) if np.ptp(log_x) > 0 else 0.0
        diverging = (len(y) >= self.min_points
                     and slope > self.slope_threshold
                     and growth >= self.growth_factor)
        return SlopeFit(slope=slope, growth=growth, points=len(y), diverging=diverging)
