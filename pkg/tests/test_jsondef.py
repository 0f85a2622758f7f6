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


"""Unit tests for the planelib.jsondef module.
"""

from abc import ABC, abstractproperty
from fractions import Fraction
from json import dumps
import os
from tempfile import NamedTemporaryFile
from typing import Callable

import numpy as np
from pytest import approx, raises

from planelib.errors import ParameterError
from planelib.funcexpr import Cantor, Poly, zpow
from planelib.jsondef import build_expression_from_json_file, build_expression_from_json_string
from planelib.jsondef import build_path_from_json_file, build_path_from_json_string
from planelib.jsondef import build_plane_set_from_json_file, build_plane_set_from_json_string
from planelib.planeset import Compound, Gallery, GalleryKind, Region, Skeleton

# pylint: disable=C0116


def _from_file(builder: Callable) -> Callable:
    def build(json_string: str):
        with NamedTemporaryFile('w', suffix='.json', delete=False) as json_file:
            json_file.write(json_string)
        try:
            return builder(json_file.name)
        finally:
            os.remove(json_file.name)
    return build


class AbstractPlaneSetBuildingTestFixture(ABC):
    """Abstract test-fixture class that implements test methods common to methods
    building a plane set according to JSON definition.

    This class is supposed to be used as base class for test fixtures for specific
    set-building methods, i.e.:
    * :method: planelib.jsondef.build_plane_set_from_json_string
    * :method: planelib.jsondef.build_plane_set_from_json_file
    """

    @abstractproperty
    def _tested_function(self) -> Callable:
        raise NotImplementedError

    def test_region_with_hole_is_built_properly_from_valid_definition(self):
        json_string = """
{
    "outer": [[0, 0], [3, 0], [3, 3], [0, 3]],
    "holes": [
        [[1, 1], [1, 2], [2, 2], [2, 1]]
    ]
}
"""
        plane_set = self._tested_function(json_string)

        assert isinstance(plane_set, Region)
        assert plane_set.outer == (0j, 3 + 0j, 3 + 3j, 3j)
        assert plane_set.holes == ((1 + 1j, 1 + 2j, 2 + 2j, 2 + 1j),)
        assert plane_set.polygon.area == approx(8.0)

    def test_region_without_holes_is_built_properly_from_valid_definition(self):
        plane_set = self._tested_function('{"outer": [[0, 0], [1, 0], [0, 1], [0, 0]]}')

        assert plane_set == Region((0j, 1 + 0j, 1j))

    def test_skeleton_is_built_properly_from_valid_definition(self):
        json_string = """
{
    "arcs": [
        [[0, 0], [1, 0], [1, 1]],
        [[1, 1], [0, 1]]
    ]
}
"""
        plane_set = self._tested_function(json_string)

        assert isinstance(plane_set, Skeleton)
        assert len(plane_set.arcs) == 2
        assert plane_set.arcs[0].points == approx(np.array([0, 1, 1 + 1j]))
        assert plane_set.length == approx(3.0)

    def test_compound_set_is_built_properly_from_valid_definition(self):
        json_string = """
{
    "parts": [
        {"outer": [[0, 0], [1, 0], [1, 1], [0, 1]]},
        {"arcs": [[[1, 1], [2, 2]]]}
    ]
}
"""
        plane_set = self._tested_function(json_string)

        assert isinstance(plane_set, Compound)
        assert isinstance(plane_set.parts[0], Region)
        assert isinstance(plane_set.parts[1], Skeleton)

    def test_gallery_construction_is_built_properly_from_valid_definition(self):
        json_string = """
{
    "kind": "dented-square",
    "params": {"r": "ns", "s": {"rule": "geometric", "base": 4}},
    "depth": 5
}
"""
        plane_set = self._tested_function(json_string)

        assert plane_set == Gallery(GalleryKind.DENTED_SQUARE,
                                    {'r': 'ns', 's': {'rule': 'geometric', 'base': 4}}, 5)

    def test_gallery_construction_without_depth_has_depth_one(self):
        plane_set = self._tested_function('{"kind": "koch-arc"}')

        assert plane_set == Gallery(GalleryKind.KOCH_ARC, {}, 1)

    def test_attempt_to_build_unknown_gallery_kind_leads_to_error(self):
        with raises(ParameterError, match=r'Unknown gallery kind: spiral\.'):
            self._tested_function('{"kind": "spiral", "depth": 3}')

    def test_attempt_to_build_gallery_with_unknown_parameter_leads_to_error(self):
        with raises(ParameterError, match=r'Unknown parameters for koch-arc: r\.'):
            self._tested_function('{"kind": "koch-arc", "params": {"r": "s"}}')

    def test_attempt_to_build_set_of_undefined_type_leads_to_error(self):
        with raises(ParameterError, match=r'Undefined plane set type\.'):
            self._tested_function('{"vertices": [[0, 0], [1, 0]]}')

    def test_attempt_to_build_set_from_json_array_leads_to_error(self):
        with raises(ParameterError, match=r'Plane set definition must be a JSON object\.'):
            self._tested_function('[[0, 0], [1, 0]]')

    def test_attempt_to_build_region_with_invalid_point_leads_to_error(self):
        with raises(ParameterError, match=r'Invalid point: \[1, 0, 0\], expected \[re, im\]\.'):
            self._tested_function('{"outer": [[0, 0], [1, 0, 0], [0, 1]]}')

    def test_attempt_to_build_self_intersecting_region_leads_to_error(self):
        with raises(ParameterError, match=r'Invalid region'):
            self._tested_function('{"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]}')

    def test_attempt_to_build_skeleton_with_inadmissible_arc_leads_to_error(self):
        with raises(ParameterError, match=r'Inadmissible path with 3 vertices\.'):
            self._tested_function('{"arcs": [[[0, 0], [1, 0], [1, 0]]]}')

    def test_attempt_to_build_skeleton_without_arcs_leads_to_error(self):
        with raises(ParameterError, match=r'Empty arc list\.'):
            self._tested_function('{"arcs": []}')

    def test_attempt_to_build_compound_of_galleries_leads_to_error(self):
        with raises(ParameterError, match=r'Compound parts must be regions or skeletons\.'):
            self._tested_function('{"parts": [{"kind": "koch-arc"}]}')


class TestBuildPlaneSetFromJsonString(AbstractPlaneSetBuildingTestFixture):
    """Collection of test methods exercising the method :method:
    planelib.jsondef.build_plane_set_from_json_string.
    """

    @property
    def _tested_function(self) -> Callable:
        return build_plane_set_from_json_string


class TestBuildPlaneSetFromJsonFile(AbstractPlaneSetBuildingTestFixture):
    """Collection of test methods exercising the method :method:
    planelib.jsondef.build_plane_set_from_json_file.
    """

    @property
    def _tested_function(self) -> Callable:
        return _from_file(build_plane_set_from_json_file)


class TestBuildPath:
    """Collection of test methods exercising the methods building a path
    according to JSON definition.
    """

    def test_path_is_built_properly_from_valid_definition(self):
        path = build_path_from_json_string('[[0, 0], [3, 4], [3, 0]]')

        assert path.points == approx(np.array([0, 3 + 4j, 3]))
        assert path.length == approx(9.0)

    def test_path_is_built_properly_from_file(self):
        path = _from_file(build_path_from_json_file)('[[0, 0], [0, 2]]')

        assert path.length == approx(2.0)

    def test_attempt_to_build_single_point_path_leads_to_error(self):
        with raises(ParameterError, match=r'Inadmissible path with 1 vertices\.'):
            build_path_from_json_string('[[0, 0]]')

    def test_attempt_to_build_path_from_object_leads_to_error(self):
        with raises(ParameterError, match=r'Expected a list of points\.'):
            build_path_from_json_string('{"points": []}')


class TestBuildExpression:
    """Collection of test methods exercising the methods building a function
    expression according to JSON expression tree.
    """

    def test_polynomial_with_rational_coefficients_stays_exact(self):
        expression = build_expression_from_json_string('{"tag": "poly", "coeffs": [1, "1/2"]}')

        assert expression == Poly((1, Fraction(1, 2)))
        assert expression.exact(Fraction(2), Fraction(0)) == (Fraction(2), Fraction(0))

    def test_nested_expression_is_built_properly(self):
        json_string = """
{
    "tag": "add",
    "terms": [
        {"tag": "mul", "factors": [{"tag": "const", "value": 2}, {"tag": "z"}]},
        {"tag": "ppow", "arg": {"tag": "z"}, "alpha": [0.5, 0]}
    ]
}
"""
        expression = build_expression_from_json_string(json_string)

        assert expression(4 + 0j) == approx(10.0)

    def test_expression_written_as_json_is_read_back(self):
        original = zpow(1 + 1j)
        expression = build_expression_from_json_string(dumps(original.to_json()))

        points = np.array([1 + 1j, -2 + 0.5j, 0.25 - 3j])
        assert expression(points) == approx(original(points))

    def test_cantor_expression_is_read_from_file(self):
        expression = _from_file(build_expression_from_json_file)('{"tag": "cantor"}')

        assert expression == Cantor()

    def test_attempt_to_build_unknown_node_leads_to_error(self):
        with raises(ParameterError, match=r'Unknown expression node: sin\.'):
            build_expression_from_json_string('{"tag": "sin", "arg": {"tag": "z"}}')

    def test_attempt_to_build_node_without_tag_leads_to_error(self):
        with raises(ParameterError, match=r'Expression node without tag\.'):
            build_expression_from_json_string('{"value": 1}')

    def test_attempt_to_build_incomplete_node_leads_to_error(self):
        with raises(ParameterError, match=r"Expression node pow without attribute 'base'\."):
            build_expression_from_json_string('{"tag": "pow", "exponent": 2}')

    def test_attempt_to_build_node_without_children_leads_to_error(self):
        with raises(ParameterError, match=r'Expression node add without terms\.'):
            build_expression_from_json_string('{"tag": "add"}')

    def test_attempt_to_build_boolean_constant_leads_to_error(self):
        with raises(ParameterError, match=r'Invalid number: True\.'):
            build_expression_from_json_string('{"tag": "const", "value": true}')
