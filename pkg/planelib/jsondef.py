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

"""This module allows to read paths, plane sets and function expressions
from their JSON definitions.

Points are [re, im] pairs. Plane sets are recognized by their attributes:
{"kind", "params", "depth"} for gallery constructions, {"outer", "holes"}
for regions, {"arcs"} for skeletons and {"parts"} for compound sets.
"""

from fractions import Fraction
from json import loads
from typing import Any, Callable, Dict, List

from planelib.errors import ParameterError
from planelib.funcexpr import Add, Affine, Cantor, Const, CosY, FunctionExpr, Mul, PPow, Piecewise, Poly, Pow, Z
from planelib.geom import PolyPath, is_admissible
from planelib.planeset import Compound, Gallery, GalleryKind, PlaneSet, Region, Skeleton


def _read_number(json_data: Any):
    if isinstance(json_data, bool):
        raise ParameterError(f'Invalid number: {json_data}.')
    if isinstance(json_data, (int, float)):
        return json_data
    if isinstance(json_data, str):
        try:
            return Fraction(json_data)
        except ValueError:
            raise ParameterError(f'Invalid number: {json_data}.')
    return _read_point(json_data)


def _read_point(json_data: Any) -> complex:
    if not isinstance(json_data, (list, tuple)) or len(json_data) != 2:
        raise ParameterError(f'Invalid point: {json_data}, expected [re, im].')
    try:
        return complex(float(json_data[0]), float(json_data[1]))
    except (TypeError, ValueError):
        raise ParameterError(f'Invalid point: {json_data}, expected [re, im].')


def _read_point_list(json_data: Any) -> List[complex]:
    if not isinstance(json_data, list):
        raise ParameterError('Expected a list of points.')
    return [_read_point(point) for point in json_data]


def _read_path(json_data: Any) -> PolyPath:
    vertices = _read_point_list(json_data)
    if not is_admissible(vertices):
        message = f'Inadmissible path with {len(vertices)} vertices.'
        raise ParameterError(message)
    return PolyPath(vertices)


def _read_region(json_data: Dict[str, Any]) -> Region:
    outer = _read_point_list(json_data['outer'])
    holes = [_read_point_list(hole) for hole in json_data.get('holes', [])]
    return Region.of(outer, holes)


def _read_skeleton(json_data: Dict[str, Any]) -> Skeleton:
    arcs = json_data['arcs']
    if not isinstance(arcs, list) or len(arcs) == 0:
        raise ParameterError('Empty arc list.')
    return Skeleton(tuple(_read_path(arc) for arc in arcs))


def _read_compound(json_data: Dict[str, Any]) -> Compound:
    parts = []
    for part in json_data['parts']:
        plane_set = _read_plane_set(part)
        if not isinstance(plane_set, (Region, Skeleton)):
            raise ParameterError('Compound parts must be regions or skeletons.')
        parts.append(plane_set)
    return Compound(tuple(parts))


def _read_gallery(json_data: Dict[str, Any]) -> Gallery:
    try:
        kind = GalleryKind(json_data['kind'])
    except ValueError:
        raise ParameterError(f'Unknown gallery kind: {json_data["kind"]}.')
    params = json_data.get('params', {})
    if not isinstance(params, dict):
        raise ParameterError(f'Invalid gallery parameters: {params}.')
    depth = json_data.get('depth', 1)
    return Gallery(kind, dict(params), depth)


def _read_plane_set(json_data: Any) -> PlaneSet:
    if not isinstance(json_data, dict):
        raise ParameterError('Plane set definition must be a JSON object.')
    if 'kind' in json_data:
        return _read_gallery(json_data)
    if 'outer' in json_data:
        return _read_region(json_data)
    if 'arcs' in json_data:
        return _read_skeleton(json_data)
    if 'parts' in json_data:
        return _read_compound(json_data)
    raise ParameterError('Undefined plane set type.')


def _read_children(json_data: Dict[str, Any], name: str) -> List[FunctionExpr]:
    if name not in json_data or not isinstance(json_data[name], list):
        raise ParameterError(f'Expression node {json_data.get("tag")} without {name}.')
    return [_read_expression(child) for child in json_data[name]]


_NODE_READERS: Dict[str, Callable[[Dict[str, Any]], FunctionExpr]] = {
    'const': lambda json_data: Const(_read_number(json_data['value'])),
    'z': lambda json_data: Z(),
    'add': lambda json_data: Add(tuple(_read_children(json_data, 'terms'))),
    'mul': lambda json_data: Mul(tuple(_read_children(json_data, 'factors'))),
    'pow': lambda json_data: Pow(_read_expression(json_data['base']), json_data['exponent']),
    'poly': lambda json_data: Poly(tuple(_read_number(c) for c in json_data['coeffs'])),
    'affine': lambda json_data: Affine(_read_number(json_data['scale']), _read_number(json_data['shift'])),
    'ppow': lambda json_data: PPow(_read_expression(json_data['arg']), complex(_read_number(json_data['alpha']))),
    'cantor': lambda json_data: Cantor(),
    'cosy': lambda json_data: CosY(_read_number(json_data['a']), _read_number(json_data['b']),
                                   Fraction(_read_number(json_data['frequency'])),
                                   Fraction(_read_number(json_data['phase']))),
    'piecewise': lambda json_data: Piecewise(_read_path(json_data['path']),
                                             [float(b) for b in json_data['breaks']],
                                             _read_children(json_data, 'pieces')),
}


def _read_expression(json_data: Any) -> FunctionExpr:
    if not isinstance(json_data, dict) or 'tag' not in json_data:
        raise ParameterError('Expression node without tag.')
    tag = json_data['tag']
    if tag not in _NODE_READERS:
        raise ParameterError(f'Unknown expression node: {tag}.')
    try:
        return _NODE_READERS[tag](json_data)
    except KeyError as error:
        raise ParameterError(f'Expression node {tag} without attribute {error}.')


def _read_json_file(path: str) -> str:
    with open(path, 'r') as json_file:
        return json_file.read()


def build_path_from_json_string(json_string: str) -> PolyPath:
    """Creates and returns a new path according to the JSON definition (an
    array of [re, im] pairs) represented by the given string.

    Raises:
        ParameterError: If the definition does not describe an admissible
                        path.

    Returns:
        PolyPath: The created path.
    """
    return _read_path(loads(json_string))


def build_path_from_json_file(path: str) -> PolyPath:
    """Creates and returns a new path according to the JSON definition
    contained in the given file.
    """
    return build_path_from_json_string(_read_json_file(path))


def build_plane_set_from_json_string(json_string: str) -> PlaneSet:
    """Creates and returns a new plane set according to the JSON definition
    represented by the given string.

    Args:
        json_string (str): String carrying the JSON definition of the set;
                           gallery constructions stay unmaterialized.

    Raises:
        ParameterError: If the definition is invalid.

    Returns:
        PlaneSet: The created set.
    """
    json_data = loads(json_string)
    try:
        return _read_plane_set(json_data)
    except KeyError as error:
        message = f'Plane set definition without attribute {error}.'
        raise ParameterError(message)


def build_plane_set_from_json_file(path: str) -> PlaneSet:
    """Creates and returns a new plane set according to the JSON definition
    contained in the given file.
    """
    return build_plane_set_from_json_string(_read_json_file(path))


def build_expression_from_json_string(json_string: str) -> FunctionExpr:
    """Creates and returns a new function expression according to the JSON
    expression tree represented by the given string.

    Raises:
        ParameterError: If a node is unknown or incomplete.

    Returns:
        FunctionExpr: The created expression.
    """
    return _read_expression(loads(json_string))


def build_expression_from_json_file(path: str) -> FunctionExpr:
    """Creates and returns a new function expression according to the JSON
    expression tree contained in the given file.
    """
    return build_expression_from_json_string(_read_json_file(path))
