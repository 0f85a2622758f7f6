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


"""Unit tests for the planelib.dump module.
"""

from io import StringIO
from json import loads

from planelib.dump import dump_completeness_report, dump_geodesic_result, dump_plane_set
from planelib.dump import dump_regularity_report, dump_suite_report, report_overlays, to_svg
from planelib.geodesic import GeodesicResult, RegularityReport
from planelib.geom import PolyPath
from planelib.jsondef import build_plane_set_from_json_string
from planelib.planeset import Compound, Gallery, GalleryKind, Region, Skeleton
from planelib.qx import INCOMPLETE, CompletenessReport, QxEstimate, QxWitness
from planelib.suites import SuiteCheck, SuiteReport
from planelib.util import SlopeFit


_SQUARE_WITH_HOLE = Region.of([0j, 3 + 0j, 3 + 3j, 3j], [[1 + 1j, 1 + 2j, 2 + 2j, 2 + 1j]])


def _dumped(dump_function, data) -> str:
    with StringIO() as output:
        dump_function(data, output)
        return output.getvalue()


class TestDumpPlaneSet: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the :method:
    planelib.dump.dump_plane_set.
    """

    def test_gallery_construction_is_dumped_properly(self):
        result = _dumped(dump_plane_set, Gallery(GalleryKind.BAD_ARC, {}, 6))

        assert result == """{
  "depth": 6,
  "kind": "bad-arc",
  "params": {}
}
"""

    def test_region_is_dumped_properly(self):
        result = loads(_dumped(dump_plane_set, _SQUARE_WITH_HOLE))

        assert result == {
            'outer': [[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]],
            'holes': [[[1.0, 1.0], [1.0, 2.0], [2.0, 2.0], [2.0, 1.0]]],
        }

    def test_compound_set_is_dumped_properly(self):
        compound = Compound((Region.of([0j, 1 + 0j, 1 + 1j]), Skeleton((PolyPath([1 + 1j, 2 + 1j]),))))
        result = loads(_dumped(dump_plane_set, compound))

        assert result == {
            'parts': [
                {'outer': [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]], 'holes': []},
                {'arcs': [[[1.0, 1.0], [2.0, 1.0]]]},
            ]
        }

    def test_dumped_sets_are_read_back_unchanged(self):
        gallery = Gallery(GalleryKind.DENTED_SQUARE, {'r': 'ns', 's': '4^-n'}, 7)
        for plane_set in (gallery, _SQUARE_WITH_HOLE):
            assert build_plane_set_from_json_string(_dumped(dump_plane_set, plane_set)) == plane_set


class TestToSvg: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the :method:
    planelib.dump.to_svg.
    """

    def test_region_is_drawn_as_single_path(self):
        result = _dumped(to_svg, _SQUARE_WITH_HOLE)

        assert result.startswith('<?xml version="1.0" standalone="no"?>\n<svg ')
        assert result.endswith('</svg>\n')
        assert result.count('<path ') == 1
        assert result.count(' Z') == 2
        assert 'fill-rule="evenodd"' in result

    def test_skeleton_arcs_are_drawn_as_polylines(self):
        skeleton = Gallery(GalleryKind.CROSSED_SQUARE, {}, 2).materialize()
        result = _dumped(to_svg, skeleton)

        assert result.count('<polyline ') == len(skeleton.arcs)
        assert '<path ' not in result

    def test_overlays_and_style_are_applied(self):
        with StringIO() as output:
            to_svg(_SQUARE_WITH_HOLE, output, style={'fill': '#ffffff'}, overlays=[(0j, 5 + 5j), (1j, 2j)])
            result = output.getvalue()

        assert result.count('<circle ') == 2
        assert 'fill:#ffffff' in result
        assert 'stroke:#d62728' in result


class TestDumpResults: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the methods dumping geodesics,
    regularity reports and suite reports.
    """

    def test_geodesic_is_dumped_properly(self):
        result = GeodesicResult(PolyPath([0j, 1 + 0j, 1 + 1j]), 2.0)

        assert loads(_dumped(dump_geodesic_result, result)) == {
            'start': [0.0, 0.0],
            'end': [1.0, 1.0],
            'length': 2.0,
            'path': [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]],
        }

    def test_degenerate_geodesic_is_dumped_as_single_vertex(self):
        result = GeodesicResult(None, 0.0, 0.5 + 0.5j)

        assert loads(_dumped(dump_geodesic_result, result)) == {
            'start': [0.5, 0.5],
            'end': [0.5, 0.5],
            'length': 0.0,
            'path': [[0.5, 0.5]],
        }

    def test_regularity_report_is_dumped_properly(self):
        report = RegularityReport(0j, ((1j, 1.0), (0.5j, 1.5)), 1.5, SlopeFit(0.58, 1.5, 2, False))

        assert loads(_dumped(dump_regularity_report, report)) == {
            'z': [0.0, 0.0],
            'kz': 1.5,
            'verdict': 'bounded',
            'samples': [{'w': [0.0, 1.0], 'quotient': 1.0}, {'w': [0.0, 0.5], 'quotient': 1.5}],
            'fit': {'slope': 0.58, 'growth': 1.5, 'points': 2, 'verdict': 'bounded'},
        }

    def test_suite_report_is_dumped_properly(self):
        report = SuiteReport('thm32', (SuiteCheck('quotient n=1', True), SuiteCheck('quotient n=2', False, '7')))

        assert loads(_dumped(dump_suite_report, report)) == {
            'suite': 'thm32',
            'passed': False,
            'checks': [
                {'name': 'quotient n=1', 'passed': True, 'detail': ''},
                {'name': 'quotient n=2', 'passed': False, 'detail': '7'},
            ],
        }


class TestDumpCompletenessReport: # pylint: disable=R0201,C0116
    """Collection of test methods exercising the :method:
    planelib.dump.dump_completeness_report.
    """

    def _report(self) -> CompletenessReport:
        witnesses = (QxWitness('zpow', 0.5j, 2.0, az=0.25), QxWitness('zpow', 0.25j, 4.0))
        fits = (('dents', SlopeFit(1.0, 10.0, 5, True)),)
        estimate = QxEstimate(0j, witnesses, fits, notes=('dent 3 skipped',))
        return CompletenessReport((estimate,), None, None, ('no star centre',))

    def test_report_is_dumped_properly(self):
        result = loads(_dumped(dump_completeness_report, self._report()))

        assert result == {
            'verdict': INCOMPLETE,
            'probes': [{
                'z': [0.0, 0.0],
                'bounds': [
                    {'test': 'zpow', 'w': [0.0, 0.5], 'bound': 2.0, 'az': 0.25},
                    {'test': 'zpow', 'w': [0.0, 0.25], 'bound': 4.0},
                ],
                'best': 4.0,
                'verdict': INCOMPLETE,
                'growth': 'diverging',
                'slope': 1.0,
                'families': {'dents': {'slope': 1.0, 'growth': 10.0, 'points': 5, 'verdict': 'diverging'}},
                'notes': ['dent 3 skipped'],
            }],
            'star_centre': None,
            'hull_verdict': None,
            'notes': ['no star centre'],
        }

    def test_overlays_join_probes_and_witnesses(self):
        assert report_overlays(self._report()) == [(0j, 0.5j), (0j, 0.25j)]
