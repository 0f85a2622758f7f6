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

"""This module provides methods allowing to dump various data structures
like a plane set, a geodesic or a completeness report.

Plane sets can be dumped as JSON definitions (readable by
:mod: planelib.jsondef) or drawn as SVG documents; results and reports are
dumped as JSON with sorted keys, points being written as [re, im] pairs.
"""

from json import dump
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

from planelib.geodesic import GeodesicResult, RegularityReport
from planelib.geom import PolyPath
from planelib.planeset import Compound, Gallery, PlaneSet, Region, Skeleton, resolve
from planelib.qx import CompletenessReport, QxEstimate
from planelib.util import SlopeFit


DEFAULT_STYLE = {
    'fill': '#c8d7e6',
    'stroke': '#1f3b57',
    'stroke_width': 1.0,
    'overlay_stroke': '#d62728',
}

_SVG_SIZE = 600.0


def _point(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def _path(path: PolyPath) -> List[List[float]]:
    return [_point(z) for z in path.points]


def plane_set_to_json(plane_set: PlaneSet) -> Dict[str, Any]:
    """Returns the JSON definition of the given plane set; gallery
    constructions keep their parameters and depth.
    """
    if isinstance(plane_set, Gallery):
        return {'kind': plane_set.kind.value, 'params': dict(plane_set.params), 'depth': plane_set.depth}
    if isinstance(plane_set, Region):
        return {'outer': [_point(z) for z in plane_set.outer],
                'holes': [[_point(z) for z in hole] for hole in plane_set.holes]}
    if isinstance(plane_set, Skeleton):
        return {'arcs': [_path(arc) for arc in plane_set.arcs]}
    return {'parts': [plane_set_to_json(part) for part in plane_set.parts]}


def _write_json(data: Any, output) -> None:
    dump(data, output, sort_keys=True, indent=2)
    output.write('\n')


def dump_plane_set(plane_set: PlaneSet, output):
    """Dumps the JSON definition of the given plane set to the given text
    output.

    Args:
        plane_set (PlaneSet): The plane set to be dumped.
        output:               The text output the dump is to be written to.
                              It can be a file, sys.stdout, or an
                              io.StringIO instance.
    """
    _write_json(plane_set_to_json(plane_set), output)


def _svg_coords(points: Iterable[complex]) -> str:
    # SVG y axis points down
    return ' '.join(f'{z.real:.6f},{-z.imag:.6f}' for z in points)


def _region_path(region: Region) -> str:
    commands = []
    for ring in (region.outer,) + tuple(region.holes):
        commands.append('M ' + ' L '.join(f'{z.real:.6f},{-z.imag:.6f}' for z in ring) + ' Z')
    return ' '.join(commands)


def to_svg(plane_set: PlaneSet, output, style: Optional[Mapping[str, Any]] = None,
           overlays: Iterable[Tuple[complex, complex]] = ()):
    """Draws the given plane set as an SVG document written to the given text
    output.

    Every region becomes one filled path element (holes cut out by the
    even-odd rule), every skeleton arc one stroked polyline. Overlays are
    segments, typically joining a probe point to its witnesses, drawn in a
    contrasting stroke with a small circle at their end.

    Args:
        plane_set (PlaneSet):         The set to be drawn.
        output:                       The text output the document is to be
                                      written to.
        style (Mapping, optional):    Overrides of :data: DEFAULT_STYLE.
        overlays (Iterable, optional): Segments (z, w) to be drawn on top.
    """
    style = {**DEFAULT_STYLE, **(style or {})}
    materialized = resolve(plane_set)
    overlays = [(complex(z), complex(w)) for z, w in overlays]
    min_x, min_y, max_x, max_y = materialized.geometry.bounds
    for z, w in overlays:
        min_x, max_x = min(min_x, z.real, w.real), max(max_x, z.real, w.real)
        min_y, max_y = min(min_y, z.imag, w.imag), max(max_y, z.imag, w.imag)
    size = max(max_x - min_x, max_y - min_y, 1e-12)
    pad = 0.05 * size
    width = (max_x - min_x + 2 * pad) / size * _SVG_SIZE
    height = (max_y - min_y + 2 * pad) / size * _SVG_SIZE
    stroke_width = style['stroke_width'] * size / _SVG_SIZE
    output.write('<?xml version="1.0" standalone="no"?>\n')
    output.write(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3f}" height="{height:.3f}" '
                 f'viewBox="{min_x - pad:.6f} {-max_y - pad:.6f} {max_x - min_x + 2 * pad:.6f} '
                 f'{max_y - min_y + 2 * pad:.6f}">\n')
    parts = materialized.parts if isinstance(materialized, Compound) else (materialized,)
    for part in parts:
        if isinstance(part, Region):
            output.write(f'<path d="{_region_path(part)}" fill-rule="evenodd" '
                         f'style="fill:{style["fill"]};stroke:{style["stroke"]};stroke-width:{stroke_width:.6g}"/>\n')
        else:
            for arc in part.arcs:
                output.write(f'<polyline points="{_svg_coords(arc.points)}" '
                             f'style="fill:none;stroke:{style["stroke"]};stroke-width:{stroke_width:.6g}"/>\n')
    for z, w in overlays:
        output.write(f'<polyline points="{_svg_coords((z, w))}" '
                     f'style="fill:none;stroke:{style["overlay_stroke"]};stroke-width:{stroke_width:.6g}"/>\n')
        output.write(f'<circle cx="{w.real:.6f}" cy="{-w.imag:.6f}" r="{2 * stroke_width:.6g}" '
                     f'style="fill:{style["overlay_stroke"]}"/>\n')
    output.write('</svg>\n')


def report_overlays(report: CompletenessReport) -> List[Tuple[complex, complex]]:
    """Returns the segments joining every probe of the given report to its
    witnesses, to be drawn over the set.
    """
    return [(estimate.center, witness.w) for estimate in report.estimates for witness in estimate.witnesses]


def geodesic_result_to_json(result: GeodesicResult) -> Dict[str, Any]:
    return {'start': _point(result.start), 'end': _point(result.end), 'length': result.length,
            'path': [_point(z) for z in result.points]}


def dump_geodesic_result(result: GeodesicResult, output):
    """Dumps the given geodesic (its endpoints, length and vertices) as JSON
    to the given text output.
    """
    _write_json(geodesic_result_to_json(result), output)


def _fit_to_json(fit: SlopeFit) -> Dict[str, Any]:
    return {'slope': fit.slope, 'growth': fit.growth, 'points': fit.points, 'verdict': fit.verdict}


def regularity_report_to_json(report: RegularityReport) -> Dict[str, Any]:
    return {
        'z': _point(report.center),
        'kz': report.kz_estimate,
        'verdict': report.verdict,
        'samples': [{'w': _point(w), 'quotient': quotient} for w, quotient in report.samples],
        'fit': _fit_to_json(report.fit),
    }


def dump_regularity_report(report: RegularityReport, output):
    """Dumps the given regularity report as JSON to the given text output.
    """
    _write_json(regularity_report_to_json(report), output)


def _estimate_to_json(estimate: QxEstimate) -> Dict[str, Any]:
    bounds = []
    for witness in estimate.witnesses:
        bound = {'test': witness.test, 'w': _point(witness.w), 'bound': witness.bound}
        if witness.az is not None:
            bound['az'] = witness.az
        bounds.append(bound)
    result = {
        'z': _point(estimate.center),
        'bounds': bounds,
        'best': estimate.best,
        'verdict': estimate.completeness,
        'growth': estimate.verdict,
        'slope': estimate.slope,
        'families': {family: _fit_to_json(fit) for family, fit in estimate.fits},
        'notes': list(estimate.notes),
    }
    if estimate.regularity is not None:
        result['regularity'] = regularity_report_to_json(estimate.regularity)
    return result


def completeness_report_to_json(report: CompletenessReport) -> Dict[str, Any]:
    return {
        'verdict': report.verdict,
        'probes': [_estimate_to_json(estimate) for estimate in report.estimates],
        'star_centre': None if report.star_centre is None else _point(report.star_centre),
        'hull_verdict': report.hull_verdict,
        'notes': list(report.notes),
    }


def dump_completeness_report(report: CompletenessReport, output):
    """Dumps the given completeness report as JSON to the given text output.

    Every probe lists its witnesses (test family, witness point and bound),
    its verdict, the fitted slope, the fits of the individual families and
    the geodesic regularity diagnostic.
    """
    _write_json(completeness_report_to_json(report), output)


def dump_suite_report(report, output):
    """Dumps the pass/fail table of a verification suite as JSON to the given
    text output.

    Args:
        report (SuiteReport): The report of the suite.
        output:               The text output the dump is to be written to.
    """
    _write_json({
        'suite': report.name,
        'passed': report.passed,
        'checks': [{'name': check.name, 'passed': check.passed, 'detail': check.detail} for check in report.checks],
    }, output)
