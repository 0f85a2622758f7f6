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

"""This module provides the command-line front end of the library.

Subcommands:

* gallery - writes the JSON definition (and optionally an SVG drawing) of a
  gallery construction;
* geodesic - computes the geodesic between two points of a set;
* regularity - samples the regularity quotients at a point of a set;
* verify - runs a verification suite and prints its pass/fail table;
* report - builds the completeness report of a set.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 domain
error (for instance a point outside the set).
"""

from argparse import ArgumentParser, ArgumentTypeError, Namespace
from contextlib import contextmanager
from dataclasses import dataclass, fields
from json import JSONDecodeError, load, loads
from logging import DEBUG, INFO, WARNING, basicConfig, getLogger
import sys
from typing import Any, Dict, List, Optional

from planelib.dump import dump_completeness_report, dump_geodesic_result, dump_plane_set
from planelib.dump import dump_regularity_report, dump_suite_report, report_overlays, to_svg
from planelib.errors import PlaneSetError
from planelib.geodesic import geodesic_distance, regularity_at
from planelib.jsondef import build_plane_set_from_json_file
from planelib.planeset import Gallery, GalleryKind, PlaneSet, gallery_centre
from planelib.qx import completeness_report
from planelib.suites import SUITES, SuiteConfig, run_suite
from planelib.util import SlopeRule


logger = getLogger(__name__)

EXIT_SUCCESS = 0

EXIT_FAILURE = 1

EXIT_USAGE = 2

EXIT_DOMAIN = 3

DEFAULT_GALLERY_DEPTH = 8


@dataclass(frozen=True)
class Config:
    """Immutable structure representing the configuration of a run; built
    from the defaults, a JSON configuration file and the command-line flags,
    the flags taking precedence.
    """
    depth: Optional[int] = None
    tol: float = 1e-8
    oracle_pixel: float = 1 / 1024
    slope_threshold: float = 0.1
    seed: int = 0
    samples: int = 100_000
    sample_budget: int = 256
    geodesic_depth: int = 8
    out: Optional[str] = None
    svg: Optional[str] = None

    def __post_init__(self):
        for name in ('tol', 'oracle_pixel'):
            if not getattr(self, name) > 0:
                message = f'{name} must be positive, got {getattr(self, name)}.'
                raise ValueError(message)
        if self.slope_threshold < 0:
            message = f'slope_threshold must not be negative, got {self.slope_threshold}.'
            raise ValueError(message)
        for name in ('samples', 'sample_budget', 'geodesic_depth'):
            if getattr(self, name) < 1:
                message = f'{name} must be positive, got {getattr(self, name)}.'
                raise ValueError(message)
        if self.depth is not None and self.depth < 1:
            message = f'depth must be positive, got {self.depth}.'
            raise ValueError(message)

    @property
    def rule(self) -> SlopeRule:
        return SlopeRule(slope_threshold=self.slope_threshold)

    def suite_config(self) -> SuiteConfig:
        return SuiteConfig(self.tol, self.seed, self.depth, self.oracle_pixel, self.samples, self.rule)


def _config_names() -> List[str]:
    return [field.name for field in fields(Config)]


def _read_config_file(path: str) -> Dict[str, Any]:
    with open(path, 'r') as config_file:
        json_data = load(config_file)
    if not isinstance(json_data, dict):
        message = f'Configuration file {path} must contain a JSON object.'
        raise ValueError(message)
    unknown = set(json_data) - set(_config_names())
    if unknown:
        message = f'Unknown configuration options: {", ".join(sorted(unknown))}.'
        raise ValueError(message)
    return json_data


def load_config(args: Namespace) -> Config:
    """Builds the configuration of a run: defaults, overridden by the file
    given by --config, overridden by explicit flags.

    Raises:
        OSError:    If the configuration file cannot be read.
        ValueError: If the file or the resulting configuration is invalid.
    """
    values: Dict[str, Any] = {}
    if getattr(args, 'config', None):
        values.update(_read_config_file(args.config))
    for name in _config_names():
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value
    return Config(**values)


def parse_point(text: str) -> complex:
    """Parses a point given as "re,im" or as a complex literal like "1+1j"
    or "0.5-2i".
    """
    try:
        if ',' in text:
            re_part, im_part = text.split(',')
            return complex(float(re_part), float(im_part))
        return complex(text.replace(' ', '').replace('i', 'j'))
    except ValueError:
        message = f'Invalid point "{text}", expected "re,im" or a complex literal.'
        raise ArgumentTypeError(message)


def _parse_param(text: str):
    if '=' not in text:
        message = f'Invalid parameter "{text}", expected NAME=VALUE.'
        raise ArgumentTypeError(message)
    name, value = text.split('=', 1)
    try:
        return name, loads(value)
    except ValueError:
        return name, value


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w') as output:
            yield output


def _write_svg(path: Optional[str], plane_set: PlaneSet, overlays=()) -> None:
    if path is None:
        return
    with open(path, 'w') as output:
        to_svg(plane_set, output, overlays=overlays)
    logger.info('SVG written to %s', path)


def _read_set(path: str, config: Config) -> PlaneSet:
    plane_set = build_plane_set_from_json_file(path)
    if isinstance(plane_set, Gallery) and config.depth is not None:
        plane_set = plane_set.with_depth(config.depth)
    return plane_set


def cmd_gallery(args: Namespace, config: Config) -> int:
    params = dict(args.param or [])
    for name in ('r', 's', 'y'):
        if getattr(args, name) is not None:
            params[name] = getattr(args, name)
    depth = DEFAULT_GALLERY_DEPTH if config.depth is None else config.depth
    gallery = Gallery(GalleryKind(args.kind), params, depth)
    materialized = gallery.materialize()
    logger.info('Gallery %s at depth %d: %d vertices', args.kind, depth, len(materialized.vertices))
    with _output(config.out) as output:
        dump_plane_set(gallery, output)
    _write_svg(config.svg, materialized)
    return EXIT_SUCCESS


def cmd_geodesic(args: Namespace, config: Config) -> int:
    plane_set = _read_set(args.setfile, config)
    result = geodesic_distance(plane_set, args.z, args.w)
    with _output(config.out) as output:
        dump_geodesic_result(result, output)
    points = result.points
    _write_svg(config.svg, plane_set, list(zip(points[:-1], points[1:])))
    return EXIT_SUCCESS


def cmd_regularity(args: Namespace, config: Config) -> int:
    plane_set = _read_set(args.setfile, config)
    if args.z is not None:
        z = args.z
    elif isinstance(plane_set, Gallery):
        z = gallery_centre(plane_set)
    else:
        message = 'The point must be given for sets that are not gallery constructions.'
        raise PlaneSetError(message)
    report = regularity_at(plane_set, z, args.witness, config.rule)
    with _output(config.out) as output:
        dump_regularity_report(report, output)
    _write_svg(config.svg, plane_set, [(report.center, w) for w, _ in report.samples])
    return EXIT_SUCCESS


def cmd_verify(args: Namespace, config: Config) -> int:
    report = run_suite(args.suite, config.suite_config())
    with _output(config.out) as output:
        dump_suite_report(report, output)
    for check in report.failures:
        logger.warning('Check %s failed: %s', check.name, check.detail)
    return EXIT_SUCCESS if report.passed else EXIT_FAILURE


def cmd_report(args: Namespace, config: Config) -> int:
    plane_set = _read_set(args.setfile, config)
    report = completeness_report(plane_set, args.probe, config.rule, config.geodesic_depth, config.sample_budget,
                                 config.seed, args.compare_hull)
    with _output(config.out) as output:
        dump_completeness_report(report, output)
    _write_svg(config.svg, plane_set, report_overlays(report))
    return EXIT_SUCCESS


def _common_options() -> ArgumentParser:
    defaults = Config()
    parser = ArgumentParser(add_help=False)
    parser.add_argument('--config', help='JSON file with configuration options (flags take precedence)')
    parser.add_argument('--depth', type=int, help='construction depth (default: per command)')
    parser.add_argument('--tol', type=float, help=f'quadrature tolerance (default: {defaults.tol:g})')
    parser.add_argument('--oracle-pixel', type=float, dest='oracle_pixel',
                        help=f'pixel size of the grid geodesic oracle (default: {defaults.oracle_pixel:g})')
    parser.add_argument('--slope-threshold', type=float, dest='slope_threshold',
                        help=f'log-log slope above which estimates diverge (default: {defaults.slope_threshold:g})')
    parser.add_argument('--seed', type=int, help=f'seed of randomized suites and sampling (default: {defaults.seed})')
    parser.add_argument('--samples', type=int, help=f'sample count of randomized suites (default: {defaults.samples})')
    parser.add_argument('--sample-budget', type=int, dest='sample_budget',
                        help=f'sample points of a set (default: {defaults.sample_budget})')
    parser.add_argument('--geodesic-depth', type=int, dest='geodesic_depth',
                        help=f'depth cap of geodesic diagnostics (default: {defaults.geodesic_depth})')
    parser.add_argument('--out', help='output JSON file (default: standard output)')
    parser.add_argument('--svg', help='output SVG file')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logging')
    return parser


def create_parser() -> ArgumentParser:
    """Creates the argument parser of the command-line front end.
    """
    common = _common_options()
    parser = ArgumentParser(prog='planelib', description='Library of Plane Set Algorithms for Python')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    gallery = commands.add_parser('gallery', parents=[common], help='materialize a gallery construction')
    gallery.add_argument('kind', choices=[kind.value for kind in GalleryKind])
    gallery.add_argument('--r', help='dent depth rule, for instance "s", "ns" or "sqrt"')
    gallery.add_argument('--s', help='dent height rule, for instance "2^-n" or "4^-n"')
    gallery.add_argument('--y', help='height rule of crossed squares and triangle arcs')
    gallery.add_argument('--param', type=_parse_param, action='append', metavar='NAME=VALUE',
                         help='other construction parameter, the value given as JSON or text')
    gallery.set_defaults(handler=cmd_gallery)

    geodesic = commands.add_parser('geodesic', parents=[common], help='compute a geodesic')
    geodesic.add_argument('setfile')
    geodesic.add_argument('z', type=parse_point)
    geodesic.add_argument('w', type=parse_point)
    geodesic.set_defaults(handler=cmd_geodesic)

    regularity = commands.add_parser('regularity', parents=[common], help='sample regularity quotients')
    regularity.add_argument('setfile')
    regularity.add_argument('z', type=parse_point, nargs='?')
    regularity.add_argument('--witness', type=parse_point, action='append', help='point approaching z')
    regularity.set_defaults(handler=cmd_regularity)

    verify = commands.add_parser('verify', parents=[common], help='run a verification suite')
    verify.add_argument('suite', choices=list(SUITES))
    verify.set_defaults(handler=cmd_verify)

    report = commands.add_parser('report', parents=[common], help='build a completeness report')
    report.add_argument('setfile')
    report.add_argument('--probe', type=parse_point, action='append', help='probe point (repeatable)')
    report.add_argument('--compare-hull', action='store_true', dest='compare_hull',
                        help='evaluate the polynomially convex hull as well')
    report.set_defaults(handler=cmd_report)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = WARNING if verbosity == 0 else INFO if verbosity == 1 else DEBUG
    basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s', stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = load_config(args)
    except (OSError, ValueError) as error:
        parser.error(str(error))
    try:
        return args.handler(args, config)
    except PlaneSetError as error:
        logger.debug('Command %s failed', args.command, exc_info=True)
        print(f'planelib: error: {error}', file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, JSONDecodeError) as error:
        print(f'planelib: error: {error}', file=sys.stderr)
        return EXIT_USAGE
