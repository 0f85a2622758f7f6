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

"""This module provides the verification suites run by the verify command.

Every suite exercises one quantitative property of the library on seeded
random or constructed instances and returns a pass/fail table. The suites
are deterministic for a fixed :class: SuiteConfig.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from logging import getLogger
from math import exp, pi, sqrt
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from planelib.errors import ParameterError, PlaneSetError
from planelib.funcexpr import Cantor, Const, FunctionExpr, mul, polynomial, zpow
from planelib.geodesic import classify_dented_square, geodesic_distance, grid_geodesic_distance
from planelib.geom import PolyPath, koch_arc, polyline_arc
from planelib.pathint import FDerivPair, SemidirectElement, arc_length_points, diff_norm, ftc_check, iota
from planelib.pathint import interval_decomposition, semidirect_norm, verify_product_rule
from planelib.planeset import Gallery, GalleryKind, Region, bad_arc_quotient_exact, blodge_vertices
from planelib.planeset import cantor_intervals, sample_set
from planelib.qx import INCOMPLETE, NO_DIVERGENCE, arc_test_function, blodges_condition
from planelib.qx import blodges_series_condition, completeness_report, gallery_dents, long_dents_verdict
from planelib.qx import nonrectifiable_arc_verdict, normalize_halfline, zpow_bound, zpow_direct_quotient
from planelib.util import SlopeRule


logger = getLogger(__name__)

_ORACLE_TOLERANCE = 0.01

_F = zpow(1 + 1j)

_ZPOW_I = zpow(1j)


@dataclass(frozen=True)
class SuiteConfig:
    """Immutable structure carrying the parameters of a suite run; a depth
    of None lets every suite use its own default depth.
    """
    tol: float = 1e-8
    seed: int = 0
    depth: Optional[int] = None
    oracle_pixel: float = 1 / 1024
    samples: int = 100_000
    rule: SlopeRule = field(default_factory=SlopeRule)

    def __post_init__(self):
        if not self.tol > 0 or not self.oracle_pixel > 0 or self.samples < 1:
            message = (f'Suite tolerances and sample counts must be positive (tol {self.tol}, '
                       f'pixel {self.oracle_pixel}, samples {self.samples}).')
            raise ParameterError(message)
        if self.depth is not None and self.depth < 1:
            message = f'Suite depth must be positive, got {self.depth}.'
            raise ParameterError(message)

    def depth_or(self, default: int) -> int:
        return default if self.depth is None else self.depth


@dataclass(frozen=True)
class SuiteCheck:
    """Immutable structure representing one row of a suite report.
    """
    name: str
    passed: bool
    detail: str = ''


@dataclass(frozen=True)
class SuiteReport:
    """Immutable structure representing the pass/fail table of a suite.
    """
    name: str
    checks: Tuple[SuiteCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> Tuple[SuiteCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)


def _check(name: str, passed, detail: str = '') -> SuiteCheck:
    return SuiteCheck(name, bool(passed), detail)


def _random_polynomial(rng, max_degree: int) -> FunctionExpr:
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = rng.uniform(-1, 1, degree + 1) + 1j * rng.uniform(-1, 1, degree + 1)
    return polynomial([complex(c) for c in coeffs])


def _closed_ring(region: Region) -> PolyPath:
    return PolyPath(list(region.outer) + [region.outer[0]])


# ---------------------------------------------------------------------------
# bad arc
# ---------------------------------------------------------------------------

def _bad_arc_formula(n: int) -> Fraction:
    return Fraction(2 ** (2 * n - 1) * (n + 2), n * (n + 1))


def _suite_bad_arc(config: SuiteConfig) -> List[SuiteCheck]:
    depth = config.depth_or(20)
    checks = []
    quotients = []
    for n in range(1, depth + 1):
        quotient = bad_arc_quotient_exact(n)
        quotients.append(quotient)
        expected = _bad_arc_formula(n)
        checks.append(_check(f'quotient n={n}', quotient == expected, f'{quotient} (expected {expected})'))
    tail = quotients[2:]
    checks.append(_check('quotients increase from n=3', all(a < b for a, b in zip(tail, tail[1:]))))
    crossover = next((n for n in range(1, 64) if _bad_arc_formula(n) >= 10 ** 6), None)
    checks.append(_check('first quotient above 1e6', crossover == 13, f'n = {crossover}'))
    return checks


# ---------------------------------------------------------------------------
# z**i and z**(1 + i)
# ---------------------------------------------------------------------------

def _violations(values: np.ndarray) -> int:
    return int(np.count_nonzero(~values))


def _suite_zpow(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    count = config.samples
    z = rng.uniform(-2, 2, count) + 1j * rng.uniform(-2, 2, count)
    z = z[z.imag != 0]
    argument, modulus = np.angle(z), np.abs(z)
    slack = 1 + 1e-12
    power = np.abs(_ZPOW_I(z))
    checks = [_check('|z^i| = exp(-Arg z)', _violations(np.abs(power - np.exp(-argument)) <=
                                                       1e-12 * np.exp(-argument)) == 0, f'{len(z)} samples')]
    values = np.abs(_F(z))
    checks.append(_check('exp(-pi)|z| <= |F(z)| <= exp(pi)|z|', _violations(
        (values * slack >= exp(-pi) * modulus) & (values <= slack * exp(pi) * modulus)) == 0))
    derivatives = np.abs(_F.derivative()(z))
    checks.append(_check('sqrt(2)exp(-pi) <= |F\'(z)| <= sqrt(2)exp(pi)', _violations(
        (derivatives * slack >= sqrt(2) * exp(-pi)) & (derivatives <= slack * sqrt(2) * exp(pi))) == 0))
    # cross-quadrant pairs: z in the second quadrant, w in the third one
    second = -np.abs(z.real) + 1j * np.abs(z.imag)
    third = -np.abs(np.roll(z.real, 1)) - 1j * np.abs(np.roll(z.imag, 1))
    gap = np.abs(_ZPOW_I(second) - _ZPOW_I(third))
    checks.append(_check('|z^i - w^i| >= exp(pi/2) - exp(-pi/2)',
                         _violations(gap * slack >= exp(pi / 2) - exp(-pi / 2)) == 0))
    difference = np.abs(_F(second) - _F(third))
    lower = np.abs(second) - exp(pi) * np.abs(second - third)
    checks.append(_check('|F(z) - F(w)| >= |z| - exp(pi)|z - w|',
                         _violations(difference >= lower - 1e-12 * np.abs(second)) == 0))
    bound_violations = 0
    for z_value, w_value in zip(second[:1000], third[:1000]):
        if zpow_bound(z_value, w_value) > zpow_direct_quotient(z_value, w_value) * slack:
            bound_violations += 1
    checks.append(_check('certified bound below direct quotient', bound_violations == 0,
                         f'{min(1000, len(second))} pairs'))
    return checks


# ---------------------------------------------------------------------------
# path integrals
# ---------------------------------------------------------------------------

def _gallery_paths() -> List[Tuple[str, PolyPath]]:
    paths = [(f'koch-arc {level}', koch_arc(level)) for level in range(1, 5)]
    for depth in range(1, 5):
        paths.append((f'bad-arc {depth}', Gallery(GalleryKind.BAD_ARC, {}, depth).materialize().arcs[0]))
    for radius in (0.5, 1.0, 1.5, 2.0):
        paths.append((f'semicircle {radius}', PolyPath(polyline_arc(0j, radius, 0.0, pi - 1e-9, 16))))
    dented = Gallery(GalleryKind.DENTED_SQUARE, {}, 3).materialize()
    paths.append(('dented-square boundary', _closed_ring(dented)))
    disc = Gallery(GalleryKind.RSA_DISC, {'chords': 8}, 4).materialize()
    paths.append(('rsa-disc boundary', _closed_ring(disc)))
    for depth in range(2, 6):
        paths.append((f'triangle-arc {depth}', Gallery(GalleryKind.TRIANGLE_ARC, {}, depth).materialize().arcs[0]))
    crossed = Gallery(GalleryKind.CROSSED_SQUARE, {}, 3).materialize()
    paths.append(('crossed-square side', crossed.arcs[0]))
    paths.append(('crossed-square crossing', crossed.arcs[3]))
    return paths


def _suite_ftc(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    paths = _gallery_paths()
    checks = []
    for index in range(100):
        p = _random_polynomial(rng, 10)
        reports = [ftc_check(p, p.derivative(), path, config.tol, path_index) for path_index, (_, path) in
                   enumerate(paths)]
        failed = [paths[report.path_index][0] for report in reports if not report.passed]
        worst = max(report.defect for report in reports)
        checks.append(_check(f'polynomial {index}', not failed,
                             f'max defect {worst:.3g}' + (f', failed on {", ".join(failed)}' if failed else '')))
    antiderivative = mul(Const(1 / (1 + 1j)), _F)
    semicircle = PolyPath(polyline_arc(0j, 1.0, 0.0, pi - 1e-9, 256))
    report = ftc_check(antiderivative, _ZPOW_I, semicircle, 1e-6)
    relative = report.defect / max(abs(report.delta), 1e-300)
    checks.append(_check(f'z^i on the semicircle ({semicircle.segment_count} chords)', relative <= 1e-6,
                         f'relative defect {relative:.3g}'))
    return checks


def _upper_family() -> Tuple[PolyPath, ...]:
    return (
        PolyPath(polyline_arc(0j, 1.0, 0.1, pi - 0.1, 16)),
        koch_arc(2, 0.2 + 0.3j, 1.2 + 0.3j),
        PolyPath([0.5 + 0.1j, 1 + 1j, -0.5 + 0.8j]),
    )


def _suite_product_rule(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    family = _upper_family()
    power_pair = FDerivPair(_ZPOW_I, _ZPOW_I.derivative())
    antiderivative_pair = FDerivPair(mul(Const(1 / (1 + 1j)), _F), _ZPOW_I)
    checks = []
    for index in range(100):
        p, q = _random_polynomial(rng, 5), _random_polynomial(rng, 5)
        first, second = FDerivPair(p, p.derivative()), FDerivPair(q, q.derivative())
        if index % 3 == 1:
            second = power_pair
        elif index % 3 == 2:
            first = antiderivative_pair
        try:
            report = verify_product_rule(first, second, family, config.tol, subpaths=2, seed=config.seed + index)
        except PlaneSetError as error:
            checks.append(_check(f'pair {index}', False, str(error)))
            continue
        checks.append(_check(f'pair {index}', report.passed, f'max defect {report.max_defect:.3g}'))
    return checks


def _suite_cantor(config: SuiteConfig) -> List[SuiteCheck]:
    depth = config.depth_or(6)
    found = interval_decomposition(Cantor(), Const(0), PolyPath([0j, 1 + 0j]), config.tol, grid=3 ** depth)
    expected = [(float(start), float(end)) for _, start, end in cantor_intervals(depth)]
    checks = [_check('interval count', len(found) == len(expected), f'{len(found)} (expected {len(expected)})')]
    if len(found) == len(expected):
        worst = max((max(abs(a - c), abs(b - d)) for (a, b), (c, d) in zip(found, expected)), default=0.0)
        checks.append(_check('interval endpoints', worst <= 1e-12, f'max deviation {worst:.3g}'))
    return checks


def _suite_semidirect(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    samples = sample_set(Gallery(GalleryKind.DENTED_SQUARE, {}, 4), 256, config.seed)
    multiplicative, isometric = 0, 0
    for _ in range(100):
        p, q = _random_polynomial(rng, 5), _random_polynomial(rng, 5)
        left, right = iota(mul(p, q)), iota(p) * iota(q)
        for first, second in ((left.f, right.f), (left.g, right.g)):
            expected, actual = first(samples), second(samples)
            scale = max(1.0, float(np.max(np.abs(expected))))
            if np.max(np.abs(expected - actual)) > 1e-12 * scale:
                multiplicative += 1
                break
        norm = semidirect_norm(iota(p), samples)
        if abs(norm - diff_norm(p, p.derivative(), samples)) > 1e-12 * max(1.0, norm):
            isometric += 1
    unit = SemidirectElement(Const(0), Const(1))
    square = unit * unit
    return [
        _check('iota is multiplicative', multiplicative == 0, f'{multiplicative} violations'),
        _check('iota is isometric', isometric == 0, f'{isometric} violations'),
        _check('(0, 1)^2 = (0, 0)', square.f == Const(0) and square.g == Const(0), f'{square}'),
    ]


# ---------------------------------------------------------------------------
# completeness
# ---------------------------------------------------------------------------

def _suite_rsa(config: SuiteConfig) -> List[SuiteCheck]:
    depth = config.depth_or(400)
    gallery = Gallery(GalleryKind.RSA_DISC, {}, depth)
    dents = gallery_dents(gallery)
    report = long_dents_verdict(gallery, dents, config.rule)
    above = 0
    for item, bound in zip(dents.items, report.bounds):
        z_image, w_image = normalize_halfline(dents.z0, item.w, item.a, item.direction)
        if bound > zpow_direct_quotient(z_image, w_image) * (1 + 1e-12):
            above += 1
    return [
        _check('verdict', report.verdict == INCOMPLETE, report.verdict),
        _check('bound slope', 1.3 <= report.fit.slope <= 1.7, f'slope {report.fit.slope:.4f}'),
        _check('bounds below direct quotients', above == 0, f'{above} violations'),
    ]


_DENT_DEPTHS = ('s', '2s', 'ns', 'sqrt')

_DENT_HEIGHTS = ('2^-n', '4^-n')


def _suite_dented(config: SuiteConfig) -> List[SuiteCheck]:
    depth = config.depth_or(12)
    checks = []
    for r in _DENT_DEPTHS:
        for s in _DENT_HEIGHTS:
            params = {'r': r, 's': s}
            expected = INCOMPLETE if r in ('ns', 'sqrt') else NO_DIVERGENCE
            classified = classify_dented_square(params, depth, config.rule).verdict.completeness
            report = completeness_report(Gallery(GalleryKind.DENTED_SQUARE, params, depth), rule=config.rule,
                                         geodesic_depth=min(depth, 6), seed=config.seed)
            checks.append(_check(f'r={r} s={s}', classified == report.verdict == expected,
                                 f'ratio test {classified}, report {report.verdict}, expected {expected}'))
    return checks


def _suite_blodges(config: SuiteConfig) -> List[SuiteCheck]:
    count = config.depth_or(200)
    k = np.arange(1, count + 1, dtype=float)
    geometric = blodges_series_condition(4.0 ** -k, 2.0 ** -k, config.rule)
    weighted = blodges_series_condition(k * 2.0 ** -k, 2.0 ** -k, config.rule)
    checks = [
        _check('4^-k steps over 2^-n', geometric.verdict == 'fails', geometric.verdict),
        _check('k 2^-k steps over 2^-n', weighted.verdict == 'condition-vi-holds', weighted.verdict),
    ]
    harmonic = Gallery(GalleryKind.TRIANGLE_ARC, {}, min(count, 64))
    report = blodges_condition(blodge_vertices(harmonic), 0j, rule=config.rule)
    checks.append(_check('triangle arc, y = n^-1 / 2', report.verdict == 'condition-vi-holds', report.verdict))
    halving = Gallery(GalleryKind.TRIANGLE_ARC, {'y': '2^-n'}, min(count, 64))
    report = blodges_condition(blodge_vertices(halving), 0j, rule=config.rule)
    checks.append(_check('triangle arc, y = 2^-n', report.verdict == 'fails', report.verdict))
    return checks


# ---------------------------------------------------------------------------
# arcs
# ---------------------------------------------------------------------------

def _random_monotone_path(rng) -> PolyPath:
    count = int(rng.integers(2, 13))
    x = np.sort(rng.uniform(0, 1, count))
    while np.any(np.diff(x) <= 1e-6):
        x = np.sort(rng.uniform(0, 1, count))
    return PolyPath(x + 1j * rng.uniform(-0.5, 0.5, count))


def _staircase(steps: int) -> PolyPath:
    vertices = [0j]
    for index in range(2 * steps):
        vertices.append(vertices[-1] + (1 if index % 2 == 0 else 1j))
    return PolyPath(vertices)


def _suite_arcs(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    checks = []
    for index in range(50):
        path = _random_monotone_path(rng)
        start_value = float(rng.uniform(-1, 1))
        function = arc_test_function(path, start_value)
        points = arc_length_points(path, 10_000)
        largest = float(np.max(np.abs(function.fprime(points))))
        start = complex(function.f(np.array([path.start]))[0])
        chord = abs(path.end - path.start)
        passed = (largest <= function.derivative_bound + 1e-9 and function.gap > chord / 2
                  and abs(start - start_value) <= 1e-12 * max(1.0, abs(start_value)))
        checks.append(_check(f'arc {index}', passed, f'max |f\'| {largest:.6f}, gap {function.gap:.6f}, '
                                                    f'chord {chord:.6f}'))
    for steps in (1, 4, 16):
        function = arc_test_function(_staircase(steps))
        checks.append(_check(f'staircase {steps}', function.gap > steps / 2, f'gap {function.gap:.6f}'))
    depth = config.depth_or(8)
    report = nonrectifiable_arc_verdict(Gallery(GalleryKind.KOCH_ARC, {}, depth), rule=config.rule)
    checks.append(_check('koch arc verdict', report.verdict == INCOMPLETE, report.verdict))
    for level, length, w, quotient in zip(report.depths, report.lengths, report.witnesses, report.quotients):
        if 0.9 * length >= 6.0:
            checks.append(_check(f'koch arc level {level}', quotient >= 1 / abs(w),
                                 f'quotient {quotient:.6g}, 1/|w| {1 / abs(w):.6g}'))
    return checks


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

def _square(center: complex, side: float) -> List[complex]:
    half = side / 2
    return [center + complex(-half, -half), center + complex(half, -half),
            center + complex(half, half), center + complex(-half, half)]


def _random_star_region(rng, center: complex) -> Region:
    count = int(rng.integers(10, 15))
    base = 2 * pi * np.arange(count) / count
    angles = base + rng.uniform(-0.3, 0.3, count) * 2 * pi / count
    radii = rng.uniform(0.3, 0.5, count)
    outer = center + radii * np.exp(1j * angles)
    holes = [_square(center + 0.13 * np.exp(2j * pi * slot / 3), 0.06) for slot in range(int(rng.integers(0, 4)))]
    return Region.of(outer, holes)


def _oracle_check(name: str, region: Region, z: complex, w: complex, pixel: float) -> SuiteCheck:
    exact = geodesic_distance(region, z, w).length
    approximate = grid_geodesic_distance(region, z, w, pixel)
    error = abs(exact - approximate) / exact
    return _check(name, error <= _ORACLE_TOLERANCE, f'visibility {exact:.6f}, grid {approximate:.6f}')


def _suite_geodesic(config: SuiteConfig) -> List[SuiteCheck]:
    rng = np.random.default_rng(config.seed)
    pixel = config.oracle_pixel
    checks = []
    for index in range(10):
        center = 0.5 + 0.5j
        region = _random_star_region(rng, center)
        checks.append(_oracle_check(f'random region {index} ({len(region.holes)} holes)', region,
                                    center - 0.22, center + 0.22, pixel))
    for r, z, w in (('s', 0.1 + 0.7j, 0.1 + 0.18j), ('ns', 0.05 + 0.05j, 0.05 + 0.9j)):
        region = Gallery(GalleryKind.DENTED_SQUARE, {'r': r}, 3).materialize()
        checks.append(_oracle_check(f'dented square r={r}', region, z, w, pixel))
    convex = (Region.of([0j, 1 + 0j, 1 + 1j, 1j]), Region.of(polyline_arc(0j, 1.0, 0.0, 2 * pi, 2)[:-1]))
    for index, region in enumerate(convex):
        points = sample_set(region, 24, config.seed)
        worst = max(abs(geodesic_distance(region, z, w).length - abs(z - w)) / max(1.0, abs(z - w))
                    for z, w in combinations(points, 2) if z != w)
        checks.append(_check(f'convex region {index}', worst <= 1e-12, f'max deviation {worst:.3g}'))
    deletion = Gallery(GalleryKind.DISC_DELETION, {'chords': 8}, config.depth_or(4))
    points = rng.choice(sample_set(deletion, 16, config.seed), 24, replace=False)
    worst = max(geodesic_distance(deletion, z, w).length / abs(z - w)
                for z, w in combinations(points, 2) if z != w)
    checks.append(_check('disc deletion quotient at most pi', worst <= pi, f'max quotient {worst:.6f}'))
    return checks


SUITES: Dict[str, Callable[[SuiteConfig], List[SuiteCheck]]] = {
    'thm32': _suite_bad_arc,
    'zpow': _suite_zpow,
    'ftc': _suite_ftc,
    'product-rule': _suite_product_rule,
    'cantor': _suite_cantor,
    'rsa': _suite_rsa,
    'dented': _suite_dented,
    'semidirect': _suite_semidirect,
    'blodges': _suite_blodges,
    'arcs': _suite_arcs,
    'geodesic': _suite_geodesic,
}


def run_suite(name: str, config: Optional[SuiteConfig] = None) -> SuiteReport:
    """Runs the verification suite with the given name.

    Args:
        name (str):                     One of the keys of :data: SUITES.
        config (SuiteConfig, optional): Tolerances, seed and depth of the run.

    Raises:
        ParameterError: If there is no suite with the given name.

    Returns:
        SuiteReport: The pass/fail table of the suite.
    """
    if name not in SUITES:
        message = f'Unknown suite {name}, expected one of {", ".join(SUITES)}.'
        raise ParameterError(message)
    config = config or SuiteConfig()
    checks = tuple(SUITES[name](config))
    report = SuiteReport(name, checks)
    logger.info('Suite %s: %d checks, %d failed', name, len(checks), len(report.failures))
    return report
