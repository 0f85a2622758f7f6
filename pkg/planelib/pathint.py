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

"""This module provides integration of functions along polyline paths and
the numerical verification of derivative relations built on top of it:
fundamental theorem of calculus checks, F-derivatives over path families,
the product rule, maximal interval decomposition, the semidirect product of
function pairs, and sampled norms and Lipschitz quotients.

Sup norms computed by this module are maxima over finite samples, i.e.
lower bounds of the true norms.
"""

from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
import shapely
from shapely.geometry import MultiLineString

from planelib.errors import DomainError, PreconditionError
from planelib.funcexpr import FunctionExpr, add, exact_modulus, mul
from planelib.geom import ArcLengthParam, PointLike, PolyPath, as_complex, subpath
from planelib.planeset import PlaneSet, contains, resolve, sample_set


logger = getLogger(__name__)


DEFAULT_TOLERANCE = 1e-9

DEFAULT_MAX_DEPTH = 20

_NODES, _WEIGHTS = leggauss(8)
# nodes and weights of the 8-point rule mapped to [0, 1]
_UNIT_NODES = (_NODES + 1) / 2
_UNIT_WEIGHTS = _WEIGHTS / 2


@dataclass(frozen=True)
class PathIntegral:
    """Immutable structure representing the value of a path integral along
    with its error estimate: the sum over the accepted intervals of the plain
    difference between the rule on the interval and on its two halves (no
    extrapolation is applied, so for smooth integrands the estimate exceeds
    the actual error of the value by orders of magnitude).
    """
    value: complex
    error: float
    intervals: int
    converged: bool

    def __complex__(self) -> complex:
        return self.value


def _evaluate_finite(f: FunctionExpr, points: np.ndarray) -> np.ndarray:
    values = np.asarray(f(points), dtype=complex)
    bad = ~np.isfinite(values)
    if np.any(bad):
        point = complex(points.ravel()[int(np.argmax(bad.ravel()))])
        message = f'Integrand is not finite at {point}.'
        raise DomainError(message, point=point)
    return values


def _rule(f: FunctionExpr, starts: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Applies the 8-point rule on whole intervals and on both halves,
    evaluating the integrand once for all of them.
    """
    offsets = np.concatenate((_UNIT_NODES, _UNIT_NODES / 2, 0.5 + _UNIT_NODES / 2))
    points = starts[:, None] + offsets[None, :] * directions[:, None]
    values = _evaluate_finite(f, points.ravel()).reshape(points.shape)
    whole = values[:, :8] @ _UNIT_WEIGHTS * directions
    halves = (values[:, 8:16] @ _UNIT_WEIGHTS + values[:, 16:] @ _UNIT_WEIGHTS) * directions / 2
    return whole, halves


def path_integral(f: FunctionExpr, path: PolyPath, tol: float = DEFAULT_TOLERANCE,
                  max_depth: int = DEFAULT_MAX_DEPTH) -> PathIntegral:
    """Integrates f along the given polyline path.

    Every segment is integrated by the 8-point Gauss-Legendre rule with
    dyadic refinement: an interval is accepted once the difference between
    the rule on the whole interval and on its two halves drops below its
    share of the tolerance (shares are proportional to interval lengths).

    Args:
        f (FunctionExpr):          The integrand.
        path (PolyPath):           The path of integration.
        tol (float, optional):     Absolute error target (default 1e-9).
        max_depth (int, optional): Maximal number of bisections (default 20).

    Raises:
        DomainError: If the integrand cannot be evaluated on the path; the
                     offending point is attached.

    Returns:
        PathIntegral: The value (the rule on the halves of the accepted
                      intervals) and the accumulated difference estimate.
    """
    starts = path.points[:-1].copy()
    directions = np.diff(path.points)
    lengths = np.abs(directions)
    tolerances = tol * lengths / path.length
    total, error, accepted, converged = 0j, 0.0, 0, True
    for depth in range(max_depth + 1):
        whole, halves = _rule(f, starts, directions)
        estimates = np.abs(halves - whole)
        done = estimates <= tolerances
        if depth == max_depth:
            if not np.all(done):
                converged = False
                logger.warning('Path integral not converged after %d bisections (%d intervals left)',
                               max_depth, int(np.count_nonzero(~done)))
            done = np.ones_like(done)
        total += complex(np.sum(halves[done]))
        error += float(np.sum(estimates[done]))
        accepted += int(np.count_nonzero(done))
        pending = ~done
        if not np.any(pending):
            break
        starts, directions, tolerances = starts[pending], directions[pending], tolerances[pending]
        starts = np.concatenate((starts, starts + directions / 2))
        directions = np.concatenate((directions, directions)) / 2
        tolerances = np.concatenate((tolerances, tolerances)) / 2
    logger.debug('Path integral over %d segments: %d intervals, error %.3g', path.segment_count, accepted, error)
    return PathIntegral(total, error, accepted, converged)


@dataclass(frozen=True)
class FtcReport:
    """Immutable structure representing the outcome of a fundamental theorem
    of calculus check on the arc-length interval [s0, s1] of a path.
    """
    path_index: int
    s0: float
    s1: float
    integral: complex
    delta: complex
    defect: float
    passed: bool


def ftc_check(f: FunctionExpr, fprime: FunctionExpr, path: PolyPath, tol: float = DEFAULT_TOLERANCE,
              path_index: int = 0, s0: float = 0.0) -> FtcReport:
    """Verifies that the integral of fprime along the path equals the
    increment f(end) - f(start).

    The check passes if the defect |integral - increment| does not exceed
    tol * (1 + |increment|); the quadrature runs at a tenth of tol.
    """
    integral = path_integral(fprime, path, tol / 10).value
    endpoints = np.array([path.start, path.end])
    values = _evaluate_finite(f, endpoints)
    delta = complex(values[1] - values[0])
    defect = abs(integral - delta)
    passed = defect <= tol * (1 + abs(delta))
    return FtcReport(path_index, s0, s0 + path.length, integral, delta, defect, bool(passed))


@dataclass(frozen=True)
class FDerivPair:
    """Immutable structure pairing a function with a candidate F-derivative.
    """
    f: FunctionExpr
    g: FunctionExpr


@dataclass(frozen=True)
class PathFamily:
    """Immutable structure representing a finite family of paths in a set.

    The family is effective if its paths lie in the set and the union of
    their images comes within the resolution of every vertex of the set.
    """
    paths: Tuple[PolyPath, ...]
    effective: bool = False


def effective_family(plane_set: PlaneSet, paths: Sequence[PolyPath], h: float) -> PathFamily:
    """Builds a path family and flags it effective when every path vertex
    belongs to the set and every vertex of the set lies within h of some
    path image.
    """
    materialized = resolve(plane_set)
    inside = all(contains(materialized, z) for path in paths for z in path.points)
    if not paths or not inside:
        return PathFamily(tuple(paths), effective=False)
    images = MultiLineString([np.column_stack((p.points.real, p.points.imag)) for p in paths])
    vertices = np.array(materialized.vertices, dtype=complex)
    distances = shapely.distance(images, shapely.points(vertices.real, vertices.imag))
    effective = bool(np.all(distances <= h))
    logger.debug('Family of %d paths, max vertex distance %.3g, effective %s',
                 len(paths), float(np.max(distances)), effective)
    return PathFamily(tuple(paths), effective=effective)


@dataclass(frozen=True)
class VerificationReport:
    """Immutable structure collecting the checks of a verification run.
    """
    checks: Tuple[FtcReport, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def max_defect(self) -> float:
        return max((check.defect for check in self.checks), default=0.0)

    @property
    def failures(self) -> Tuple[FtcReport, ...]:
        return tuple(check for check in self.checks if not check.passed)


def _random_subpaths(path: PolyPath, count: int, rng) -> List[Tuple[float, PolyPath]]:
    result = []
    length = path.length
    while len(result) < count:
        s0, s1 = np.sort(rng.uniform(0.0, length, 2))
        if s1 - s0 <= 1e-9 * length:
            continue
        result.append((float(s0), subpath(path, float(s0), float(s1))))
    return result


def verify_fderivative(pair: FDerivPair, family: Union[PathFamily, Sequence[PolyPath]],
                       tol: float = DEFAULT_TOLERANCE, subpaths: int = 8, seed: int = 0) -> VerificationReport:
    """Verifies that pair.g is an F-derivative of pair.f with respect to the
    given family: ftc_check runs on every path of the family and on the
    given number of random subpaths of each.
    """
    paths = family.paths if isinstance(family, PathFamily) else tuple(family)
    rng = np.random.default_rng(seed)
    checks = []
    for index, path in enumerate(paths):
        checks.append(ftc_check(pair.f, pair.g, path, tol, index))
        for s0, piece in _random_subpaths(path, subpaths, rng):
            checks.append(ftc_check(pair.f, pair.g, piece, tol, index, s0))
    report = VerificationReport(tuple(checks))
    logger.debug('F-derivative verification: %d checks, max defect %.3g, passed %s',
                 len(checks), report.max_defect, report.passed)
    return report


def verify_product_rule(first: FDerivPair, second: FDerivPair, family: Union[PathFamily, Sequence[PolyPath]],
                        tol: float = DEFAULT_TOLERANCE, subpaths: int = 8, seed: int = 0) -> VerificationReport:
    """Verifies that f1*g2 + g1*f2 is an F-derivative of f1*f2.

    Raises:
        PreconditionError: If one of the given pairs fails verification on
                           the family.
    """
    for name, pair in (('first', first), ('second', second)):
        report = verify_fderivative(pair, family, tol, subpaths, seed)
        if not report.passed:
            message = f'The {name} pair fails verification (max defect {report.max_defect:.3g}).'
            raise PreconditionError(message)
    product = FDerivPair(mul(first.f, second.f), add(mul(first.f, second.g), mul(first.g, second.f)))
    return verify_fderivative(product, family, tol, subpaths, seed)


def interval_decomposition(f: FunctionExpr, g: FunctionExpr, path: PolyPath, tol: float = DEFAULT_TOLERANCE,
                           grid: int = 729) -> Tuple[Tuple[float, float], ...]:
    """Finds the maximal closed parameter intervals on which g behaves as a
    derivative of f along the path.

    The arc-length interval [0, |path|] is cut into grid cells of equal
    length; the cells passing ftc_check are merged into maximal runs, so the
    returned intervals are pairwise disjoint and never adjacent.
    """
    if grid < 1:
        message = f'Grid must have at least one cell, got {grid}.'
        raise PreconditionError(message)
    length = path.length
    knots = np.linspace(0.0, length, grid + 1)
    passing = []
    for s0, s1 in zip(knots[:-1], knots[1:]):
        cell = subpath(path, float(s0), float(s1))
        passing.append(ftc_check(f, g, cell, tol, 0, float(s0)).passed)
    intervals = []
    start: Optional[int] = None
    for index, passed in enumerate(passing + [False]):
        if passed and start is None:
            start = index
        elif not passed and start is not None:
            intervals.append((float(knots[start]), float(knots[index])))
            start = None
    logger.debug('Interval decomposition on %d cells: %d maximal intervals', grid, len(intervals))
    return tuple(intervals)


@dataclass(frozen=True)
class SemidirectElement:
    """Immutable structure representing an element (f, g) of the semidirect
    product, multiplied as (f1 f2, f1 g2 + f2 g1).
    """
    f: FunctionExpr
    g: FunctionExpr

    def __mul__(self, other: 'SemidirectElement') -> 'SemidirectElement':
        return semidirect_multiply(self, other)


def semidirect_multiply(first: SemidirectElement, second: SemidirectElement) -> SemidirectElement:
    """Returns the product (f1 f2, f1 g2 + f2 g1).
    """
    return SemidirectElement(mul(first.f, second.f), add(mul(first.f, second.g), mul(second.f, first.g)))


def iota(p: FunctionExpr) -> SemidirectElement:
    """Embeds a differentiable function as the pair (p, p').
    """
    return SemidirectElement(p, p.derivative())


def _sample_points(samples: Union[PlaneSet, Sequence[PointLike], np.ndarray], budget: int, seed: int) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        return samples.astype(complex)
    if isinstance(samples, (list, tuple)):
        return np.array([as_complex(z) for z in samples], dtype=complex)
    return sample_set(samples, budget, seed)


def _sup(f: FunctionExpr, points: np.ndarray) -> float:
    return float(np.max(np.abs(_evaluate_finite(f, points))))


def semidirect_norm(element: SemidirectElement, samples, budget: int = 256, seed: int = 0) -> float:
    """Returns |f| + |g|, the sup norms being sampled on the given points (or
    on sample_set of the given plane set).
    """
    points = _sample_points(samples, budget, seed)
    return _sup(element.f, points) + _sup(element.g, points)


def diff_norm(f: FunctionExpr, fprime: FunctionExpr, samples, budget: int = 256, seed: int = 0) -> float:
    """Returns the sampled norm |f| + |f'| on a plane set (construction
    vertices plus quasi-uniform samples) or on explicit points; the result
    is a lower bound of the true norm.
    """
    points = _sample_points(samples, budget, seed)
    return _sup(f, points) + _sup(fprime, points)


def lipschitz_quotient(f: FunctionExpr, z: PointLike, w: PointLike) -> float:
    """Returns |f(z) - f(w)| / |z - w|.

    Raises:
        DomainError: If z = w.
    """
    z, w = as_complex(z), as_complex(w)
    if z == w:
        message = f'Lipschitz quotient needs two distinct points, got {z} twice.'
        raise DomainError(message, point=z)
    values = _evaluate_finite(f, np.array([z, w]))
    return abs(values[0] - values[1]) / abs(z - w)


ExactPoint = Tuple[Fraction, Fraction]


def lipschitz_quotient_exact(f: FunctionExpr, z: ExactPoint, w: ExactPoint) -> Union[Fraction, float]:
    """Returns |f(z) - f(w)| / |z - w| for points given by rational
    coordinates; the result is a Fraction whenever it is rational.

    Raises:
        DomainError: If z = w.
    """
    z = (Fraction(z[0]), Fraction(z[1]))
    w = (Fraction(w[0]), Fraction(w[1]))
    if z == w:
        message = 'Lipschitz quotient needs two distinct points.'
        raise DomainError(message, point=complex(float(z[0]), float(z[1])))
    first, second = f.exact(*z), f.exact(*w)
    numerator = exact_modulus(first[0] - second[0], first[1] - second[1])
    return numerator / exact_modulus(z[0] - w[0], z[1] - w[1])


def lip_seminorm(f: FunctionExpr, samples, budget: int = 128, seed: int = 0) -> float:
    """Returns the maximum of the Lipschitz quotient over all pairs of
    sampled points, a lower bound of the Lipschitz seminorm.
    """
    points = np.unique(_sample_points(samples, budget, seed))
    values = _evaluate_finite(f, points)
    distances = np.abs(points[:, None] - points[None, :])
    differences = np.abs(values[:, None] - values[None, :])
    np.fill_diagonal(distances, np.inf)
    return float(np.max(differences / distances)) if len(points) > 1 else 0.0


def arc_length_points(path: PolyPath, count: int) -> np.ndarray:
    """Returns count + 1 points at equal arc-length spacing along the path.
    """
    return np.atleast_1d(ArcLengthParam(path)(np.linspace(0.0, path.length, count + 1)))
