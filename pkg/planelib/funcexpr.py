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

"""This module provides expression trees describing functions on plane sets:
polynomials in z, principal powers, affine changes of variable, pieces
defined along a path, and the composition of the Cantor function with Re z.

Expressions are immutable. They can be evaluated on numpy arrays, evaluated
exactly in rational arithmetic (where the node allows it), differentiated,
and combined with + and *; sums and products of constants and polynomials
are folded, so for instance 0 * 1 yields the exact constant 0.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, sqrt
from numbers import Number
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from planelib.errors import DomainError, PlaneSetError
from planelib.geom import PolyPath, project


Scalar = Union[complex, float, int, Fraction]
ExactComplex = Tuple[Fraction, Fraction]


def _exact_pair(value: Scalar) -> ExactComplex:
    if isinstance(value, (int, Fraction)):
        return Fraction(value), Fraction(0)
    value = complex(value)
    return Fraction(value.real), Fraction(value.imag)


def _exact_add(first: ExactComplex, second: ExactComplex) -> ExactComplex:
    return first[0] + second[0], first[1] + second[1]


def _exact_mul(first: ExactComplex, second: ExactComplex) -> ExactComplex:
    a, b = first
    c, d = second
    return a * c - b * d, a * d + b * c


def _is_zero(value: Scalar) -> bool:
    return value == 0


def _number_json(value: Scalar) -> Any:
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, int):
        return value
    value = complex(value)
    return [value.real, value.imag]


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    """Returns the exact square root of a non-negative rational number, or
    None if it is not rational.
    """
    if value < 0:
        return None
    numerator, denominator = value.numerator, value.denominator
    root_numerator, root_denominator = isqrt(numerator), isqrt(denominator)
    if root_numerator ** 2 == numerator and root_denominator ** 2 == denominator:
        return Fraction(root_numerator, root_denominator)
    return None


def exact_modulus(re: Fraction, im: Fraction) -> Union[Fraction, float]:
    """Returns |re + i*im|, as a Fraction if it is rational, as a float
    otherwise.
    """
    squared = Fraction(re) ** 2 + Fraction(im) ** 2
    root = exact_sqrt(squared)
    return root if root is not None else sqrt(squared)


class FunctionExpr(ABC):
    """Abstract base class of all expression nodes.
    """

    tag = ''

    @abstractmethod
    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Evaluates this expression on a one-dimensional complex array.

        Raises:
            DomainError: If a point lies outside the domain of the expression;
                         the offending point is attached to the error.
        """

    def derivative(self) -> 'FunctionExpr':
        """Returns the complex derivative of this expression.

        Raises:
            PlaneSetError: If the node has no symbolic derivative.
        """
        message = f'Expression node {self.tag} has no symbolic derivative.'
        raise PlaneSetError(message)

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        """Evaluates this expression exactly at the point re + i*im.

        Raises:
            PlaneSetError: If the node cannot be evaluated exactly.
        """
        message = f'Expression node {self.tag} cannot be evaluated exactly.'
        raise PlaneSetError(message)

    @abstractmethod
    def to_json(self) -> Dict[str, Any]:
        """Returns the JSON form of this expression.
        """

    def __call__(self, z):
        array = np.atleast_1d(np.asarray(z, dtype=complex))
        result = np.asarray(self.evaluate(array), dtype=complex)
        if np.ndim(z) == 0:
            return complex(result[0])
        return result

    def __add__(self, other) -> 'FunctionExpr':
        return add(self, other)

    def __radd__(self, other) -> 'FunctionExpr':
        return add(other, self)

    def __mul__(self, other) -> 'FunctionExpr':
        return mul(self, other)

    def __rmul__(self, other) -> 'FunctionExpr':
        return mul(other, self)

    def __neg__(self) -> 'FunctionExpr':
        return mul(Const(-1), self)

    def __sub__(self, other) -> 'FunctionExpr':
        return add(self, mul(Const(-1), as_expr(other)))


@dataclass(frozen=True, eq=True)
class Const(FunctionExpr):
    """Constant function; rational constants (int, Fraction) stay exact.
    """
    value: Scalar
    tag = 'const'

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, (int, Fraction))

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.full(np.shape(z), complex(self.value), dtype=complex)

    def derivative(self) -> FunctionExpr:
        return Const(Fraction(0))

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        return _exact_pair(self.value)

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'value': _number_json(self.value)}


@dataclass(frozen=True)
class Z(FunctionExpr):
    """The identity function z.
    """
    tag = 'z'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=complex)

    def derivative(self) -> FunctionExpr:
        return Const(Fraction(1))

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        return Fraction(re), Fraction(im)

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag}


@dataclass(frozen=True)
class Add(FunctionExpr):
    terms: Tuple[FunctionExpr, ...]
    tag = 'add'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        result = np.zeros(np.shape(z), dtype=complex)
        for term in self.terms:
            result = result + term.evaluate(z)
        return result

    def derivative(self) -> FunctionExpr:
        result: FunctionExpr = Const(Fraction(0))
        for term in self.terms:
            result = add(result, term.derivative())
        return result

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        result = (Fraction(0), Fraction(0))
        for term in self.terms:
            result = _exact_add(result, term.exact(re, im))
        return result

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'terms': [term.to_json() for term in self.terms]}


@dataclass(frozen=True)
class Mul(FunctionExpr):
    factors: Tuple[FunctionExpr, ...]
    tag = 'mul'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        result = np.ones(np.shape(z), dtype=complex)
        for factor in self.factors:
            result = result * factor.evaluate(z)
        return result

    def derivative(self) -> FunctionExpr:
        result: FunctionExpr = Const(Fraction(0))
        for index, factor in enumerate(self.factors):
            term: FunctionExpr = factor.derivative()
            for other_index, other in enumerate(self.factors):
                if other_index != index:
                    term = mul(term, other)
            result = add(result, term)
        return result

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        result = (Fraction(1), Fraction(0))
        for factor in self.factors:
            result = _exact_mul(result, factor.exact(re, im))
        return result

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'factors': [factor.to_json() for factor in self.factors]}


@dataclass(frozen=True)
class Pow(FunctionExpr):
    """Non-negative integer power of a sub-expression.
    """
    base: FunctionExpr
    exponent: int
    tag = 'pow'

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int) or self.exponent < 0:
            message = f'Integer power needs a non-negative integer exponent, got {self.exponent}.'
            raise PlaneSetError(message)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return self.base.evaluate(z) ** self.exponent

    def derivative(self) -> FunctionExpr:
        if self.exponent == 0:
            return Const(Fraction(0))
        inner = Pow(self.base, self.exponent - 1) if self.exponent > 2 else (
            self.base if self.exponent == 2 else Const(Fraction(1)))
        return mul(mul(Const(self.exponent), inner), self.base.derivative())

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        base = self.base.exact(re, im)
        result = (Fraction(1), Fraction(0))
        for _ in range(self.exponent):
            result = _exact_mul(result, base)
        return result

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'base': self.base.to_json(), 'exponent': self.exponent}


@dataclass(frozen=True)
class Poly(FunctionExpr):
    """Polynomial in z with ascending coefficients (coeffs[k] multiplies
    z**k).
    """
    coeffs: Tuple[Scalar, ...]
    tag = 'poly'

    def __post_init__(self):
        if not self.coeffs:
            message = 'Polynomial needs at least one coefficient.'
            raise PlaneSetError(message)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        coefficients = np.array([complex(c) for c in self.coeffs], dtype=complex)
        return P.polyval(np.asarray(z, dtype=complex), coefficients)

    def derivative(self) -> FunctionExpr:
        if len(self.coeffs) == 1:
            return Const(Fraction(0))
        return polynomial([k * c for k, c in enumerate(self.coeffs) if k > 0])

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        point = (Fraction(re), Fraction(im))
        result = (Fraction(0), Fraction(0))
        for coefficient in reversed(self.coeffs):
            result = _exact_add(_exact_mul(result, point), _exact_pair(coefficient))
        return result

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'coeffs': [_number_json(c) for c in self.coeffs]}


@dataclass(frozen=True)
class Affine(FunctionExpr):
    """The affine map scale * (z - shift); rigid motions of the plane are
    affine maps with |scale| = 1.
    """
    scale: Scalar
    shift: Scalar
    tag = 'affine'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        return complex(self.scale) * (np.asarray(z, dtype=complex) - complex(self.shift))

    def derivative(self) -> FunctionExpr:
        return Const(self.scale)

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        shift = _exact_pair(self.shift)
        return _exact_mul(_exact_pair(self.scale), (Fraction(re) - shift[0], Fraction(im) - shift[1]))

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'scale': _number_json(self.scale), 'shift': _number_json(self.shift)}


@dataclass(frozen=True)
class PPow(FunctionExpr):
    """Principal power arg**alpha = exp(alpha * Log(arg)), defined on the
    plane cut along the closed negative real axis.
    """
    arg: FunctionExpr
    alpha: complex
    tag = 'ppow'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        inner = np.asarray(self.arg.evaluate(z), dtype=complex)
        on_cut = (inner.imag == 0) & (inner.real <= 0)
        if np.any(on_cut):
            index = int(np.argmax(on_cut))
            point = complex(np.atleast_1d(z)[index])
            message = f'Principal power undefined at {point} (argument on the closed negative real axis).'
            raise DomainError(message, point=point)
        return np.exp(complex(self.alpha) * np.log(inner))

    def derivative(self) -> FunctionExpr:
        alpha = complex(self.alpha)
        return mul(mul(Const(alpha), PPow(self.arg, alpha - 1)), self.arg.derivative())

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'arg': self.arg.to_json(), 'alpha': _number_json(complex(self.alpha))}


@dataclass(frozen=True)
class Cantor(FunctionExpr):
    """The Cantor function composed with the real part, g(Re z), defined for
    Re z in [0, 1].
    """
    tag = 'cantor'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        from planelib.planeset import cantor_function_array

        x = np.asarray(z, dtype=complex).real
        outside = (x < -1e-12) | (x > 1 + 1e-12)
        if np.any(outside):
            point = complex(np.atleast_1d(z)[int(np.argmax(outside))])
            message = f'Cantor composition undefined at {point}.'
            raise DomainError(message, point=point)
        return cantor_function_array(x).astype(complex)

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        from planelib.planeset import cantor_function

        return Fraction(cantor_function(Fraction(re))), Fraction(0)

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag}


@dataclass(frozen=True)
class CosY(FunctionExpr):
    """The function a + b * cos(pi * (frequency * Im z + phase)).

    derivative() is the derivative along vertical segments, the only
    direction in which the node is used.
    """
    a: Scalar
    b: Scalar
    frequency: Fraction
    phase: Fraction
    tag = 'cosy'

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        y = np.asarray(z, dtype=complex).imag
        angle = np.pi * (float(self.frequency) * y + float(self.phase))
        return complex(self.a) + complex(self.b) * np.cos(angle)

    def derivative(self) -> FunctionExpr:
        scale = 1j * complex(self.b) * np.pi * float(self.frequency)
        return CosY(Fraction(0), scale, self.frequency, Fraction(self.phase) - Fraction(1, 2))

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        turns = Fraction(self.frequency) * Fraction(im) + Fraction(self.phase)
        if (2 * turns).denominator != 1:
            message = f'cos({turns} pi) is not rational.'
            raise PlaneSetError(message)
        if turns.denominator != 1:
            cosine = Fraction(0)
        else:
            cosine = Fraction(1 if turns.numerator % 2 == 0 else -1)
        return _exact_add(_exact_pair(self.a), _exact_mul(_exact_pair(self.b), (cosine, Fraction(0))))

    def to_json(self) -> Dict[str, Any]:
        return {'tag': self.tag, 'a': _number_json(self.a), 'b': _number_json(self.b),
                'frequency': _number_json(Fraction(self.frequency)), 'phase': _number_json(Fraction(self.phase))}


class Piecewise(FunctionExpr):
    """Function defined along a path: the k-th piece applies on the
    arc-length interval [breaks[k], breaks[k+1]].

    Points are located by projection onto the path; points farther than a
    relative tolerance of 1e-9 from the path are outside the domain.
    """

    tag = 'piecewise'

    def __init__(self, path: PolyPath, breaks: Sequence[float], pieces: Sequence[FunctionExpr]):
        breaks = np.asarray(breaks, dtype=float)
        if len(breaks) != len(pieces) or len(pieces) == 0:
            message = f'Got {len(breaks)} breaks for {len(pieces)} pieces.'
            raise PlaneSetError(message)
        if breaks[0] != 0 or np.any(np.diff(breaks) < 0) or breaks[-1] > path.length:
            message = 'Piece breaks must start at 0 and increase along the path.'
            raise PlaneSetError(message)
        breaks.setflags(write=False)
        self._path = path
        self._breaks = breaks
        self._pieces = tuple(pieces)
        self._tolerance = 1e-9 * max(1.0, float(np.max(np.abs(path.points))))

    @property
    def path(self) -> PolyPath:
        return self._path

    @property
    def breaks(self) -> np.ndarray:
        return self._breaks

    @property
    def pieces(self) -> Tuple[FunctionExpr, ...]:
        return self._pieces

    def _locate(self, z: np.ndarray) -> np.ndarray:
        parameters, distances = project(self._path, z)
        far = distances > self._tolerance
        if np.any(far):
            point = complex(z[int(np.argmax(far))])
            message = f'Point {point} does not lie on the path of the piecewise function.'
            raise DomainError(message, point=point)
        index = np.searchsorted(self._breaks, parameters, side='right') - 1
        return np.clip(index, 0, len(self._pieces) - 1)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        result = np.empty(np.shape(z), dtype=complex)
        if z.size == 0:
            return result
        index = self._locate(z)
        for piece_index in np.unique(index):
            selected = index == piece_index
            result[selected] = self._pieces[piece_index].evaluate(z[selected])
        return result

    def derivative(self) -> FunctionExpr:
        return Piecewise(self._path, self._breaks, [piece.derivative() for piece in self._pieces])

    def exact(self, re: Fraction, im: Fraction) -> ExactComplex:
        point = np.array([complex(float(re), float(im))])
        piece = self._pieces[int(self._locate(point)[0])]
        return piece.exact(re, im)

    def to_json(self) -> Dict[str, Any]:
        return {
            'tag': self.tag,
            'path': [[z.real, z.imag] for z in self._path.points],
            'breaks': [float(b) for b in self._breaks],
            'pieces': [piece.to_json() for piece in self._pieces],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Piecewise):
            return NotImplemented
        return (self._path == other._path and np.array_equal(self._breaks, other._breaks)
                and self._pieces == other._pieces)

    def __hash__(self) -> int:
        return hash((self._path, self._breaks.tobytes(), self._pieces))

    def __repr__(self) -> str:
        return f'Piecewise({len(self._pieces)} pieces on {self._path!r})'


# ---------------------------------------------------------------------------
# construction helpers with constant folding
# ---------------------------------------------------------------------------

def as_expr(value: Union[FunctionExpr, Scalar]) -> FunctionExpr:
    """Wraps numbers into constant nodes.
    """
    if isinstance(value, FunctionExpr):
        return value
    if isinstance(value, Number):
        return Const(value)
    message = f'Cannot convert {value!r} to an expression.'
    raise PlaneSetError(message)


def _coefficients(expr: FunctionExpr) -> Optional[Tuple[Scalar, ...]]:
    if isinstance(expr, Const):
        return (expr.value,)
    if isinstance(expr, Z):
        return (Fraction(0), Fraction(1))
    if isinstance(expr, Poly):
        return expr.coeffs
    return None


def polynomial(coeffs: Sequence[Scalar]) -> FunctionExpr:
    """Returns the polynomial with the given ascending coefficients, trailing
    zero coefficients removed; constants become :class: Const nodes.
    """
    coeffs = list(coeffs) or [Fraction(0)]
    while len(coeffs) > 1 and _is_zero(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) == 1:
        return Const(coeffs[0])
    return Poly(tuple(coeffs))


def add(first, second) -> FunctionExpr:
    """Returns first + second, folding constants and polynomials.
    """
    first, second = as_expr(first), as_expr(second)
    if isinstance(first, Const) and _is_zero(first.value):
        return second
    if isinstance(second, Const) and _is_zero(second.value):
        return first
    first_coeffs, second_coeffs = _coefficients(first), _coefficients(second)
    if first_coeffs is not None and second_coeffs is not None:
        size = max(len(first_coeffs), len(second_coeffs))
        padded_first = list(first_coeffs) + [Fraction(0)] * (size - len(first_coeffs))
        padded_second = list(second_coeffs) + [Fraction(0)] * (size - len(second_coeffs))
        return polynomial([a + b for a, b in zip(padded_first, padded_second)])
    terms = []
    for expr in (first, second):
        terms.extend(expr.terms if isinstance(expr, Add) else (expr,))
    return Add(tuple(terms))


def mul(first, second) -> FunctionExpr:
    """Returns first * second, folding constants and polynomials.
    """
    first, second = as_expr(first), as_expr(second)
    for one, other in ((first, second), (second, first)):
        if isinstance(one, Const) and _is_zero(one.value):
            return Const(Fraction(0)) if one.is_exact else Const(0j)
        if isinstance(one, Const) and one.value == 1:
            return other
    first_coeffs, second_coeffs = _coefficients(first), _coefficients(second)
    if first_coeffs is not None and second_coeffs is not None:
        product = [Fraction(0)] * (len(first_coeffs) + len(second_coeffs) - 1)
        for i, a in enumerate(first_coeffs):
            for j, b in enumerate(second_coeffs):
                product[i + j] = product[i + j] + a * b
        return polynomial(product)
    factors = []
    for expr in (first, second):
        factors.extend(expr.factors if isinstance(expr, Mul) else (expr,))
    return Mul(tuple(factors))


def evaluate(expr: FunctionExpr, z) -> Union[complex, np.ndarray]:
    """Evaluates the expression at a point or on an array of points.
    """
    return expr(z)


def evaluate_exact(expr: FunctionExpr, re, im) -> ExactComplex:
    """Evaluates the expression exactly at re + i*im (coordinates converted
    to Fraction).
    """
    return expr.exact(Fraction(re), Fraction(im))


def differentiate(expr: FunctionExpr) -> FunctionExpr:
    """Returns the complex derivative of the expression.
    """
    return expr.derivative()


def zpow(alpha: complex) -> FunctionExpr:
    """Returns the principal power z**alpha.
    """
    return PPow(Z(), complex(alpha))
