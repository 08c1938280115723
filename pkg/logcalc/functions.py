# -*- coding: utf-8 -*-
"""Library of named scalar functions

Scenario files and the public API refer to scalar functions by name plus
a parameter list, e.g. ``{"name": "cos", "params": []}``.  Three
libraries are drawn from the same registry:

- time factors ``g(t)`` of separable generators (need an antiderivative),
- forcing components ``f_i(t)``,
- integrands of Dunford integrals ``f(lambda)``.

All functions evaluate elementwise on ``numpy`` arrays.
"""

import math

import numpy as np
from numpy.polynomial import polynomial as P

from .exceptions import UnknownFunction, ZeroArgument

#: Names usable as ``g`` in separable generators
GENERATOR_FUNCTIONS = ('const', 'cos', 'poly')

#: Names usable as forcing components
FORCING_FUNCTIONS = ('const', 'cos', 'sin', 'poly', 'sqrt_abs', 'abs_power')

#: Names usable as Dunford integrands
DUNFORD_FUNCTIONS = (
    'principal-log', 'exp', 'poly-times-exp', 'constant-one', 'reciprocal')

#: Number of samples used for extrema of a function on an interval
EXTREMA_SAMPLES = 1025


def principal_log(z):
    """Elementwise principal logarithm with ``-pi < arg <= pi``"""
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == 0):
        raise ZeroArgument('Log is undefined at the origin')
    arg = np.angle(z)
    arg = np.where(arg == -np.pi, np.pi, arg)
    return np.log(np.abs(z)) + 1j * arg


class ScalarFunction:
    """Base class for named scalar functions"""

    #: Registry name, set in sub classes
    name = None

    #: Allowed numbers of parameters
    param_counts = (0,)

    def __init__(self, params=()):
        #: Parameters as tuple of floats
        self.params = tuple(float(p) for p in params)
        if len(self.params) not in self.param_counts:
            raise UnknownFunction(
                'Function {!r} takes {} parameters, got {}'.format(
                    self.name, ' or '.join(map(str, self.param_counts)),
                    len(self.params)))

    def __call__(self, x):
        raise NotImplementedError('Abstract method called: override me!')

    def antiderivative(self, x):
        """Antiderivative vanishing at zero, closed form"""
        raise UnknownFunction(
            'Function {!r} has no closed antiderivative'.format(self.name))

    def extrema(self, lo, hi):
        """Return ``(min, max)`` of the real part sampled on ``[lo, hi]``"""
        values = np.real(self(np.linspace(lo, hi, EXTREMA_SAMPLES)))
        return float(values.min()), float(values.max())

    def to_json(self):
        return {'name': self.name, 'params': list(self.params)}

    def __eq__(self, other):
        return (isinstance(other, ScalarFunction) and
                self.name == other.name and self.params == other.params)

    def __hash__(self):
        return hash((self.name, self.params))

    def __repr__(self):
        return '{}({})'.format(self.name, ', '.join(map(repr, self.params)))


class Constant(ScalarFunction):
    """``c``"""

    name = 'const'
    param_counts = (1,)

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.params[0])

    def antiderivative(self, x):
        return self.params[0] * np.asarray(x, dtype=float)


class Cosine(ScalarFunction):
    """``cos(omega t)``, ``omega`` defaults to 1"""

    name = 'cos'
    param_counts = (0, 1)

    @property
    def omega(self):
        return self.params[0] if self.params else 1.0

    def __call__(self, x):
        return np.cos(self.omega * np.asarray(x, dtype=float))

    def antiderivative(self, x):
        if self.omega == 0.0:
            return np.asarray(x, dtype=float)
        return np.sin(self.omega * np.asarray(x, dtype=float)) / self.omega


class Sine(ScalarFunction):
    """``sin(omega t)``, ``omega`` defaults to 1"""

    name = 'sin'
    param_counts = (0, 1)

    def __call__(self, x):
        omega = self.params[0] if self.params else 1.0
        return np.sin(omega * np.asarray(x, dtype=float))


class Polynomial(ScalarFunction):
    """``c_0 + c_1 t + c_2 t^2 + ...``, coefficients ascending"""

    name = 'poly'
    param_counts = tuple(range(1, 17))

    def __call__(self, x):
        return P.polyval(np.asarray(x, dtype=float), self.params)

    def antiderivative(self, x):
        return P.polyval(np.asarray(x, dtype=float), P.polyint(self.params))


class SqrtAbs(ScalarFunction):
    """``sqrt(|t - t0|)``, Hoelder with exponent 1/2"""

    name = 'sqrt_abs'
    param_counts = (0, 1)

    def __call__(self, x):
        t0 = self.params[0] if self.params else 0.0
        return np.sqrt(np.abs(np.asarray(x, dtype=float) - t0))


class AbsPower(ScalarFunction):
    """``|t - t0|^gamma``"""

    name = 'abs_power'
    param_counts = (1, 2)

    def __init__(self, params=()):
        super().__init__(params)
        if not 0.0 < self.params[0] <= 1.0:
            raise UnknownFunction(
                'abs_power exponent must lie in (0, 1], got {}'.format(
                    self.params[0]))

    def __call__(self, x):
        t0 = self.params[1] if len(self.params) > 1 else 0.0
        return np.abs(np.asarray(x, dtype=float) - t0) ** self.params[0]


class PrincipalLog(ScalarFunction):
    """``Log(lambda)``, principal branch"""

    name = 'principal-log'

    def __call__(self, x):
        return principal_log(x)


class Exponential(ScalarFunction):
    """``e^lambda``"""

    name = 'exp'

    def __call__(self, x):
        return np.exp(np.asarray(x, dtype=np.complex128))


class PolyTimesExp(ScalarFunction):
    """``lambda^n e^lambda``"""

    name = 'poly-times-exp'
    param_counts = (1,)

    def __init__(self, params=()):
        super().__init__(params)
        if self.params[0] < 0 or self.params[0] != math.floor(self.params[0]):
            raise UnknownFunction(
                'poly-times-exp needs a non-negative integer power')

    @property
    def power(self):
        return int(self.params[0])

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        return x ** self.power * np.exp(x)


class ConstantOne(ScalarFunction):
    """``1``, the Dunford integral of which is the spectral projector"""

    name = 'constant-one'

    def __call__(self, x):
        return np.ones_like(np.asarray(x, dtype=np.complex128))


class Reciprocal(ScalarFunction):
    """``1 / lambda``"""

    name = 'reciprocal'

    def __call__(self, x):
        x = np.asarray(x, dtype=np.complex128)
        if np.any(x == 0):
            raise ZeroArgument('1/lambda is undefined at the origin')
        return 1.0 / x


#: Registry from name to class
FUNCTION_CLASSES = {
    cls.name: cls for cls in (
        Constant, Cosine, Sine, Polynomial, SqrtAbs, AbsPower, PrincipalLog,
        Exponential, PolyTimesExp, ConstantOne, Reciprocal)
}


def function_for_spec(name, params=(), library=None):
    """Return :py:class:`ScalarFunction` for ``name`` and ``params``

    ``library`` optionally restricts the allowed names, e.g. to
    :py:data:`GENERATOR_FUNCTIONS`.
    """
    if isinstance(name, ScalarFunction):
        func = name
    else:
        if name not in FUNCTION_CLASSES:
            raise UnknownFunction('No known scalar function {!r}'.format(name))
        func = FUNCTION_CLASSES[name](params)
    if library is not None and func.name not in library:
        raise UnknownFunction(
            'Function {!r} not allowed here, choose from {}'.format(
                func.name, ', '.join(library)))
    return func


def function_from_json(data, library=None):
    """Build function from ``{"name": ..., "params": [...]}``"""
    return function_for_spec(
        data['name'], data.get('params', ()), library=library)
