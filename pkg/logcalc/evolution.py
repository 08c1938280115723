# -*- coding: utf-8 -*-
"""Invertible evolution families ``U(t, s)`` on ``C^n``

Families are built from a :py:class:`GeneratorSpec` and evaluated in
closed form:

- ``constant``: ``A(t) = A``, ``U(t, s) = exp((t - s) A)``,
- ``separable``: ``A(t) = g(t) A``, ``U(t, s) = exp(G(t, s) A)`` with
  ``G(t, s)`` the integral of ``g`` from ``s`` to ``t``,
- ``piecewise``: ``A(t) = A`` before ``switch`` and ``B`` after, with
  ``U(t, s) = Phi(t) Phi(s)^{-1}``.  ``A(t)`` and ``U(t, s)`` do not
  commute in general, so this kind only serves as a negative control.

At finite dimension the weak limits defining the pre-infinitesimal
generator are norm limits and the dense subspace ``Y`` equals ``X``.
"""

import logging
import math

import numpy as np

from . import config
from .exceptions import InvalidGenerator, OutOfHorizon
from .functions import GENERATOR_FUNCTIONS, function_for_spec
from .linalg import as_cmatrix, identity, matrix_exp_oracle

LOGGER = logging.getLogger(__name__)

#: Kind ``A(t) = A``
KIND_CONSTANT = 'constant'

#: Kind ``A(t) = g(t) A``
KIND_SEPARABLE = 'separable'

#: Kind switching between two generators
KIND_PIECEWISE = 'piecewise'

#: All generator kinds
GENERATOR_KINDS = (KIND_CONSTANT, KIND_SEPARABLE, KIND_PIECEWISE)

#: Kinds for which ``A(t)`` commutes with ``U(t, s)``
COMMUTING_KINDS = (KIND_CONSTANT, KIND_SEPARABLE)

#: Relative slack when checking ``|t| <= T``
HORIZON_SLACK = 1e-12


def _batched_norm(mats):
    return np.linalg.norm(mats, ord=2, axis=(-2, -1))


def _spectral_abscissae(m):
    re = np.linalg.eigvals(m).real
    return float(re.min()), float(re.max())


class GeneratorSpec:
    """Symbolic description of a time dependent generator ``A(t)``"""

    def __init__(self, kind, a_matrix, g=None, b_matrix=None, switch=0.0):
        if kind not in GENERATOR_KINDS:
            raise InvalidGenerator('Unknown generator kind {!r}'.format(kind))
        #: One of :py:data:`GENERATOR_KINDS`
        self.kind = kind
        #: The constant factor ``A``
        self.a_matrix = as_cmatrix(a_matrix)
        #: Time factor, ``ScalarFunction`` for separable kind, else ``None``
        self.g = None
        #: Second generator of the piecewise kind
        self.b_matrix = None
        #: Switching time of the piecewise kind
        self.switch = float(switch)
        if kind == KIND_SEPARABLE:
            if g is None:
                raise InvalidGenerator('Separable generator needs g')
            self.g = function_for_spec(g, library=GENERATOR_FUNCTIONS)
        elif g is not None:
            raise InvalidGenerator('Only separable generators take g')
        if kind == KIND_PIECEWISE:
            if b_matrix is None:
                raise InvalidGenerator('Piecewise generator needs B')
            self.b_matrix = as_cmatrix(b_matrix)
            if self.b_matrix.shape != self.a_matrix.shape:
                raise InvalidGenerator('A and B differ in shape')
        elif b_matrix is not None:
            raise InvalidGenerator('Only piecewise generators take B')

    @property
    def dim(self):
        return self.a_matrix.shape[0]

    @property
    def commuting(self):
        """Whether ``A(t)`` commutes with ``U(t, s)`` by construction"""
        return self.kind in COMMUTING_KINDS

    def factor(self, t):
        """Scalar time factor ``g(t)``, one for the other kinds"""
        if self.kind == KIND_SEPARABLE:
            return float(self.g(t))
        return 1.0

    def integrated_factor(self, t, s):
        """``G(t, s)``, the integral of ``g`` from ``s`` to ``t``"""
        if self.kind == KIND_SEPARABLE:
            return float(self.g.antiderivative(t) - self.g.antiderivative(s))
        return float(t - s)

    def generator_at(self, t):
        """Return ``A(t)``"""
        if self.kind == KIND_PIECEWISE:
            return (self.a_matrix if t < self.switch else self.b_matrix).copy()
        return self.factor(t) * self.a_matrix

    def growth_rate(self, horizon):
        """Exponent ``beta >= 0`` dominating ``g(tau) A`` on the horizon"""
        lo, hi = _spectral_abscissae(self.a_matrix)
        if self.kind == KIND_SEPARABLE:
            g_min, g_max = self.g.extrema(-horizon, horizon)
            return max(0.0, g_max * hi, g_min * lo)
        if self.kind == KIND_PIECEWISE:
            return max(0.0, hi, _spectral_abscissae(self.b_matrix)[1])
        return max(0.0, hi)

    def __eq__(self, other):
        if not isinstance(other, GeneratorSpec):
            return False
        same_b = (self.b_matrix is None and other.b_matrix is None) or (
            self.b_matrix is not None and other.b_matrix is not None and
            np.array_equal(self.b_matrix, other.b_matrix))
        return (self.kind == other.kind and self.g == other.g and
                self.switch == other.switch and same_b and
                np.array_equal(self.a_matrix, other.a_matrix))

    def __repr__(self):
        return 'GeneratorSpec({!r}, dim={}, g={!r})'.format(
            self.kind, self.dim, self.g)


def closed_form_evaluator(spec):
    """Return function ``(t, s) -> U(t, s)`` for ``spec``"""
    eye = identity(spec.dim)

    if spec.kind == KIND_PIECEWISE:
        def phase(t):
            block = spec.a_matrix if t < spec.switch else spec.b_matrix
            return block * (t - spec.switch)

        def evaluator(t, s):
            if t == s:
                return eye.copy()
            return matrix_exp_oracle(phase(t)) @ matrix_exp_oracle(-phase(s))
    else:
        def evaluator(t, s):
            if t == s:
                return eye.copy()
            return matrix_exp_oracle(
                spec.integrated_factor(t, s) * spec.a_matrix)
    return evaluator


class EvolutionFamily:
    """Two-parameter family ``U(t, s)``, ``-T <= t, s <= T``

    Immutable after construction, evaluation is thread-safe.
    """

    def __init__(self, spec, horizon, growth_m=1.0, growth_beta=0.0,
                 evaluator=None):
        if not horizon > 0:
            raise InvalidGenerator('Horizon must be positive')
        #: The generating :py:class:`GeneratorSpec`
        self.spec = spec
        #: Horizon ``T``
        self.horizon = float(horizon)
        #: Growth constant ``M >= 1``
        self.growth_m = float(growth_m)
        #: Growth exponent ``beta``
        self.growth_beta = float(growth_beta)
        #: Map ``(t, s) -> U(t, s)``
        self.evaluator = evaluator or closed_form_evaluator(spec)

    @property
    def dim(self):
        return self.spec.dim

    @property
    def growth_bound(self):
        """``M e^{beta T}``, bounds ``||U(t, s)||`` on the horizon"""
        return self.growth_m * math.exp(self.growth_beta * self.horizon)

    def in_horizon(self, t):
        return abs(t) <= self.horizon * (1.0 + HORIZON_SLACK)

    def check_horizon(self, *times):
        for t in times:
            if not self.in_horizon(t):
                raise OutOfHorizon('Time {} outside of [-{T}, {T}]'.format(
                    t, T=self.horizon))

    def evaluate(self, t, s):
        """Return ``U(t, s)``"""
        self.check_horizon(t, s)
        return self.evaluator(t, s)

    def generator_at(self, t):
        """Return ``A(t)`` from the spec"""
        self.check_horizon(t)
        return self.spec.generator_at(t)

    def with_growth(self, growth_m, growth_beta):
        """Copy with other growth constants"""
        return EvolutionFamily(
            self.spec, self.horizon, growth_m, growth_beta, self.evaluator)

    def corrupted(self, row, col, delta):
        """Copy whose evaluator has entry ``(row, col)`` shifted by ``delta``

        Used as negative control of the conformance checks.
        """
        if not (0 <= row < self.dim and 0 <= col < self.dim):
            raise InvalidGenerator('Corruption index out of range')
        inner = self.evaluator

        def evaluator(t, s):
            value = inner(t, s).copy()
            value[row, col] += delta
            return value

        return EvolutionFamily(
            self.spec, self.horizon, self.growth_m, self.growth_beta,
            evaluator)

    def __repr__(self):
        return 'EvolutionFamily({!r}, T={}, M={}, beta={})'.format(
            self.spec, self.horizon, self.growth_m, self.growth_beta)


class ConformanceReport:
    """Residuals of a grid check against one tolerance"""

    def __init__(self, check, grid_points, horizon, tol,
                 max_cocycle_residual=None, max_inverse_residual=None,
                 max_commutation_residual=None):
        #: Name of the check
        self.check = check
        #: Number of grid points per axis on ``[-T, T]``
        self.grid_points = grid_points
        #: Horizon ``T`` of the grid
        self.horizon = horizon
        #: Tolerance all residuals are held to
        self.tol = tol
        #: ``max ||U(t,r) U(r,s) - U(t,s)||``
        self.max_cocycle_residual = max_cocycle_residual
        #: ``max ||U(s,t) U(t,s) - I||``
        self.max_inverse_residual = max_inverse_residual
        #: Commutation residual, meaning depends on ``check``
        self.max_commutation_residual = max_commutation_residual

    @property
    def grid(self):
        return 'uniform {} points on [-{T}, {T}]'.format(
            self.grid_points, T=self.horizon)

    def residuals(self):
        """Evaluated residuals by name"""
        items = (
            ('cocycle', self.max_cocycle_residual),
            ('inverse', self.max_inverse_residual),
            ('commutation', self.max_commutation_residual))
        return {k: v for k, v in items if v is not None}

    @property
    def passed(self):
        return all(v <= self.tol for v in self.residuals().values())

    def to_json(self):
        return {
            'check': self.check,
            'grid': self.grid,
            'tol': self.tol,
            'residuals': self.residuals(),
            'pass': self.passed,
        }

    def __repr__(self):
        return 'ConformanceReport({!r}, {}, pass={})'.format(
            self.check, self.residuals(), self.passed)


def uniform_grid(horizon, grid_points):
    if grid_points < 3:
        raise ValueError('Need at least 3 grid points')
    return np.linspace(-horizon, horizon, grid_points)


def _grid_values(fam, grid):
    n = len(grid)
    values = np.empty((n, n, fam.dim, fam.dim), dtype=np.complex128)
    for i, t in enumerate(grid):
        for j, s in enumerate(grid):
            values[i, j] = fam.evaluate(t, s)
    return values


def estimate_growth(fam, grid_points=config.GROWTH_GRID_POINTS):
    """Return ``(M, beta)`` with ``||U(t, s)|| <= M e^{beta t}`` on the grid

    ``beta`` dominates the spectral abscissa of ``A(t)``; ``M`` is the
    smallest constant (at least one) valid on the grid for that ``beta``.
    """
    grid = uniform_grid(fam.horizon, grid_points)
    beta = fam.spec.growth_rate(fam.horizon)
    norms = _batched_norm(_grid_values(fam, grid))
    scaled = norms * np.exp(-beta * grid)[:, None]
    growth_m = max(1.0, float(scaled.max()))
    LOGGER.debug('Growth on %d points: M = %.6g, beta = %.6g',
                 grid_points, growth_m, beta)
    return growth_m, beta


def build_family(spec, horizon, grid_points=config.GROWTH_GRID_POINTS):
    """Build :py:class:`EvolutionFamily` with certified growth constants"""
    fam = EvolutionFamily(spec, horizon)
    return fam.with_growth(*estimate_growth(fam, grid_points))


def check_semigroup(fam, grid_points, tol):
    """Check cocycle, inverse and commutation laws on a uniform grid"""
    grid = uniform_grid(fam.horizon, grid_points)
    values = _grid_values(fam, grid)
    eye = identity(fam.dim)
    cocycle = 0.0
    for i in range(len(grid)):
        for k in range(len(grid)):
            # U(t_i, t_k) U(t_k, s) - U(t_i, s) for all s at once
            diff = values[i, k] @ values[k] - values[i]
            cocycle = max(cocycle, float(_batched_norm(diff).max()))
    swapped = np.swapaxes(values, 0, 1)
    inverse = float(_batched_norm(swapped @ values - eye).max())
    commutation = float(
        _batched_norm(values @ swapped - swapped @ values).max())
    report = ConformanceReport(
        'semigroup', grid_points, fam.horizon, tol,
        max_cocycle_residual=cocycle, max_inverse_residual=inverse,
        max_commutation_residual=commutation)
    LOGGER.info('Semigroup check: %s', report)
    return report


def check_commutation(fam, grid_points, tol):
    """Check ``A(t) U(t, s) = U(t, s) A(t)`` on a uniform grid"""
    grid = uniform_grid(fam.horizon, grid_points)
    values = _grid_values(fam, grid)
    worst = 0.0
    for i, t in enumerate(grid):
        gen = fam.generator_at(t)
        diff = gen @ values[i] - values[i] @ gen
        worst = max(worst, float(_batched_norm(diff).max()))
    report = ConformanceReport(
        'commutation', grid_points, fam.horizon, tol,
        max_commutation_residual=worst)
    LOGGER.info('Commutation check: %s', report)
    return report


def pregenerator_fd(fam, t, h):
    """Estimate ``A(t)`` from ``(U(t + h, t) - I) / h``

    Combines steps ``h`` and ``2 h`` to cancel the first order error.
    """
    if not h > 0:
        raise ValueError('Step must be positive')
    fam.check_horizon(t - 2 * h, t + 2 * h)
    eye = identity(fam.dim)
    d1 = (fam.evaluate(t + h, t) - eye) / h
    d2 = (fam.evaluate(t + 2 * h, t) - eye) / (2 * h)
    return 2.0 * d1 - d2


def time_derivative(fam, t, s, h):
    """Fourth order central difference of ``U(., s)`` at ``t``"""
    fam.check_horizon(t - 2 * h, t + 2 * h, s)
    return (-fam.evaluate(t + 2 * h, s) + 8.0 * fam.evaluate(t + h, s) -
            8.0 * fam.evaluate(t - h, s) + fam.evaluate(t - 2 * h, s)) / (
                12.0 * h)


def generator_from_derivative(fam, t, s, h):
    """Estimate ``A(t)`` as ``(d/dt U(t, s)) U(s, t)``"""
    return time_derivative(fam, t, s, h) @ fam.evaluate(s, t)
