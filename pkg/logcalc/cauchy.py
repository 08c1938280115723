# -*- coding: utf-8 -*-
"""Abstract Cauchy problems through the logarithm representation

The homogeneous problem ``u' = A(t) u``, ``u(s) = u_s`` is solved as

    u(t) = (exp(a(t, s)) - kappa I) u_s

with ``a`` from :py:mod:`logcalc.logrep` and ``exp`` the truncated power
series.  With a Hoelder continuous forcing ``f`` the Duhamel term

    int_s^t (exp(a(t, tau)) - kappa I) f(tau) d tau

is added, integrated by adaptive composite Gauss-Legendre panels.

:py:func:`oracle_solve` integrates the same problems with an embedded
Runge-Kutta pair from ``scipy`` and shares no code path with the series
solvers.
"""

import heapq
import logging
import warnings

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import solve_ivp

from . import config
from .contour import Contour, dunford_apply, pairwise_sum
from .evolution import KIND_CONSTANT, EvolutionFamily
from .exceptions import (
    CauchyException, CommutationViolated, DimensionMismatch, GridTooCoarse,
    HolderViolation, InvalidGenerator, InvalidGrid, QuadratureStall,
    StepUnderflow)
from .functions import FORCING_FUNCTIONS, PolyTimesExp, function_for_spec
from .linalg import as_cmatrix, identity, operator_norm, spectral_radius_upper
from .logrep import check_step, exp_series, log_representation

LOGGER = logging.getLogger(__name__)

#: Trajectory methods
METHOD_SERIES = 'series'
METHOD_SERIES_RESOLVENT = 'series-resolvent'
METHOD_DUHAMEL_SERIES = 'duhamel-series'
METHOD_ORACLE_RK = 'oracle-rk'

#: Relative slack of the Hoelder validation
HOLDER_SLACK = 0.05

#: Default number of points for validating a forcing
HOLDER_VALIDATION_POINTS = 129

#: Minimal number of points for :py:func:`holder_estimate`
HOLDER_MIN_POINTS = 17

#: Minimal number of points for :py:func:`residual_check`
RESIDUAL_MIN_POINTS = 5

#: Powers accepted by :py:func:`dunford_poly_exp`
POLY_EXP_POWERS = (0, 1, 2, 3)

#: Orders accepted by :py:func:`derivative_bound_scan`
SCAN_ORDERS = (1, 2)

#: Largest ratio accepted by :py:func:`scan_is_bounded`
SCAN_RATIO_MAX = 1e3


class DegenerateDataWarning(UserWarning):
    """Used for warning about data that admits no meaningful fit"""


class Forcing:
    """Vector valued forcing ``f(t)`` with declared Hoelder constants"""

    def __init__(self, components, holder_c, holder_gamma):
        #: One scalar function per component
        self.components = tuple(
            function_for_spec(c, library=FORCING_FUNCTIONS)
            for c in components)
        #: Declared Hoelder constant ``C_H``
        self.holder_c = float(holder_c)
        #: Declared Hoelder exponent ``gamma``
        self.holder_gamma = float(holder_gamma)
        if not self.components:
            raise HolderViolation('Forcing needs at least one component')
        if self.holder_c < 0:
            raise HolderViolation('Hoelder constant must be non-negative')
        if not 0.0 < self.holder_gamma <= 1.0:
            raise HolderViolation(
                'Hoelder exponent must lie in (0, 1], got {}'.format(
                    self.holder_gamma))

    @property
    def dim(self):
        return len(self.components)

    def values(self, times):
        """Return array of shape ``(len(times), dim)``"""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        return np.stack([np.asarray(c(times), dtype=np.complex128)
                         for c in self.components], axis=-1)

    def __call__(self, t):
        if np.ndim(t):
            return self.values(t)
        return self.values([t])[0]

    def validate(self, lo, hi, points=HOLDER_VALIDATION_POINTS):
        """Check the declared Hoelder bound on a uniform grid of ``[lo, hi]``

        Returns the largest sampled quotient, raises
        :py:class:`HolderViolation` if it exceeds ``C_H (1 + 0.05)``.
        """
        grid = np.linspace(lo, hi, points)
        vals = self.values(grid)
        diffs = np.linalg.norm(vals[:, None, :] - vals[None, :, :], axis=-1)
        lags = np.abs(grid[:, None] - grid[None, :])
        mask = lags > 0
        worst = float((diffs[mask] / lags[mask] ** self.holder_gamma).max())
        if worst > self.holder_c * (1.0 + HOLDER_SLACK):
            raise HolderViolation(
                'Hoelder quotient {:.6g} exceeds declared C_H = {} for '
                'gamma = {}'.format(worst, self.holder_c, self.holder_gamma))
        return worst

    def to_json(self):
        return {
            'components': [c.to_json() for c in self.components],
            'holder_c': self.holder_c,
            'holder_gamma': self.holder_gamma,
        }

    def __eq__(self, other):
        return (isinstance(other, Forcing) and
                self.to_json() == other.to_json())

    def __repr__(self):
        return 'Forcing({!r}, C_H={}, gamma={})'.format(
            self.components, self.holder_c, self.holder_gamma)


class CauchyProblem:
    """``u' = A(t) u + f(t)`` on ``[-T, T]`` with ``u(s) = u_s``"""

    def __init__(self, spec, u_s, s, horizon, forcing=None, family=None):
        #: The :py:class:`logcalc.evolution.GeneratorSpec`
        self.spec = spec
        #: Initial value
        self.u_s = np.asarray(u_s, dtype=np.complex128).reshape(-1)
        #: Initial time
        self.s = float(s)
        #: Horizon ``T``
        self.horizon = float(horizon)
        #: Optional :py:class:`Forcing`
        self.forcing = forcing
        #: Evolution family of ``spec``
        self.family = family or EvolutionFamily(spec, horizon)
        if self.u_s.shape[0] != spec.dim:
            raise DimensionMismatch(
                'Initial value has dimension {}, generator {}'.format(
                    self.u_s.shape[0], spec.dim))
        if forcing is not None and forcing.dim != spec.dim:
            raise DimensionMismatch(
                'Forcing has dimension {}, generator {}'.format(
                    forcing.dim, spec.dim))
        self.family.check_horizon(self.s)

    @property
    def dim(self):
        return self.spec.dim

    def rhs(self, t, u):
        """``A(t) u + f(t)``"""
        result = self.spec.generator_at(t) @ u
        if self.forcing is not None:
            result = result + self.forcing(t)
        return result

    def __repr__(self):
        return 'CauchyProblem({!r}, s={}, T={}, forcing={!r})'.format(
            self.spec, self.s, self.horizon, self.forcing)


class Trajectory:
    """States of a solution at ascending output times"""

    def __init__(self, times, states, method, tolerance):
        #: Output times, ascending
        self.times = np.asarray(times, dtype=float)
        #: Array of shape ``(len(times), dim)``
        self.states = np.asarray(states, dtype=np.complex128)
        #: One of the ``METHOD_*`` constants
        self.method = method
        #: Error estimate achieved by the solver
        self.tolerance = float(tolerance)
        if np.any(np.diff(self.times) < 0):
            raise InvalidGrid('Trajectory times must be ascending')
        if not np.all(np.isfinite(self.states)):
            raise CauchyException(
                'Trajectory of method {!r} has non-finite states'.format(
                    method))

    @property
    def dim(self):
        return self.states.shape[1]

    def state_at(self, t):
        """State at output time ``t``"""
        idx = np.flatnonzero(self.times == t)
        if not len(idx):
            raise KeyError('No output time {}'.format(t))
        return self.states[idx[0]]

    def with_states(self, states):
        """Copy with other states"""
        return Trajectory(self.times, states, self.method, self.tolerance)

    def csv_header(self):
        header = ['time']
        for i in range(1, self.dim + 1):
            header += ['re(u_{})'.format(i), 'im(u_{})'.format(i)]
        return header + ['method', 'tol_achieved']

    def csv_rows(self):
        """Rows as lists of strings, floats in ``repr`` form"""
        for t, state in zip(self.times, self.states):
            row = [repr(float(t))]
            for value in state:
                row += [repr(float(value.real)), repr(float(value.imag))]
            yield row + [self.method, repr(self.tolerance)]

    def max_deviation(self, other):
        """``max_t ||u(t) - v(t)||`` against a trajectory on the same times"""
        if not np.array_equal(self.times, other.times):
            raise InvalidGrid('Trajectories have different times')
        return float(np.linalg.norm(self.states - other.states, axis=1).max())

    def __repr__(self):
        return 'Trajectory({!r}, {} times, tol={:.3e})'.format(
            self.method, len(self.times), self.tolerance)


def _sorted_times(p, output_times):
    times = np.sort(np.asarray(output_times, dtype=float).reshape(-1))
    if not len(times):
        raise InvalidGrid('No output times given')
    p.family.check_horizon(*times)
    return times


def _require_commuting(p):
    if not p.spec.commuting:
        raise CommutationViolated(
            'Series solution needs a commuting generator, got kind {!r}'.format(
                p.spec.kind))


def _propagator(p, shift, t, tau, tol):
    """``exp_series(a(t, tau)) - kappa I`` with its error estimate"""
    rep = log_representation(p.family, shift, t, tau, tol / 10)
    series = exp_series(rep.a)
    value = series.value - shift.kappa * identity(p.dim)
    return value, max(rep.richardson_gap, series.remainder_bound)


def _homogeneous(p, shift, t, tol, form):
    prop, err = _propagator(p, shift, t, p.s, tol)
    if form == 'resolvent':
        # v(t, s) = exp(a(t, s)) u_s, then (I + kappa U(s, t))^{-1} v
        v = (prop + shift.kappa * identity(p.dim)) @ p.u_s
        lhs = identity(p.dim) + shift.kappa * p.family.evaluate(p.s, t)
        return np.linalg.solve(lhs, v), err
    return prop @ p.u_s, err


def solve_autonomous(p, shift, tol=None, output_times=None, form='shifted',
                     mapper=map):
    """Series solution of the homogeneous problem

    ``form`` is ``'shifted'`` for ``(e^{a} - kappa I) u_s`` or
    ``'resolvent'`` for ``(I + kappa U(s, t))^{-1} e^{a} u_s``.
    ``mapper`` is used to map over the output times and must preserve
    order, e.g. ``ThreadPoolExecutor.map``.
    """
    if tol is None:
        tol = config.DEFAULTS['solve']
    if p.forcing is not None:
        raise CauchyException('Forced problem, use solve_nonautonomous()')
    if form not in ('shifted', 'resolvent'):
        raise ValueError('Unknown solution form {!r}'.format(form))
    _require_commuting(p)
    times = _sorted_times(p, [p.s] if output_times is None else output_times)
    results = list(mapper(
        lambda t: _homogeneous(p, shift, t, tol, form), times))
    method = METHOD_SERIES if form == 'shifted' else METHOD_SERIES_RESOLVENT
    return Trajectory(
        times, [r[0] for r in results], method,
        max(r[1] for r in results))


class QuadratureResult:
    """Value of an adaptive quadrature with its error estimate"""

    def __init__(self, value, error, panel_count):
        #: The integral
        self.value = value
        #: Sum of the per panel estimates ``|Q_fine - Q_coarse|``
        self.error = error
        #: Number of accepted panels
        self.panel_count = panel_count


def _gauss_legendre(func, lo, hi, nodes, weights):
    half = 0.5 * (hi - lo)
    taus = 0.5 * (hi + lo) + half * nodes
    return half * np.tensordot(weights, func(taus), axes=1)


def adaptive_gauss_legendre(func, lo, hi, tol, order=config.GL_ORDER,
                            panels_max=config.PANELS_MAX):
    """Integrate ``func`` over ``[lo, hi]`` by bisecting Gauss panels

    ``func`` maps an array of nodes to an array whose first axis runs over
    the nodes.  Each panel carries the estimate of its halves and the
    difference to its own rule; the panel with the largest difference is
    bisected until the differences sum to at most ``tol``.  The accepted
    panels are summed pairwise in position order.
    """
    nodes, weights = leggauss(order)

    def panel(a, b):
        coarse = _gauss_legendre(func, a, b, nodes, weights)
        mid = 0.5 * (a + b)
        fine = (_gauss_legendre(func, a, mid, nodes, weights) +
                _gauss_legendre(func, mid, b, nodes, weights))
        return float(np.max(np.abs(fine - coarse))), fine

    if lo == hi:
        return QuadratureResult(np.zeros_like(func(np.array([lo]))[0]), 0.0, 0)
    err, value = panel(lo, hi)
    # heap of (-error, left end, right end), values keyed by left end
    heap = [(-err, lo, hi)]
    values = {lo: value}
    total = err
    while total > tol:
        if len(heap) >= panels_max:
            raise QuadratureStall(
                'Error estimate {:.3e} above {:.3e} with {} panels'.format(
                    total, tol, len(heap)))
        _, a, b = heapq.heappop(heap)
        del values[a]
        mid = 0.5 * (a + b)
        for left, right in ((a, mid), (mid, b)):
            err, value = panel(left, right)
            heapq.heappush(heap, (-err, left, right))
            values[left] = value
        total = -sum(item[0] for item in heap)
    LOGGER.debug('Quadrature on [%g, %g]: %d panels, error %.3e',
                 lo, hi, len(heap), total)
    ordered = [values[k] for k in sorted(values, reverse=bool(hi < lo))]
    return QuadratureResult(pairwise_sum(np.asarray(ordered)), total, len(heap))


def _duhamel(p, shift, t, tol):
    if t == p.s:
        return np.zeros(p.dim, dtype=np.complex128), 0.0, 0

    def integrand(taus):
        forcing = p.forcing.values(taus)
        return np.stack([_propagator(p, shift, t, tau, tol)[0] @ f
                         for tau, f in zip(taus, forcing)])

    result = adaptive_gauss_legendre(integrand, p.s, t, tol)
    return result.value, result.error, result.panel_count


def solve_nonautonomous(p, shift, tol=None, output_times=None, mapper=map):
    """Series solution plus Duhamel integral for a forced problem"""
    if tol is None:
        tol = config.DEFAULTS['solve']
    if p.forcing is None:
        raise CauchyException('Problem has no forcing')
    _require_commuting(p)
    times = _sorted_times(p, [p.s] if output_times is None else output_times)

    def solve_at(t):
        hom, err = _homogeneous(p, shift, t, tol, 'shifted')
        duhamel, quad_err, panels = _duhamel(p, shift, t, tol)
        LOGGER.debug('t = %g: %d panels', t, panels)
        return hom + duhamel, err + quad_err

    results = list(mapper(solve_at, times))
    return Trajectory(
        times, [r[0] for r in results], METHOD_DUHAMEL_SERIES,
        max(r[1] for r in results))


def duhamel_generator_residual(p, shift, t, tol=None):
    """Check ``A w(t)`` against its Hoelder friendly form

    For constant ``A`` and ``w(t)`` the Duhamel integral,
    ``A w(t) = int_s^t A U(t, tau) (f(tau) - f(t)) d tau +
    (U(t, s) - I) f(t)``.  Returns the norm of the difference.
    """
    if tol is None:
        tol = config.DEFAULTS['duhamel']
    if p.spec.kind != KIND_CONSTANT:
        raise InvalidGenerator('Identity needs a constant generator')
    if p.forcing is None:
        raise CauchyException('Problem has no forcing')
    gen = p.spec.a_matrix
    f_t = p.forcing(t)
    w, _, _ = _duhamel(p, shift, t, tol)

    def integrand(taus):
        forcing = p.forcing.values(taus)
        return np.stack([gen @ p.family.evaluate(t, tau) @ (f - f_t)
                         for tau, f in zip(taus, forcing)])

    rhs = adaptive_gauss_legendre(integrand, p.s, t, tol).value + (
        p.family.evaluate(t, p.s) - identity(p.dim)) @ f_t
    return float(np.linalg.norm(gen @ w - rhs))


def _integrate(p, times, tol):
    sol = solve_ivp(
        p.rhs, (p.s, times[-1]), p.u_s, method='RK45', rtol=tol, atol=tol,
        dense_output=True)
    if sol.status == -1:
        raise StepUnderflow(sol.message)
    LOGGER.debug('RK45 to %g: %d evaluations', times[-1], sol.nfev)
    return sol.sol(times).T


def oracle_solve(p, tol=None, output_times=None):
    """Solve with the Dormand-Prince pair, forward and backward from ``s``"""
    if tol is None:
        tol = config.DEFAULTS['oracle']
    times = _sorted_times(p, [p.s] if output_times is None else output_times)
    states = np.empty((len(times), p.dim), dtype=np.complex128)
    states[times == p.s] = p.u_s
    forward = times > p.s
    if forward.any():
        states[forward] = _integrate(p, times[forward], tol)
    backward = times < p.s
    if backward.any():
        states[backward] = _integrate(p, times[backward][::-1], tol)[::-1]
    return Trajectory(times, states, METHOD_ORACLE_RK, tol)


def _uniform_step(times, min_points, what):
    times = np.asarray(times, dtype=float)
    if len(times) < min_points:
        raise GridTooCoarse('{} needs at least {} points, got {}'.format(
            what, min_points, len(times)))
    steps = np.diff(times)
    h = float(steps.mean())
    if not (h > 0 and np.allclose(steps, h, rtol=1e-8, atol=0.0)):
        raise InvalidGrid('{} needs uniformly spaced times'.format(what))
    return h


def residual_check(tr, p):
    """``max ||D_t u - A(t) u - f(t)||`` over interior times"""
    h = _uniform_step(tr.times, RESIDUAL_MIN_POINTS, 'residual_check')
    u = tr.states
    worst = 0.0
    for i in range(2, len(tr.times) - 2):
        du = (-u[i + 2] + 8.0 * u[i + 1] - 8.0 * u[i - 1] + u[i - 2]) / (
            12.0 * h)
        residual = du - p.rhs(tr.times[i], u[i])
        worst = max(worst, float(np.linalg.norm(residual)))
    return worst


def dunford_poly_exp(a, n, tol=None):
    """``a^n e^{a}`` as Dunford integral of ``lambda^n e^lambda``

    The circle is centered at the origin with radius ``1.5 rho + 1`` for
    ``rho`` a bound on the spectral radius of ``a``.
    """
    if tol is None:
        tol = config.DEFAULTS['functional_calculus']
    if n not in POLY_EXP_POWERS:
        raise ValueError('Power must be one of {}, got {}'.format(
            POLY_EXP_POWERS, n))
    a = as_cmatrix(a)
    radius = 1.5 * spectral_radius_upper(a).radius_upper + 1.0
    result = dunford_apply(PolyTimesExp([n]), a, Contour(0.0, radius),
                           tol / 10)
    return result.value


def poly_exp_direct(a, n, tol=None):
    """``a^n exp_series(a)`` by multiplication"""
    a = as_cmatrix(a)
    return np.linalg.matrix_power(a, n) @ exp_series(a, tol).value


def _exp_a(fam, shift, t, s, tol):
    return exp_series(log_representation(fam, shift, t, s, tol).a).value


def exp_a_derivative(fam, shift, t, s, n, h, tol=None):
    """``d^n/dt^n e^{a(t, s)}`` by a fourth order central difference"""
    if tol is None:
        tol = config.DEFAULTS['quadrature']
    if n not in SCAN_ORDERS:
        raise ValueError('Order must be one of {}, got {}'.format(
            SCAN_ORDERS, n))
    check_step(fam, t, s, h)
    v = [_exp_a(fam, shift, t + k * h, s, tol / 10)
         for k in (-2, -1, 0, 1, 2)]
    if n == 1:
        return (-v[4] + 8.0 * v[3] - 8.0 * v[1] + v[0]) / (12.0 * h)
    return (-v[4] + 16.0 * v[3] - 30.0 * v[2] + 16.0 * v[1] - v[0]) / (
        12.0 * h * h)


def derivative_bound_scan(fam, shift, s, n, t_grid, tol=None):
    """Return ``[(t, t^n ||d^n/dt^n e^{a(t, s)}||), ...]``

    Derivatives are taken with step ``t / 8``.
    """
    if not len(t_grid):
        raise InvalidGrid('Scan needs at least one time')
    scan = []
    for t in t_grid:
        if not 0 < t <= fam.horizon:
            raise InvalidGrid('Scan times must lie in (0, T]')
        deriv = exp_a_derivative(fam, shift, t, s, n, t / 8.0, tol)
        scan.append((float(t), t ** n * operator_norm(deriv)))
    return scan


def scan_ratio(scan):
    """Largest entry over the entry at the largest t, zero for zero scans"""
    if not scan:
        raise InvalidGrid('Empty derivative scan')
    values = [v for _, v in sorted(scan)]
    if max(values) == 0.0:
        return 0.0
    if values[-1] == 0.0:
        return float('inf')
    return max(values) / values[-1]


def scan_is_bounded(scan, ratio=SCAN_RATIO_MAX):
    """Whether no entry exceeds ``ratio`` times the entry at the largest t"""
    return scan_ratio(scan) <= ratio


def holder_estimate(f, grid):
    """Fit ``(C, gamma)`` with ``||f(t) - f(s)|| <= C |t - s|^gamma``

    ``f`` maps an array of times to values (or rows of values).  For each
    index lag up to a quarter of the grid the worst difference is taken;
    ``gamma`` is the least-squares slope of its logarithm against the log
    lag, clipped to ``(0, 1]``.  Constant data yields ``(0.0, 1.0)``.
    """
    h = _uniform_step(grid, HOLDER_MIN_POINTS, 'holder_estimate')
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(f(grid), dtype=np.complex128)
    if values.ndim == 1:
        values = values[:, None]
    lags, moduli = [], []
    for k in range(1, (len(grid) - 1) // 4 + 1):
        lags.append(k * h)
        moduli.append(float(
            np.linalg.norm(values[k:] - values[:-k], axis=1).max()))
    lags, moduli = np.array(lags), np.array(moduli)
    positive = moduli > 0
    if positive.sum() < 2:
        warnings.warn(
            'Data is (numerically) constant, no Hoelder fit possible',
            DegenerateDataWarning)
        return 0.0, 1.0
    slope = np.polyfit(np.log(lags[positive]), np.log(moduli[positive]), 1)[0]
    gamma = float(min(max(slope, np.finfo(float).eps), 1.0))
    c_est = float((moduli / lags ** gamma).max())
    return c_est, gamma
