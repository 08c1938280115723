# -*- coding: utf-8 -*-
"""Logarithm representation of generators

For an evolution family with ``||U(t, s)|| <= M e^{beta T}`` and a shift
``|kappa| > M e^{beta T}`` the matrix

    a(t, s) = Log(U(t, s) + kappa I)

is a Dunford integral over a fixed circle about ``kappa``.  When ``A(t)``
commutes with ``U(t, s)`` the generator is recovered as

    A(t) = (I + kappa U(s, t)) d/dt a(t, s)

for every admissible ``kappa``, and ``e^{a(t, s)} - kappa I`` gives back
``U(t, s)`` through the exponential power series.

``d/dt a`` is taken by a fourth order central difference of Dunford
integrals (the product path); the closed form
``(I - kappa (U + kappa I)^{-1}) A(t)`` serves as its oracle.
"""

import logging
import math

import numpy as np

from . import config
from .contour import build_contour, dunford_apply, dunford_bound
from .exceptions import (
    BadMargin, CommutationViolated, SeriesDivergence, ShiftTooSmall,
    StepTooSmall, UnboundedLogarithm)
from .functions import principal_log
from .linalg import as_cmatrix, identity, operator_norm

LOGGER = logging.getLogger(__name__)

#: Steps below ``STEP_MIN_FACTOR * unit roundoff`` are refused
STEP_MIN_FACTOR = 1e3

#: Unit roundoff of double precision
UNIT_ROUNDOFF = np.finfo(float).eps / 2


class KappaShift:
    """The shift ``kappa`` with the growth bound it was chosen against"""

    def __init__(self, kappa, growth_bound, margin):
        #: The shift
        self.kappa = complex(kappa)
        #: ``M e^{beta T}`` used for the choice
        self.growth_bound = float(growth_bound)
        #: ``|kappa| / growth_bound``
        self.margin = float(margin)
        if not abs(self.kappa) > self.growth_bound:
            raise ShiftTooSmall(
                '|kappa| = {} does not exceed the growth bound {}'.format(
                    abs(self.kappa), self.growth_bound))

    @classmethod
    def explicit(cls, kappa, growth_bound):
        """Shift from a given ``kappa`` instead of a margin"""
        margin = abs(complex(kappa)) / growth_bound if growth_bound else \
            math.inf
        return cls(kappa, growth_bound, margin)

    def to_json(self):
        return {
            'kappa': [self.kappa.real, self.kappa.imag],
            'growth_bound': self.growth_bound,
            'margin': self.margin,
        }

    def __repr__(self):
        return 'KappaShift(kappa={!r}, growth_bound={!r}, margin={!r})'.format(
            self.kappa, self.growth_bound, self.margin)


class LogRepresentation:
    """``a(t, s) = Log(U(t, s) + kappa I)`` with provenance"""

    def __init__(self, a, t, s, shift, contour, da_dt=None,
                 node_count_used=0, richardson_gap=0.0, bound=None):
        #: The matrix ``a(t, s)``
        self.a = a
        #: ``d/dt a(t, s)``, filled by :py:func:`dt_log`
        self.da_dt = da_dt
        #: Times
        self.t = t
        self.s = s
        #: The :py:class:`KappaShift` used
        self.shift = shift
        #: The :py:class:`logcalc.contour.Contour` used
        self.contour = contour
        #: Quadrature nodes of the final rule, zero for ``t == s``
        self.node_count_used = node_count_used
        #: Convergence certificate of the quadrature
        self.richardson_gap = richardson_gap
        #: ``max|Log| max||R|| radius`` over the contour
        self.bound = bound

    def __repr__(self):
        return 'LogRepresentation(t={}, s={}, kappa={}, nodes={})'.format(
            self.t, self.s, self.shift.kappa, self.node_count_used)


class SeriesResult:
    """Truncated power series value and the number of terms beyond 0"""

    def __init__(self, value, order, remainder_bound):
        #: Partial sum up to ``a^order / order!``
        self.value = value
        #: Truncation order ``N``
        self.order = order
        #: ``||a||^{N+1} e^{||a||} / (N+1)!``
        self.remainder_bound = remainder_bound


def select_kappa(growth_m, growth_beta, horizon, margin=config.DEFAULT_MARGIN):
    """Positive real ``kappa = margin M e^{beta T}``"""
    if not margin > 1.0:
        raise BadMargin('Margin must exceed 1, got {}'.format(margin))
    bound = growth_m * math.exp(growth_beta * horizon)
    return KappaShift(margin * bound, bound, margin)


def shift_for_family(fam, margin=config.DEFAULT_MARGIN):
    """:py:func:`select_kappa` with the growth constants of ``fam``"""
    return select_kappa(fam.growth_m, fam.growth_beta, fam.horizon, margin)


def default_step(fam):
    return config.STEP_FACTOR * fam.horizon


def log_representation(fam, shift, t, s, tol=None):
    """Return :py:class:`LogRepresentation` of ``U(t, s)`` without ``da_dt``"""
    if tol is None:
        tol = config.DEFAULTS['quadrature']
    u = fam.evaluate(t, s)
    shifted = u + shift.kappa * identity(fam.dim)
    contour = build_contour(shift.kappa, shift.growth_bound)
    bound = dunford_bound('principal-log', shifted, contour)
    if t == s:
        a = complex(principal_log(1.0 + shift.kappa)) * identity(fam.dim)
        rep = LogRepresentation(a, t, s, shift, contour, bound=bound)
    else:
        result = dunford_apply('principal-log', shifted, contour, tol)
        rep = LogRepresentation(
            result.value, t, s, shift, contour,
            node_count_used=result.node_count_used,
            richardson_gap=result.richardson_gap, bound=bound)
    norm = operator_norm(rep.a)
    if not (math.isfinite(norm) and norm <= bound * (1.0 + 1e-8)):
        raise UnboundedLogarithm(
            '||a|| = {} exceeds the contour bound {}'.format(norm, bound))
    return rep


def check_step(fam, t, s, h):
    if h < STEP_MIN_FACTOR * UNIT_ROUNDOFF:
        raise StepTooSmall('Step {} below {}'.format(
            h, STEP_MIN_FACTOR * UNIT_ROUNDOFF))
    fam.check_horizon(t - 2 * h, t + 2 * h, s)


def dt_log(fam, shift, t, s, h=None, tol=None):
    """``d/dt a(t, s)`` by a fourth order central difference"""
    if h is None:
        h = default_step(fam)
    if tol is None:
        tol = config.DEFAULTS['quadrature']
    check_step(fam, t, s, h)

    def a_at(tau):
        return log_representation(fam, shift, tau, s, tol / 10).a

    return (-a_at(t + 2 * h) + 8.0 * a_at(t + h) - 8.0 * a_at(t - h) +
            a_at(t - 2 * h)) / (12.0 * h)


def log_representation_with_derivative(fam, shift, t, s, h=None, tol=None):
    """:py:func:`log_representation` with ``da_dt`` filled in"""
    rep = log_representation(fam, shift, t, s, tol)
    rep.da_dt = dt_log(fam, shift, t, s, h, tol)
    return rep


def _require_commuting(fam):
    if not fam.spec.commuting:
        raise CommutationViolated(
            'Generator of kind {!r} does not commute with its family'.format(
                fam.spec.kind))


def resolvent_approximation(fam, shift, t, s):
    """``(I + kappa U(s, t))^{-1} A(t)``, equal to ``d/dt a(t, s)``"""
    _require_commuting(fam)
    eye = identity(fam.dim)
    return np.linalg.solve(
        eye + shift.kappa * fam.evaluate(s, t), fam.generator_at(t))


def dt_log_closed_form(fam, shift, t, s):
    """``(I - kappa (U(t, s) + kappa I)^{-1}) A(t)``"""
    _require_commuting(fam)
    eye = identity(fam.dim)
    shifted = fam.evaluate(t, s) + shift.kappa * eye
    return (eye - shift.kappa * np.linalg.inv(shifted)) @ fam.generator_at(t)


def generator_from_dt_log(fam, shift, t, s, da_dt):
    """``(I + kappa U(s, t)) da_dt`` for a given ``d/dt a(t, s)``"""
    _require_commuting(fam)
    eye = identity(fam.dim)
    return (eye + shift.kappa * fam.evaluate(s, t)) @ da_dt


def reconstruct_generator(fam, shift, t, s, h=None, tol=None):
    """``A(t) = (I + kappa U(s, t)) d/dt a(t, s)``"""
    _require_commuting(fam)
    return generator_from_dt_log(
        fam, shift, t, s, dt_log(fam, shift, t, s, h, tol))


def _series_order(norm, tol):
    """Smallest ``N`` with ``norm^{N+1} e^{norm} / (N+1)! <= tol``"""
    log_tol = math.log(tol)
    for order in range(config.SERIES_MAX_TERMS + 1):
        k = order + 1
        if norm == 0.0:
            return order, 0.0
        log_rem = k * math.log(norm) + norm - math.lgamma(k + 1)
        if log_rem <= log_tol:
            return order, math.exp(log_rem)
    raise SeriesDivergence(
        'Exponential series of norm {} needs more than {} terms'.format(
            norm, config.SERIES_MAX_TERMS))


def exp_series(a, tol=None):
    """``sum_{n <= N} a^n / n!`` with remainder bound below ``tol``"""
    if tol is None:
        tol = config.DEFAULTS['series']
    a = as_cmatrix(a)
    order, remainder = _series_order(operator_norm(a), tol)
    term = identity(a.shape[0])
    total = term.copy()
    for n in range(1, order + 1):
        term = term @ a / n
        total = total + term
    return SeriesResult(total, order, remainder)


def exp_log_roundtrip_check(fam, shift, t, s, tol=None):
    """``||exp_series(a(t, s)) - (U(t, s) + kappa I)||``"""
    if tol is None:
        tol = config.DEFAULTS['quadrature']
    rep = log_representation(fam, shift, t, s, tol)
    target = fam.evaluate(t, s) + shift.kappa * identity(fam.dim)
    return operator_norm(exp_series(rep.a).value - target)


def similarity_residual(fam, shift, t, s, h=None, tol=None):
    """``||d/dt a (U + kappa I) - U A(t)||``"""
    _require_commuting(fam)
    u = fam.evaluate(t, s)
    da = dt_log(fam, shift, t, s, h, tol)
    return operator_norm(
        da @ (u + shift.kappa * identity(fam.dim)) - u @ fam.generator_at(t))


def transport_residual(fam, shift, t, s, u_s, h=None, tol=None):
    """Compare ``d/dt e^{a} u_s`` with ``(d/dt a) e^{a} u_s``

    The first derivative is a difference quotient of the series values,
    the second uses the difference quotient of ``a``.
    """
    _require_commuting(fam)
    if h is None:
        h = default_step(fam)
    if tol is None:
        tol = config.DEFAULTS['quadrature']
    check_step(fam, t, s, h)
    u_s = np.asarray(u_s, dtype=np.complex128)

    def exp_a(tau):
        return exp_series(log_representation(fam, shift, tau, s, tol / 10).a)

    d_exp = (-exp_a(t + 2 * h).value + 8.0 * exp_a(t + h).value -
             8.0 * exp_a(t - h).value + exp_a(t - 2 * h).value) / (12.0 * h)
    lhs = d_exp @ u_s
    rhs = dt_log(fam, shift, t, s, h, tol) @ exp_a(t).value @ u_s
    return float(np.linalg.norm(lhs - rhs))


def semigroup_defect(fam, shift, t, r, s, tol=None):
    """``||e^{a(t, r)} e^{a(r, s)} - e^{a(t, s)}||``, nonzero in general"""

    def exp_a(t1, t2):
        return exp_series(log_representation(fam, shift, t1, t2, tol).a).value

    return operator_norm(exp_a(t, r) @ exp_a(r, s) - exp_a(t, s))
