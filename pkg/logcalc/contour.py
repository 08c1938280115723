# -*- coding: utf-8 -*-
"""Circular integration paths and Dunford-Riesz integrals

``f(m) = (2 pi i)^{-1} \\oint f(lambda) (lambda I - m)^{-1} d lambda`` is
evaluated with the trapezoidal rule on a circle.  The rule converges
geometrically for integrands analytic in an annulus around the circle, so
the node count is doubled until two successive values agree (the
"Richardson gap") to the requested tolerance.  Nodes of the coarser rule
are reused and sums are formed pairwise in node order, which makes the
result independent of how the resolvent solves are scheduled.
"""

import logging
import math

import numpy as np

from . import config
from .exceptions import (
    BranchCutViolation, InvalidContour, NoConvergence, ShiftTooSmall,
    SpectrumNotEnclosed)
from .functions import DUNFORD_FUNCTIONS, function_for_spec, principal_log
from .linalg import (
    as_cmatrix, branch_cut_distance, operator_norm, resolvent_stack)

LOGGER = logging.getLogger(__name__)

#: Integrands that need the path to stay away from the origin
_SINGULAR_AT_ORIGIN = ('principal-log', 'reciprocal')

#: Chunk size below which pairwise summation adds sequentially
_PAIRWISE_BLOCK = 8


def _is_power_of_two(n):
    return n > 0 and (n & (n - 1)) == 0


class Contour:
    """Circle ``|lambda - center| = radius`` with equispaced nodes"""

    def __init__(self, center, radius, node_count=config.NODES_MIN):
        #: Center of the circle
        self.center = complex(center)
        #: Radius of the circle
        self.radius = float(radius)
        #: Number of nodes of the coarsest trapezoidal rule
        self.node_count = int(node_count)
        self._validate()

    def _validate(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise InvalidContour(
                'Radius must be positive, got {}'.format(self.radius))
        if not (self.node_count >= config.NODES_MIN and
                _is_power_of_two(self.node_count)):
            raise InvalidContour(
                'Node count must be a power of two >= {}, got {}'.format(
                    config.NODES_MIN, self.node_count))

    @property
    def excludes_origin(self):
        """Whether the closed disk misses the origin"""
        return self.radius < abs(self.center)

    @property
    def avoids_branch_cut(self):
        """Whether the closed disk misses the ray ``(-inf, 0]``"""
        return self.radius < branch_cut_distance(self.center)

    def encloses(self, z):
        """Whether ``z`` lies strictly inside the circle"""
        return abs(complex(z) - self.center) < self.radius

    def angles(self, node_count=None):
        n = node_count or self.node_count
        return 2.0 * np.pi * np.arange(n) / n

    def nodes(self, node_count=None):
        """Quadrature nodes for ``node_count`` nodes"""
        return self.center + self.radius * np.exp(
            1j * self.angles(node_count))

    def to_json(self):
        return {
            'center': [self.center.real, self.center.imag],
            'radius': self.radius,
            'nodes': self.node_count,
        }

    @classmethod
    def from_json(cls, data):
        re, im = data['center']
        return Contour(complex(re, im), data['radius'], data['nodes'])

    def __eq__(self, other):
        return (isinstance(other, Contour) and
                self.to_json() == other.to_json())

    def __repr__(self):
        return 'Contour(center={!r}, radius={!r}, node_count={!r})'.format(
            self.center, self.radius, self.node_count)


class DunfordResult:
    """Value of a Dunford integral with its convergence certificate"""

    def __init__(self, value, node_count_used, richardson_gap,
                 gap_history=None, function_max=None,
                 resolvent_norm_max=None, contour=None):
        #: The matrix ``f(m)``
        self.value = value
        #: Nodes of the final rule
        self.node_count_used = node_count_used
        #: ``||value(N) - value(N/2)||``
        self.richardson_gap = richardson_gap
        #: Gaps of all doublings, coarsest first
        self.gap_history = list(gap_history or [])
        #: ``max |f(lambda)|`` over the final nodes
        self.function_max = function_max
        #: ``max ||(lambda - m)^{-1}||`` over the final nodes
        self.resolvent_norm_max = resolvent_norm_max
        #: The path used
        self.contour = contour

    @property
    def integral_bound(self):
        """Bound ``max|f| max||R|| radius`` on ``||value||``"""
        return self.function_max * self.resolvent_norm_max * \
            self.contour.radius

    def __repr__(self):
        return 'DunfordResult(nodes={}, gap={:.3e})'.format(
            self.node_count_used, self.richardson_gap)


def scalar_principal_log(z):
    """``log|z| + i arg z`` with ``-pi < arg z <= pi``"""
    return complex(principal_log(complex(z)))


def build_contour(kappa, growth_bound, node_count=config.NODES_MIN):
    """Circle about ``kappa`` enclosing the disk of radius ``growth_bound``

    The radius is the mean of ``growth_bound`` and ``|kappa|`` so the
    circle encloses the spectrum of ``U + kappa I`` and misses the origin.
    """
    if growth_bound < 0:
        raise InvalidContour('Growth bound must be non-negative')
    if abs(kappa) <= growth_bound:
        raise ShiftTooSmall(
            '|kappa| = {} does not exceed the growth bound {}'.format(
                abs(kappa), growth_bound))
    return Contour(kappa, 0.5 * (growth_bound + abs(kappa)), node_count)


def pairwise_sum(terms):
    """Sum along the first axis in a fixed pairwise order"""
    n = len(terms)
    if n <= _PAIRWISE_BLOCK:
        total = terms[0].copy()
        for term in terms[1:]:
            total += term
        return total
    mid = n // 2
    return pairwise_sum(terms[:mid]) + pairwise_sum(terms[mid:])


def _resolvent_norms(resolvents):
    return np.linalg.norm(resolvents, ord=2, axis=(1, 2))


def _terms(func, m, contour, angles, rcond_min):
    """Trapezoidal terms ``f(lambda) R(lambda) r e^{i theta}``"""
    phase = np.exp(1j * angles)
    lambdas = contour.center + contour.radius * phase
    resolvents = resolvent_stack(m, lambdas, rcond_min=rcond_min)
    values = func(lambdas)
    weights = values * contour.radius * phase
    return (weights[:, None, None] * resolvents, np.abs(values).max(),
            _resolvent_norms(resolvents).max())


def _check_admissible(func, m, contour):
    if func.name in _SINGULAR_AT_ORIGIN:
        if func.name == 'principal-log' and not contour.avoids_branch_cut:
            raise BranchCutViolation(
                '{!r} meets the branch cut of Log'.format(contour))
        if not contour.excludes_origin:
            raise InvalidContour(
                '{!r} does not exclude the origin'.format(contour))
    for lam in np.linalg.eigvals(m):
        if not contour.encloses(lam):
            raise SpectrumNotEnclosed(
                'Eigenvalue {} not inside {!r}'.format(lam, contour))


def dunford_apply(f, m, contour, tol, node_max=config.NODES_MAX,
                  rcond_min=None):
    """Return :py:class:`DunfordResult` for ``f(m)``

    ``f`` is a name from :py:data:`logcalc.functions.DUNFORD_FUNCTIONS` or
    a :py:class:`logcalc.functions.ScalarFunction`.
    """
    func = function_for_spec(f, library=DUNFORD_FUNCTIONS)
    m = as_cmatrix(m)
    _check_admissible(func, m, contour)
    n = contour.node_count
    terms, f_max, r_max = _terms(func, m, contour, contour.angles(n),
                                 rcond_min)
    previous = pairwise_sum(terms) / n
    gaps = []
    while True:
        if 2 * n > node_max:
            raise NoConvergence(
                'Gap {:.3e} above tolerance {:.3e} with {} nodes'.format(
                    gaps[-1] if gaps else float('nan'), tol, n))
        odd_angles = 2.0 * np.pi * (2 * np.arange(n) + 1) / (2 * n)
        new_terms, new_f_max, new_r_max = _terms(
            func, m, contour, odd_angles, rcond_min)
        merged = np.empty((2 * n,) + terms.shape[1:], dtype=np.complex128)
        merged[0::2] = terms
        merged[1::2] = new_terms
        terms = merged
        f_max = max(f_max, new_f_max)
        r_max = max(r_max, new_r_max)
        n *= 2
        value = pairwise_sum(terms) / n
        gap = operator_norm(value - previous)
        gaps.append(gap)
        LOGGER.debug('%s: %d nodes, gap %.3e', func.name, n, gap)
        if gap <= tol:
            break
        previous = value
    return DunfordResult(
        value=value, node_count_used=n, richardson_gap=gap, gap_history=gaps,
        function_max=f_max, resolvent_norm_max=r_max, contour=contour)


def dunford_bound(f, m, contour, rcond_min=None):
    """``max|f| max||R|| radius`` sampled on the coarsest nodes"""
    func = function_for_spec(f, library=DUNFORD_FUNCTIONS)
    _, f_max, r_max = _terms(
        func, as_cmatrix(m), contour, contour.angles(), rcond_min)
    return f_max * r_max * contour.radius


def scalar_contour_integral(f, contour, node_count=None):
    """``(2 pi i)^{-1} \\oint f(lambda) d lambda`` by the trapezoidal rule"""
    func = function_for_spec(f, library=DUNFORD_FUNCTIONS)
    n = node_count or contour.node_count
    phase = np.exp(1j * contour.angles(n))
    lambdas = contour.center + contour.radius * phase
    terms = func(lambdas) * contour.radius * phase
    return complex(pairwise_sum(terms[:, None]).item() / n)
