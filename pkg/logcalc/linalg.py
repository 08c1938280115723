# -*- coding: utf-8 -*-
"""Dense complex matrix kernel

Matrices (``CMatrix``) are plain ``numpy`` arrays of dtype ``complex128``;
:py:func:`as_cmatrix` is the single entry point that validates them.  All
functions are pure.

The exponential and logarithm implemented here are *oracles*: they come
from ``scipy.linalg`` and an eigendecomposition and never go through the
contour integrals that are under test elsewhere in the package.
"""

import logging

import numpy as np
import scipy.linalg

from . import config
from .exceptions import BranchCutViolation, InvalidMatrix, SingularResolvent

LOGGER = logging.getLogger(__name__)

#: Bound obtained from Gershgorin discs
METHOD_GERSHGORIN = 'gershgorin'

#: Bound obtained from the induced 2-norm
METHOD_OPERATOR_NORM = 'operator-norm'


def as_cmatrix(m, max_dim=config.MAX_DIM):
    """Return ``m`` as finite square ``complex128`` array

    Raises :py:class:`InvalidMatrix` otherwise.
    """
    try:
        arr = np.array(m, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise InvalidMatrix('Not a numeric matrix: {!r}'.format(m)) from e
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InvalidMatrix(
            'Expected non-empty square matrix, got shape {}'.format(
                arr.shape))
    if arr.shape[0] > max_dim:
        raise InvalidMatrix('Dimension {} exceeds limit {}'.format(
            arr.shape[0], max_dim))
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrix('Matrix has non-finite entries')
    return arr


def identity(dim):
    return np.eye(dim, dtype=np.complex128)


class SpectralBound:
    """Certified upper bound on the spectral radius"""

    def __init__(self, radius_upper, method):
        #: Upper bound on ``max |lambda|``
        self.radius_upper = float(radius_upper)
        #: How the bound was obtained, ``METHOD_GERSHGORIN`` or
        #: ``METHOD_OPERATOR_NORM``
        self.method = method

    def __repr__(self):
        return 'SpectralBound({!r}, {!r})'.format(
            self.radius_upper, self.method)


def resolvent_stack(m, lambdas, rcond_min=None):
    """Return ``(lambda I - m)^{-1}`` for each entry of ``lambdas``

    The result has shape ``(len(lambdas), dim, dim)``.  All systems are
    solved in one batched call; a reciprocal condition number below
    ``rcond_min`` counts as singular.
    """
    m = as_cmatrix(m)
    if rcond_min is None:
        rcond_min = config.DEFAULTS['singular_rcond']
    lambdas = np.atleast_1d(np.asarray(lambdas, dtype=np.complex128))
    dim = m.shape[0]
    eye = identity(dim)
    shifted = lambdas[:, None, None] * eye[None, :, :] - m[None, :, :]
    singular = np.linalg.svd(shifted, compute_uv=False)
    smallest = singular[:, -1]
    largest = singular[:, 0]
    with np.errstate(divide='ignore', invalid='ignore'):
        rcond = np.where(largest > 0, smallest / largest, 0.0)
    bad = np.flatnonzero(rcond < rcond_min)
    if bad.size:
        raise SingularResolvent(
            'lambda = {} is in or near the spectrum (rcond = {:.3e})'.format(
                lambdas[bad[0]], rcond[bad[0]]))
    try:
        return np.linalg.solve(shifted, np.broadcast_to(eye, shifted.shape))
    except np.linalg.LinAlgError as e:
        raise SingularResolvent('Resolvent solve failed') from e


def resolvent(m, lam, rcond_min=None):
    """Return ``(lam I - m)^{-1}``"""
    return resolvent_stack(m, [lam], rcond_min=rcond_min)[0]


def operator_norm(m):
    """Induced 2-norm, the largest singular value"""
    return float(np.linalg.norm(as_cmatrix(m), 2))


def spectral_radius_upper(m):
    """Return :py:class:`SpectralBound` for ``m``

    The smaller of the Gershgorin bound (row and column discs) and the
    operator norm.
    """
    m = as_cmatrix(m)
    abs_m = np.abs(m)
    gershgorin = min(abs_m.sum(axis=1).max(), abs_m.sum(axis=0).max())
    norm = operator_norm(m)
    if gershgorin <= norm:
        return SpectralBound(gershgorin, METHOD_GERSHGORIN)
    else:
        return SpectralBound(norm, METHOD_OPERATOR_NORM)


def matrix_exp_oracle(m):
    """Matrix exponential by scaling and squaring with Pade core"""
    return scipy.linalg.expm(as_cmatrix(m))


def branch_cut_distance(z):
    """Distance of complex ``z`` from the ray ``(-inf, 0]``"""
    z = complex(z)
    if z.real <= 0.0:
        return abs(z.imag)
    return abs(z)


def matrix_log_oracle(m, branch_tol=None, cond_max=None):
    """Principal matrix logarithm

    Uses the eigendecomposition when the eigenvector matrix is well
    conditioned (below ``cond_max``) and the Schur based
    ``scipy.linalg.logm`` otherwise.
    """
    m = as_cmatrix(m)
    if branch_tol is None:
        branch_tol = config.DEFAULTS['branch_cut']
    if cond_max is None:
        cond_max = config.DEFAULTS['eigvec_cond']
    eigvals, eigvecs = scipy.linalg.eig(m)
    for lam in eigvals:
        if branch_cut_distance(lam) <= branch_tol:
            raise BranchCutViolation(
                'Eigenvalue {} on the branch cut of the principal '
                'logarithm'.format(lam))
    cond = np.linalg.cond(eigvecs)
    if np.isfinite(cond) and cond < cond_max:
        logs = np.log(eigvals)
        return (eigvecs * logs[None, :]) @ np.linalg.inv(eigvecs)
    LOGGER.debug('Eigenvector condition %.3e, using Schur fallback', cond)
    result = scipy.linalg.logm(m)
    return np.asarray(result, dtype=np.complex128)
