# -*- coding: utf-8 -*-
"""Tests for the dense complex matrix kernel"""

import math

from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
import numpy as np
import pytest

from logcalc import linalg
from logcalc.exceptions import (
    BranchCutViolation, InvalidMatrix, SingularResolvent)


def complex_matrices(max_dim=16, bound=10.0):
    """Strategy for complex square matrices with bounded entries"""
    parts = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)
    return st.integers(1, max_dim).flatmap(
        lambda n: st.tuples(
            arrays(np.float64, (n, n), elements=parts),
            arrays(np.float64, (n, n), elements=parts)).map(
                lambda pair: pair[0] + 1j * pair[1]))


@pytest.fixture
def rotation():
    return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=np.complex128)


def test_as_cmatrix_accepts_lists():
    m = linalg.as_cmatrix([[1, 2], [3, 4]])
    assert m.dtype == np.complex128
    assert m.shape == (2, 2)


@pytest.mark.parametrize('value', [
    [[1, 2, 3], [4, 5, 6]],
    [1, 2],
    [[]],
    [[float('nan')]],
    [['a']],
])
def test_as_cmatrix_rejects(value):
    with pytest.raises(InvalidMatrix):
        linalg.as_cmatrix(value)


def test_as_cmatrix_rejects_large():
    with pytest.raises(InvalidMatrix):
        linalg.as_cmatrix(np.eye(65))


def test_resolvent_of_diagonal():
    m = np.diag([1.0, 2.0])
    r = linalg.resolvent(m, 3.0)
    np.testing.assert_allclose(r, np.diag([0.5, 1.0]), atol=1e-15)


def test_resolvent_stack_shape(rotation):
    stack = linalg.resolvent_stack(rotation, [2.0, 3.0j, -2.0])
    assert stack.shape == (3, 2, 2)
    for lam, r in zip([2.0, 3.0j, -2.0], stack):
        np.testing.assert_allclose(
            (lam * np.eye(2) - rotation) @ r, np.eye(2), atol=1e-14)


def test_resolvent_in_spectrum(rotation):
    with pytest.raises(SingularResolvent):
        linalg.resolvent(rotation, 1j)


def test_operator_norm_rotation(rotation):
    assert linalg.operator_norm(rotation) == pytest.approx(1.0, abs=1e-15)


def test_spectral_radius_upper_jordan():
    bound = linalg.spectral_radius_upper([[0.0, 1.0], [0.0, 0.0]])
    assert bound.radius_upper >= 0.0
    assert bound.method in (linalg.METHOD_GERSHGORIN,
                            linalg.METHOD_OPERATOR_NORM)


def test_matrix_exp_oracle_rotation(rotation):
    u = linalg.matrix_exp_oracle(math.pi / 2 * rotation)
    np.testing.assert_allclose(u, [[0, 1], [-1, 0]], atol=1e-14)


def test_matrix_log_oracle_of_exp():
    m = np.array([[0.5, 0.2], [0.1, -0.3]], dtype=np.complex128)
    np.testing.assert_allclose(
        linalg.matrix_log_oracle(linalg.matrix_exp_oracle(m)), m, atol=1e-13)


def test_matrix_log_oracle_branch_cut():
    with pytest.raises(BranchCutViolation):
        linalg.matrix_log_oracle(np.diag([1.0, -2.0]))


def test_matrix_log_oracle_defective():
    m = np.array([[2.0, 1.0], [0.0, 2.0]])
    expected = np.array([[math.log(2.0), 0.5], [0.0, math.log(2.0)]])
    np.testing.assert_allclose(linalg.matrix_log_oracle(m), expected,
                               atol=1e-12)


def test_branch_cut_distance():
    assert linalg.branch_cut_distance(-3 + 2j) == 2.0
    assert linalg.branch_cut_distance(3 + 4j) == 5.0
    assert linalg.branch_cut_distance(-1.0) == 0.0


@settings(max_examples=50, deadline=None)
@given(complex_matrices())
def test_spectral_radius_upper_bounds_eigenvalues(m):
    bound = linalg.spectral_radius_upper(m)
    radius = np.abs(np.linalg.eigvals(m)).max()
    assert radius <= bound.radius_upper * (1.0 + 1e-8) + 1e-10


@settings(max_examples=50, deadline=None)
@given(complex_matrices())
def test_operator_norm_bounds_spectral_radius(m):
    radius = np.abs(np.linalg.eigvals(m)).max()
    assert radius <= linalg.operator_norm(m) * (1.0 + 1e-8) + 1e-10


@settings(max_examples=30, deadline=None)
@given(complex_matrices(bound=1.0))
def test_resolvent_outside_norm_disk(m):
    lam = 2.0 * linalg.operator_norm(m) + 1.0
    r = linalg.resolvent(m, lam)
    dim = m.shape[0]
    np.testing.assert_allclose(
        (lam * np.eye(dim) - m) @ r, np.eye(dim), atol=1e-10)
    # Neumann series bound ||R|| <= 1 / (|lam| - ||m||)
    assert linalg.operator_norm(r) <= 1.0 / (
        lam - linalg.operator_norm(m)) * (1.0 + 1e-10)


def matrix_pairs(max_dim=16, bound=10.0):
    """Strategy for two complex square matrices of equal size"""
    parts = st.floats(-bound, bound, allow_nan=False, allow_infinity=False)

    def pair(n):
        real = arrays(np.float64, (n, n), elements=parts)
        return st.tuples(real, real, real, real).map(
            lambda p: (p[0] + 1j * p[1], p[2] + 1j * p[3]))

    return st.integers(1, max_dim).flatmap(pair)


def test_operator_norm_diagonal():
    assert linalg.operator_norm(np.diag([2.0, -3.0])) == pytest.approx(3.0)


def test_spectral_radius_upper_examples(rotation):
    assert linalg.spectral_radius_upper(
        np.diag([1.0, 2.0])).radius_upper == pytest.approx(2.0)
    assert linalg.spectral_radius_upper(np.zeros((3, 3))).radius_upper == 0.0
    bound = linalg.spectral_radius_upper(rotation).radius_upper
    assert 1.0 - 1e-12 <= bound <= math.sqrt(2.0)


def test_resolvent_of_zero():
    np.testing.assert_allclose(
        linalg.resolvent(np.zeros((2, 2)), 1.0), np.eye(2), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(matrix_pairs())
def test_operator_norm_submultiplicative(pair):
    a, b = pair
    assert linalg.operator_norm(a @ b) <= (
        linalg.operator_norm(a) * linalg.operator_norm(b) * (1.0 + 1e-12) +
        1e-10)


def shifted_contraction(m):
    """``2 I + B`` with ``||B|| <= 0.9``, spectrum in the disk about 2"""
    scale = max(1.0, linalg.operator_norm(m) / 0.9)
    return 2.0 * np.eye(m.shape[0]) + m / scale


@settings(max_examples=30, deadline=None)
@given(complex_matrices(max_dim=8, bound=1.0))
def test_exp_log_roundtrip_general(m):
    # cond_max = 1 forces the Schur based logarithm
    m = shifted_contraction(m)
    log_m = linalg.matrix_log_oracle(m, cond_max=1.0)
    np.testing.assert_allclose(
        linalg.matrix_exp_oracle(log_m), m, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(complex_matrices(max_dim=8, bound=1.0))
def test_exp_log_roundtrip_hermitian(m):
    m = shifted_contraction(0.5 * (m + m.conj().T))
    np.testing.assert_allclose(
        linalg.matrix_exp_oracle(linalg.matrix_log_oracle(m)), m, atol=1e-9)
