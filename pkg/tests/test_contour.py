# -*- coding: utf-8 -*-
"""Tests for the contour integrals"""

import math

import numpy as np
import pytest

from logcalc import contour
from logcalc.exceptions import (
    BranchCutViolation, InvalidContour, NoConvergence, ShiftTooSmall,
    SpectrumNotEnclosed, ZeroArgument)
from logcalc.linalg import matrix_exp_oracle, matrix_log_oracle


@pytest.fixture
def rotation():
    return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=np.complex128)


@pytest.fixture
def shifted_rotation(rotation):
    """``U(1, 0) + 1.5 I`` of the rotation family"""
    return matrix_exp_oracle(rotation) + 1.5 * np.eye(2)


@pytest.mark.parametrize('radius, nodes', [(0.0, 16), (-1.0, 16),
                                           (1.0, 8), (1.0, 24)])
def test_contour_invalid(radius, nodes):
    with pytest.raises(InvalidContour):
        contour.Contour(0.0, radius, nodes)


def test_contour_geometry():
    path = contour.Contour(3.0, 1.0)
    assert path.excludes_origin
    assert contour.build_contour(3.0, math.e).radius == pytest.approx(
        (3.0 + math.e) / 2)
    assert path.avoids_branch_cut
    assert path.encloses(3.5)
    assert not path.encloses(4.5)
    assert len(path.nodes()) == 16
    assert contour.Contour.from_json(path.to_json()) == path


def test_build_contour():
    path = contour.build_contour(1.5, 1.0)
    assert path.center == 1.5
    assert path.radius == 1.25
    assert path.excludes_origin


def test_build_contour_shift_too_small():
    with pytest.raises(ShiftTooSmall):
        contour.build_contour(1.0, 1.0)


def test_scalar_principal_log():
    assert contour.scalar_principal_log(-1.0) == pytest.approx(math.pi * 1j)
    assert contour.scalar_principal_log(math.e) == pytest.approx(1.0)
    assert contour.scalar_principal_log(math.e * 1j) == pytest.approx(
        1.0 + 0.5j * math.pi)
    with pytest.raises(ZeroArgument):
        contour.scalar_principal_log(0.0)


def test_pairwise_sum():
    terms = np.arange(37, dtype=float)[:, None, None] * np.ones((37, 2, 2))
    np.testing.assert_array_equal(
        contour.pairwise_sum(terms), np.full((2, 2), 666.0))


def test_log_of_diagonal():
    m = np.diag([2.0, 3.0])
    result = contour.dunford_apply(
        'principal-log', m, contour.Contour(2.5, 1.0), 1e-12)
    np.testing.assert_allclose(
        result.value, np.diag([math.log(2.0), math.log(3.0)]), atol=1e-11)
    assert result.richardson_gap <= 1e-12
    assert result.node_count_used & (result.node_count_used - 1) == 0
    assert result.gap_history[-1] == result.richardson_gap


def test_log_agrees_with_oracle(shifted_rotation):
    path = contour.build_contour(1.5, 1.0)
    result = contour.dunford_apply(
        'principal-log', shifted_rotation, path, 1e-10)
    np.testing.assert_allclose(
        result.value, matrix_log_oracle(shifted_rotation), atol=1e-9)
    assert result.node_count_used <= 512
    assert np.linalg.norm(result.value, 2) <= result.integral_bound


def test_exp_agrees_with_oracle(rotation):
    result = contour.dunford_apply(
        'exp', rotation, contour.Contour(0.0, 2.0), 1e-12)
    np.testing.assert_allclose(
        result.value, matrix_exp_oracle(rotation), atol=1e-11)


def test_constant_one_is_identity(shifted_rotation):
    path = contour.build_contour(1.5, 1.0)
    result = contour.dunford_apply(
        'constant-one', shifted_rotation, path, 1e-10)
    np.testing.assert_allclose(result.value, np.eye(2), atol=1e-10)


def test_reciprocal_winding():
    # origin outside: vanishes; origin inside: winding number one
    outside = contour.scalar_contour_integral(
        'reciprocal', contour.build_contour(1.5, 1.0), 4096)
    assert abs(outside) <= 1e-10
    inside = contour.scalar_contour_integral(
        'reciprocal', contour.Contour(0.0, 1.0))
    assert inside == pytest.approx(1.0, abs=1e-14)


def test_log_refuses_branch_cut():
    with pytest.raises(BranchCutViolation):
        contour.dunford_apply(
            'principal-log', -3.0 * np.eye(2), contour.Contour(-3.0, 1.0),
            1e-10)


def test_log_refuses_origin():
    with pytest.raises(BranchCutViolation):
        contour.dunford_apply(
            'principal-log', np.eye(2), contour.Contour(0.5, 1.0), 1e-10)


def test_spectrum_not_enclosed():
    with pytest.raises(SpectrumNotEnclosed):
        contour.dunford_apply(
            'exp', np.diag([0.5, 5.0]), contour.Contour(0.0, 1.0), 1e-10)


def test_no_convergence():
    with pytest.raises(NoConvergence):
        contour.dunford_apply(
            'principal-log', np.eye(1), contour.Contour(1.05, 1.0), 1e-14,
            node_max=32)


def test_dunford_apply_deterministic(shifted_rotation):
    path = contour.build_contour(1.5, 1.0)
    first = contour.dunford_apply('principal-log', shifted_rotation, path,
                                  1e-10)
    second = contour.dunford_apply('principal-log', shifted_rotation, path,
                                   1e-10)
    assert first.value.tobytes() == second.value.tobytes()


def test_dunford_bound(shifted_rotation):
    path = contour.build_contour(1.5, 1.0)
    assert contour.dunford_bound(
        'principal-log', shifted_rotation, path) > 0.0


def test_log_of_identity():
    result = contour.dunford_apply(
        'principal-log', np.eye(1), contour.Contour(1.0, 0.5), 1e-12)
    assert abs(result.value[0, 0]) <= 1e-12


def test_gap_history_decays():
    m = np.diag([math.e, 2.0]) + 3.0 * np.eye(2)
    path = contour.build_contour(3.0, math.e)
    result = contour.dunford_apply('principal-log', m, path, 1e-12)
    np.testing.assert_allclose(
        result.value, np.diag([math.log(3.0 + math.e), math.log(5.0)]),
        atol=1e-10)
    nodes = [path.node_count * 2 ** (k + 1)
             for k in range(len(result.gap_history))]
    pairs = zip(nodes, result.gap_history, result.gap_history[1:])
    for n, gap, next_gap in pairs:
        # above the rounding floor the gap at least halves per doubling
        if n >= 64 and gap > 1e-13:
            assert next_gap <= 0.5 * gap
