# -*- coding: utf-8 -*-
"""Tests for the Cauchy problem solvers"""

import math
import warnings

import numpy as np
import pytest

from logcalc import cauchy
from logcalc.evolution import GeneratorSpec, build_family
from logcalc.exceptions import (
    CauchyException, CommutationViolated, DimensionMismatch, GridTooCoarse,
    HolderViolation, InvalidGenerator, InvalidGrid, QuadratureStall)
from logcalc.functions import Constant, Cosine, Polynomial, Sine, SqrtAbs
from logcalc.logrep import log_representation, shift_for_family

ROTATION = [[0.0, 1.0], [-1.0, 0.0]]


def make_problem(spec, horizon, u_s, forcing=None, s=0.0):
    fam = build_family(spec, horizon)
    return cauchy.CauchyProblem(spec, u_s, s, horizon, forcing, family=fam)


@pytest.fixture
def scalar_problem():
    return make_problem(GeneratorSpec('constant', [[1.0]]), 1.0, [1.0])


@pytest.fixture
def rotation_problem():
    return make_problem(
        GeneratorSpec('constant', ROTATION), math.pi, [1.0, 0.0])


@pytest.fixture
def sqrt_forcing():
    return cauchy.Forcing([SqrtAbs()], 1.5, 0.5)


@pytest.fixture
def forced_scalar_problem(sqrt_forcing):
    return make_problem(
        GeneratorSpec('constant', [[1.0]]), 1.0, [1.0], sqrt_forcing)


def test_forcing_invalid():
    with pytest.raises(HolderViolation):
        cauchy.Forcing([SqrtAbs()], 1.0, 0.0)
    with pytest.raises(HolderViolation):
        cauchy.Forcing([SqrtAbs()], -1.0, 0.5)
    with pytest.raises(HolderViolation):
        cauchy.Forcing([], 1.0, 0.5)


def test_forcing_validate(sqrt_forcing):
    worst = sqrt_forcing.validate(-1.0, 1.0)
    assert 1.0 <= worst <= 1.5 * 1.05
    with pytest.raises(HolderViolation):
        cauchy.Forcing([SqrtAbs()], 0.5, 0.5).validate(-1.0, 1.0)
    with pytest.raises(HolderViolation):
        cauchy.Forcing([SqrtAbs()], 10.0, 1.0).validate(0.0, 1.0)


def test_forcing_values(sqrt_forcing):
    assert sqrt_forcing.values([0.25, 4.0]).shape == (2, 1)
    assert sqrt_forcing(4.0)[0] == pytest.approx(2.0)
    assert sqrt_forcing.dim == 1


def test_problem_dimension_mismatch(sqrt_forcing):
    spec = GeneratorSpec('constant', ROTATION)
    with pytest.raises(DimensionMismatch):
        cauchy.CauchyProblem(spec, [1.0], 0.0, 1.0)
    with pytest.raises(DimensionMismatch):
        cauchy.CauchyProblem(spec, [1.0, 0.0], 0.0, 1.0, sqrt_forcing)


def test_scalar_exact(scalar_problem):
    shift = shift_for_family(scalar_problem.family)
    trajectory = cauchy.solve_autonomous(
        scalar_problem, shift, 1e-10, [0.0, 0.5, 1.0])
    assert trajectory.method == cauchy.METHOD_SERIES
    assert trajectory.state_at(1.0)[0] == pytest.approx(math.e, abs=1e-8)
    assert trajectory.state_at(0.0)[0] == pytest.approx(1.0, abs=1e-8)


def test_rotation_quarter(rotation_problem):
    shift = shift_for_family(rotation_problem.family)
    trajectory = cauchy.solve_autonomous(
        rotation_problem, shift, 1e-10, [math.pi / 2])
    np.testing.assert_allclose(
        trajectory.state_at(math.pi / 2), [0.0, -1.0], atol=1e-8)


def test_resolvent_form_agrees(rotation_problem):
    shift = shift_for_family(rotation_problem.family)
    times = np.linspace(0.0, math.pi, 9)
    shifted = cauchy.solve_autonomous(rotation_problem, shift, 1e-10, times)
    resolvent = cauchy.solve_autonomous(
        rotation_problem, shift, 1e-10, times, form='resolvent')
    assert resolvent.method == cauchy.METHOD_SERIES_RESOLVENT
    assert resolvent.max_deviation(shifted) <= 1e-8


def test_solution_kappa_invariant(rotation_problem):
    times = np.linspace(0.0, math.pi, 9)
    trajectories = [
        cauchy.solve_autonomous(
            rotation_problem,
            shift_for_family(rotation_problem.family, margin), 1e-10, times)
        for margin in (1.2, 1.5, 3.0, 10.0)]
    for other in trajectories[1:]:
        assert other.max_deviation(trajectories[0]) <= 1e-8


@pytest.mark.parametrize('name', ['scalar_problem', 'rotation_problem'])
def test_series_against_oracle(name, request):
    problem = request.getfixturevalue(name)
    shift = shift_for_family(problem.family)
    times = np.linspace(-problem.horizon, problem.horizon, 33)
    series = cauchy.solve_autonomous(problem, shift, 1e-6, times)
    oracle = cauchy.oracle_solve(problem, 1e-10, times)
    assert oracle.method == cauchy.METHOD_ORACLE_RK
    assert series.max_deviation(oracle) <= 1e-6


def test_oracle_backward(scalar_problem):
    trajectory = cauchy.oracle_solve(scalar_problem, 1e-10, [-1.0, 0.0])
    assert trajectory.states[0, 0] == pytest.approx(math.exp(-1.0), abs=1e-8)
    assert trajectory.states[1, 0] == 1.0


def test_series_refuses_forced(forced_scalar_problem):
    shift = shift_for_family(forced_scalar_problem.family)
    with pytest.raises(CauchyException):
        cauchy.solve_autonomous(forced_scalar_problem, shift)


def test_series_refuses_piecewise():
    spec = GeneratorSpec('piecewise', ROTATION,
                         b_matrix=[[0.0, 1.0], [0.0, 0.0]])
    problem = make_problem(spec, 1.0, [1.0, 0.0])
    shift = shift_for_family(problem.family)
    with pytest.raises(CommutationViolated):
        cauchy.solve_autonomous(problem, shift, 1e-6, [0.5])


def test_affine_scalar_exact():
    forcing = cauchy.Forcing([Constant([1.0])], 0.0, 1.0)
    problem = make_problem(
        GeneratorSpec('constant', [[1.0]]), 1.0, [0.0], forcing)
    shift = shift_for_family(problem.family)
    trajectory = cauchy.solve_nonautonomous(problem, shift, 1e-9, [1.0])
    assert trajectory.method == cauchy.METHOD_DUHAMEL_SERIES
    assert trajectory.states[0, 0] == pytest.approx(math.e - 1.0, abs=1e-8)


def test_sqrt_forcing_against_oracle(forced_scalar_problem):
    shift = shift_for_family(forced_scalar_problem.family)
    times = np.linspace(0.0, 1.0, 5)
    series = cauchy.solve_nonautonomous(
        forced_scalar_problem, shift, 1e-5, times)
    oracle = cauchy.oracle_solve(forced_scalar_problem, 1e-10, times)
    assert series.max_deviation(oracle) <= 1e-5


def test_zero_forcing_reduces_to_autonomous(rotation_problem):
    zero = cauchy.Forcing([Constant([0.0]), Constant([0.0])], 0.0, 1.0)
    forced = cauchy.CauchyProblem(
        rotation_problem.spec, rotation_problem.u_s, 0.0, math.pi, zero,
        family=rotation_problem.family)
    shift = shift_for_family(rotation_problem.family)
    times = [0.0, 1.0, 2.0]
    assert cauchy.solve_nonautonomous(forced, shift, 1e-9, times).max_deviation(
        cauchy.solve_autonomous(rotation_problem, shift, 1e-9, times)) <= 1e-9


def test_duhamel_generator_residual():
    forcing = cauchy.Forcing([SqrtAbs(), Constant([0.0])], 1.5, 0.5)
    problem = make_problem(
        GeneratorSpec('constant', ROTATION), 1.0, [1.0, 0.0], forcing)
    shift = shift_for_family(problem.family)
    assert cauchy.duhamel_generator_residual(problem, shift, 1.0, 1e-10) <= 1e-8


def test_duhamel_generator_residual_needs_constant():
    forcing = cauchy.Forcing([Constant([1.0]), Constant([1.0])], 0.0, 1.0)
    problem = make_problem(
        GeneratorSpec('separable', np.diag([1.0, 2.0]), g=Cosine()), 1.0,
        [1.0, 0.0], forcing)
    shift = shift_for_family(problem.family)
    with pytest.raises(InvalidGenerator):
        cauchy.duhamel_generator_residual(problem, shift, 0.5)


def test_adaptive_gauss_legendre_sqrt():
    result = cauchy.adaptive_gauss_legendre(
        lambda x: np.sqrt(x)[:, None], 0.0, 1.0, 1e-10)
    assert result.value[0] == pytest.approx(2.0 / 3.0, abs=1e-10)
    assert result.error <= 1e-10
    assert result.panel_count > 1


def test_adaptive_gauss_legendre_polynomial():
    result = cauchy.adaptive_gauss_legendre(
        lambda x: (x ** 3)[:, None], -1.0, 2.0, 1e-12)
    assert result.value[0] == pytest.approx(15.0 / 4.0, abs=1e-12)
    assert result.panel_count == 1


def test_adaptive_gauss_legendre_reversed():
    result = cauchy.adaptive_gauss_legendre(
        lambda x: np.exp(x)[:, None], 1.0, 0.0, 1e-12)
    assert result.value[0] == pytest.approx(1.0 - math.e, abs=1e-12)


def test_adaptive_gauss_legendre_empty():
    result = cauchy.adaptive_gauss_legendre(
        lambda x: np.ones((len(x), 2)), 0.5, 0.5, 1e-12)
    np.testing.assert_array_equal(result.value, np.zeros(2))


def test_adaptive_gauss_legendre_stall():
    with pytest.raises(QuadratureStall):
        cauchy.adaptive_gauss_legendre(
            lambda x: np.sqrt(x)[:, None], 0.0, 1.0, 1e-15, panels_max=4)


def test_trajectory_csv():
    trajectory = cauchy.Trajectory(
        [0.0, 1.0], [[1.0, 2j], [0.5, 0.0]], cauchy.METHOD_SERIES, 1e-7)
    assert trajectory.csv_header() == [
        'time', 're(u_1)', 'im(u_1)', 're(u_2)', 'im(u_2)', 'method',
        'tol_achieved']
    rows = list(trajectory.csv_rows())
    assert rows[0] == ['0.0', '1.0', '0.0', '0.0', '2.0', 'series', '1e-07']


def test_trajectory_invalid():
    with pytest.raises(InvalidGrid):
        cauchy.Trajectory([1.0, 0.0], [[1.0], [1.0]], 'series', 0.0)
    first = cauchy.Trajectory([0.0, 1.0], [[1.0], [1.0]], 'series', 0.0)
    second = cauchy.Trajectory([0.0, 2.0], [[1.0], [1.0]], 'series', 0.0)
    with pytest.raises(InvalidGrid):
        first.max_deviation(second)


def test_residual_check(scalar_problem):
    times = np.linspace(0.0, 1.0, 33)
    exact = cauchy.Trajectory(
        times, np.exp(times)[:, None], 'exact', 0.0)
    assert cauchy.residual_check(exact, scalar_problem) <= 1e-6
    wrong = exact.with_states(np.exp(2.0 * times)[:, None])
    assert cauchy.residual_check(wrong, scalar_problem) > 1e-1


def test_residual_check_grids(scalar_problem):
    coarse = cauchy.Trajectory([0.0, 0.5, 1.0], [[1.0]] * 3, 'exact', 0.0)
    with pytest.raises(GridTooCoarse):
        cauchy.residual_check(coarse, scalar_problem)
    uneven = cauchy.Trajectory(
        [0.0, 0.1, 0.3, 0.6, 1.0], [[1.0]] * 5, 'exact', 0.0)
    with pytest.raises(InvalidGrid):
        cauchy.residual_check(uneven, scalar_problem)


def test_holder_estimate_sqrt():
    c_est, gamma = cauchy.holder_estimate(
        SqrtAbs(), np.linspace(0.0, 1.0, 65))
    assert 0.45 <= gamma <= 0.55
    assert c_est == pytest.approx(1.0, rel=0.05)


def test_holder_estimate_lipschitz():
    _, gamma = cauchy.holder_estimate(Sine(), np.linspace(0.0, 1.0, 65))
    assert gamma >= 0.95


def test_holder_estimate_constant():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        result = cauchy.holder_estimate(
            Constant([3.0]), np.linspace(0.0, 1.0, 33))
    assert result == (0.0, 1.0)
    assert any(issubclass(w.category, cauchy.DegenerateDataWarning)
               for w in caught)


def test_holder_estimate_coarse():
    with pytest.raises(GridTooCoarse):
        cauchy.holder_estimate(SqrtAbs(), np.linspace(0.0, 1.0, 9))


@pytest.mark.parametrize('n', cauchy.POLY_EXP_POWERS)
def test_dunford_poly_exp(rotation_problem, n):
    fam = rotation_problem.family
    a = log_representation(fam, shift_for_family(fam), 1.0, 0.0).a
    np.testing.assert_allclose(
        cauchy.dunford_poly_exp(a, n), cauchy.poly_exp_direct(a, n),
        atol=1e-8)


def test_dunford_poly_exp_power():
    with pytest.raises(ValueError):
        cauchy.dunford_poly_exp(np.eye(2), 4)


def test_exp_a_derivative_scalar(scalar_problem):
    fam = scalar_problem.family
    shift = shift_for_family(fam)
    # d/dt (e^{t - s} + kappa) = e^{t - s}
    value = cauchy.exp_a_derivative(fam, shift, 0.5, 0.0, 1, 1e-3)
    assert value[0, 0] == pytest.approx(math.exp(0.5), abs=1e-6)


@pytest.mark.parametrize('name', ['scalar_problem', 'rotation_problem'])
@pytest.mark.parametrize('n', cauchy.SCAN_ORDERS)
def test_derivative_bound_scan(name, n, request):
    fam = request.getfixturevalue(name).family
    shift = shift_for_family(fam)
    times = [2.0 ** -k for k in range(3, 11)]
    scan = cauchy.derivative_bound_scan(fam, shift, 0.0, n, times)
    assert [t for t, _ in scan] == times
    assert cauchy.scan_is_bounded(scan)
    assert cauchy.scan_ratio(scan) < 1e3


def test_derivative_bound_scan_invalid(scalar_problem):
    fam = scalar_problem.family
    with pytest.raises(InvalidGrid):
        cauchy.derivative_bound_scan(
            fam, shift_for_family(fam), 0.0, 1, [0.0, 0.5])


def test_scan_ratio():
    assert cauchy.scan_ratio([(0.1, 0.0), (0.2, 0.0)]) == 0.0
    assert cauchy.scan_ratio([(0.1, 5.0), (0.2, 1.0)]) == 5.0
    assert cauchy.scan_ratio([(0.1, 1.0), (0.2, 0.0)]) == float('inf')


def test_separable_exact():
    p = make_problem(
        GeneratorSpec('separable', np.diag([1.0, 2.0]), g=Cosine()), 1.0,
        [1.0, 1.0])
    tr = cauchy.solve_autonomous(p, shift_for_family(p.family),
                                 output_times=[1.0])
    np.testing.assert_allclose(
        tr.state_at(1.0), [math.exp(math.sin(1.0)), math.exp(2 * math.sin(1.0))],
        atol=1e-5)


def test_zero_generator_constant_forcing():
    # u' = 1 with u(0) = 0
    p = make_problem(
        GeneratorSpec('constant', [[0.0]]), 1.0, [0.0],
        cauchy.Forcing([Constant([1.0])], 0.0, 1.0))
    tr = cauchy.solve_nonautonomous(p, shift_for_family(p.family),
                                    output_times=[-0.5, 0.0, 0.5, 1.0])
    np.testing.assert_allclose(
        tr.states[:, 0], [-0.5, 0.0, 0.5, 1.0], atol=1e-6)


def test_oracle_stiff():
    p = make_problem(
        GeneratorSpec('constant', np.diag([-50.0, 1.0])), 1.0, [1.0, 1.0])
    tr = cauchy.oracle_solve(p, 1e-10, [1.0])
    np.testing.assert_allclose(
        tr.state_at(1.0), [math.exp(-50.0), math.e], atol=1e-7)


def test_residual_check_spike(scalar_problem):
    times = np.linspace(0.0, 1.0, 101)
    exact = cauchy.Trajectory(times, np.exp(times)[:, None], 'exact', 0.0)
    assert cauchy.residual_check(exact, scalar_problem) <= 1e-6
    states = exact.states.copy()
    states[50] *= 1.01
    assert cauchy.residual_check(
        exact.with_states(states), scalar_problem) > 1e-2


def test_residual_check_zero_generator():
    p = make_problem(GeneratorSpec('constant', [[0.0]]), 1.0, [2.0])
    times = np.linspace(0.0, 1.0, 17)
    tr = cauchy.Trajectory(times, np.full((17, 1), 2.0), 'exact', 0.0)
    assert cauchy.residual_check(tr, p) == 0.0


def test_holder_estimate_identity():
    c_est, gamma = cauchy.holder_estimate(
        Polynomial([0.0, 1.0]), np.linspace(0.0, 1.0, 65))
    assert gamma == pytest.approx(1.0, abs=1e-9)
    assert c_est == pytest.approx(1.0, rel=1e-6)


def test_dunford_poly_exp_scalar():
    np.testing.assert_allclose(
        cauchy.dunford_poly_exp(np.zeros((1, 1)), 0), [[1.0]], atol=1e-8)
    np.testing.assert_allclose(
        cauchy.dunford_poly_exp([[1.0]], 1), [[math.e]], atol=1e-8)


def test_derivative_bound_scan_zero_generator():
    fam = build_family(GeneratorSpec('constant', np.zeros((2, 2))), 1.0)
    times = [2.0 ** -k for k in range(3, 8)]
    scan = cauchy.derivative_bound_scan(
        fam, shift_for_family(fam), 0.0, 1, times)
    assert all(value <= 1e-9 for _, value in scan)


def test_derivative_bound_scan_empty(scalar_problem):
    fam = scalar_problem.family
    with pytest.raises(InvalidGrid):
        cauchy.derivative_bound_scan(fam, shift_for_family(fam), 0.0, 1, [])
    with pytest.raises(InvalidGrid):
        cauchy.scan_ratio([])


def test_adaptive_gauss_legendre_reversed_no_warning():
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        result = cauchy.adaptive_gauss_legendre(
            lambda x: np.sqrt(x)[:, None], 1.0, 0.0, 1e-10)
    assert result.value[0] == pytest.approx(-2.0 / 3.0, abs=1e-10)
