# -*- coding: utf-8 -*-
"""Tests for the named scalar functions"""

import math

import numpy as np
import pytest

from logcalc import functions
from logcalc.exceptions import UnknownFunction, ZeroArgument


def test_principal_log_branch():
    assert complex(functions.principal_log(-1.0)) == pytest.approx(math.pi * 1j)
    # -pi is mapped onto the closed side of the branch
    value = complex(functions.principal_log(complex(-1.0, -0.0)))
    assert value.imag == pytest.approx(math.pi)


def test_principal_log_zero():
    with pytest.raises(ZeroArgument):
        functions.principal_log([1.0, 0.0])


def test_function_for_spec_unknown():
    with pytest.raises(UnknownFunction):
        functions.function_for_spec('tan')


def test_function_for_spec_library():
    with pytest.raises(UnknownFunction):
        functions.function_for_spec(
            'sqrt_abs', library=functions.GENERATOR_FUNCTIONS)


def test_function_for_spec_param_count():
    with pytest.raises(UnknownFunction):
        functions.function_for_spec('const', [])


def test_function_from_json():
    func = functions.function_from_json({'name': 'poly', 'params': [1, 2]})
    assert func == functions.Polynomial([1.0, 2.0])
    assert func(2.0) == pytest.approx(5.0)
    assert func.to_json() == {'name': 'poly', 'params': [1.0, 2.0]}


@pytest.mark.parametrize('func', [
    functions.Constant([2.5]),
    functions.Cosine(),
    functions.Cosine([3.0]),
    functions.Polynomial([1.0, -2.0, 0.5]),
])
def test_antiderivative(func):
    # compare with the trapezoidal rule on a fine grid
    grid = np.linspace(0.0, 1.3, 20001)
    values = func(grid)
    integral = np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(grid))
    assert func.antiderivative(0.0) == pytest.approx(0.0, abs=1e-15)
    assert func.antiderivative(1.3) == pytest.approx(integral, abs=1e-7)


def test_extrema_cos():
    lo, hi = functions.Cosine().extrema(-1.0, 1.0)
    assert lo == pytest.approx(math.cos(1.0))
    assert hi == pytest.approx(1.0)


def test_sqrt_abs_and_abs_power():
    assert functions.SqrtAbs()(-4.0) == pytest.approx(2.0)
    assert functions.SqrtAbs([1.0])(5.0) == pytest.approx(2.0)
    assert functions.AbsPower([0.25])(16.0) == pytest.approx(2.0)
    with pytest.raises(UnknownFunction):
        functions.AbsPower([1.5])


def test_poly_times_exp():
    func = functions.PolyTimesExp([2])
    assert func.power == 2
    assert complex(func(1.0)) == pytest.approx(math.e)
    with pytest.raises(UnknownFunction):
        functions.PolyTimesExp([1.5])


def test_reciprocal_zero():
    with pytest.raises(ZeroArgument):
        functions.Reciprocal()(np.array([1.0, 0.0]))


def test_no_antiderivative():
    with pytest.raises(UnknownFunction):
        functions.SqrtAbs().antiderivative(1.0)
