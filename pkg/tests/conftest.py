# -*- coding: utf-8 -*-
"""Shared fixtures"""

import os

import pytest

import logcalc


@pytest.fixture
def data_dir():
    """Directory of the test scenario fragments"""
    return os.path.join(os.path.abspath(os.path.dirname(__file__)), 'data')


@pytest.fixture
def bundled_scenario():
    """Return function giving the path of a shipped scenario"""
    def path(name):
        return os.path.join(
            os.path.dirname(os.path.abspath(logcalc.__file__)), 'data',
            'scenarios', name + '.json')
    return path
