# -*- coding: utf-8 -*-
"""Tests for the reference resolving code."""

import json
import os

import pytest

from logcalc.exceptions import RefResolutionException
from logcalc.ref_resolver import RefResolver


def resolve(data_dir, name):
    path = os.path.join(data_dir, name)
    with open(path, 'rt') as inputf:
        data = json.load(inputf)
    return RefResolver([data_dir]).resolve('file://' + path, data)


def test_included(data_dir):
    result = resolve(data_dir, 'with_refs.json')
    expected = {
        'schema': 1,
        'name': 'with_refs',
        'T': 1.0,
        'output_times': {'start': 0.0, 'stop': 1.0, 'num': 5},
        'seed': 3,
        'generator': {
            'kind': 'constant',
            'A': {
                'dim': 2,
                'entries': [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]],
            },
        },
        'forcing': {
            'components': [
                {'name': 'sqrt_abs'},
                {'name': 'const', 'params': [0.0]},
            ],
            'holder_c': 2.0,
            'holder_gamma': 0.5,
        },
    }
    assert expected == result


def test_resource_url():
    resolver = RefResolver()
    result = resolver.resolve('file:///scenario.json', {
        'generator': {
            '$ref': 'resource://logcalc/data/generators.json#/rotation'}})
    assert result['generator']['kind'] == 'constant'
    assert result['generator']['A']['dim'] == 2


def test_resource_missing():
    with pytest.raises(RefResolutionException):
        RefResolver().resolve('file:///scenario.json', {
            '$ref': 'resource://logcalc/data/no_such.json'})


def test_recursion(data_dir):
    with pytest.raises(RefResolutionException) as e:
        resolve(data_dir, 'loop_a.json')
    assert 'recursion' in str(e.value)


def test_missing_file(data_dir):
    with pytest.raises(RefResolutionException):
        resolve(data_dir, 'missing_ref.json')


def test_missing_pointer(data_dir):
    with pytest.raises(RefResolutionException):
        RefResolver([data_dir]).resolve('file:///scenario.json', {
            '$ref': 'file://generators_local.json#/nope'})
