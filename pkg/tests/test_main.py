# -*- coding: utf-8 -*-
"""Tests for the ``__main__`` module"""

import json
import os

import pytest

from logcalc.__main__ import main


def test_no_command():
    assert main([]) == 1


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(['--version'])
    assert e.value.code == 0
    assert 'logcalc' in capsys.readouterr().out


def test_check_scalar(bundled_scenario, tmpdir):
    contents = []
    for name in ('first', 'second'):
        out_dir = str(tmpdir.join(name))
        assert not main(['check', '--scenario', bundled_scenario('scalar'),
                         '--out', out_dir])
        with open(os.path.join(out_dir, 'residuals.csv'), 'rb') as inputf:
            contents.append(inputf.read())
    assert contents[0] == contents[1]


def test_validate_corrupted(bundled_scenario, capsys):
    assert main(['validate', '-s', bundled_scenario('corrupted')]) == 1
    assert 'failed conformance/cocycle' in capsys.readouterr().err


def test_logrep_piecewise(bundled_scenario, capsys):
    assert main(['logrep', '-s', bundled_scenario('piecewise')]) == 1
    assert 'CommutationViolated' in capsys.readouterr().err


def test_tolerance_override(bundled_scenario, tmpdir):
    # a looser cocycle tolerance lets the corrupted family pass that check
    out_dir = str(tmpdir)
    main(['validate', '-s', bundled_scenario('corrupted'), '-o', out_dir,
          '--tol', 'semigroup=1.0', '--seed', '5'])
    with open(os.path.join(out_dir, 'report.json'), 'rt') as inputf:
        data = json.load(inputf)
    checks = {c['name']: c for c in data['checks']}
    assert checks['cocycle']['tol'] == 1.0
    assert checks['cocycle']['pass']


@pytest.mark.parametrize('text', ['semigroup', 'nope=1.0', 'solve=x'])
def test_bad_tolerance(bundled_scenario, text):
    with pytest.raises(SystemExit) as e:
        main(['check', '-s', bundled_scenario('scalar'), '--tol', text])
    assert e.value.code == 2


def test_parse_error_report(data_dir, tmpdir):
    out_dir = str(tmpdir)
    assert main(['check', '-s', os.path.join(data_dir, 'broken.json'),
                 '-o', out_dir]) == 1
    with open(os.path.join(out_dir, 'report.json'), 'rt') as inputf:
        data = json.load(inputf)
    assert data['pass'] is False
    assert data['errors'][0]['phase'] == 'parse'
    assert data['errors'][0]['type'] == 'ParseError'


def test_schema_violation(data_dir, capsys):
    assert main(['validate', '-s',
                 os.path.join(data_dir, 'misspelled.json')]) == 1
    assert 'kapa' in capsys.readouterr().err


def test_report_needs_out(bundled_scenario):
    assert main(['report', '-s', bundled_scenario('scalar')]) == 1


def test_lib_dir(data_dir, tmpdir):
    # "$ref" paths are looked up in --lib-dir as well
    path = str(tmpdir.join('scenario.json'))
    with open(path, 'wt') as outputf:
        json.dump({
            '$ref': 'file://common.json',
            'name': 'lib_dir',
            'generator': {'$ref': 'file://generators_local.json#/diag'},
        }, outputf)
    assert not main(['validate', '-s', path, '--lib-dir', data_dir])
