# -*- coding: utf-8 -*-
"""Reading and writing scenario files and the matrix exchange format

A matrix is exchanged as ``{"dim": n, "entries": [[re, im], ...]}`` with
the entries in row-major order; vectors are plain ``[[re, im], ...]``
lists.  Scenario files are JSON (or YAML if ``ruamel.yaml`` is
installed), may contain ``"$ref"`` includes and are validated against the
bundled schema before being converted to :py:class:`Scenario` objects.
"""

from collections import OrderedDict
import contextlib
import importlib.resources
import json
import logging
import os

import numpy as np

from . import config
from .cauchy import CauchyProblem, Forcing
from .evolution import GeneratorSpec
from .exceptions import (
    LogCalcException, ParseError, SchemaViolation)
from .functions import function_from_json
from .logrep import KappaShift, select_kappa
from .ref_resolver import RefResolver, YAML_AVAILABLE
from .validation import SchemaValidator

if YAML_AVAILABLE:
    import ruamel.yaml as ruamel_yaml

LOGGER = logging.getLogger(__name__)

#: File name suffixes read as YAML
YAML_SUFFIXES = ('.yaml', '.yml')


def json_loads_ordered(s):
    """Helper function to load JSON using OrderedDict for object pairs"""
    return json.loads(s, object_pairs_hook=OrderedDict)


def complex_from_json(pair):
    re, im = pair
    return complex(float(re), float(im))


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def vector_from_json(entries):
    return np.array([complex_from_json(p) for p in entries],
                    dtype=np.complex128)


def vector_to_json(v):
    return [complex_to_json(z) for z in np.asarray(v).reshape(-1)]


def matrix_from_json(data):
    """Build ``complex128`` matrix from the exchange format"""
    dim = int(data['dim'])
    entries = vector_from_json(data['entries'])
    if len(entries) != dim * dim:
        raise SchemaViolation(
            'Matrix of dim {} needs {} entries, got {}'.format(
                dim, dim * dim, len(entries)), 'entries')
    return entries.reshape(dim, dim)


def matrix_to_json(m):
    m = np.asarray(m)
    return OrderedDict([
        ('dim', m.shape[0]),
        ('entries', vector_to_json(m)),
    ])


class ScenarioSchema:
    """Programmatic access to the bundled scenario JSON schema"""

    @classmethod
    def load_from_string(cls, s):
        """Load schema from JSON string ``s``"""
        return ScenarioSchema(json_loads_ordered(s))

    @classmethod
    def load_bundled(cls):
        return cls.load_from_string(importlib.resources.files(
            'logcalc').joinpath('data/scenario.schema.json').read_text())

    def __init__(self, parsed_json):
        #: parsed JSON that is wrapped by schema
        self.parsed_json = parsed_json


class Scenario:
    """One run configuration of the harness"""

    def __init__(self, name, generator, horizon, output_times, margin=None,
                 kappa=None, tolerances=None, forcing=None, seed=0, s=0.0,
                 u0=None, corruption=None, description=''):
        #: Name, used for output file names
        self.name = name
        #: Free text
        self.description = description
        #: The :py:class:`logcalc.evolution.GeneratorSpec`
        self.generator = generator
        #: Horizon ``T``
        self.horizon = float(horizon)
        #: Output times of the solvers, ascending
        self.output_times = np.sort(np.asarray(output_times, dtype=float))
        if margin is not None and kappa is not None:
            raise ValueError('Give either margin or kappa, not both')
        #: Ratio ``|kappa| / (M e^{beta T})``, ``None`` if kappa is explicit
        self.margin = None if kappa is not None else float(
            margin if margin is not None else config.DEFAULT_MARGIN)
        #: Explicit kappa or ``None``
        self.kappa = None if kappa is None else complex(kappa)
        #: The :py:class:`logcalc.config.Tolerances`
        self.tolerances = tolerances or config.Tolerances()
        #: Optional :py:class:`logcalc.cauchy.Forcing`
        self.forcing = forcing
        #: Seed for randomized grids
        self.seed = int(seed)
        #: Initial time
        self.s = float(s)
        #: Initial value, defaults to the first unit vector
        if u0 is None:
            u0 = np.zeros(generator.dim, dtype=np.complex128)
            u0[0] = 1.0
        self.u0 = np.asarray(u0, dtype=np.complex128)
        #: ``{"row", "col", "delta"}`` for the perturbed family, or ``None``
        self.corruption = corruption

    def with_margin(self, margin):
        """Copy using the margin policy with ``margin``"""
        return self._copy(margin=margin, kappa=None)

    def with_tolerances(self, overrides):
        """Copy with ``overrides`` applied to the tolerances"""
        return self._copy(tolerances=self.tolerances.updated(overrides))

    def with_seed(self, seed):
        return self._copy(seed=seed)

    def _copy(self, **kwargs):
        args = dict(
            name=self.name, generator=self.generator, horizon=self.horizon,
            output_times=self.output_times, margin=self.margin,
            kappa=self.kappa, tolerances=self.tolerances,
            forcing=self.forcing, seed=self.seed, s=self.s, u0=self.u0,
            corruption=self.corruption, description=self.description)
        args.update(kwargs)
        return Scenario(**args)

    def kappa_shift(self, fam):
        """The :py:class:`logcalc.logrep.KappaShift` for ``fam``"""
        if self.kappa is not None:
            return KappaShift.explicit(self.kappa, fam.growth_bound)
        return select_kappa(
            fam.growth_m, fam.growth_beta, fam.horizon, self.margin)

    def problem(self, family=None):
        """The :py:class:`logcalc.cauchy.CauchyProblem` of the scenario"""
        return CauchyProblem(
            self.generator, self.u0, self.s, self.horizon, self.forcing,
            family=family)

    def to_json(self):
        return scenario_to_json(self)

    def __eq__(self, other):
        return isinstance(other, Scenario) and self.to_json() == \
            other.to_json()

    def __repr__(self):
        return 'Scenario({!r}, {!r}, T={})'.format(
            self.name, self.generator, self.horizon)


@contextlib.contextmanager
def _field(name):
    """Turn errors while building ``name`` into ``SchemaViolation``"""
    try:
        yield
    except SchemaViolation as e:
        field = name if not e.field else '{}.{}'.format(name, e.field)
        raise SchemaViolation(str(e), field) from e
    except (LogCalcException, ValueError) as e:
        raise SchemaViolation('{}: {}'.format(name, e), name) from e


class ScenarioBuilder:
    """Helper class to construct :py:class:`Scenario` from validated JSON"""

    def __init__(self, json_data):
        #: Validated scenario data, ``$ref`` resolved
        self.json_data = json_data

    def run(self):
        data = self.json_data
        with _field('generator'):
            generator = self._build_generator(data['generator'])
        horizon = float(data['T'])
        with _field('output_times'):
            output_times = self._build_output_times(
                data['output_times'], horizon)
        with _field('tolerances'):
            tolerances = config.Tolerances(
                data.get('tolerances', OrderedDict()))
        policy = data.get('kappa_policy', OrderedDict())
        margin, kappa = policy.get('margin'), None
        if 'kappa' in policy:
            kappa = complex_from_json(policy['kappa'])
        forcing = None
        if 'forcing' in data:
            with _field('forcing'):
                forcing = self._build_forcing(data['forcing'], generator.dim)
        with _field('s'):
            s = float(data.get('s', 0.0))
            if abs(s) > horizon:
                raise ValueError('s = {} outside of [-T, T]'.format(s))
        u0 = None
        if 'u0' in data:
            with _field('u0'):
                u0 = vector_from_json(data['u0'])
                if len(u0) != generator.dim:
                    raise ValueError('u0 has dimension {}, expected {}'.format(
                        len(u0), generator.dim))
        corruption = data.get('corruption')
        if corruption is not None:
            with _field('corruption'):
                if max(corruption['row'], corruption['col']) >= generator.dim:
                    raise ValueError('Index out of range')
                corruption = OrderedDict(
                    (k, corruption[k]) for k in ('row', 'col', 'delta'))
        return Scenario(
            name=data['name'], generator=generator, horizon=horizon,
            output_times=output_times, margin=margin, kappa=kappa,
            tolerances=tolerances, forcing=forcing,
            seed=data.get('seed', 0), s=s, u0=u0, corruption=corruption,
            description=data.get('description', ''))

    @classmethod
    def _build_generator(cls, data):
        a = None
        with _field('A'):
            a = matrix_from_json(data['A'])
        b = None
        if 'B' in data:
            with _field('B'):
                b = matrix_from_json(data['B'])
        g = None
        if 'g' in data:
            with _field('g'):
                g = function_from_json(data['g'])
        return GeneratorSpec(
            data['kind'], a, g=g, b_matrix=b, switch=data.get('switch', 0.0))

    @classmethod
    def _build_output_times(cls, data, horizon):
        if isinstance(data, (dict, OrderedDict)):
            times = np.linspace(data['start'], data['stop'], data['num'])
        else:
            times = np.asarray(data, dtype=float)
        outside = times[np.abs(times) > horizon]
        if len(outside):
            raise ValueError('Time {} outside of [-{T}, {T}]'.format(
                outside[0], T=horizon))
        return times

    @classmethod
    def _build_forcing(cls, data, dim):
        components = [function_from_json(c) for c in data['components']]
        if len(components) != dim:
            raise ValueError('Forcing has {} components, expected {}'.format(
                len(components), dim))
        return Forcing(components, data['holder_c'], data['holder_gamma'])


def generator_to_json(spec):
    result = OrderedDict([
        ('kind', spec.kind),
        ('A', matrix_to_json(spec.a_matrix)),
    ])
    if spec.g is not None:
        result['g'] = spec.g.to_json()
    if spec.b_matrix is not None:
        result['B'] = matrix_to_json(spec.b_matrix)
        result['switch'] = spec.switch
    return result


def scenario_to_json(scenario):
    """Emit ``scenario`` as JSON data that parses back to it"""
    result = OrderedDict([
        ('schema', config.SCHEMA_VERSION),
        ('name', scenario.name),
    ])
    if scenario.description:
        result['description'] = scenario.description
    result['generator'] = generator_to_json(scenario.generator)
    result['T'] = scenario.horizon
    if scenario.kappa is not None:
        result['kappa_policy'] = OrderedDict(
            [('kappa', complex_to_json(scenario.kappa))])
    else:
        result['kappa_policy'] = OrderedDict([('margin', scenario.margin)])
    overrides = scenario.tolerances.overrides()
    if overrides:
        result['tolerances'] = overrides
    if scenario.forcing is not None:
        result['forcing'] = scenario.forcing.to_json()
    result['output_times'] = [float(t) for t in scenario.output_times]
    result['seed'] = scenario.seed
    result['s'] = scenario.s
    result['u0'] = vector_to_json(scenario.u0)
    if scenario.corruption is not None:
        result['corruption'] = OrderedDict(scenario.corruption)
    return result


def load_scenario_json(path):
    """Load JSON or YAML document, raising :py:class:`ParseError`"""
    try:
        with open(path, 'rt') as inputf:
            text = inputf.read()
    except OSError as e:
        raise ParseError('Could not read {}: {}'.format(path, e), path) from e
    if os.path.splitext(path)[1].lower() in YAML_SUFFIXES:
        if not YAML_AVAILABLE:
            raise ParseError('Install ruamel.yaml to read YAML files', path)
        try:
            return ruamel_yaml.YAML(typ='safe', pure=True).load(text)
        except ruamel_yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            line = mark.line + 1 if mark is not None else None
            raise ParseError('{}:{}: {}'.format(path, line, e), path,
                             line) from e
    try:
        return json_loads_ordered(text)
    except json.JSONDecodeError as e:
        raise ParseError('{}:{}: {}'.format(path, e.lineno, e.msg), path,
                         e.lineno) from e


def parse_scenario(path, lib_dirs=()):
    """Load, resolve, validate and build :py:class:`Scenario` from ``path``

    ``"$ref"`` paths are looked up in ``lib_dirs`` and next to ``path``.
    """
    LOGGER.info('Loading scenario from %s', path)
    data = load_scenario_json(path)
    if not isinstance(data, dict):
        raise SchemaViolation('Scenario must be a JSON object', '<root>')
    abspath = os.path.abspath(path)
    resolver = RefResolver(
        lookup_paths=list(lib_dirs) + [os.path.dirname(abspath)],
        dict_class=OrderedDict)
    resolved = resolver.resolve('file://' + abspath, data)
    SchemaValidator(ScenarioSchema.load_bundled()).validate_or_raise(resolved)
    return ScenarioBuilder(resolved).run()


def write_scenario(scenario, outputf):
    """Write ``scenario`` as indented JSON to file-like ``outputf``"""
    json.dump(scenario_to_json(scenario), outputf, indent='    ')
    print('', file=outputf)
