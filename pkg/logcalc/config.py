# -*- coding: utf-8 -*-
"""Tolerances, numerical limits and environment settings

Named tolerances can be overridden per scenario (``"tolerances"`` key) and
per invocation (``--tol name=value``); everything else is fixed.
"""

from collections import OrderedDict
import logging
import os

from .exceptions import LogCalcException

LOGGER = logging.getLogger(__name__)

#: Version of the scenario file format
SCHEMA_VERSION = 1

#: Largest matrix dimension accepted by the kernel
MAX_DIM = 64

#: Smallest (and default) number of quadrature nodes on a circle
NODES_MIN = 16

#: Node budget of the doubling trapezoidal rule
NODES_MAX = 4096

#: Term budget of the exponential power series
SERIES_MAX_TERMS = 200

#: Panel budget of the adaptive Duhamel quadrature
PANELS_MAX = 2 ** 14

#: Number of Gauss-Legendre nodes per panel
GL_ORDER = 8

#: Default ratio kappa / growth bound
DEFAULT_MARGIN = 1.5

#: Margins swept for the kappa invariance checks
SWEEP_MARGINS = (1.2, 1.5, 3.0, 10.0)

#: Points of the grid used to certify growth constants
GROWTH_GRID_POINTS = 65

#: Relative difference step for t-derivatives, ``h = STEP_FACTOR * T``
STEP_FACTOR = 1e-3

#: Environment variable capping worker threads
ENV_THREADS = 'LOGCALC_THREADS'

#: Default tolerances and thresholds
DEFAULT_TOLERANCES = OrderedDict([
    ('quadrature', 1e-10),
    ('series', 1e-12),
    ('semigroup', 1e-10),
    ('commutation', 1e-10),
    ('reconstruction', 1e-5),
    ('derivative', 1e-6),
    ('roundtrip', 1e-9),
    ('solve', 1e-6),
    ('oracle', 1e-10),
    ('duhamel', 1e-9),
    ('solution_invariance', 1e-8),
    ('kappa_invariance', 1e-6),
    ('functional_calculus', 1e-8),
    ('cauchy_identity', 1e-10),
    ('winding', 1e-10),
    ('log_agreement', 1e-9),
    ('branch_cut', 1e-12),
    ('eigvec_cond', 1e8),
    ('singular_rcond', 1e-14),
])


class UnknownTolerance(LogCalcException, KeyError):
    """Raised on tolerance names not in ``DEFAULT_TOLERANCES``"""


class Tolerances:
    """Read-only mapping of named tolerances

    Build modified copies with :py:meth:`updated`.
    """

    def __init__(self, values=None):
        #: Effective values, defaults overlaid with ``values``
        self._values = OrderedDict(DEFAULT_TOLERANCES)
        for key, value in (values or {}).items():
            self._check_name(key)
            self._values[key] = float(value)

    @classmethod
    def _check_name(cls, key):
        if key not in DEFAULT_TOLERANCES:
            raise UnknownTolerance(
                'Unknown tolerance {!r}, known: {}'.format(
                    key, ', '.join(DEFAULT_TOLERANCES)))

    def __getitem__(self, key):
        self._check_name(key)
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __eq__(self, other):
        return isinstance(other, Tolerances) and self._values == other._values

    def items(self):
        return self._values.items()

    def overrides(self):
        """Return the entries that differ from the defaults"""
        return OrderedDict(
            (k, v) for k, v in self._values.items()
            if v != DEFAULT_TOLERANCES[k])

    def updated(self, values):
        """Return copy with ``values`` applied on top"""
        merged = OrderedDict(self._values)
        merged.update(values or {})
        return Tolerances(merged)

    def __repr__(self):
        return 'Tolerances({})'.format(dict(self.overrides()))


#: Tolerances with all defaults
DEFAULTS = Tolerances()


def parse_tolerance_override(text):
    """Parse ``name=value`` from the command line into a pair"""
    if '=' not in text:
        raise ValueError(
            'Tolerance override must look like name=value, got {!r}'.format(
                text))
    name, value = text.split('=', 1)
    name = name.strip()
    Tolerances._check_name(name)
    return name, float(value)


def thread_count(requested=None):
    """Worker count, at least 1

    ``LOGCALC_THREADS`` caps ``requested`` and is the default without it.
    """
    requested = max(1, requested) if requested else None
    raw = os.environ.get(ENV_THREADS, '')
    if not raw:
        return requested or 1
    try:
        cap = max(1, int(raw))
    except ValueError:
        LOGGER.warning('Ignoring invalid %s=%r', ENV_THREADS, raw)
        return requested or 1
    return min(requested, cap) if requested else cap
