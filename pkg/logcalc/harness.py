# -*- coding: utf-8 -*-
"""Scenario driven verification runs

A :py:class:`Harness` runs the phases a command asks for on one
:py:class:`logcalc.io.Scenario`, collects named residuals against named
tolerances into a :py:class:`RunReport` and writes the artifacts into an
output directory:

``report.json``
    checks, timings, provenance, observations and error records
``residuals.csv``
    one row per check, identical across runs with the same scenario and seed
``logrep.csv``
    the reconstruction sweep (commands ``logrep`` and ``report``)
``trajectories/<name>-<method>.csv``
    solver output (commands ``solve`` and ``report``)
``scenario.json``
    the effective scenario (command ``report``)
"""

from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
import csv
import json
import logging
import os
import time

import numpy as np

from . import __version__, config
from .cauchy import (
    CauchyProblem, Forcing, HOLDER_SLACK, POLY_EXP_POWERS, SCAN_ORDERS,
    SCAN_RATIO_MAX, derivative_bound_scan, dunford_poly_exp,
    duhamel_generator_residual, exp_a_derivative, holder_estimate,
    oracle_solve, poly_exp_direct, residual_check, scan_ratio,
    solve_autonomous, solve_nonautonomous)
from .contour import build_contour, dunford_apply, scalar_contour_integral
from .evolution import (
    KIND_CONSTANT, build_family, check_commutation, check_semigroup,
    estimate_growth, generator_from_derivative, pregenerator_fd, uniform_grid)
from .exceptions import CommutationViolated, InvalidGrid, LogCalcException
from .functions import Constant
from .io import complex_to_json, write_scenario
from .linalg import identity, matrix_log_oracle, operator_norm
from .logrep import (
    default_step, dt_log_closed_form, exp_series, generator_from_dt_log,
    log_representation, log_representation_with_derivative,
    resolvent_approximation, select_kappa, semigroup_defect,
    similarity_residual, transport_residual)

LOGGER = logging.getLogger(__name__)

#: Name of each phase, in execution order
PHASES = ('conformance', 'contour', 'logrep', 'solve', 'holomorphy')

#: Phases run by each command
COMMAND_PHASES = OrderedDict([
    ('validate', ('conformance',)),
    ('logrep', ('logrep',)),
    ('solve', ('solve',)),
    ('check', PHASES),
    ('report', PHASES),
])

#: Known commands
COMMANDS = tuple(COMMAND_PHASES)

#: Points per axis of the conformance grid
CONFORMANCE_GRID_POINTS = 9

#: Points per axis of the reconstruction sweep
SWEEP_GRID_POINTS = 9

#: Random ``(t, s)`` pairs for the growth and logarithm samples
SAMPLE_COUNT = 4

#: Random pairs for the growth certificate
GROWTH_SAMPLES = 64

#: Node budget of the logarithm on the default margin
LOG_NODES_BUDGET = 512

#: Budget of the series truncation order
SERIES_ORDER_BUDGET = 40

#: Step of the pre-generator difference quotient, relative to ``T``
PREGENERATOR_STEP = 1e-4

#: Exponents ``k`` of the scan times ``2^-k``
SCAN_EXPONENTS = tuple(range(3, 11))

#: Columns of ``residuals.csv``
RESIDUALS_HEADER = ('phase', 'check', 'residual', 'tol', 'pass')

#: Columns of ``logrep.csv``
LOGREP_HEADER = (
    't', 's', 'kappa', 'residual_reconstruction', 'residual_roundtrip',
    'nodes_used', 'dt_log_norm')


class Check:
    """One named residual held to one tolerance"""

    def __init__(self, phase, name, residual, tol):
        #: Phase that computed the residual
        self.phase = phase
        #: Name of the check, unique within the phase
        self.name = name
        self.residual = float(residual)
        self.tol = float(tol)

    @property
    def passed(self):
        # NaN residuals fail
        return bool(self.residual <= self.tol)

    def to_json(self):
        return OrderedDict([
            ('phase', self.phase),
            ('name', self.name),
            ('residual', self.residual),
            ('tol', self.tol),
            ('pass', self.passed),
        ])

    def csv_row(self):
        return [self.phase, self.name, repr(self.residual), repr(self.tol),
                'pass' if self.passed else 'fail']

    def __repr__(self):
        return 'Check({}/{}: {:.3e} <= {:.1e}: {})'.format(
            self.phase, self.name, self.residual, self.tol, self.passed)


class RunReport:
    """Outcome of one command on one scenario"""

    def __init__(self, scenario_name, command, version=__version__):
        self.scenario_name = scenario_name
        self.command = command
        self.version = version
        #: List of :py:class:`Check`
        self.checks = []
        #: Wall clock seconds per phase
        self.timings = OrderedDict()
        #: ``{"phase", "type", "message"}`` records of aborted phases
        self.errors = []
        #: Parameters needed to reproduce the numbers: kappa, contour, ...
        self.provenance = OrderedDict()
        #: Numbers that are reported but not held to a tolerance
        self.observations = OrderedDict()

    def add_check(self, phase, name, residual, tol):
        check = Check(phase, name, residual, tol)
        self.checks.append(check)
        log = LOGGER.info if check.passed else LOGGER.warning
        log('%s/%s: %.3e (tol %.1e) %s', phase, name, check.residual,
            check.tol, 'pass' if check.passed else 'FAIL')
        return check

    def add_error(self, phase, exc):
        LOGGER.error('Phase %s aborted: %s: %s', phase,
                     type(exc).__name__, exc)
        self.errors.append(OrderedDict([
            ('phase', phase),
            ('type', type(exc).__name__),
            ('message', str(exc)),
        ]))

    def observe(self, key, value):
        self.observations[key] = value

    @property
    def failed_checks(self):
        return [c for c in self.checks if not c.passed]

    @property
    def passed(self):
        """Whether all checks passed and no phase aborted"""
        return not self.errors and not self.failed_checks

    def to_json(self):
        return OrderedDict([
            ('scenario', self.scenario_name),
            ('command', self.command),
            ('version', self.version),
            ('pass', self.passed),
            ('checks', [c.to_json() for c in self.checks]),
            ('errors', list(self.errors)),
            ('provenance', self.provenance),
            ('observations', self.observations),
            ('timings', self.timings),
        ])

    def __repr__(self):
        return 'RunReport({!r}, {!r}, {} checks, {} errors, pass={})'.format(
            self.scenario_name, self.command, len(self.checks),
            len(self.errors), self.passed)


def _write_csv(path, header, rows):
    with open(path, 'wt', newline='') as outputf:
        writer = csv.writer(outputf, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def write_report(report, out_dir):
    """Write ``report.json`` of :py:class:`RunReport` into ``out_dir``"""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, 'report.json'), 'wt') as outputf:
        json.dump(report.to_json(), outputf, indent='    ')
        print('', file=outputf)


class Harness:
    """Runs the phases of a command on one scenario

    Phases share the evolution family and the kappa shift of the scenario,
    both built on first use.  A
    :py:class:`logcalc.exceptions.LogCalcException` or a numerical error
    from numpy aborts only the phase raising it.
    """

    def __init__(self, scenario, out_dir=None, threads=None):
        #: The :py:class:`logcalc.io.Scenario`
        self.scenario = scenario
        #: Output directory or ``None`` for no files
        self.out_dir = out_dir
        #: Worker count of the grid sweeps
        self.threads = config.thread_count(threads)
        #: Shortcut to the tolerances of the scenario
        self.tols = scenario.tolerances
        #: The current :py:class:`RunReport`
        self.report = None
        #: Trajectories by method name
        self.trajectories = OrderedDict()
        #: Rows of ``logrep.csv``
        self.logrep_rows = []
        self._family = None
        self._shift = None

    @property
    def horizon(self):
        return self.scenario.horizon

    @property
    def family(self):
        """Evolution family, corrupted if the scenario asks for it"""
        if self._family is None:
            fam = build_family(self.scenario.generator, self.horizon)
            corruption = self.scenario.corruption
            if corruption is not None:
                LOGGER.info('Corrupting entry (%d, %d) by %g',
                            corruption['row'], corruption['col'],
                            corruption['delta'])
                fam = fam.corrupted(
                    corruption['row'], corruption['col'], corruption['delta'])
                fam = fam.with_growth(*estimate_growth(fam))
            prov = self.report.provenance
            prov['growth_m'] = fam.growth_m
            prov['growth_beta'] = fam.growth_beta
            prov['growth_bound'] = fam.growth_bound
            self._family = fam
        return self._family

    @property
    def shift(self):
        """Kappa shift of the scenario's policy"""
        if self._shift is None:
            shift = self.scenario.kappa_shift(self.family)
            contour = build_contour(shift.kappa, shift.growth_bound)
            prov = self.report.provenance
            prov['kappa'] = complex_to_json(shift.kappa)
            prov['margin'] = shift.margin
            prov['contour'] = contour.to_json()
            self._shift = shift
        return self._shift

    def _map(self, func, items):
        """Order preserving map, threaded if ``threads > 1``"""
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return list(map(func, items))
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(func, items))

    def _rng(self, phase):
        """Generator seeded by the scenario seed and the phase"""
        return np.random.default_rng([self.scenario.seed, PHASES.index(phase)])

    def _check(self, phase, name, residual, tol_name):
        return self.report.add_check(phase, name, residual, self.tols[tol_name])

    def run(self, command):
        """Run ``command``, write outputs and return :py:class:`RunReport`"""
        if command not in COMMAND_PHASES:
            raise ValueError('Unknown command {!r}, choose from {}'.format(
                command, ', '.join(COMMANDS)))
        self.report = RunReport(self.scenario.name, command)
        self.trajectories = OrderedDict()
        self.logrep_rows = []
        self._family = self._shift = None
        for phase in COMMAND_PHASES[command]:
            self._run_phase(phase)
        if self.out_dir is not None:
            self.write(command)
        LOGGER.info('Scenario %s, command %s: %s', self.scenario.name,
                    command, 'pass' if self.report.passed else 'FAIL')
        return self.report

    def _run_phase(self, phase):
        LOGGER.info('Running phase %s', phase)
        start = time.perf_counter()
        try:
            getattr(self, 'phase_' + phase)(self._rng(phase))
        except LogCalcException as e:
            self.report.add_error(phase, e)
        except (ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
            LOGGER.exception('Unexpected error in phase %s', phase)
            self.report.add_error(phase, e)
        finally:
            self.report.timings[phase] = time.perf_counter() - start

    def phase_conformance(self, rng):
        """Evolution family laws, growth certificate and generator"""
        fam = self.family
        semigroup = check_semigroup(
            fam, CONFORMANCE_GRID_POINTS, self.tols['semigroup'])
        for name, value in semigroup.residuals().items():
            self._check('conformance', name, value, 'semigroup')
        commutation = check_commutation(
            fam, CONFORMANCE_GRID_POINTS, self.tols['commutation'])
        self._check('conformance', 'generator_commutation',
                    commutation.max_commutation_residual, 'commutation')
        pairs = rng.uniform(-self.horizon, self.horizon, (GROWTH_SAMPLES, 2))
        worst = max(operator_norm(fam.evaluate(t, s)) for t, s in pairs)
        self._check('conformance', 'growth_bound',
                    max(0.0, worst / fam.growth_bound - 1.0), 'semigroup')
        # midpoints of the conformance grid stay clear of a switch at 0
        grid = uniform_grid(self.horizon, CONFORMANCE_GRID_POINTS)
        midpoints = 0.5 * (grid[1:] + grid[:-1])
        h = PREGENERATOR_STEP * self.horizon
        pre = max(operator_norm(pregenerator_fd(fam, t, h) -
                                fam.generator_at(t)) for t in midpoints)
        self._check('conformance', 'pregenerator', pre, 'derivative')
        step = default_step(fam)
        deriv = max(
            operator_norm(generator_from_derivative(fam, t, s, step) -
                          fam.generator_at(t))
            for t, s in zip(midpoints, midpoints[::-1]))
        self._check('conformance', 'generator_from_derivative', deriv,
                    'derivative')

    def phase_contour(self, rng):
        """Logarithm against the oracle and the Cauchy integral identities"""
        fam, shift = self.family, self.shift
        eye = identity(fam.dim)
        pairs = rng.uniform(-self.horizon, self.horizon, (SAMPLE_COUNT, 2))
        agreement, projector, nodes = 0.0, 0.0, 0
        for t, s in pairs:
            rep = log_representation(fam, shift, t, s, self.tols['quadrature'])
            shifted = fam.evaluate(t, s) + shift.kappa * eye
            oracle = matrix_log_oracle(
                shifted, self.tols['branch_cut'], self.tols['eigvec_cond'])
            agreement = max(agreement, operator_norm(rep.a - oracle))
            nodes = max(nodes, rep.node_count_used)
            one = dunford_apply('constant-one', shifted, rep.contour,
                                self.tols['quadrature'])
            projector = max(projector, operator_norm(one.value - eye))
        self.report.provenance['log_nodes_max'] = nodes
        self._check('contour', 'log_agreement', agreement, 'log_agreement')
        self.report.add_check('contour', 'log_nodes', nodes, LOG_NODES_BUDGET)
        self._check('contour', 'constant_one', projector, 'cauchy_identity')
        contour = build_contour(shift.kappa, shift.growth_bound)
        winding = scalar_contour_integral(
            'reciprocal', contour, config.NODES_MAX)
        self._check('contour', 'origin_excluded', abs(winding), 'winding')

    def _sweep_point(self, item):
        shift, t, s = item
        fam = self.family
        rep = log_representation_with_derivative(
            fam, shift, t, s, tol=self.tols['quadrature'])
        rebuilt = generator_from_dt_log(fam, shift, t, s, rep.da_dt)
        closed = dt_log_closed_form(fam, shift, t, s)
        series = exp_series(rep.a, self.tols['series'])
        target = fam.evaluate(t, s) + shift.kappa * identity(fam.dim)
        return OrderedDict([
            ('t', float(t)),
            ('s', float(s)),
            ('kappa', shift.kappa.real),
            ('reconstruction', operator_norm(rebuilt - fam.generator_at(t))),
            ('roundtrip', operator_norm(series.value - target)),
            ('nodes_used', rep.node_count_used),
            ('dt_log_norm', operator_norm(rep.da_dt)),
            ('dt_log_closed_form', operator_norm(rep.da_dt - closed)),
            ('series_order', series.order),
            ('generator', rebuilt),
        ])

    def phase_logrep(self, rng):
        """Reconstruction of ``A(t)`` over a grid and a sweep of margins"""
        fam = self.family
        if not fam.spec.commuting:
            raise CommutationViolated(
                'Reconstruction needs a commuting generator, got kind '
                '{!r}'.format(fam.spec.kind))
        horizon = self.horizon
        t_grid = np.linspace(-horizon, horizon, SWEEP_GRID_POINTS + 2)[1:-1]
        s_grid = np.linspace(-horizon, horizon, SWEEP_GRID_POINTS)
        shifts = [select_kappa(fam.growth_m, fam.growth_beta, horizon, m)
                  for m in config.SWEEP_MARGINS]
        items = [(shift, t, s) for shift in shifts
                 for t in t_grid for s in s_grid]
        rows = self._map(self._sweep_point, items)
        self.logrep_rows = [
            [repr(r['t']), repr(r['s']), repr(r['kappa']),
             repr(r['reconstruction']), repr(r['roundtrip']),
             str(r['nodes_used']), repr(r['dt_log_norm'])]
            for r in rows]
        self._check('logrep', 'reconstruction',
                    max(r['reconstruction'] for r in rows), 'reconstruction')
        self._check('logrep', 'dt_log_closed_form',
                    max(r['dt_log_closed_form'] for r in rows), 'derivative')
        self._check('logrep', 'roundtrip',
                    max(r['roundtrip'] for r in rows), 'roundtrip')
        self.report.add_check(
            'logrep', 'series_order', max(r['series_order'] for r in rows),
            SERIES_ORDER_BUDGET)
        # same (t, s) under each margin, grouped by position in the grid
        per_margin = len(t_grid) * len(s_grid)
        invariance = 0.0
        for i in range(per_margin):
            base = rows[i]['generator']
            for j in range(i + per_margin, len(rows), per_margin):
                invariance = max(
                    invariance, operator_norm(rows[j]['generator'] - base))
        self._check('logrep', 'kappa_invariance', invariance,
                    'kappa_invariance')
        self._logrep_identities(rng)

    def _logrep_identities(self, rng):
        """Equivalent forms of ``d/dt a`` on random pairs"""
        fam, shift = self.family, self.shift
        margin = 3 * default_step(fam)
        ts = rng.uniform(-self.horizon + margin, self.horizon - margin,
                         SAMPLE_COUNT)
        ss = rng.uniform(-self.horizon, self.horizon, SAMPLE_COUNT)
        u_s = self.scenario.u0
        resolvent, similarity, transport, defect = 0.0, 0.0, 0.0, 0.0
        for t, s in zip(ts, ss):
            rep = log_representation_with_derivative(
                fam, shift, t, s, tol=self.tols['quadrature'])
            resolvent = max(resolvent, operator_norm(
                resolvent_approximation(fam, shift, t, s) - rep.da_dt))
            similarity = max(similarity, similarity_residual(
                fam, shift, t, s, tol=self.tols['quadrature']))
            transport = max(transport, transport_residual(
                fam, shift, t, s, u_s, tol=self.tols['quadrature']))
            defect = max(defect, semigroup_defect(
                fam, shift, t, 0.5 * (t + s), s, self.tols['quadrature']))
        self._check('logrep', 'resolvent_approximation', resolvent,
                    'derivative')
        self._check('logrep', 'similarity', similarity, 'derivative')
        self._check('logrep', 'transport', transport, 'derivative')
        self.report.observe('semigroup_defect_max', defect)

    def _add_trajectory(self, trajectory):
        self.trajectories[trajectory.method] = trajectory
        return trajectory

    def phase_solve(self, rng):
        """Series solutions against the oracle and against each other"""
        scenario, fam, shift = self.scenario, self.family, self.shift
        problem = scenario.problem(family=fam)
        times = scenario.output_times
        tol = self.tols['solve']
        if problem.forcing is not None:
            problem.forcing.validate(-self.horizon, self.horizon)
        oracle = self._add_trajectory(oracle_solve(
            problem, min(self.tols['oracle'], tol / 100), times))
        if problem.forcing is None:
            series = solve_autonomous(
                problem, shift, tol, times, mapper=self._map)
        else:
            series = solve_nonautonomous(
                problem, shift, tol, times, mapper=self._map)
        self._add_trajectory(series)
        self._check('solve', 'series_vs_oracle',
                    series.max_deviation(oracle), 'solve')
        if problem.forcing is None:
            self._solve_invariance(problem, series)
        else:
            self._solve_forced(problem, series)
        self._solve_residual(problem, series, oracle)

    def _solve_invariance(self, problem, series):
        fam, tol = self.family, self.tols['solve']
        times = self.scenario.output_times
        resolvent_form = self._add_trajectory(solve_autonomous(
            problem, self.shift, tol, times, form='resolvent',
            mapper=self._map))
        self._check('solve', 'resolvent_form',
                    resolvent_form.max_deviation(series),
                    'solution_invariance')
        worst = 0.0
        for margin in config.SWEEP_MARGINS:
            shift = select_kappa(
                fam.growth_m, fam.growth_beta, self.horizon, margin)
            other = solve_autonomous(
                problem, shift, tol, times, mapper=self._map)
            worst = max(worst, other.max_deviation(series))
        self._check('solve', 'kappa_invariance', worst, 'solution_invariance')

    def _solve_forced(self, problem, series):
        scenario, fam, shift = self.scenario, self.family, self.shift
        tol = self.tols['solve']
        times = scenario.output_times
        zero = Forcing([Constant([0.0])] * problem.dim, 0.0, 1.0)
        unforced = CauchyProblem(
            scenario.generator, scenario.u0, scenario.s, self.horizon,
            family=fam)
        zero_forced = CauchyProblem(
            scenario.generator, scenario.u0, scenario.s, self.horizon,
            zero, family=fam)
        deviation = solve_nonautonomous(
            zero_forced, shift, tol, times, mapper=self._map).max_deviation(
                solve_autonomous(unforced, shift, tol, times,
                                 mapper=self._map))
        self._check('solve', 'zero_forcing', deviation, 'duhamel')
        forcing = problem.forcing
        lo, hi = ((scenario.s, self.horizon) if scenario.s < self.horizon
                  else (-self.horizon, scenario.s))
        c_est, gamma_est = holder_estimate(
            forcing.values, np.linspace(lo, hi, config.GROWTH_GRID_POINTS))
        self.report.observe('holder_c_estimate', c_est)
        self.report.observe('holder_gamma_estimate', gamma_est)
        self.report.add_check(
            'solve', 'holder_exponent',
            abs(forcing.holder_gamma - gamma_est), HOLDER_SLACK)
        ends = [t for t in times if t != scenario.s]
        if scenario.generator.kind == KIND_CONSTANT and ends:
            self._check('solve', 'duhamel_generator',
                        duhamel_generator_residual(
                            problem, shift, ends[-1],
                            self.tols['duhamel'] / 10),
                        'duhamel')

    def _solve_residual(self, problem, series, oracle):
        forcing = problem.forcing
        if forcing is not None and forcing.holder_gamma < 1.0:
            self.report.observe(
                'residual_check', 'skipped: Hoelder exponent below 1')
            return
        try:
            oracle_residual = residual_check(oracle, problem)
            series_residual = residual_check(series, problem)
        except InvalidGrid as e:
            self.report.observe('residual_check', 'skipped: {}'.format(e))
            return
        step = float(np.diff(series.times).mean())
        self.report.observe('oracle_residual', oracle_residual)
        self.report.add_check(
            'solve', 'residual', series_residual,
            10.0 * (oracle_residual + 1.5 * self.tols['solve'] / step))

    def phase_holomorphy(self, rng):
        """Functional calculus and derivative growth of ``e^{a(t, s)}``"""
        fam, shift = self.family, self.shift
        t, s = 0.5 * self.horizon, 0.0
        a = log_representation(fam, shift, t, s, self.tols['quadrature']).a
        worst = max(
            operator_norm(
                dunford_poly_exp(a, n, self.tols['functional_calculus']) -
                poly_exp_direct(a, n, self.tols['series']))
            for n in POLY_EXP_POWERS)
        self._check('holomorphy', 'poly_exp', worst, 'functional_calculus')
        scan_times = [2.0 ** -k for k in SCAN_EXPONENTS
                      if 2.0 ** -k <= self.horizon]
        step = default_step(fam)
        for n in SCAN_ORDERS:
            scan = derivative_bound_scan(
                fam, shift, s, n, scan_times, self.tols['quadrature'])
            self.report.observe(
                'derivative_scan_n{}'.format(n), [v for _, v in scan])
            self.report.add_check(
                'holomorphy', 'derivative_scan_n{}'.format(n),
                scan_ratio(scan), SCAN_RATIO_MAX)
            deriv = exp_a_derivative(
                fam, shift, t, s, n, step, self.tols['quadrature'])
            self.report.observe(
                'derivative_vs_poly_exp_n{}'.format(n),
                operator_norm(deriv - dunford_poly_exp(
                    a, n, self.tols['functional_calculus'])))

    def write(self, command):
        """Write the artifacts of ``command`` into ``out_dir``"""
        os.makedirs(self.out_dir, exist_ok=True)
        _write_csv(os.path.join(self.out_dir, 'residuals.csv'),
                   RESIDUALS_HEADER,
                   [c.csv_row() for c in self.report.checks])
        if command in ('logrep', 'report') and self.logrep_rows:
            _write_csv(os.path.join(self.out_dir, 'logrep.csv'),
                       LOGREP_HEADER, self.logrep_rows)
        if command in ('solve', 'report') and self.trajectories:
            traj_dir = os.path.join(self.out_dir, 'trajectories')
            os.makedirs(traj_dir, exist_ok=True)
            for method, trajectory in self.trajectories.items():
                path = os.path.join(traj_dir, '{}-{}.csv'.format(
                    self.scenario.name, method))
                _write_csv(path, trajectory.csv_header(),
                           trajectory.csv_rows())
        if command == 'report':
            with open(os.path.join(self.out_dir, 'scenario.json'),
                      'wt') as outputf:
                write_scenario(self.scenario, outputf)
        write_report(self.report, self.out_dir)


def run(command, scenario, out_dir=None, threads=None):
    """Run ``command`` on ``scenario`` and return :py:class:`RunReport`"""
    return Harness(scenario, out_dir, threads).run(command)
