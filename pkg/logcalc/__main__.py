# -*- coding: utf-8 -*-
"""Entrypoint for logcalc

The logcalc package provides Python library modules as well as an
executable running the verification commands on scenario files, e.g.

.. code-block:: shell

    $ logcalc check --scenario scalar.json --out out/scalar
"""

import argparse
import logging
import os
import sys

from . import __version__
from .config import parse_tolerance_override
from .exceptions import LogCalcException
from .harness import COMMANDS, Harness, RunReport, write_report
from .io import parse_scenario

#: Help texts of the sub commands
COMMAND_HELP = {
    'validate': 'Check the laws of the evolution family',
    'logrep': 'Sweep the logarithm representation over a grid and margins',
    'solve': 'Solve the Cauchy problem and compare with the oracle',
    'check': 'Run the full invariant suite',
    'report': 'Run the full invariant suite and write all artifacts',
}


def tolerance_arg(text):
    """``argparse`` type for ``--tol name=value``"""
    try:
        return parse_tolerance_override(text)
    except (LogCalcException, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


class AppBase:
    """Base class for application, sub classed for each command"""

    #: Name of the harness command
    command = None

    def __init__(self, args):
        #: Parsed command line arguments
        self.args = args

    def load_scenario(self):
        """Parse the scenario and apply command line overrides"""
        print('Loading scenario from "{}"'.format(self.args.scenario),
              file=sys.stderr)
        scenario = parse_scenario(self.args.scenario, self.args.lib_dir)
        if self.args.tol:
            scenario = scenario.with_tolerances(dict(self.args.tol))
        if self.args.margin is not None:
            scenario = scenario.with_margin(self.args.margin)
        if self.args.seed is not None:
            scenario = scenario.with_seed(self.args.seed)
        return scenario

    def run(self):
        """Execute the command, return exit status"""
        try:
            scenario = self.load_scenario()
        except LogCalcException as e:
            print('Could not load scenario: {}'.format(e), file=sys.stderr)
            if self.args.out:
                report = RunReport(
                    os.path.basename(self.args.scenario), self.command)
                report.add_error('parse', e)
                write_report(report, self.args.out)
            return 1
        report = Harness(scenario, self.args.out, self.args.threads).run(
            self.command)
        return self.summarize(report)

    def summarize(self, report):
        for check in report.failed_checks:
            print(' - failed {}/{}: {!r} > {!r}'.format(
                check.phase, check.name, check.residual, check.tol),
                file=sys.stderr)
        for error in report.errors:
            print(' - error in {phase}: {type}: {message}'.format(**error),
                  file=sys.stderr)
        if report.passed:
            print('Scenario {} passed {} checks'.format(
                report.scenario_name, len(report.checks)), file=sys.stderr)
            return 0
        return 1


class ValidateApp(AppBase):
    """App sub class for the evolution family conformance"""

    command = 'validate'


class LogRepApp(AppBase):
    """App sub class for the reconstruction sweep"""

    command = 'logrep'


class SolveApp(AppBase):
    """App sub class for solving the Cauchy problem"""

    command = 'solve'


class CheckApp(AppBase):
    """App sub class for the full suite"""

    command = 'check'


class ReportApp(AppBase):
    """App sub class for the full suite with all artifacts"""

    command = 'report'

    def run(self):
        if not self.args.out:
            print('The report command needs --out', file=sys.stderr)
            return 1
        return super().run()


def run(args):
    """Program entry point after parsing command line arguments"""
    apps = {
        'validate': ValidateApp,
        'logrep': LogRepApp,
        'solve': SolveApp,
        'check': CheckApp,
        'report': ReportApp,
    }
    return apps[args.subparser](args).run()


def setup_logging(verbose):
    """Install console handler on the root logger"""
    root = logging.getLogger('')
    console = logging.StreamHandler()
    console.setLevel(logging.DEBUG if verbose else logging.INFO)
    formatter = logging.Formatter('%(name)-12s: %(levelname)-8s %(message)s')
    console.setFormatter(formatter)
    root.addHandler(console)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    return console


def main(argv=None):
    """Main program entry point, starts parsing command line arguments"""
    parser = argparse.ArgumentParser(prog='logcalc')
    parser.add_argument(
        '--version', action='version', version='%(prog)s ' + __version__)

    subparsers = parser.add_subparsers(dest='subparser')
    for command in COMMANDS:
        sub = subparsers.add_parser(command, help=COMMAND_HELP[command])
        sub.add_argument(
            '-s', '--scenario', type=str, required=True,
            help='Path to scenario (JSON or YAML) file')
        sub.add_argument(
            '-o', '--out', type=str, default=None,
            help='Output directory, nothing is written if not given')
        sub.add_argument(
            '--tol', type=tolerance_arg, default=[],
            action='append', metavar='NAME=VALUE',
            help='Override a named tolerance, can be given multiple times')
        sub.add_argument(
            '--margin', type=float, default=None,
            help='Use the margin policy with this margin')
        sub.add_argument(
            '--seed', type=int, default=None,
            help='Seed for the random sample points')
        sub.add_argument(
            '--threads', type=int, default=None,
            help=('Worker count, $LOGCALC_THREADS is both default and '
                  'cap'))
        sub.add_argument(
            '--lib-dir', type=str, default=[], action='append',
            help=('Base directories for "$ref" file pointers, can be given '
                  'multiple times'))
        sub.add_argument(
            '-v', '--verbose', action='store_true', default=False,
            help='Enable debug output')

    args = parser.parse_args(argv)
    if not args.subparser:
        parser.print_usage()
        return 1
    console = setup_logging(args.verbose)
    try:
        return run(args)
    finally:
        logging.getLogger('').removeHandler(console)


if __name__ == '__main__':
    sys.exit(main())
