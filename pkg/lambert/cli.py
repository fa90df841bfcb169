'''
Shared plumbing of the lambert management commands.

The commands (eval, scan, error_curve, stirling, identity) subclass
LambertCommand, which adds the numeric flags, parses real-valued arguments,
renders numbers and maps lambert errors onto exit codes:

    0  success
    1  an identity or generating-function check failed
    2  domain error (including unsupported alpha)
    3  the reference solver did not converge
    4  usage error: bad flags, bad ranges, table capacity, degenerate input

Real arguments are small expressions over decimal literals and the constant
e with + - * / ^ and parentheses, e.g. ``e``, ``(2*e)^2``, ``1.1*(3*e)^3``.
They are evaluated at working precision so domain boundaries are not blurred
by decimal rounding.
'''

import csv
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from functools import partial
from typing import Optional

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
import mpmath
from sympy import E, sympify
from sympy.core.sympify import SympifyError

from .exceptions import (
    CapacityError,
    DomainError,
    ExperimentError,
    SolverError,
)
from .reals import default_tolerance, guarded, rounded


CHECK_FAILED = 1
DOMAIN_ERROR = 2
NON_CONVERGENCE = 3
USAGE_ERROR = 4

MIN_PRECISION = 64
DIGITS_PER_BIT = 0.3

CSV_HEADER = (
    'x',
    'alpha',
    'series',
    'terms',
    'value',
    'reference',
    'abs_err',
    'rel_err',
    'verdict',
)

EXPRESSION = re.compile(r'[0-9eE.+\-*/^() ]+')
SYMBOLS = {'e': E}


def parse_real(text, precision):
    '''Evaluate a real expression and round it to precision bits.'''
    if not EXPRESSION.fullmatch(text.strip()):
        raise ValueError(f'unsupported characters in {text!r}')
    try:
        # rational=True reads decimal literals exactly
        expression = sympify(text.strip(), locals=SYMBOLS, rational=True)
    except (SympifyError, SyntaxError, TypeError) as error:
        raise ValueError(f'cannot parse {text!r}') from error
    if not expression.is_number or not expression.is_extended_real:
        raise ValueError(f'{text!r} is not a real number')
    with guarded(precision):
        value = mpmath.mpf(expression.evalf(mpmath.mp.dps + 5))
    return rounded(value, precision)


def render(value, digits):
    if value is None:
        return ''
    if isinstance(value, int):
        return str(value)
    return mpmath.nstr(value, digits)


def csv_writer(stream):
    return csv.writer(stream, lineterminator='\n')


@dataclass(frozen=True)
class CliConfig:
    '''
    Numeric options shared by every command.

    Attributes:
        precision_bits (int): Working precision, at least 64.
        max_terms (int): Truncation cap.
        tolerance (mpf): Absolute stopping tolerance.
        output (str): CSV destination, None for standard output.
        digits (int): Significant digits when rendering, at most
            0.3 * precision_bits.
    '''

    precision_bits: int
    max_terms: int
    tolerance: mpmath.mpf
    output: Optional[str]
    digits: int

    @classmethod
    def from_options(cls, options):
        precision = options.get('precision') or settings.PRECISION_BITS
        digits = options.get('digits') or settings.DIGITS
        max_terms = options.get('max_terms')
        if precision < MIN_PRECISION:
            raise CommandError(
                f'precision must be at least {MIN_PRECISION} bits',
                returncode=USAGE_ERROR,
            )
        if not 1 <= digits <= precision * DIGITS_PER_BIT:
            raise CommandError(
                f'digits must lie in [1, {int(precision * DIGITS_PER_BIT)}] '
                f'at {precision} bits',
                returncode=USAGE_ERROR,
            )
        if max_terms is not None and max_terms < 0:
            raise CommandError('max-terms must be nonnegative', returncode=USAGE_ERROR)
        tolerance = default_tolerance(precision)
        if options.get('tolerance'):
            tolerance = real_option(options['tolerance'], precision, 'tolerance')
        return cls(
            precision_bits=precision,
            max_terms=settings.MAX_TERMS if max_terms is None else max_terms,
            tolerance=tolerance,
            output=options.get('output'),
            digits=digits,
        )


def real_option(text, precision, name):
    try:
        return parse_real(text, precision)
    except (ValueError, ZeroDivisionError) as error:
        raise CommandError(f'--{name}: {error}', returncode=USAGE_ERROR)


def _usage_error(parser, message):
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(USAGE_ERROR, f'{parser.prog}: error: {message}\n')
    raise CommandError(f'Error: {message}', returncode=USAGE_ERROR)


class LambertCommand(BaseCommand):
    '''
    Base of the lambert commands. Subclasses implement run(config, **options)
    instead of handle.
    '''

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = partial(_usage_error, parser)
        return parser

    def add_arguments(self, parser):
        parser.add_argument(
            '--precision',
            type=int,
            default=settings.PRECISION_BITS,
            help='Working precision in bits',
        )
        parser.add_argument(
            '--max-terms',
            type=int,
            default=settings.MAX_TERMS,
            help='Largest number of series terms',
        )
        parser.add_argument(
            '--tolerance',
            help='Absolute stopping tolerance, default 2^-(precision-16)',
        )
        parser.add_argument(
            '--digits',
            type=int,
            default=settings.DIGITS,
            help='Significant digits of printed numbers',
        )
        parser.add_argument(
            '--output',
            help='Write CSV to this file instead of standard output',
        )

    def handle(self, *args, **options):
        config = CliConfig.from_options(options)
        try:
            self.run(config, **options)
        except SolverError as error:
            raise CommandError(str(error), returncode=NON_CONVERGENCE)
        except DomainError as error:
            raise CommandError(str(error), returncode=DOMAIN_ERROR)
        except (CapacityError, ExperimentError) as error:
            raise CommandError(str(error), returncode=USAGE_ERROR)

    def run(self, config, **options):
        raise NotImplementedError

    def real(self, text, config, name='x'):
        return real_option(text, config.precision_bits, name)

    @contextmanager
    def output(self, config):
        if config.output is None:
            yield self.stdout
            return
        with open(file=config.output, mode='w', newline='') as stream:
            yield stream
        self.stderr.write(self.style.SUCCESS(f'Wrote {config.output}'))

    def write_csv(self, config, rows, header=CSV_HEADER):
        with self.output(config) as stream:
            writer = csv_writer(stream)
            writer.writerow(header)
            writer.writerows(rows)

    def flag(self, value):
        return 'true' if value else 'false'
