'''
Evaluate one series, or the reference solver, at a single point.

Usage:
    python manage.py eval --series 3a --x 2 --terms 30
    python manage.py eval --series 2a --x '1.1*(2*e)^2' --alpha 2 --check
    python manage.py eval --series oracle --x e
    python manage.py eval --series 4c --via-w --x 1e20 --alpha 2 --terms 10

The value comes first on its own line, then key=value diagnostics.
'''

from django.conf import settings

from lambert import oracle
from lambert.cli import LambertCommand, render
from lambert.experiments import reference_value
from lambert.reals import guarded
from lambert.series import Series, evaluate, phi_via_w, variables_from


ORACLE = 'oracle'


class Command(LambertCommand):
    help = 'Evaluate a truncated series or the oracle at one point'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--series',
            required=True,
            choices=[series.value for series in Series] + [ORACLE],
            help='Series label, or oracle for the root finder',
        )
        parser.add_argument(
            '--x',
            required=True,
            help='Argument; decimal literals, e, + - * / ^ and parentheses',
        )
        parser.add_argument(
            '--alpha',
            default='1',
            help='Exponent of y^alpha e^y = x',
        )
        parser.add_argument(
            '--terms',
            type=int,
            help='Number of correction terms, defaults to --max-terms',
        )
        parser.add_argument(
            '--check',
            action='store_true',
            help='Also print the oracle value and the absolute error',
        )
        parser.add_argument(
            '--via-w',
            action='store_true',
            help='Evaluate Phi_alpha as alpha W(x^(1/alpha) / alpha); series 3a or 4c',
        )

    def run(self, config, **options):
        precision = config.precision_bits
        x = self.real(options['x'], config)
        alpha = self.real(options['alpha'], config, 'alpha')
        if options['series'] == ORACLE:
            if alpha == 1:
                report = oracle.solve_w(x, precision)
            else:
                report = oracle.solve_phi(x, alpha, precision)
            self.stdout.write(render(report.root, config.digits))
            self.stdout.write(f'iterations={report.iterations}')
            self.stdout.write(f'residual={render(report.residual, 5)}')
            return

        series = Series(options['series'])
        terms = config.max_terms if options['terms'] is None else options['terms']
        if options['via_w']:
            evaluation = phi_via_w(x, alpha, terms, series, config.tolerance, precision)
        else:
            variables = variables_from(x, alpha, precision)
            evaluation = evaluate(series, variables, terms, config.tolerance)
        self.stdout.write(render(evaluation.value, config.digits))
        self.stdout.write(f'terms_used={evaluation.terms_used}')
        self.stdout.write(f'converged={self.flag(evaluation.converged)}')
        self.stdout.write(f'tail_estimate={render(evaluation.tail_estimate, 5)}')
        if not options['check']:
            return

        reference = reference_value(x, alpha, precision)
        with guarded(precision):
            if series is Series.SHIFT and not options['via_w']:
                # 2d sums w in Phi = l1 - alpha l2 + alpha w
                reference = (reference - variables.l1 + alpha * variables.l2) / alpha
            error = abs(evaluation.value - reference)
        self.stdout.write(f'reference={render(reference, config.digits)}')
        self.stdout.write(f'abs_err={render(error, 5)}')
        if error > settings.CHECK_TOLERANCE_FACTOR * config.tolerance * max(1, abs(reference)):
            self.stderr.write(self.style.WARNING(
                f'abs_err exceeds the tolerance at {evaluation.terms_used} terms'
            ))
        elif evaluation.converged:
            self.stderr.write(self.style.SUCCESS('Matches the oracle'))
