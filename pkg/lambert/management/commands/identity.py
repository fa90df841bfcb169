'''
Check the exact identities the series rest on.

Usage:
    python manage.py identity --which 3c --l-max 25
    python manage.py identity --which 4d
    python manage.py identity --which 4d --sigma 0.3 --tau 0.5 --repeats 3
    python manage.py identity --which reduction --x 1e20 --alpha 2 --series 4c

Checks:
    3c: every cycle number [l, m] with 1 <= m <= l <= l-max equals the
        alternating binomial sum of 2-associated numbers.
    4d: the shifted solution w(sigma, tau) is unchanged by the transform that
        moves it to sigma / (1 - tau), sigma ln(1 - tau) / (1 - tau).
    reduction: Phi_alpha(x) by the W series matches the oracle.

Exits with status 1 when any check fails.
'''

from django.conf import settings
from django.core.management.base import CommandError
import mpmath

from lambert import stirling
from lambert.cli import (
    CHECK_FAILED,
    CSV_HEADER,
    USAGE_ERROR,
    LambertCommand,
    render,
)
from lambert.experiments import reference_value
from lambert.reals import guarded, power_of_two
from lambert.series import Series, identity_4d_check, phi_via_w


CYCLE_SUM = '3c'
SHIFT_TRANSFORM = '4d'
REDUCTION = 'reduction'

SIGMA_MAX = '0.5'
TAU_MAX = '0.9'


class Command(LambertCommand):
    help = 'Verify the Stirling sum identity, the shift transform or the Phi reduction'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--which',
            required=True,
            choices=[CYCLE_SUM, SHIFT_TRANSFORM, REDUCTION],
        )
        parser.add_argument('--l-max', type=int, default=settings.IDENTITY_L_MAX)
        parser.add_argument('--sigma')
        parser.add_argument('--tau')
        parser.add_argument(
            '--points',
            type=int,
            default=settings.IDENTITY_GRID_POINTS,
            help='Grid size per axis when --sigma and --tau are not given',
        )
        parser.add_argument('--repeats', type=int, default=1)
        parser.add_argument('--x')
        parser.add_argument('--alpha', default='1')
        parser.add_argument(
            '--series',
            choices=[Series.ASSOCIATED.value, Series.ASSOCIATED_LOG.value],
            default=Series.ASSOCIATED_LOG.value,
        )
        parser.add_argument('--terms', type=int)

    def run(self, config, **options):
        which = options['which']
        if which == CYCLE_SUM:
            header, rows = self.cycle_sum(options['l_max'])
        elif which == SHIFT_TRANSFORM:
            header, rows = self.shift_transform(config, **options)
        else:
            header, rows = self.reduction(config, **options)
        self.write_csv(config, rows, header)
        failed = sum(1 for row in rows if row[-1] == 'false' or row[-1] == 'fails')
        if failed:
            raise CommandError(f'{failed} of {len(rows)} checks failed',
                               returncode=CHECK_FAILED)
        self.stderr.write(self.style.SUCCESS(f'All {len(rows)} checks hold'))

    def cycle_sum(self, l_max):
        if l_max < 1:
            raise CommandError('l-max must be at least 1', returncode=USAGE_ERROR)
        cycles = stirling.covering(stirling.StirlingKind.CYCLE, l_max)
        rows = []
        for l in range(1, l_max + 1):
            for m in range(1, l + 1):
                alternating = stirling.identity_3c_sum(l, m)
                rows.append((
                    l, m, cycles[l, m], alternating,
                    self.flag(alternating == cycles[l, m]),
                ))
        return ('l', 'm', 'cycle', 'alternating_sum', 'holds'), rows

    def shift_transform(self, config, **options):
        precision = config.precision_bits
        if (options['sigma'] is None) != (options['tau'] is None):
            raise CommandError('give both --sigma and --tau, or neither',
                               returncode=USAGE_ERROR)
        if options['sigma'] is not None:
            pairs = [(
                self.real(options['sigma'], config, 'sigma'),
                self.real(options['tau'], config, 'tau'),
            )]
        else:
            pairs = self.shift_grid(options['points'], precision)
        bound = power_of_two(settings.IDENTITY_MARGIN_BITS - precision)
        rows = []
        for sigma, tau in pairs:
            residual = identity_4d_check(sigma, tau, precision, options['repeats'])
            rows.append((
                render(sigma, config.digits),
                render(tau, config.digits),
                render(residual, 5),
                self.flag(residual < bound),
            ))
        return ('sigma', 'tau', 'residual', 'holds'), rows

    def shift_grid(self, points, precision):
        '''sigma over (0, 0.5] and tau over [0, 0.9], points values each.'''
        if points < 2:
            raise CommandError('the grid needs at least 2 points per axis',
                               returncode=USAGE_ERROR)
        with guarded(precision):
            sigmas = [mpmath.mpf(SIGMA_MAX) * i / points for i in range(1, points + 1)]
            taus = [mpmath.mpf(TAU_MAX) * j / (points - 1) for j in range(points)]
        return [(sigma, tau) for sigma in sigmas for tau in taus]

    def reduction(self, config, **options):
        if options['x'] is None:
            raise CommandError('reduction needs --x', returncode=USAGE_ERROR)
        precision = config.precision_bits
        x = self.real(options['x'], config)
        alpha = self.real(options['alpha'], config, 'alpha')
        terms = config.max_terms if options['terms'] is None else options['terms']
        evaluation = phi_via_w(
            x, alpha, terms, options['series'], config.tolerance, precision,
        )
        reference = reference_value(x, alpha, precision)
        with guarded(precision):
            abs_err = abs(evaluation.value - reference)
            rel_err = abs_err / abs(reference)
            holds = evaluation.converged and abs_err <= (
                settings.CHECK_TOLERANCE_FACTOR * config.tolerance * abs(reference)
            )
        digits = config.digits
        return CSV_HEADER, [(
            render(x, digits),
            render(alpha, digits),
            options['series'],
            evaluation.terms_used,
            render(evaluation.value, digits),
            render(reference, digits),
            render(abs_err, 5),
            render(rel_err, 5),
            'holds' if holds else 'fails',
        )]
