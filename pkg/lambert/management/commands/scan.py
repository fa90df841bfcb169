'''
Classify the convergence of a series over a geometric grid of x values.

Usage:
    python manage.py scan --series 3a --x-min 2 --x-max e --points 20
    python manage.py scan --series 2a --alpha 2 --x-min '1.1*(2*e)^2' --x-max 1e6
    python manage.py scan --series 4c --conjecture --x-min 1 --x-max e

Writes one CSV row per grid point and a verdict count on stderr. With
--conjecture the endpoints are excluded and the grid must lie inside (1, e).
'''

from collections import Counter

from django.conf import settings
from django.core.management.base import CommandError

from lambert.cli import USAGE_ERROR, LambertCommand, render
from lambert.experiments import (
    CONJECTURED,
    SCANNED,
    conjecture_scan,
    convergence_scan,
    geometric_grid,
)


class Command(LambertCommand):
    help = 'Classify series convergence as converged, stagnant or diverging'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--series',
            required=True,
            choices=[series.value for series in SCANNED],
        )
        parser.add_argument('--alpha', default='1')
        parser.add_argument('--x-min', required=True)
        parser.add_argument('--x-max', required=True)
        parser.add_argument(
            '--points',
            type=int,
            default=settings.SCAN_POINTS,
            help='Number of grid points',
        )
        parser.add_argument(
            '--conjecture',
            action='store_true',
            help=f'Scan {" and ".join(s.value for s in CONJECTURED)} on the open '
                 f'interval between x-min and x-max inside (1, e)',
        )
        parser.add_argument(
            '--workers',
            type=int,
            help='Worker processes, defaults to settings.SCAN_WORKERS',
        )

    def run(self, config, **options):
        precision = config.precision_bits
        low = self.real(options['x_min'], config, 'x-min')
        high = self.real(options['x_max'], config, 'x-max')
        alpha = self.real(options['alpha'], config, 'alpha')
        # the conjecture grid is open, so x-min = 1 is allowed there
        too_low = low < 1 if options['conjecture'] else low <= 1
        if too_low or low >= high or options['points'] < 1:
            raise CommandError(
                'need 1 < x-min < x-max and at least one point',
                returncode=USAGE_ERROR,
            )
        if options['conjecture']:
            grid = geometric_grid(
                low, high, options['points'], open_low=True, open_high=True,
                precision=precision,
            )
            verdicts = conjecture_scan(
                options['series'], grid, config.max_terms, config.tolerance,
                precision, options['workers'],
            )
        else:
            grid = geometric_grid(low, high, options['points'], precision=precision)
            verdicts = convergence_scan(
                options['series'], alpha, grid, config.max_terms,
                config.tolerance, precision, options['workers'],
            )

        digits = config.digits
        self.write_csv(config, (
            (
                render(verdict.x, digits),
                render(verdict.alpha, digits),
                verdict.series.value,
                verdict.terms,
                render(verdict.value, digits),
                render(verdict.reference, digits),
                render(verdict.abs_err, 5),
                render(verdict.rel_err, 5),
                verdict.verdict.value,
            )
            for verdict in verdicts
        ))
        counts = Counter(verdict.verdict.value for verdict in verdicts)
        self.stderr.write(self.style.SUCCESS(
            ', '.join(f'{name}={count}' for name, count in sorted(counts.items()))
        ))
