'''
Compare truncations with the oracle.

Usage:
    python manage.py error_curve --series 3a --terms 10 --x-min e --x-max 1e6 --open-low
    python manage.py error_curve --series 4c --mode order --x-big 1e40 --n-min 2 --n-max 10
    python manage.py error_curve --series 2a --mode taylor --terms 6

Modes:
    curve: the N-term error at every point of a geometric grid.
    order: errors for N in [n-min, n-max] at one large x and the fitted rate
        against (l2 / l1)^N and (l2 / l1^2)^N, reported on stderr.
    taylor: Taylor coefficients of the N-term truncation about e against the
        exact ones; the verdict column names the coefficient.
'''

from django.conf import settings
from django.core.management.base import CommandError
import mpmath

from lambert.cli import USAGE_ERROR, LambertCommand, render
from lambert.experiments import (
    SCANNED,
    FitStatus,
    error_curve,
    geometric_grid,
    order_fit,
    taylor_match_check,
)
from lambert.reals import guarded


CURVE = 'curve'
ORDER = 'order'
TAYLOR = 'taylor'
UNDEFINED = 'undefined'


class Command(LambertCommand):
    help = 'Error of truncated series against the oracle'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            '--series',
            required=True,
            choices=[series.value for series in SCANNED],
        )
        parser.add_argument('--mode', choices=[CURVE, ORDER, TAYLOR], default=CURVE)
        parser.add_argument('--terms', type=int, default=10, help='Truncation order N')
        parser.add_argument('--alpha', default='1')
        parser.add_argument('--x-min')
        parser.add_argument('--x-max')
        parser.add_argument('--points', type=int, default=settings.SCAN_POINTS)
        parser.add_argument(
            '--open-low',
            action='store_true',
            help='Leave x-min itself out of the grid',
        )
        parser.add_argument('--x-big', default=settings.ORDER_FIT_X)
        parser.add_argument('--n-min', type=int, default=2)
        parser.add_argument('--n-max', type=int, default=10)
        parser.add_argument('--workers', type=int)

    def run(self, config, **options):
        mode = options['mode']
        if mode == CURVE:
            rows = self.curve(config, **options)
        elif mode == ORDER:
            rows = self.order(config, **options)
        else:
            rows = self.taylor(config, **options)
        self.write_csv(config, rows)

    def curve(self, config, **options):
        if options['x_min'] is None or options['x_max'] is None:
            raise CommandError('curve mode needs --x-min and --x-max', returncode=USAGE_ERROR)
        low = self.real(options['x_min'], config, 'x-min')
        high = self.real(options['x_max'], config, 'x-max')
        if low <= 1 or low >= high:
            raise CommandError('need 1 < x-min < x-max', returncode=USAGE_ERROR)
        alpha = self.real(options['alpha'], config, 'alpha')
        grid = geometric_grid(
            low, high, options['points'], open_low=options['open_low'],
            precision=config.precision_bits,
        )
        rows = error_curve(
            options['series'], options['terms'], grid, config.precision_bits,
            alpha, options['workers'],
        )
        return [self.row(config, row) for row in rows]

    def order(self, config, **options):
        if not 0 <= options['n_min'] < options['n_max']:
            raise CommandError('need 0 <= n-min < n-max', returncode=USAGE_ERROR)
        alpha = self.real(options['alpha'], config, 'alpha')
        fit = order_fit(
            options['series'],
            range(options['n_min'], options['n_max'] + 1),
            self.real(options['x_big'], config, 'x-big'),
            config.precision_bits,
            alpha,
        )
        if fit.status is FitStatus.OK:
            self.stderr.write(self.style.SUCCESS(
                f'slope vs l2/l1 = {fit.first:.4f}, '
                f'slope vs l2/l1^2 = {fit.second:.4f} '
                f'over N in {", ".join(map(str, fit.used))}'
            ))
        else:
            self.stderr.write(self.style.WARNING(
                'errors sit on the precision floor; raise --precision'
            ))
        return [self.row(config, row, fit.status.value) for row in fit.rows]

    def taylor(self, config, **options):
        digits = config.digits
        with guarded(config.precision_bits):
            e = +mpmath.e
        rows = []
        for deviation in taylor_match_check(
            options['series'], options['terms'], config.precision_bits,
        ):
            with guarded(config.precision_bits):
                relative = deviation.deviation / abs(deviation.reference)
            rows.append((
                render(e, digits),
                '1',
                options['series'],
                options['terms'],
                render(deviation.numeric, digits),
                render(deviation.reference, digits),
                render(deviation.deviation, 5),
                render(relative, 5),
                f'coefficient-{deviation.order}',
            ))
        return rows

    def row(self, config, row, verdict=''):
        digits = config.digits
        return (
            render(row.x, digits),
            render(row.alpha, digits),
            row.series.value,
            row.terms,
            render(row.approx, digits),
            render(row.reference, digits),
            render(row.abs_err, 5),
            render(row.rel_err, 5),
            verdict if row.approx is not None else UNDEFINED,
        )
