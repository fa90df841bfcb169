'''
Look up exact Stirling numbers.

Usage:
    python manage.py stirling --kind cycle --n 5 --m 2
    python manage.py stirling --kind assoc2 --n 6 --m 3 --max-n 128
    python manage.py stirling --kind subset --m 3 --egf 20
'''

from django.core.management.base import CommandError

from lambert import stirling
from lambert.cli import CHECK_FAILED, USAGE_ERROR, LambertCommand
from lambert.stirling import StirlingKind


class Command(LambertCommand):
    help = 'Print a Stirling number, or check a column against its generating function'

    def add_arguments(self, parser):
        parser.add_argument(
            '--kind',
            required=True,
            choices=[kind.value for kind in StirlingKind],
        )
        parser.add_argument('--n', type=int)
        parser.add_argument('--m', type=int, required=True)
        parser.add_argument(
            '--max-n',
            type=int,
            help='Table size, defaults to settings.STIRLING_MAX_N',
        )
        parser.add_argument(
            '--egf',
            type=int,
            metavar='N_MAX',
            help='Compare column m with its exponential generating function up to N_MAX',
        )

    def run(self, config, **options):
        kind = StirlingKind(options['kind'])
        if options['egf'] is not None:
            try:
                holds = stirling.egf_check(kind, options['m'], options['egf'])
            except ValueError as error:
                raise CommandError(str(error), returncode=USAGE_ERROR)
            self.stdout.write(self.flag(holds))
            if not holds:
                raise CommandError('column disagrees with its generating function',
                                   returncode=CHECK_FAILED)
            return
        if options['n'] is None:
            raise CommandError('--n is required without --egf', returncode=USAGE_ERROR)
        try:
            value = stirling.table(kind, options['max_n'])[options['n'], options['m']]
        except ValueError as error:
            raise CommandError(str(error), returncode=USAGE_ERROR)
        self.stdout.write(str(value))
