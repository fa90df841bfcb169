'''
Exact Stirling numbers of three kinds.

Tables are triangular arrays of Python integers built once by recurrence and
cached; they never change after construction so any number of readers may
share them. Values are unsigned: the series evaluators apply the signs.

Kinds:
    CYCLE: Stirling cycle numbers, coefficients of ln^m(1 + z).
    SUBSET: Stirling subset numbers, coefficients of (e^z - 1)^m.
    ASSOC2: 2-associated subset numbers, coefficients of (e^z - 1 - z)^m,
    counting partitions into blocks of size at least two.
'''

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from logging import getLogger
from math import comb, factorial

from django.conf import settings
from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_exp, rs_log, rs_pow, rs_trunc
from sympy.polys.rings import ring

from .exceptions import CapacityError


logger = getLogger(__name__)


class StirlingKind(str, Enum):
    CYCLE = 'cycle'
    SUBSET = 'subset'
    ASSOC2 = 'assoc2'


@dataclass(frozen=True)
class StirlingTable:
    '''
    Memoized triangle of one Stirling kind.

    Attributes:
        kind (StirlingKind): Which numbers the table holds.
        max_n (int): Largest row index.
        entries (tuple): Row n is a tuple of n + 1 integers indexed by m.
    '''

    kind: StirlingKind
    max_n: int
    entries: tuple

    @classmethod
    def build(cls, kind, max_n):
        rows = [(1,)]
        for n in range(max_n):
            previous = rows[n]
            before = rows[n - 1] if n else ()
            rows.append(
                tuple(
                    _next_entry(kind, n, m, previous, before)
                    for m in range(n + 2)
                )
            )
        logger.debug('Built %s table up to n=%d', kind.value, max_n)
        return cls(kind=kind, max_n=max_n, entries=tuple(rows))

    def __getitem__(self, index):
        n, m = index
        if n < 0 or m < 0:
            raise ValueError(f'Stirling indices must be nonnegative: {index}')
        if n > self.max_n:
            raise CapacityError(self.kind.value, n, self.max_n)
        if m > n:
            return 0
        return self.entries[n][m]

    def row_sum(self, n):
        if n > self.max_n:
            raise CapacityError(self.kind.value, n, self.max_n)
        return sum(self.entries[n])


def _entry(row, m):
    return row[m] if 0 <= m < len(row) else 0


def _next_entry(kind, n, m, previous, before):
    '''Entry (n + 1, m) from rows n and n - 1.'''
    if kind is StirlingKind.CYCLE:
        return n * _entry(previous, m) + _entry(previous, m - 1)
    if kind is StirlingKind.SUBSET:
        return m * _entry(previous, m) + _entry(previous, m - 1)
    # Element n + 1 joins one of the m blocks or pairs off with one of the
    # other n elements, leaving n - 1 elements for m - 1 blocks.
    return m * _entry(previous, m) + n * _entry(before, m - 1)


@lru_cache(maxsize=None)
def _cached(kind, max_n):
    return StirlingTable.build(kind, max_n)


def table(kind, max_n=None):
    '''
    Shared table of the given kind, sized by settings.STIRLING_MAX_N unless
    max_n is given. Sizes above STIRLING_CEILING are refused.
    '''
    kind = StirlingKind(kind)
    max_n = max_n or settings.STIRLING_MAX_N
    if max_n < 0:
        raise ValueError(f'table size must be nonnegative, got {max_n}')
    if max_n > settings.STIRLING_CEILING:
        raise CapacityError(kind.value, max_n, settings.STIRLING_CEILING)
    return _cached(kind, max_n)


def covering(kind, n):
    '''
    Shared table holding at least row n, for evaluators whose truncation
    order decides the size. Sizes grow in multiples of STIRLING_MAX_N up to
    STIRLING_CEILING.
    '''
    if n > settings.STIRLING_CEILING:
        raise CapacityError(StirlingKind(kind).value, n, settings.STIRLING_CEILING)
    quantum = settings.STIRLING_MAX_N
    return table(kind, max(quantum, -(-n // quantum) * quantum))


def cycle(n, m, max_n=None):
    return table(StirlingKind.CYCLE, max_n)[n, m]


def subset(n, m, max_n=None):
    return table(StirlingKind.SUBSET, max_n)[n, m]


def assoc2(n, m, max_n=None):
    return table(StirlingKind.ASSOC2, max_n)[n, m]


GENERATOR = ring('z', QQ)


def _generating_base(kind, order):
    '''ln(1 + z), e^z - 1 or e^z - 1 - z modulo z^(order + 1).'''
    _, z = GENERATOR
    if kind is StirlingKind.CYCLE:
        return rs_log(1 + z, z, order + 1)
    growth = rs_exp(z, z, order + 1) - 1
    return growth if kind is StirlingKind.SUBSET else rs_trunc(growth - z, z, order + 1)


def _column_expansion(kind, m, order):
    '''Exact coefficients of z^0 .. z^order in base(z)^m.'''
    _, z = GENERATOR
    if m == 0:
        return [Fraction(1)] + [Fraction(0)] * order
    power = rs_pow(_generating_base(kind, order), m, z, order + 1)
    coefficients = (power.coeff(z ** n) for n in range(order + 1))
    return [Fraction(int(c.numerator), int(c.denominator)) for c in coefficients]


def egf_check(kind, m, n_max):
    '''
    Compare column m of the table against its exponential generating function
    expanded with exact rationals through z^n_max.
    '''
    kind = StirlingKind(kind)
    if m < 0 or n_max < m:
        raise ValueError(f'egf_check needs 0 <= m <= n_max, got m={m}, n_max={n_max}')
    lookup = table(kind)
    if n_max > lookup.max_n:
        raise CapacityError(kind.value, n_max, lookup.max_n)
    expansion = _column_expansion(kind, m, n_max)
    for n in range(n_max + 1):
        expected = expansion[n] * factorial(n) / factorial(m)
        sign = (-1) ** (n + m) if kind is StirlingKind.CYCLE else 1
        if expected != sign * lookup[n, m]:
            logger.warning(
                '%s(%d, %d) = %d disagrees with generating function value %s',
                kind.value, n, m, lookup[n, m], expected,
            )
            return False
    return True


def identity_3c_sum(l, m):
    '''
    Alternating sum of 2-associated numbers times binomials that reproduces
    the cycle number [l, m].
    '''
    if not 1 <= m <= l:
        raise ValueError(f'identity needs 1 <= m <= l, got l={l}, m={m}')
    associated = covering(StirlingKind.ASSOC2, 2 * l - 2 * m)
    return sum(
        (-1) ** (p + l - m)
        * associated[p + l - m, p]
        * comb(p + l - 1, p + l - m)
        for p in range(l - m + 1)
    )


def identity_3c_check(l, m):
    return identity_3c_sum(l, m) == covering(StirlingKind.CYCLE, l)[l, m]
