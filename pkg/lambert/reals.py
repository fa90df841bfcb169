'''
Arbitrary precision plumbing shared by the series, the oracle and the
experiments.

Every real quantity is an mpmath ``mpf``. Callers state a precision in bits;
work happens at that precision plus ``settings.GUARD_BITS`` and results are
rounded back to the caller's precision before they are returned.
'''

from django.conf import settings
import mpmath


BigReal = mpmath.mpf

# Inputs within 2^(E_SNAP_BITS - precision) * e of e are taken as e itself.
E_SNAP_BITS = 4


def resolve(precision):
    return precision if precision else settings.PRECISION_BITS


def guarded(precision):
    '''Context manager running mpmath at precision plus the guard bits.'''
    return mpmath.workprec(precision + settings.GUARD_BITS)


def rounded(value, precision):
    with mpmath.workprec(precision):
        return +value


def power_of_two(exponent):
    return mpmath.ldexp(mpmath.mpf(1), exponent)


def default_tolerance(precision):
    return power_of_two(settings.TOLERANCE_MARGIN_BITS - precision)


def is_e(x, precision):
    '''Whether x equals Euler's number to within a few ulps at precision.'''
    with guarded(precision):
        e = +mpmath.e
        return abs(x - e) <= power_of_two(E_SNAP_BITS - precision) * e


def log_argument(x, precision):
    '''
    Natural logarithm of x at the current mpmath precision, exactly 1 when x
    is e at the caller's precision. Series corrections carry powers of ln ln x,
    so the snap makes them vanish identically there.
    '''
    if is_e(x, precision):
        return mpmath.mpf(1)
    return mpmath.log(x)
