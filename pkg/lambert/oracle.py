'''
Reference values for W and Phi_alpha by iterative root finding.

Nothing here uses the series: roots are bracketed, narrowed by bisection and
polished with Halley's third order iteration at the caller's precision plus
the guard bits. Every answer is checked by substituting it back.
'''

from dataclasses import dataclass
from logging import getLogger

from django.conf import settings
import mpmath

from .exceptions import DomainError, SolverError
from .reals import guarded, power_of_two, resolve, rounded


logger = getLogger(__name__)


@dataclass(frozen=True)
class SolveReport:
    '''
    Outcome of one reference solve.

    Attributes:
        root (mpf): The root rounded to precision_bits.
        iterations (int): Bisection plus Halley steps taken.
        residual (mpf): |y^alpha e^y - x| / x for W and Phi, |h(w)| for the
            shifted equation, evaluated at the rounded root.
        precision_bits (int): Precision the root was rounded to.
    '''

    root: mpmath.mpf
    iterations: int
    residual: mpmath.mpf
    precision_bits: int


def _halley(function, low, high, label):
    '''
    Root of function on [low, high], where function(y) returns the value and
    its first two derivatives and changes sign across the bracket.
    '''
    trace = []
    low_value = function(low)[0]
    if low_value == 0:
        return low, trace
    low_sign = low_value < 0
    for _ in range(settings.ORACLE_SEED_BISECTIONS):
        middle = (low + high) / 2
        value = function(middle)[0]
        trace.append(middle)
        if value == 0:
            return middle, trace
        if (value < 0) == low_sign:
            low = middle
        else:
            high = middle
    y = (low + high) / 2
    for _ in range(settings.ORACLE_MAX_ITERATIONS):
        value, slope, curvature = function(y)
        if value == 0:
            return y, trace
        if (value < 0) == low_sign:
            low = y
        else:
            high = y
        step = 2 * value * slope / (2 * slope ** 2 - value * curvature)
        candidate = y - step
        if not low <= candidate <= high:
            candidate = (low + high) / 2
        trace.append(candidate)
        if abs(candidate - y) <= power_of_two(4 - mpmath.mp.prec) * abs(candidate):
            logger.debug('%s converged after %d iterations', label, len(trace))
            return candidate, trace
        y = candidate
    raise SolverError(f'{label} did not converge', trace)


def _checked(root, residual, iterations, precision, label, trace=()):
    bound = power_of_two(settings.ORACLE_RESIDUAL_MARGIN_BITS - precision)
    if residual > bound:
        raise SolverError(
            f'{label} residual {mpmath.nstr(residual, 5)} exceeds '
            f'{mpmath.nstr(bound, 5)}',
            trace,
        )
    return SolveReport(
        root=root,
        iterations=iterations,
        residual=residual,
        precision_bits=precision,
    )


def solve_w(x, precision=None):
    '''Principal branch of the Lambert W function for x >= 0.'''
    precision = resolve(precision)
    with guarded(precision):
        x = mpmath.mpf(x)
        if x < 0:
            raise DomainError(f'W is evaluated on x >= 0 only, got {mpmath.nstr(x, 10)}')
        if x == 0:
            return SolveReport(mpmath.mpf(0), 0, mpmath.mpf(0), precision)

        def lambert(y):
            growth = mpmath.exp(y)
            return y * growth - x, growth * (y + 1), growth * (y + 2)

        high = 1 + max(0, mpmath.log(x))
        root, trace = _halley(lambert, mpmath.mpf(0), high, 'W')
        root = rounded(root, precision)
        residual = abs(root * mpmath.exp(root) - x) / x
        return _checked(root, residual, len(trace), precision, 'W', trace)


def solve_phi(x, alpha, precision=None):
    '''
    Positive solution of y^alpha e^y = x, solved in the logarithmic form
    alpha ln y + y = ln x. For negative alpha the root above -alpha is taken.
    '''
    precision = resolve(precision)
    with guarded(precision):
        x = mpmath.mpf(x)
        alpha = mpmath.mpf(alpha)
        if x <= 0:
            if x == 0 and alpha > 0:
                return SolveReport(mpmath.mpf(0), 0, mpmath.mpf(0), precision)
            raise DomainError(f'Phi needs x > 0, got {mpmath.nstr(x, 10)}')
        log_x = mpmath.log(x)

        def logarithmic(y):
            return alpha * mpmath.log(y) + y - log_x, alpha / y + 1, -alpha / y ** 2

        if alpha > 0:
            low = mpmath.exp(min(0, (log_x - 1) / alpha))
            high = 1 + abs(log_x)
            root, trace = _halley(logarithmic, low, high, 'Phi')
        elif alpha == 0:
            if log_x <= 0:
                raise DomainError('Phi_0 has a positive root only for x > 1')
            root, trace = log_x, []
        else:
            threshold = -alpha + alpha * mpmath.log(-alpha)
            if log_x <= threshold:
                raise DomainError(
                    f'alpha = {mpmath.nstr(alpha, 10)} needs '
                    f'x > {mpmath.nstr(mpmath.exp(threshold), 10)}'
                )
            low = -alpha
            high = 2 * low + abs(log_x) + 1
            while logarithmic(high)[0] <= 0:
                high *= 2
            root, trace = _halley(logarithmic, low, high, 'Phi')
        root = rounded(root, precision)
        residual = abs(mpmath.expm1(alpha * mpmath.log(root) + root - log_x))
        return _checked(root, residual, len(trace), precision, 'Phi', trace)


def solve_shift(sigma, tau, precision=None):
    '''
    Root w of 1 - e^{-w} + sigma w - tau = 0. The left side is increasing
    for sigma > 0, so the root is unique and lies between 0 and tau / sigma.
    '''
    precision = resolve(precision)
    with guarded(precision):
        sigma = mpmath.mpf(sigma)
        tau = mpmath.mpf(tau)
        if sigma <= 0:
            raise DomainError(f'shifted equation needs sigma > 0, got {mpmath.nstr(sigma, 10)}')

        def shifted(w):
            # 1 - e^-w via expm1 keeps small roots at full relative precision
            decay = mpmath.exp(-w)
            return -mpmath.expm1(-w) + sigma * w - tau, decay + sigma, -decay

        if tau == 0:
            root, trace = mpmath.mpf(0), []
        else:
            bounds = sorted((mpmath.mpf(0), tau / sigma))
            root, trace = _halley(shifted, *bounds, 'shifted equation')
        root = rounded(root, precision)
        return _checked(
            root, abs(shifted(root)[0]), len(trace), precision,
            'shifted equation', trace,
        )


def taylor_coeffs_at_e(k, precision=None):
    '''
    First k Taylor coefficients of W about x = e.

    W solves x (1 + W) W' = W; writing W = sum c_j h^j with x = e + h and
    matching powers of h yields each coefficient from the previous ones.
    '''
    precision = resolve(precision)
    if not 0 <= k <= settings.ORACLE_TAYLOR_MAX:
        raise ValueError(f'k must lie in [0, {settings.ORACLE_TAYLOR_MAX}], got {k}')
    with guarded(precision):
        e = +mpmath.e
        coefficients = [mpmath.mpf(1)]

        def product(i):
            # coefficient i of (e + h)(1 + W)
            shifted = coefficients[i - 1] + (1 if i == 1 else 0)
            return e * coefficients[i] + shifted

        while len(coefficients) < k:
            j = len(coefficients) - 1
            known = sum(
                product(i) * (j - i + 1) * coefficients[j - i + 1]
                for i in range(1, j + 1)
            )
            coefficients.append((coefficients[j] - known) / ((j + 1) * 2 * e))
        return [rounded(c, precision) for c in coefficients[:k]]
