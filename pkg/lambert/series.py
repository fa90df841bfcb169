'''
Series expansions of Phi_alpha and W with exact Stirling coefficients.

All series share one variable set derived from (x, alpha):

    l1 = ln x               l2 = ln ln x
    sigma = alpha / l1      tau = alpha l2 / l1
    zeta = 1 / (1 + sigma)  l_tau = ln(1 - tau)    eta = sigma / (1 - tau)

and write the answer as a base expression plus a correction sum. The cycle
series are graded by the outer power of sigma or eta, the associated series by
the power of tau or l_tau eta, and the shifted series w(sigma, tau) by total
order. Every correction term carries a power of l2, tau or l_tau, so at x = e
the correction is identically zero and every truncation is exact.

Evaluation runs at the caller's precision plus the guard bits and the value is
rounded back; diagnostics (trace, tail) are left at working precision.
'''

from dataclasses import dataclass, replace
from enum import Enum
from logging import getLogger
from math import factorial
from typing import Optional

from django.conf import settings
import mpmath

from . import oracle, stirling
from .exceptions import DomainError, UnsupportedParameterError
from .reals import guarded, log_argument, resolve, rounded
from .stirling import StirlingKind


logger = getLogger(__name__)


class Series(str, Enum):
    CYCLE = '2a'
    SHIFT = '2d'
    ASSOCIATED = '3a'
    CYCLE_LOG = '4a'
    ASSOCIATED_LOG = '4c'


@dataclass(frozen=True)
class SeriesVariables:
    '''
    Expansion variables at one (x, alpha), held at working precision.

    l_tau and eta are None when tau >= 1, where ln(1 - tau) is not real.
    '''

    x: mpmath.mpf
    alpha: mpmath.mpf
    l1: mpmath.mpf
    l2: mpmath.mpf
    sigma: mpmath.mpf
    tau: mpmath.mpf
    zeta: mpmath.mpf
    l_tau: Optional[mpmath.mpf]
    eta: Optional[mpmath.mpf]
    precision: int


@dataclass(frozen=True)
class TruncatedEvaluation:
    '''
    A partial sum and how it got there.

    Attributes:
        value (mpf): Base expression plus correction, rounded to the caller's
            precision.
        correction (mpf): Sum of the included correction terms.
        terms_used (int): Number of correction terms included.
        last_term (mpf): Magnitude of the final included term.
        tail_estimate (mpf): Magnitude of the first omitted term.
        converged (bool): The final included term is below the tolerance.
        trace (tuple): Magnitudes of all included terms in order.
    '''

    value: mpmath.mpf
    correction: mpmath.mpf
    terms_used: int
    last_term: mpmath.mpf
    tail_estimate: mpmath.mpf
    converged: bool
    trace: tuple


def variables_from(x, alpha, precision=None):
    precision = resolve(precision)
    with guarded(precision):
        x = mpmath.mpf(x)
        alpha = mpmath.mpf(alpha)
        if x <= 1:
            raise DomainError(
                f'L1 must be positive: x = {mpmath.nstr(x, 10)} is not above 1'
            )
        if alpha <= 0:
            raise DomainError(
                f'series evaluation needs alpha > 0, got {mpmath.nstr(alpha, 10)}'
            )
        l1 = log_argument(x, precision)
        l2 = mpmath.log(l1)
        sigma = alpha / l1
        tau = alpha * l2 / l1
        l_tau = eta = None
        if tau < 1:
            l_tau = mpmath.log1p(-tau)
            eta = sigma / (1 - tau)
        return SeriesVariables(
            x=x,
            alpha=alpha,
            l1=l1,
            l2=l2,
            sigma=sigma,
            tau=tau,
            zeta=1 / (1 + sigma),
            l_tau=l_tau,
            eta=eta,
            precision=precision,
        )


def _sum_terms(term, base, count, tol, precision):
    '''
    Add term(1), term(2), ... to base, stopping after count terms or at the
    first term whose magnitude falls below tol.
    '''
    terms = []
    trace = []
    for k in range(1, count + 1):
        terms.append(term(k))
        trace.append(abs(terms[-1]))
        if tol is not None and trace[-1] < tol:
            break
    correction = mpmath.fsum(terms)
    last = trace[-1] if trace else mpmath.mpf(0)
    return TruncatedEvaluation(
        value=rounded(base + correction, precision),
        correction=correction,
        terms_used=len(trace),
        last_term=last,
        tail_estimate=abs(term(len(trace) + 1)),
        converged=bool(trace) and tol is not None and last < tol,
        trace=tuple(trace),
    )


def _signed(value, exponent):
    return -value if exponent % 2 else value


def _cycle_inner(cycles, n, y):
    '''sum over m of (-1)^(n+m) [n, n-m+1] y^m / m!'''
    return mpmath.fsum(
        _signed(cycles[n, n - m + 1] * y ** m / factorial(m), n + m)
        for m in range(1, n + 1)
    )


def _associated_term(associated, m, u, z):
    '''u^m / m! times sum over p of (-1)^(p+m-1) {p+m-1, p}>=2 z^(p+m)'''
    inner = mpmath.fsum(
        _signed(associated[p + m - 1, p] * z ** (p + m), p + m - 1)
        for p in range(m)
    )
    return u ** m / factorial(m) * inner


def _require_w(variables, label):
    if variables.alpha != 1:
        raise UnsupportedParameterError(
            f'series {label} is derived for W only (alpha = 1), '
            f'got alpha = {mpmath.nstr(variables.alpha, 10)}'
        )


def _require_log(variables, label):
    if variables.l_tau is None:
        raise DomainError(
            f'series {label} needs tau < 1, got tau = {mpmath.nstr(variables.tau, 10)}'
        )


def eval_2a(variables, N, tol=None):
    cycles = stirling.covering(StirlingKind.CYCLE, N + 1)
    with guarded(variables.precision):
        alpha = variables.alpha

        def term(n):
            return alpha * variables.sigma ** n * _cycle_inner(cycles, n, variables.l2)

        return _sum_terms(
            term, variables.l1 - alpha * variables.l2, N, tol, variables.precision,
        )


def eval_2d(sigma, tau, N, tol=None, precision=None):
    '''w(sigma, tau) graded by total order l + m of sigma^l tau^m.'''
    precision = resolve(precision)
    cycles = stirling.covering(StirlingKind.CYCLE, N + 1)
    with guarded(precision):
        sigma = mpmath.mpf(sigma)
        tau = mpmath.mpf(tau)

        def term(k):
            return mpmath.fsum(
                _signed(
                    cycles[k, k - m + 1] * sigma ** (k - m) * tau ** m / factorial(m),
                    k - m,
                )
                for m in range(1, k + 1)
            )

        return _sum_terms(term, mpmath.mpf(0), N, tol, precision)


def eval_3a(variables, N, tol=None):
    _require_w(variables, Series.ASSOCIATED.value)
    associated = stirling.covering(StirlingKind.ASSOC2, 2 * N)
    with guarded(variables.precision):

        def term(m):
            return _associated_term(associated, m, variables.tau, variables.zeta)

        return _sum_terms(
            term, variables.l1 - variables.l2, N, tol, variables.precision,
        )


def eval_4a(variables, N, tol=None):
    _require_w(variables, Series.CYCLE_LOG.value)
    _require_log(variables, Series.CYCLE_LOG.value)
    cycles = stirling.covering(StirlingKind.CYCLE, N + 1)
    with guarded(variables.precision):

        def term(n):
            return variables.eta ** n * _cycle_inner(cycles, n, variables.l_tau)

        return _sum_terms(
            term,
            variables.l1 - variables.l2 - variables.l_tau,
            N,
            tol,
            variables.precision,
        )


def eval_4c(variables, N, tol=None):
    _require_w(variables, Series.ASSOCIATED_LOG.value)
    _require_log(variables, Series.ASSOCIATED_LOG.value)
    associated = stirling.covering(StirlingKind.ASSOC2, 2 * N)
    with guarded(variables.precision):
        u = variables.l_tau * variables.eta
        z = 1 / (1 + variables.eta)

        def term(m):
            return _associated_term(associated, m, u, z)

        return _sum_terms(
            term,
            variables.l1 - variables.l2 - variables.l_tau,
            N,
            tol,
            variables.precision,
        )


def evaluate(series, variables, N, tol=None):
    '''Dispatch to the evaluator of the selected series.'''
    series = Series(series)
    if series is Series.CYCLE:
        return eval_2a(variables, N, tol)
    if series is Series.SHIFT:
        return eval_2d(variables.sigma, variables.tau, N, tol, variables.precision)
    if series is Series.ASSOCIATED:
        return eval_3a(variables, N, tol)
    if series is Series.CYCLE_LOG:
        return eval_4a(variables, N, tol)
    return eval_4c(variables, N, tol)


def phi_via_w(x, alpha, N, method=Series.ASSOCIATED_LOG, tol=None, precision=None):
    '''
    Phi_alpha(x) = alpha W(x^(1/alpha) / alpha), with W taken from one of the
    associated series.
    '''
    method = Series(method)
    if method not in (Series.ASSOCIATED, Series.ASSOCIATED_LOG):
        raise UnsupportedParameterError(
            f'phi_via_w evaluates W by series 3a or 4c, not {method.value}'
        )
    precision = resolve(precision)
    with guarded(precision):
        x = mpmath.mpf(x)
        alpha = mpmath.mpf(alpha)
        if alpha <= 0 or x <= 0:
            raise DomainError('phi_via_w needs x > 0 and alpha > 0')
        argument = mpmath.exp(log_argument(x, precision) / alpha) / alpha
        if argument < settings.SERIES_MIN_ARGUMENT:
            raise DomainError(
                f'transformed argument x^(1/alpha)/alpha = '
                f'{mpmath.nstr(argument, 15)} lies below the validated domain '
                f'x >= {settings.SERIES_MIN_ARGUMENT} of series {method.value}'
            )
    evaluation = evaluate(method, variables_from(argument, 1, precision), N, tol)
    with guarded(precision):
        return replace(
            evaluation,
            value=rounded(alpha * evaluation.value, precision),
            correction=alpha * evaluation.correction,
        )


def identity_4d_check(sigma, tau, precision=None, repeats=1):
    '''
    Residual of w(sigma, tau) = -ln(1 - tau) + w(sigma', tau') with
    sigma' = sigma / (1 - tau) and tau' = sigma ln(1 - tau) / (1 - tau),
    the transform applied `repeats` times. Both sides come from root finding.
    '''
    precision = resolve(precision)
    working = precision + settings.GUARD_BITS
    with guarded(precision):
        sigma = mpmath.mpf(sigma)
        tau = mpmath.mpf(tau)
        direct = oracle.solve_shift(sigma, tau, working).root
        shift = mpmath.mpf(0)
        for _ in range(repeats):
            if tau >= 1:
                raise DomainError(
                    f'transform needs tau < 1, got tau = {mpmath.nstr(tau, 10)}'
                )
            drop = mpmath.log1p(-tau)
            shift -= drop
            sigma, tau = sigma / (1 - tau), sigma * drop / (1 - tau)
        transformed = oracle.solve_shift(sigma, tau, working).root
        residual = abs(direct - (shift + transformed))
        logger.debug('identity residual %s', mpmath.nstr(residual, 5))
        return rounded(residual, precision)
