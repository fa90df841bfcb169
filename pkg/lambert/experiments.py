'''
Empirical checks of the convergence and accuracy claims for the series.

Each experiment compares series truncations with oracle values computed at
REFERENCE_EXTRA_BITS more precision and rounded to the experiment precision.
Grid points are independent; scans may fan out to worker processes (mpmath
keeps its precision in process-global state) and always return results in
grid order.
'''

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import partial
from logging import getLogger
from math import factorial
from typing import Optional

from django.conf import settings
import mpmath
import numpy

from . import oracle
from .exceptions import DomainError, ExperimentError, UnsupportedParameterError
from .reals import default_tolerance, guarded, is_e, power_of_two, resolve, rounded
from .series import Series, evaluate, variables_from


logger = getLogger(__name__)

SCANNED = (Series.CYCLE, Series.ASSOCIATED, Series.CYCLE_LOG, Series.ASSOCIATED_LOG)
W_ONLY = (Series.ASSOCIATED, Series.CYCLE_LOG, Series.ASSOCIATED_LOG)
CONJECTURED = (Series.CYCLE, Series.ASSOCIATED_LOG)
TAYLOR = (Series.CYCLE, Series.ASSOCIATED, Series.CYCLE_LOG, Series.ASSOCIATED_LOG)


class Verdict(str, Enum):
    CONVERGED = 'converged'
    STAGNANT = 'stagnant'
    DIVERGING = 'diverging'


class FitStatus(str, Enum):
    OK = 'ok'
    PRECISION_LIMITED = 'precision-limited'


@dataclass(frozen=True)
class ConvergenceVerdict:
    '''
    Classification of one grid point.

    Attributes:
        verdict (Verdict): Converged, Stagnant or Diverging.
        terms (int): Terms included; for Converged trace[terms - 1] < tol.
        trace (tuple): Term magnitudes in order.
        value (mpf): The partial sum the evaluation ended with.
        reference (mpf): Oracle value of Phi_alpha(x).
    '''

    x: mpmath.mpf
    alpha: mpmath.mpf
    series: Series
    verdict: Verdict
    terms: int
    trace: tuple
    value: mpmath.mpf
    reference: mpmath.mpf

    @property
    def abs_err(self):
        return abs(self.value - self.reference)

    @property
    def rel_err(self):
        return self.abs_err / abs(self.reference)


@dataclass(frozen=True)
class ErrorCurveRow:
    '''
    One truncation compared with the oracle. approx, abs_err and rel_err are
    None when the series is undefined at x; note then says why.
    '''

    x: mpmath.mpf
    alpha: mpmath.mpf
    series: Series
    terms: int
    approx: Optional[mpmath.mpf]
    reference: mpmath.mpf
    abs_err: Optional[mpmath.mpf]
    rel_err: Optional[mpmath.mpf]
    note: str = ''


@dataclass(frozen=True)
class OrderFit:
    '''
    Regression of log |error| on N log(l2 / l1) and on N log(l2 / l1^2).

    Attributes:
        first (float): Slope against the l2 / l1 grading.
        second (float): Slope against the l2 / l1^2 grading.
        rows (list): Error rows for every requested N.
        used (tuple): The N values above the precision floor.
    '''

    series: Series
    x: mpmath.mpf
    first: Optional[float]
    second: Optional[float]
    rows: list
    used: tuple
    status: FitStatus

    @property
    def slope(self):
        '''Slope against the grading in which the series is claimed to err.'''
        if self.series is Series.ASSOCIATED_LOG:
            return self.second
        return self.first


@dataclass(frozen=True)
class TaylorDeviation:
    order: int
    numeric: mpmath.mpf
    reference: mpmath.mpf
    deviation: mpmath.mpf


def geometric_grid(low, high, points, open_low=False, open_high=False, precision=None):
    '''
    Points spaced evenly in log x between low and high. Open ends are
    excluded by spreading the points over the interior of the partition.
    '''
    precision = resolve(precision)
    if points < 1:
        raise ExperimentError('a grid needs at least one point')
    with guarded(precision):
        low = mpmath.mpf(low)
        high = mpmath.mpf(high)
        if not 0 < low < high:
            raise ExperimentError('a geometric grid needs 0 < low < high')
        first = 1 if open_low else 0
        intervals = points - 1 + first + (1 if open_high else 0)
        if intervals == 0:
            return [rounded(low, precision)]
        ratio = high / low
        return [
            rounded(low * ratio ** (mpmath.mpf(k) / intervals), precision)
            for k in range(first, first + points)
        ]


def reference_value(x, alpha, precision):
    '''Phi_alpha(x) from the oracle at extra precision, rounded to precision.'''
    if alpha == 1 and is_e(x, precision):
        return mpmath.mpf(1)
    extra = precision + settings.REFERENCE_EXTRA_BITS
    if alpha == 1:
        root = oracle.solve_w(x, extra).root
    else:
        root = oracle.solve_phi(x, alpha, extra).root
    return rounded(root, precision)


def _classify(trace, converged, window):
    if converged:
        return Verdict.CONVERGED
    tail = trace[-window:]
    if len(tail) == window and all(b > a for a, b in zip(tail, tail[1:])):
        return Verdict.DIVERGING
    return Verdict.STAGNANT


def _scan_point(x, series, alpha, max_terms, tol, precision, window):
    evaluation = evaluate(series, variables_from(x, alpha, precision), max_terms, tol)
    verdict = _classify(evaluation.trace, evaluation.converged, window)
    logger.debug('%s at x=%s: %s', series.value, mpmath.nstr(x, 8), verdict.value)
    return ConvergenceVerdict(
        x=x,
        alpha=alpha,
        series=series,
        verdict=verdict,
        terms=evaluation.terms_used,
        trace=evaluation.trace,
        value=evaluation.value,
        reference=reference_value(x, alpha, precision),
    )


def _ordered_map(function, items, workers):
    workers = workers or settings.SCAN_WORKERS
    if workers <= 1:
        return [function(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))


def _check_series(series, allowed):
    series = Series(series)
    if series not in allowed:
        raise ExperimentError(
            f'series {series.value} is not one of '
            f'{", ".join(item.value for item in allowed)}'
        )
    return series


def _points(x_grid, precision):
    with guarded(precision):
        return [rounded(mpmath.mpf(x), precision) for x in x_grid]


def _check_alpha(series, alpha):
    if series in W_ONLY and alpha != 1:
        raise UnsupportedParameterError(
            f'series {series.value} is derived for W only (alpha = 1)'
        )


def convergence_scan(series, alpha, x_grid, max_terms=None, tol=None,
                     precision=None, workers=None):
    '''Classify every grid point by the term trace of its partial sums.'''
    series = _check_series(series, SCANNED)
    _check_alpha(series, alpha)
    precision = resolve(precision)
    x_grid = _points(x_grid, precision)
    if any(x <= 1 for x in x_grid):
        raise ExperimentError('scan grid values must exceed 1')
    return _ordered_map(
        partial(
            _scan_point,
            series=series,
            alpha=alpha,
            max_terms=settings.MAX_TERMS if max_terms is None else max_terms,
            tol=default_tolerance(precision) if tol is None else tol,
            precision=precision,
            window=settings.DIVERGENCE_WINDOW,
        ),
        x_grid,
        workers,
    )


def _error_row(series, N, x, alpha, precision, reference=None):
    if reference is None:
        reference = reference_value(x, alpha, precision)
    try:
        approx = evaluate(series, variables_from(x, alpha, precision), N).value
    except DomainError as error:
        logger.info('%s undefined at x=%s: %s', series.value, mpmath.nstr(x, 8), error)
        return ErrorCurveRow(
            x=x,
            alpha=alpha,
            series=series,
            terms=N,
            approx=None,
            reference=reference,
            abs_err=None,
            rel_err=None,
            note=str(error),
        )
    with guarded(precision):
        abs_err = abs(approx - reference)
        return ErrorCurveRow(
            x=x,
            alpha=alpha,
            series=series,
            terms=N,
            approx=approx,
            reference=reference,
            abs_err=abs_err,
            rel_err=abs_err / abs(reference),
        )


def error_curve(series, N, x_grid, precision=None, alpha=1, workers=None):
    '''Exactly N terms of the series against the oracle at every grid point.'''
    series = _check_series(series, SCANNED)
    _check_alpha(series, alpha)
    precision = resolve(precision)
    return _ordered_map(
        partial(_error_row, series, N, alpha=alpha, precision=precision),
        _points(x_grid, precision),
        workers,
    )


def order_fit(series, N_range, x_big=None, precision=None, alpha=1):
    '''
    Fit the exponential rate at which the truncation error falls with N at
    one large x. A slope near 1 against a grading means the error behaves
    like that grading to the power N.
    '''
    series = _check_series(series, SCANNED)
    _check_alpha(series, alpha)
    orders = sorted(set(N_range))
    if len(orders) < 3:
        raise ExperimentError('an order fit needs at least 3 truncation orders')
    precision = resolve(precision)
    with guarded(precision):
        x_big = mpmath.mpf(settings.ORDER_FIT_X if x_big is None else x_big)
        if x_big <= mpmath.e:
            raise ExperimentError('an order fit needs x > e so that ln ln x > 0')
    variables = variables_from(x_big, alpha, precision)
    reference = reference_value(x_big, alpha, precision)
    rows = [
        _error_row(series, N, x_big, alpha, precision, reference)
        for N in orders
    ]
    floor = power_of_two(8 - precision) * abs(reference)
    usable = [row for row in rows if row.abs_err is not None and row.abs_err > floor]
    if len(usable) < 3:
        logger.warning('%s errors at x=%s sit on the precision floor',
                       series.value, mpmath.nstr(x_big, 8))
        return OrderFit(
            series=series,
            x=x_big,
            first=None,
            second=None,
            rows=rows,
            used=tuple(row.terms for row in usable),
            status=FitStatus.PRECISION_LIMITED,
        )
    with guarded(precision):
        first_grading = float(mpmath.log(variables.l2 / variables.l1))
        second_grading = float(mpmath.log(variables.l2 / variables.l1 ** 2))
        errors = numpy.array([float(mpmath.log(row.abs_err)) for row in usable])
    truncations = numpy.array([row.terms for row in usable], dtype=float)
    first = numpy.polyfit(truncations * first_grading, errors, 1)[0]
    second = numpy.polyfit(truncations * second_grading, errors, 1)[0]
    return OrderFit(
        series=series,
        x=x_big,
        first=float(first),
        second=float(second),
        rows=rows,
        used=tuple(row.terms for row in usable),
        status=FitStatus.OK,
    )


def taylor_match_check(series, N, precision=None):
    '''
    Taylor coefficients of the N-term truncation about x = e, by Richardson
    extrapolated central differences, against the oracle's coefficients.

    The step for derivative order j is 2^-(precision / (j + 3)), which is
    2^-(precision / 4) for the first derivative. mpmath.diff raises the
    working precision for the differences, so the truncation is evaluated at
    whatever precision is current when called.
    '''
    series = _check_series(series, TAYLOR)
    if not 0 <= N <= settings.TAYLOR_MAX_TERMS:
        raise ExperimentError(
            f'taylor match is checked for N <= {settings.TAYLOR_MAX_TERMS}, got {N}'
        )
    precision = resolve(precision)
    count = min(N, settings.TAYLOR_MAX_COEFFICIENTS)
    if not count:
        return []
    reference = oracle.taylor_coeffs_at_e(count, precision)
    working = precision + settings.GUARD_BITS

    def truncated(x):
        return evaluate(series, variables_from(x, 1, mpmath.mp.prec), N).value

    deviations = []
    with guarded(working):
        center = +mpmath.e
        for order in range(count):
            if order:
                step = power_of_two(-(precision // (order + 3)))
                coarse = mpmath.diff(truncated, center, order, h=step)
                fine = mpmath.diff(truncated, center, order, h=step / 2)
                numeric = (4 * fine - coarse) / 3 / factorial(order)
            else:
                numeric = truncated(center)
            deviations.append(
                TaylorDeviation(
                    order=order,
                    numeric=rounded(numeric, precision),
                    reference=reference[order],
                    deviation=rounded(abs(numeric - reference[order]), precision),
                )
            )
    return deviations


def conjecture_scan(series, x_grid, max_terms=None, tol=None, precision=None,
                    workers=None):
    '''
    Convergence behaviour of 2a and 4c below the proved domains, for
    1 < x < e. Informational: the verdicts are reported, never judged.
    '''
    series = _check_series(series, CONJECTURED)
    precision = resolve(precision)
    x_grid = _points(x_grid, precision)
    with guarded(precision):
        e = +mpmath.e
    if any(not 1 < x < e for x in x_grid):
        raise ExperimentError('conjecture grid must lie strictly inside (1, e)')
    return convergence_scan(series, 1, x_grid, max_terms, tol, precision, workers)
