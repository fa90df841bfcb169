from unittest import mock

from django.test import SimpleTestCase
from hypothesis import given, settings as hypothesis_settings, strategies as st
import mpmath

from lambert import oracle, series
from lambert.exceptions import DomainError, UnsupportedParameterError
from lambert.reals import default_tolerance, power_of_two
from lambert.series import Series, evaluate, phi_via_w, variables_from


PRECISION = 128


def e_at(precision):
    with mpmath.workprec(precision):
        return +mpmath.e


class VariablesTests(SimpleTestCase):
    def test_rejects_x_at_most_one(self):
        for x in (1, '0.5', 0):
            with self.assertRaises(DomainError) as caught:
                variables_from(x, 1, PRECISION)
            self.assertIn('L1 must be positive', str(caught.exception))

    def test_rejects_nonpositive_alpha(self):
        with self.assertRaises(DomainError):
            variables_from(10, 0, PRECISION)

    def test_snaps_at_e(self):
        variables = variables_from(e_at(PRECISION), 1, PRECISION)
        self.assertEqual(variables.l1, 1)
        self.assertEqual(variables.l2, 0)
        self.assertEqual(variables.tau, 0)
        self.assertEqual(variables.l_tau, 0)

    def test_large_x(self):
        variables = variables_from('1e6', 1, PRECISION)
        self.assertTrue(0 < variables.tau < 1)
        self.assertTrue(0 < variables.zeta < 1)
        self.assertIsNotNone(variables.eta)


class ExactAtETests(SimpleTestCase):
    def test_every_series_is_one(self):
        variables = variables_from(e_at(PRECISION), 1, PRECISION)
        for label in (Series.CYCLE, Series.ASSOCIATED, Series.CYCLE_LOG, Series.ASSOCIATED_LOG):
            for N in (0, 1, 5, 12, 20):
                evaluation = evaluate(label, variables, N)
                self.assertEqual(evaluation.value, 1, (label, N))
                self.assertEqual(evaluation.correction, 0, (label, N))

    def test_shift_series_vanishes_at_e(self):
        variables = variables_from(e_at(PRECISION), 1, PRECISION)
        for N in (1, 5, 20):
            evaluation = evaluate(Series.SHIFT, variables, N)
            self.assertEqual(evaluation.value, 0)
            self.assertEqual(evaluation.correction, 0)

    def test_shift_vanishes_at_tau_zero(self):
        self.assertEqual(series.eval_2d('0.4', 0, 10, precision=PRECISION).value, 0)


class TruncationTests(SimpleTestCase):
    def test_exact_count_without_tolerance(self):
        evaluation = series.eval_3a(variables_from('1e6', 1, PRECISION), 7)
        self.assertEqual(evaluation.terms_used, 7)
        self.assertEqual(len(evaluation.trace), 7)
        self.assertFalse(evaluation.converged)

    def test_zero_terms_is_base(self):
        variables = variables_from('1e6', 1, PRECISION)
        evaluation = series.eval_4c(variables, 0)
        with mpmath.workprec(PRECISION + 32):
            base = variables.l1 - variables.l2 - variables.l_tau
        self.assertEqual(evaluation.terms_used, 0)
        self.assertEqual(evaluation.trace, ())
        self.assertEqual(evaluation.correction, 0)
        self.assertLess(abs(evaluation.value - base), power_of_two(4 - PRECISION) * base)

    def test_stops_at_first_small_term(self):
        evaluation = series.eval_4c(variables_from('1e6', 1, PRECISION), 50, tol=1)
        self.assertEqual(evaluation.terms_used, 1)
        self.assertLess(evaluation.trace[0], 1)
        self.assertTrue(evaluation.converged)

    def test_w_only_series_reject_alpha(self):
        variables = variables_from('1e6', 2, PRECISION)
        for evaluator in (series.eval_3a, series.eval_4a, series.eval_4c):
            with self.assertRaises(UnsupportedParameterError):
                evaluator(variables, 5)


class AccuracyTests(SimpleTestCase):
    def assertMatchesOracle(self, evaluation, reference, tolerance):
        self.assertTrue(evaluation.converged)
        with mpmath.workprec(PRECISION + 32):
            self.assertLessEqual(abs(evaluation.value - reference), tolerance)

    def test_associated_below_e(self):
        variables = variables_from(2, 1, PRECISION)
        evaluation = series.eval_3a(variables, 100, tol=mpmath.mpf('1e-30'))
        self.assertMatchesOracle(
            evaluation, oracle.solve_w(2, PRECISION).root, mpmath.mpf('1e-25'),
        )

    def test_log_series_at_large_x(self):
        tolerance = default_tolerance(PRECISION)
        reference = oracle.solve_w('1e6', PRECISION).root
        variables = variables_from('1e6', 1, PRECISION)
        for label in (Series.CYCLE_LOG, Series.ASSOCIATED_LOG, Series.ASSOCIATED):
            evaluation = evaluate(label, variables, 200, tolerance)
            self.assertMatchesOracle(evaluation, reference, 10 * tolerance * reference)

    def test_cycle_series_near_boundary(self):
        # x = 1.1 (alpha e)^alpha, where the terms shrink slowly
        for alpha in (1, 2, 3):
            with mpmath.workprec(232):
                x = mpmath.mpf('1.1') * (alpha * mpmath.e) ** alpha
            variables = variables_from(x, alpha, 200)
            evaluation = series.eval_2a(variables, 400, tol=mpmath.mpf('1e-14'))
            reference = oracle.solve_phi(x, alpha, 200).root
            self.assertMatchesOracle(evaluation, reference, mpmath.mpf('1e-10'))

    def test_cycle_series_within_error_scale(self):
        variables = variables_from('1e10', 1, PRECISION)
        evaluation = series.eval_2a(variables, 8)
        reference = oracle.solve_w('1e10', PRECISION).root
        with mpmath.workprec(PRECISION + 32):
            scale = (variables.l2 / variables.l1) ** 9
            self.assertLess(abs(evaluation.value - reference), scale)

    def test_log_associated_at_two(self):
        evaluation = series.eval_4c(variables_from(2, 1, PRECISION), 30)
        reference = oracle.solve_w(2, PRECISION).root
        with mpmath.workprec(PRECISION + 32):
            self.assertLess(abs(evaluation.value - reference), mpmath.mpf('1e-10') * reference)

    def test_cycle_log_and_cycle_at_ten_thousand(self):
        reference = oracle.solve_w('1e4', PRECISION).root
        variables = variables_from('1e4', 1, PRECISION)
        for evaluator in (series.eval_2a, series.eval_4a):
            evaluation = evaluator(variables, 12)
            with mpmath.workprec(PRECISION + 32):
                self.assertLess(abs(evaluation.value - reference), mpmath.mpf('1e-5') * reference)

    def test_cycle_log_is_transformed_shift_series(self):
        variables = variables_from('1e6', 1, PRECISION)
        cycle_log = series.eval_4a(variables, 12)
        with mpmath.workprec(PRECISION + 32):
            sigma = variables.eta
            tau = variables.eta * variables.l_tau
        shift = series.eval_2d(sigma, tau, 12, precision=PRECISION)
        with mpmath.workprec(PRECISION + 32):
            assembled = variables.l1 - variables.l2 - variables.l_tau + shift.value
            self.assertLess(abs(cycle_log.value - assembled), mpmath.mpf('1e-30'))

    def test_shift_series(self):
        evaluation = series.eval_2d('0.02', '0.05', 60, mpmath.mpf('1e-30'), PRECISION)
        self.assertMatchesOracle(
            evaluation,
            oracle.solve_shift('0.02', '0.05', PRECISION).root,
            mpmath.mpf('1e-28'),
        )

    def test_cycle_and_shift_agree(self):
        variables = variables_from('1e8', 1, PRECISION)
        cycle = series.eval_2a(variables, 30)
        shift = series.eval_2d(variables.sigma, variables.tau, 30, precision=PRECISION)
        with mpmath.workprec(PRECISION + 32):
            assembled = variables.l1 - variables.l2 + shift.value
            self.assertLess(abs(cycle.value - assembled), mpmath.mpf('1e-30'))


class InvariantTests(SimpleTestCase):
    def residual(self, value, x):
        with mpmath.workprec(PRECISION + 32):
            x = mpmath.mpf(x)
            return abs(value * mpmath.exp(value) - x) / x

    def test_defining_equation_residual_shrinks(self):
        variables = variables_from('1e6', 1, PRECISION)
        for label in (Series.ASSOCIATED, Series.ASSOCIATED_LOG):
            residuals = [
                self.residual(evaluate(label, variables, N).value, '1e6')
                for N in (2, 6, 12)
            ]
            self.assertEqual(residuals, sorted(residuals, reverse=True), label)
            converged = evaluate(label, variables, 200, default_tolerance(PRECISION))
            self.assertTrue(converged.converged)
            self.assertLess(self.residual(converged.value, '1e6'), mpmath.mpf('1e-25'))

    def test_tail_eventually_decreases(self):
        for x in ('2', '2.3', '2.6', '1e3', '1e6'):
            trace = series.eval_3a(variables_from(x, 1, PRECISION), 30).trace
            blocks = [max(trace[start:start + 10]) for start in (0, 10, 20)]
            self.assertGreater(blocks[1], blocks[2], x)


class PhiViaWTests(SimpleTestCase):
    def test_routes_through_associated_series(self):
        with mock.patch('lambert.series.evaluate', wraps=series.evaluate) as spy:
            phi_via_w('1e20', 2, 30, Series.ASSOCIATED_LOG, precision=PRECISION)
        spy.assert_called_once()
        label, variables = spy.call_args.args[:2]
        self.assertEqual(label, Series.ASSOCIATED_LOG)
        self.assertEqual(variables.alpha, 1)
        self.assertAlmostEqual(float(variables.x), 5e9, delta=1)

    def test_matches_oracle(self):
        tolerance = default_tolerance(PRECISION)
        evaluation = phi_via_w('1e20', 2, 64, tol=tolerance, precision=PRECISION)
        reference = oracle.solve_phi('1e20', 2, PRECISION).root
        self.assertTrue(evaluation.converged)
        with mpmath.workprec(PRECISION + 32):
            self.assertLessEqual(abs(evaluation.value - reference), 10 * tolerance * reference)

    def test_four_e_squared_is_two(self):
        with mpmath.workprec(PRECISION + 32):
            x = 4 * mpmath.e ** 2
        self.assertEqual(phi_via_w(x, 2, 10, precision=PRECISION).value, 2)

    def test_small_transformed_argument(self):
        with self.assertRaises(DomainError) as caught:
            phi_via_w(2, 2, 10, precision=PRECISION)
        self.assertIn('0.7071', str(caught.exception))

    def test_rejects_cycle_series(self):
        with self.assertRaises(UnsupportedParameterError):
            phi_via_w('1e20', 2, 10, Series.CYCLE, precision=PRECISION)


class ShiftTransformTests(SimpleTestCase):
    @hypothesis_settings(deadline=None, max_examples=40)
    @given(
        st.floats(min_value=0.01, max_value=0.5),
        st.floats(min_value=0, max_value=0.9),
    )
    def test_identity_holds(self, sigma, tau):
        residual = series.identity_4d_check(sigma, tau, PRECISION)
        self.assertLess(residual, power_of_two(20 - PRECISION))

    def test_identity_holds_for_tiny_tau(self):
        for tau in ('1e-20', '1e-60', '9.8e-157'):
            residual = series.identity_4d_check('0.5', tau, PRECISION)
            self.assertLess(residual, power_of_two(20 - PRECISION), tau)

    def test_repeated_transform(self):
        residual = series.identity_4d_check('0.3', '0.5', PRECISION, repeats=3)
        self.assertLess(residual, power_of_two(20 - PRECISION))
