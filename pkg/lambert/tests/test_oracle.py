from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hypothesis_settings, strategies as st
import mpmath

from lambert import oracle
from lambert.exceptions import DomainError, SolverError
from lambert.reals import power_of_two


PRECISION = 200


def close(a, b, bits):
    with mpmath.workprec(PRECISION + 64):
        return abs(a - b) <= power_of_two(-bits) * max(1, abs(b))


class SolveWTests(SimpleTestCase):
    def test_at_e(self):
        with mpmath.workprec(PRECISION):
            e = +mpmath.e
        report = oracle.solve_w(e, PRECISION)
        self.assertTrue(close(report.root, 1, PRECISION - 8))

    def test_omega_constant(self):
        report = oracle.solve_w(1, PRECISION)
        with mpmath.workprec(PRECISION):
            omega = mpmath.lambertw(1).real
        self.assertTrue(close(report.root, omega, PRECISION - 8))
        self.assertEqual(report.precision_bits, PRECISION)

    def test_zero(self):
        self.assertEqual(oracle.solve_w(0, PRECISION).root, 0)

    def test_negative(self):
        with self.assertRaises(DomainError):
            oracle.solve_w(-1, PRECISION)

    @hypothesis_settings(deadline=None, max_examples=1000)
    @given(
        st.floats(min_value=0, max_value=1e20, exclude_min=True),
        st.sampled_from([64, 200]),
    )
    def test_residual_contract(self, x, precision):
        report = oracle.solve_w(x, precision)
        self.assertLessEqual(report.residual, power_of_two(12 - precision))

    def test_increasing(self):
        roots = [
            oracle.solve_w(x, PRECISION).root
            for x in ('0.5', 1, 2, mpmath.e, 10, 1000, '1e10')
        ]
        self.assertEqual(roots, sorted(set(roots)))

    def test_doubling_precision(self):
        coarse = oracle.solve_w('10', 100).root
        fine = oracle.solve_w('10', 200).root
        self.assertTrue(close(coarse, fine, 100 - 12))

    @override_settings(ORACLE_MAX_ITERATIONS=0)
    def test_gives_up_with_trace(self):
        with self.assertRaises(SolverError) as caught:
            oracle.solve_w(2, PRECISION)
        self.assertTrue(caught.exception.trace)


class SolvePhiTests(SimpleTestCase):
    @hypothesis_settings(deadline=None, max_examples=30)
    @given(st.floats(min_value=1e-3, max_value=1e15))
    def test_alpha_one_is_w(self, x):
        self.assertTrue(close(
            oracle.solve_phi(x, 1, PRECISION).root,
            oracle.solve_w(x, PRECISION).root,
            PRECISION - 16,
        ))

    def test_alpha_two(self):
        report = oracle.solve_phi(100, 2, PRECISION)
        with mpmath.workprec(PRECISION + 32):
            expected = 2 * mpmath.lambertw(mpmath.sqrt(100) / 2).real
        self.assertTrue(close(report.root, expected, PRECISION - 8))

    def test_phi_two_at_four_e_squared(self):
        with mpmath.workprec(PRECISION):
            x = 4 * mpmath.e ** 2
        self.assertTrue(close(oracle.solve_phi(x, 2, PRECISION).root, 2, PRECISION - 8))

    def test_alpha_zero(self):
        with mpmath.workprec(PRECISION):
            expected = mpmath.log(10)
        self.assertTrue(close(oracle.solve_phi(10, 0, PRECISION).root, expected, PRECISION - 4))
        with self.assertRaises(DomainError):
            oracle.solve_phi('0.5', 0, PRECISION)

    def test_negative_alpha(self):
        report = oracle.solve_phi(10, -1, PRECISION)
        with mpmath.workprec(PRECISION):
            self.assertGreater(report.root, 1)
            self.assertTrue(close(mpmath.exp(report.root) / report.root, 10, PRECISION - 12))
        with self.assertRaises(DomainError):
            oracle.solve_phi(2, -1, PRECISION)

    def test_negative_alpha_example(self):
        with mpmath.workprec(PRECISION):
            x = 2 * mpmath.e
        report = oracle.solve_phi(x, -1, PRECISION)
        with mpmath.workprec(PRECISION):
            self.assertTrue(close(mpmath.exp(report.root) / report.root, x, PRECISION - 12))

    def test_zero_and_negative_x(self):
        self.assertEqual(oracle.solve_phi(0, 2, PRECISION).root, 0)
        with self.assertRaises(DomainError):
            oracle.solve_phi(-3, 2, PRECISION)


class SolveShiftTests(SimpleTestCase):
    def test_root_satisfies_equation(self):
        report = oracle.solve_shift('0.3', '0.5', PRECISION)
        with mpmath.workprec(PRECISION):
            sigma, tau = mpmath.mpf('0.3'), mpmath.mpf('0.5')
            self.assertTrue(0 < report.root < tau / sigma)
            value = 1 - mpmath.exp(-report.root) + sigma * report.root - tau
        self.assertLessEqual(abs(value), power_of_two(12 - PRECISION))

    def test_negative_tau(self):
        report = oracle.solve_shift('0.5', '-1', PRECISION)
        self.assertLess(report.root, 0)

    def test_tiny_tau_keeps_relative_precision(self):
        for text in ('1e-20', '1e-40', '1e-60', '1e-157'):
            report = oracle.solve_shift('0.5', text, PRECISION)
            with mpmath.workprec(2 * PRECISION):
                sigma, tau = mpmath.mpf('0.5'), mpmath.mpf(text)
                # w = tau u with u of order one
                scaled = mpmath.findroot(
                    lambda u: (sigma * tau * u - mpmath.expm1(-tau * u)) / tau - 1,
                    1 / (1 + sigma),
                )
                error = abs(report.root / (tau * scaled) - 1)
            self.assertLess(error, power_of_two(8 - PRECISION), text)

    def test_tau_zero(self):
        self.assertEqual(oracle.solve_shift('0.3', 0, PRECISION).root, 0)

    def test_sigma_must_be_positive(self):
        with self.assertRaises(DomainError):
            oracle.solve_shift(0, '0.5', PRECISION)


class TaylorCoefficientTests(SimpleTestCase):
    def test_leading_coefficients(self):
        coefficients = oracle.taylor_coeffs_at_e(3, PRECISION)
        with mpmath.workprec(PRECISION):
            e = +mpmath.e
            self.assertEqual(coefficients[0], 1)
            self.assertTrue(close(coefficients[1], 1 / (2 * e), PRECISION - 4))
            self.assertTrue(close(coefficients[2], -3 / (16 * e ** 2), PRECISION - 4))

    def test_matches_mpmath_derivatives(self):
        coefficients = oracle.taylor_coeffs_at_e(6, 128)
        with mpmath.workprec(160):
            expected = mpmath.taylor(lambda x: mpmath.lambertw(x).real, mpmath.e, 5)
        for got, want in zip(coefficients, expected):
            self.assertTrue(close(got, want, 80))

    def test_bounds(self):
        self.assertEqual(oracle.taylor_coeffs_at_e(0, PRECISION), [])
        with self.assertRaises(ValueError):
            oracle.taylor_coeffs_at_e(13, PRECISION)
