import io
import math
import tempfile
import warnings
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.geometry.layout import standard_layout, swap_support

from .builders import (
    BumpSite, adjacent_swap, difference, perturbation, plateau_bump, rotation, scaled, sum_of,
    _unit_window_integral, time_window,
)
from .evaluation import check_support, derivative_check, evaluate, gradient, vector_field
from .exceptions import EvaluationError, ParseError, SupportError
from .expressions import BinOp, Bump
from .hofer import hofer_norm
from .parser import parse

F = Fraction

BUMP = '2*bump(x^2+y^2, 1/4, 1/2)'
OSCILLATING = 'sin(2*3.141592653589793*t)*bump(x^2+y^2, 1/4, 1/2)'


class ParseTests(SimpleTestCase):

    def test_product_root(self):
        H = parse('0.5*sin(t)*bump(x^2+y^2, 4/5, 9/10)')
        self.assertIsInstance(H.root, BinOp)
        self.assertEqual(H.root.op, '*')
        self.assertIsInstance(H.root.right, Bump)
        self.assertEqual((H.root.right.a, H.root.right.b), (F(4, 5), F(9, 10)))

    def test_syntax_error_offset(self):
        with self.assertRaises(ParseError) as ctx:
            parse('x +* y')
        self.assertEqual(ctx.exception.offset, 3)
        self.assertIn('expected one of', str(ctx.exception))

    def test_unknown_identifier(self):
        with self.assertRaises(ParseError) as ctx:
            parse('foo(x)')
        self.assertIn("'foo'", str(ctx.exception))
        self.assertEqual(ctx.exception.offset, 0)

    def test_bump_arity_and_bounds(self):
        for text in ('bump(x, 1)', 'bump(x, 1/2, 1/4)', 'bump(x, y, 1)', 'sin(x, y)'):
            with self.assertRaises(ParseError, msg=text):
                parse(text)

    def test_exponent_must_be_unsigned_integer(self):
        for text in ('x^-1', 'x^0.5', 'x^y'):
            with self.assertRaises(ParseError, msg=text):
                parse(text)

    def test_whitespace_and_precedence(self):
        self.assertEqual(evaluate(parse('  1 + 2*3^2 '), 0, 0, 0), 19.0)
        self.assertEqual(evaluate(parse('(1+2)*3'), 0, 0, 0), 9.0)
        self.assertEqual(evaluate(parse('8/2/2'), 0, 0, 0), 2.0)
        self.assertEqual(evaluate(parse('1-2-3'), 0, 0, 0), -4.0)

    def test_rendering_parses_back(self):
        texts = [
            '0.5*sin(t)*bump(x^2+y^2, 4/5, 9/10)',
            'neg(x)*exp(y/3) - cos(t)^2',
            '(x^2)^3 + 1e-05*y',
            'bump(x, neg(1/2), 1/2)',
        ]
        for text in texts:
            H = parse(text)
            self.assertEqual(parse(str(H)), H, text)

    def test_builder_rendering_parses_back(self):
        layout = standard_layout(3, 0)
        H = sum_of(adjacent_swap(layout, 1), scaled(adjacent_swap(layout, 2, sign=-1), F(1, 3)))
        self.assertEqual(parse(str(H)), H)


class EvaluateTests(SimpleTestCase):

    def test_arithmetic(self):
        self.assertEqual(evaluate(parse('x*y'), 0, 2, 3), 6.0)
        self.assertEqual(evaluate(parse('sin(t)'), 0, 0, 0), 0.0)

    def test_bump_boundary_values(self):
        H = parse('bump(x, 0, 1)')
        self.assertEqual(evaluate(H, 0, 0, 0), 1.0)
        self.assertEqual(evaluate(H, 0, 1, 0), 0.0)
        self.assertEqual(evaluate(H, 0, -3, 0), 1.0)
        self.assertEqual(evaluate(H, 0, 5, 0), 0.0)

    def test_bump_strictly_decreasing_inside(self):
        values = evaluate(parse('bump(x, 0, 1)'), 0, np.linspace(0.1, 0.9, 81), np.zeros(81))
        self.assertTrue(np.all(np.diff(values) < 0))
        self.assertTrue(np.all((values > 0) & (values < 1)))

    def test_division_by_zero_reports_subexpression(self):
        with self.assertRaises(EvaluationError) as ctx:
            evaluate(parse('1 + 1/x'), 0, 0, 0)
        self.assertEqual(ctx.exception.offset, 6)
        self.assertIn('(1 / x)', str(ctx.exception))

    def test_arrays(self):
        xs = np.array([0.0, 0.5, -0.5])
        np.testing.assert_allclose(evaluate(parse('x + 2*y'), 0, xs, xs), 3 * xs)
        np.testing.assert_array_equal(evaluate(parse('3'), 0, xs, xs), [3.0, 3.0, 3.0])


class VectorFieldTests(SimpleTestCase):

    def test_rotation_field(self):
        self.assertEqual(vector_field(parse('(x^2 + y^2)/2'), 0, 1, 0), (0.0, -1.0))

    def test_constant(self):
        self.assertEqual(vector_field(parse('3'), 0.5, 0.2, 0.1), (0.0, 0.0))

    def test_linear(self):
        for x, y in ((0.1, 0.2), (-0.5, 0.3)):
            hx, hy = vector_field(parse('x'), 0, x, y)
            self.assertEqual((hx, hy), (0.0, -1.0))

    def test_symplectic_pairing(self):
        # omega(X_H, v) = dH(v) for the basis vectors v
        H = parse('x^3*y + sin(x*y)')
        x, y = 0.3, -0.4
        X = vector_field(H, 0, x, y)
        dH = gradient(H, 0, x, y)
        for v in ((1.0, 0.0), (0.0, 1.0)):
            omega = X[0] * v[1] - X[1] * v[0]
            self.assertAlmostEqual(omega, dH[0] * v[0] + dH[1] * v[1], places=14)

    def test_divergence_free(self):
        H = parse('sin(x*y) + x^3*y - exp(x)*cos(y) + t*x*y^2')
        rng = np.random.default_rng(11)
        h = 1e-5
        for _ in range(50):
            t, x, y = rng.uniform(0, 1), rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)
            dxX = (vector_field(H, t, x + h, y)[0] - vector_field(H, t, x - h, y)[0]) / (2 * h)
            dyY = (vector_field(H, t, x, y + h)[1] - vector_field(H, t, x, y - h)[1]) / (2 * h)
            self.assertLess(abs(dxX + dyY), 1e-6)

    def test_swap_plateau_turns_counterclockwise(self):
        layout = standard_layout(2, 0)
        H = adjacent_swap(layout, 1)
        x = float(layout.circles[1].center[0])
        vx, vy = vector_field(H, 0, x, 0.0)
        self.assertAlmostEqual(vx, 0.0, places=12)
        self.assertAlmostEqual(vy, math.pi * x, places=12)


class DerivativeCheckTests(SimpleTestCase):

    def test_polynomial(self):
        self.assertLess(derivative_check(parse('x*y'), samples=100, h=1e-5), 1e-8)

    def test_constant(self):
        self.assertEqual(derivative_check(parse('7/3'), samples=20), 0.0)

    def test_bump_transition_zone(self):
        H = parse('bump(x^2+y^2, 1/4, 1/2)')
        self.assertLess(derivative_check(H, samples=100, h=1e-5, radii=(0.52, 0.69)), 1e-6)

    def test_rejects_nonpositive_step(self):
        with self.assertRaises(ValueError):
            derivative_check(parse('x'), h=0)


class HoferNormTests(SimpleTestCase):

    def assertBrackets(self, estimate, value, lower_gap):
        self.assertLessEqual(estimate.lower, value + 1e-12)
        self.assertGreaterEqual(estimate.upper, value - 1e-12)
        self.assertLess(value - estimate.lower, lower_gap)
        self.assertGreaterEqual(estimate.lower, 0)

    def test_static_bump(self):
        self.assertBrackets(hofer_norm(parse(BUMP)), 2.0, 1e-4)

    def test_zero(self):
        estimate = hofer_norm(parse('0'))
        self.assertEqual((estimate.lower, estimate.upper), (0.0, 0.0))

    def test_oscillating_bump(self):
        self.assertBrackets(hofer_norm(parse(OSCILLATING)), 2 / math.pi, 1e-3)

    def test_homogeneity(self):
        self.assertBrackets(hofer_norm(scaled(parse(BUMP), 2)), 4.0, 2e-4)
        self.assertBrackets(hofer_norm(scaled(parse(BUMP), -2)), 4.0, 2e-4)

    def test_spike_between_grid_nodes(self):
        # no node of the 64-grid lies in the support of the spike at the origin
        H = parse('bump(x^2+y^2, 0, 1/5000) + 1/2*bump((x-1/2)^2+y^2, 1/100, 1/25)')
        estimate = hofer_norm(H, t_nodes=3, grid=64)
        self.assertAlmostEqual(estimate.lower, 0.5, places=9)
        self.assertGreaterEqual(estimate.upper, 1.0)

    def test_flat_gradient_gives_exact_bounds(self):
        H = parse('1/2*bump(x^2+y^2, 1/4, 1/2) - 1/2*bump(x^2+y^2, 1/4, 1/2)')
        estimate = hofer_norm(H, t_nodes=3, grid=16)
        self.assertEqual((estimate.lower, estimate.upper), (0.0, 0.0))

    def test_width_target_doubles_the_grid(self):
        H = parse(BUMP)
        coarse = hofer_norm(H, t_nodes=3, grid=16, refine=2)
        refined = hofer_norm(H, t_nodes=3, grid=16, refine=2, width=1e-9, max_grid=64)
        self.assertEqual(coarse.grid_resolution, 16)
        self.assertEqual(refined.grid_resolution, 64)
        self.assertLess(refined.upper - refined.lower, coarse.upper - coarse.lower)
        self.assertGreaterEqual(refined.upper, 2.0 - 1e-12)

    def test_met_width_target_stops_refining(self):
        estimate = hofer_norm(parse(BUMP), t_nodes=3, grid=16, refine=2, width=100.0)
        self.assertEqual(estimate.grid_resolution, 16)

    def test_adding_zero_multiple_changes_nothing(self):
        H = parse(OSCILLATING)
        options = dict(t_nodes=17, grid=32, refine=4)
        self.assertEqual(hofer_norm(sum_of(H, scaled(H, 0)), **options), hofer_norm(H, **options))

    def test_triangle_inequality(self):
        H1, H2 = parse(BUMP), parse('x*y*cos(3*t)')
        options = dict(t_nodes=17, grid=32, refine=4)
        total = hofer_norm(sum_of(H1, H2), **options)
        self.assertLessEqual(
            total.lower,
            hofer_norm(H1, **options).upper + hofer_norm(H2, **options).upper,
        )

    def test_thread_count_does_not_change_result(self):
        H = parse(OSCILLATING)
        options = dict(t_nodes=9, grid=24, refine=3)
        self.assertEqual(hofer_norm(H, workers=1, **options), hofer_norm(H, workers=4, **options))

    def test_rejects_bad_resolution(self):
        with self.assertRaises(ValueError):
            hofer_norm(parse(BUMP), t_nodes=1)
        with self.assertRaises(ValueError):
            hofer_norm(parse(BUMP), grid=4)
        with self.assertRaises(ValueError):
            hofer_norm(parse(BUMP), width=0)


class BuilderTests(SimpleTestCase):

    def test_scaled_by_zero(self):
        H = scaled(parse(BUMP), 0)
        self.assertEqual(evaluate(H, 0.3, 0.1, 0.1), 0.0)
        self.assertEqual(hofer_norm(H).upper, 0.0)

    def test_difference_of_equal_is_zero(self):
        H = parse(OSCILLATING)
        xs = np.linspace(-0.9, 0.9, 7)
        np.testing.assert_array_equal(evaluate(difference(H, H), 0.2, xs, xs), np.zeros(7))

    def test_swap_is_compactly_supported(self):
        for k in (2, 3, 4):
            layout = standard_layout(k, 0)
            for i in range(1, k):
                check_support(adjacent_swap(layout, i))

    def test_support_check_rejects_global_function(self):
        with self.assertRaises(SupportError):
            check_support(parse('x'))

    def test_support_overflow(self):
        with self.assertRaises(SupportError):
            rotation((0, 0), F(1, 2), F(99, 100))
        with self.assertRaises(SupportError):
            rotation((F(1, 2), 0), F(1, 10), F(1, 2))
        with self.assertRaises(SupportError):
            rotation((0, 0), F(1, 2), F(1, 2))

    def test_swap_support_radius(self):
        layout = standard_layout(2, 0)
        H = adjacent_swap(layout, 1)
        self.assertAlmostEqual(H.support_radius, float(swap_support(layout, 1, 2).outer))

    def test_plateau_bump_and_perturbation(self):
        site = BumpSite(center=(F(1, 10), 0), inner=F(1, 2), outer=F(4, 5))
        bump = plateau_bump(site)
        self.assertEqual(evaluate(bump, 0, 0.1, 0.3), 1.0)
        self.assertEqual(evaluate(bump, 0, -0.75, 0.0), 0.0)
        H = parse('x*y')
        P = perturbation(H, F(1, 8000), site)
        self.assertAlmostEqual(evaluate(P, 0, 0.2, 0.1), 0.02 + 1 / 8000, places=15)
        self.assertEqual(gradient(P, 0, 0.2, 0.1), gradient(H, 0, 0.2, 0.1))

    def test_window_integral_is_quiet(self):
        _unit_window_integral.cache_clear()
        with warnings.catch_warnings():
            warnings.simplefilter('error')
            value = _unit_window_integral()
        self.assertTrue(1.0 < value < 2.0)

    def test_time_window(self):
        window = time_window(F(1, 4), F(1, 8))
        self.assertEqual(evaluate(window, 0.25, 0, 0), 1.0)
        self.assertEqual(evaluate(window, 0.30, 0, 0), 1.0)
        self.assertEqual(evaluate(window, 0.375, 0, 0), 0.0)
        self.assertEqual(evaluate(window, 0.9, 0, 0), 0.0)
        self.assertTrue(0 < evaluate(window, 0.34, 0, 0) < 1)


class HoferCommandTests(SimpleTestCase):

    def test_zero_hamiltonian(self):
        out = io.StringIO()
        call_command('hofer', hamiltonian='0', stdout=out)
        self.assertEqual(out.getvalue().strip(), '[0, 0]')

    def test_hamiltonian_from_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'H.txt'
            path.write_text(BUMP + '\n')
            out = io.StringIO()
            call_command('hofer', hamiltonian=f'@{path}', t_nodes=5, grid=16, refine=2, stdout=out)
            lower, upper = (float(v) for v in out.getvalue().strip()[1:-1].split(','))
            self.assertLessEqual(lower, 2.0 + 1e-12)
            self.assertGreaterEqual(upper, 2.0 - 1e-12)

    def test_parse_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('hofer', hamiltonian='x +* y', stdout=io.StringIO(), stderr=io.StringIO())
        self.assertIn('offset 3', str(ctx.exception))
