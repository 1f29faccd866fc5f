import csv
import io
import math
import tempfile
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.geometry.layout import standard_layout
from apps.hamiltonian.builders import adjacent_swap, concatenate
from apps.hamiltonian.evaluation import evaluate
from apps.hamiltonian.parser import parse

from .exceptions import FlowError
from .preservation import compose_permutations, link_preservation_check
from .separation import strand_separation
from .trajectory import dump_trajectories_csv, integrate, integrate_batch

ROTATION = '(x^2 + y^2)/2'
TRANSLATION = '0.3*y*bump(x^2+y^2, 1/4, 9/10)'


def triangle_area(p, q, r):
    return 0.5 * abs((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


class IntegrateTests(SimpleTestCase):

    def test_rotation_closed_form(self):
        trajectory = integrate(parse(ROTATION), (1.0, 0.0))
        x, y = trajectory.end
        self.assertLess(abs(x - math.cos(1.0)), 1e-8)
        self.assertLess(abs(y + math.sin(1.0)), 1e-8)
        self.assertEqual(trajectory.times[0], 0.0)
        self.assertEqual(trajectory.times[-1], 1.0)

    def test_dense_output_matches_closed_form(self):
        trajectory = integrate(parse(ROTATION), (0.5, 0.0))
        ts = np.linspace(0, 1, 37)
        expected = np.column_stack([0.5 * np.cos(ts), -0.5 * np.sin(ts)])
        np.testing.assert_allclose(trajectory.at(ts), expected, atol=1e-8)

    def test_dense_output_continuous_at_steps(self):
        trajectory = integrate(parse(ROTATION), (0.5, 0.2))
        for t, state in zip(trajectory.times, trajectory.states):
            self.assertLess(np.max(np.abs(trajectory.at(t) - state)), 1e-9)

    def test_zero_hamiltonian(self):
        trajectory = integrate(parse('0'), (0.3, -0.2))
        self.assertEqual(trajectory.end, (0.3, -0.2))

    def test_energy_conserved_for_autonomous_swap(self):
        H = adjacent_swap(standard_layout(2, 0), 1)
        start = (0.9 * math.cos(0.4), 0.9 * math.sin(0.4))
        trajectory = integrate(H, start)
        self.assertLess(abs(evaluate(H, 1, *trajectory.end) - evaluate(H, 0, *start)), 1e-7)

    def test_step_halving_consistency(self):
        H = parse('sin(3*t)*x*y*bump(x^2+y^2, 1/4, 4/5) + (x^2+y^2)/2*bump(x^2+y^2, 1/4, 4/5)')
        coarse = integrate(H, (0.4, 0.1), rtol=1e-8, atol=1e-8)
        fine = integrate(H, (0.4, 0.1), rtol=5e-9, atol=5e-9)
        drift = np.hypot(coarse.end[0] - fine.end[0], coarse.end[1] - fine.end[1])
        self.assertLess(drift, 10 * fine.error_estimate)

    def test_area_preserved(self):
        H = parse('(x^2 + 2*x*y + 3*y^2)/2')
        corners = [(0.1, 0.1), (0.101, 0.1), (0.1, 0.101)]
        images = [trajectory.end for trajectory in integrate_batch(H, corners)]
        before, after = triangle_area(*corners), triangle_area(*images)
        self.assertLess(abs(after - before) / before, 1e-5)

    def test_start_outside_disk(self):
        with self.assertRaises(FlowError):
            integrate(parse('0'), (1.5, 0.0))

    def test_escape_from_disk(self):
        with self.assertRaises(FlowError):
            integrate(parse('x'), (0.0, -0.5))

    def test_rejects_bad_tolerance(self):
        with self.assertRaises(ValueError):
            integrate(parse('0'), (0.0, 0.0), rtol=0)


class PreservationTests(SimpleTestCase):

    def test_identity(self):
        report = link_preservation_check(parse('0'), standard_layout(2, 0))
        self.assertTrue(report.preserved)
        self.assertEqual(report.sigma, (1, 2))
        self.assertLess(report.max_deviation, 1e-12)

    def test_swap_exchanges_components(self):
        layout = standard_layout(2, 0)
        report = link_preservation_check(adjacent_swap(layout, 1), layout)
        self.assertTrue(report.preserved)
        self.assertEqual(report.sigma, (2, 1))
        self.assertLess(report.max_deviation, 1e-6)

    def test_translation_breaks_the_link(self):
        report = link_preservation_check(parse(TRANSLATION), standard_layout(2, 0))
        self.assertFalse(report.preserved)
        self.assertIsNone(report.sigma)
        self.assertGreater(report.max_deviation, 1e-6)

    def test_rejects_too_few_samples(self):
        with self.assertRaises(ValueError):
            link_preservation_check(parse('0'), standard_layout(2, 0), samples_per_circle=4)

    def test_concatenated_flows_compose_permutations(self):
        layout = standard_layout(3, 0)
        first, second = adjacent_swap(layout, 1), adjacent_swap(layout, 2)
        sigma_first = link_preservation_check(first, layout).sigma
        sigma_second = link_preservation_check(second, layout).sigma
        self.assertEqual(sigma_first, (2, 1, 3))
        self.assertEqual(sigma_second, (1, 3, 2))
        report = link_preservation_check(concatenate([first, second]), layout)
        self.assertTrue(report.preserved)
        self.assertEqual(report.sigma, compose_permutations(sigma_first, sigma_second))
        self.assertEqual(report.sigma, (3, 1, 2))

    def test_compose_permutations(self):
        self.assertEqual(compose_permutations((2, 1, 3), (2, 1, 3)), (1, 2, 3))
        with self.assertRaises(ValueError):
            compose_permutations((1, 2), (1, 2, 3))


class SeparationTests(SimpleTestCase):

    def test_stationary_points(self):
        strands = integrate_batch(parse('0'), [(0.1, 0.0), (0.4, 0.0)])
        self.assertAlmostEqual(strand_separation(strands), 0.3, places=12)

    def test_rigid_rotation(self):
        strands = integrate_batch(parse(ROTATION), [(0.5, 0.0), (-0.2, 0.0), (0.0, 0.6)])
        self.assertLess(abs(strand_separation(strands) - math.hypot(0.2, 0.6)), 1e-9)

    def test_coincident(self):
        strands = integrate_batch(parse(ROTATION), [(0.5, 0.0), (0.5, 0.0)])
        self.assertEqual(strand_separation(strands), 0.0)

    def test_needs_two(self):
        with self.assertRaises(ValueError):
            strand_separation(integrate_batch(parse('0'), [(0.0, 0.0)]))


class DumpTests(SimpleTestCase):

    def test_csv_columns(self):
        strands = integrate_batch(parse(ROTATION), [(0.5, 0.0), (0.0, 0.5)])
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'strands.csv'
            dump_trajectories_csv(strands, path)
            with path.open() as handle:
                rows = list(csv.reader(handle))
        self.assertEqual(rows[0], ['strand', 't', 'x', 'y'])
        self.assertEqual(len(rows), 1 + 2 * len(strands[0].times))
        self.assertEqual(rows[1][:3], ['1', '0.0', '0.5'])


class FlowCommandTests(SimpleTestCase):

    def test_identity(self):
        out = io.StringIO()
        call_command('flow', hamiltonian='0', k=2, stdout=out)
        self.assertIn('preserved: true', out.getvalue())
        self.assertIn('sigma: 1 2', out.getvalue())

    def test_not_preserved(self):
        with self.assertRaises(CommandError):
            call_command('flow', hamiltonian=TRANSLATION, k=2, stdout=io.StringIO())

    def test_dump_trajectories(self):
        H = str(adjacent_swap(standard_layout(2, 0), 1))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'out.csv'
            out = io.StringIO()
            call_command('flow', hamiltonian=H, k=2, dump_trajectories=str(path), stdout=out)
            self.assertIn('sigma: 2 1', out.getvalue())
            self.assertTrue(path.read_text().startswith('strand,t,x,y'))
