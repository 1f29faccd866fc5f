import bisect
import io
import json
import math
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from .exceptions import AdmissibilityError, LayoutError
from .layout import (
    Circle, LinkLayout, check_admissible, lambda_gap, link_hull_radius, proof_constants,
    stability_threshold, standard_layout, swap_support,
)
from .loaders import layout_from_data, layout_to_data

F = Fraction


def lattice_minimum(areas, bound):
    """Smallest positive |sum a_i A_i| with |a_i| <= bound, by meet-in-the-middle search."""
    q = 1
    for a in areas:
        q = q * a.denominator // math.gcd(q, a.denominator)
    numerators = [int(a * q) for a in areas]
    half = len(numerators) // 2

    def sums(values):
        reachable = {0}
        for n in values:
            reachable = {s + c * n for s in reachable for c in range(-bound, bound + 1)}
        return reachable

    left = sums(numerators[:half])
    right = sorted(sums(numerators[half:]))
    best = None
    for s in left:
        pos = bisect.bisect_left(right, -s)
        for idx in (pos - 2, pos - 1, pos, pos + 1, pos + 2):
            if 0 <= idx < len(right):
                total = abs(s + right[idx])
                if total and (best is None or total < best):
                    best = total
    return F(best, q)


def row_layout(areas, k=2, eta=0):
    circles = [Circle(center=(F(2 * i - k + 1, 2 * k + 2), F(0)), radius=F(1, 4 * k + 4)) for i in range(k)]
    return LinkLayout(k=k, eta=F(eta), circles=circles, areas=areas)


class AdmissibilityTests(SimpleTestCase):

    def test_two_components_equal_thirds(self):
        report = check_admissible(row_layout([F(1, 3)] * 3))
        self.assertTrue(report.admissible)
        self.assertEqual(report.lambda_, F(1, 3))
        self.assertEqual(report.violations, [])
        self.assertTrue(report.surjective_setting)

    def test_three_components_with_eta(self):
        layout = row_layout([F(5, 16)] * 3 + [F(1, 16)], k=3, eta=F(1, 16))
        report = check_admissible(layout)
        self.assertTrue(report.admissible)
        self.assertEqual(report.lambda_, F(5, 16))

    def test_unequal_areas_are_reported(self):
        report = check_admissible(row_layout([F(1, 2), F(1, 4), F(1, 4)]))
        self.assertFalse(report.admissible)
        self.assertFalse(report.surjective_setting)
        self.assertTrue(report.violations)

    def test_normalization_identity_holds_for_admissible_layouts(self):
        for k in range(1, 6):
            for eta in (F(0), F(1, 16), F(1, 40)):
                if 2 * eta * k * (k - 1) >= 1:
                    with self.assertRaises(LayoutError):
                        standard_layout(k, eta)
                    continue
                layout = standard_layout(k, eta)
                report = check_admissible(layout)
                self.assertTrue(report.admissible, report.violations)
                self.assertEqual((k + 1) * report.lambda_, 1 + 2 * eta * (k - 1))


class LambdaGapTests(SimpleTestCase):

    def test_examples(self):
        self.assertEqual(lambda_gap([F(1, 3)] * 3), F(1, 6))
        self.assertEqual(lambda_gap([F(5, 16)] * 3 + [F(1, 16)]), F(1, 32))
        self.assertEqual(lambda_gap([F(1, 2), F(1, 2)]), F(1, 4))

    def test_matches_lattice_oracle_on_random_vectors(self):
        rng = np.random.default_rng(20240517)
        for _ in range(100):
            size = int(rng.integers(2, 7))
            # over a common denominator the numerators stay <= 12, so some
            # combination with coefficients in [-12, 12] reaches their gcd
            denominator = int(rng.integers(1, 65))
            numerators = rng.integers(1, 13, size=size)
            areas = [F(int(n), denominator) for n in numerators]
            self.assertEqual(lattice_minimum(areas, 12), 2 * lambda_gap(areas), areas)

    def test_every_combination_is_a_multiple_of_twice_the_gap(self):
        areas = [F(3, 8), F(5, 12), F(1, 6)]
        gap = lambda_gap(areas)
        rng = np.random.default_rng(3)
        for _ in range(50):
            coeffs = rng.integers(-20, 21, size=len(areas))
            total = sum(int(c) * a for c, a in zip(coeffs, areas))
            self.assertEqual((total / (2 * gap)).denominator, 1)

    def test_scaling_areas_scales_gap(self):
        areas = [F(1, 3), F(1, 3), F(1, 3)]
        for c in (F(2), F(3, 7), F(11, 5)):
            self.assertEqual(lambda_gap([c * a for a in areas]), c * lambda_gap(areas))

    def test_rejects_nonpositive(self):
        with self.assertRaises(LayoutError):
            lambda_gap([F(1, 2), F(0)])


class ThresholdTests(SimpleTestCase):

    def test_two_components(self):
        result = stability_threshold(standard_layout(2, 0))
        self.assertEqual(result['epsilon_L'], F(1, 1800))
        self.assertEqual(result['threshold'], F(1, 3600))

    def test_three_components_with_eta(self):
        result = stability_threshold(standard_layout(3, F(1, 16)))
        self.assertEqual(result['epsilon_L'], F(1, 9600))
        self.assertEqual(result['threshold'], F(1, 28800))

    def test_single_component(self):
        result = stability_threshold(standard_layout(1, 0))
        self.assertEqual(result['threshold'], result['epsilon_L'])

    def test_rejects_non_admissible(self):
        with self.assertRaises(AdmissibilityError):
            stability_threshold(row_layout([F(1, 2), F(1, 4), F(1, 4)]))

    def test_proof_constants(self):
        constants = proof_constants(standard_layout(2, 0))
        self.assertEqual(constants['lambda_L'], F(1, 6))
        self.assertEqual(constants['epsilon'], F(1, 600))
        self.assertEqual(constants['epsilon_L'], constants['epsilon'] / 3)
        self.assertEqual(constants['continuation_bound'], F(1, 2400))
        self.assertLess(constants['threshold'], constants['continuation_bound'])


class StandardLayoutTests(SimpleTestCase):

    def test_areas(self):
        self.assertEqual(standard_layout(2, 0).areas, (F(1, 3),) * 3)
        self.assertEqual(standard_layout(3, 0).areas, (F(1, 4),) * 4)
        self.assertEqual(standard_layout(1, 0).areas, (F(1, 2), F(1, 2)))

    def test_rejects_oversized_lambda(self):
        with self.assertRaises(LayoutError):
            standard_layout(2, F(1))

    def test_adjacent_pairs_have_swap_room(self):
        for k in range(2, 7):
            layout = standard_layout(k, 0)
            for i in range(1, k):
                support = swap_support(layout, i, i + 1)
                self.assertLess(support.inner, support.outer)
            self.assertLess(link_hull_radius(layout), 1)

    def test_invariant_violations(self):
        with self.assertRaises(LayoutError):
            row_layout([F(1, 3), F(1, 3), F(1, 2)])
        with self.assertRaises(LayoutError):
            LinkLayout(
                k=2, eta=F(0),
                circles=[Circle((F(0), F(0)), F(1, 4)), Circle((F(1, 4), F(0)), F(1, 4))],
                areas=[F(1, 3)] * 3,
            )
        with self.assertRaises(LayoutError):
            LinkLayout(k=1, eta=F(0), circles=[Circle((F(9, 10), F(0)), F(1, 5))], areas=[F(1, 2)] * 2)


class LayoutJsonTests(SimpleTestCase):

    def test_round_trip(self):
        layout = standard_layout(3, F(1, 16))
        data = json.loads(json.dumps(layout_to_data(layout)))
        self.assertEqual(data['eta'], '1/16')
        self.assertEqual(layout_from_data(data), layout)

    def test_float_areas_rejected(self):
        data = json.loads(json.dumps(layout_to_data(standard_layout(2, 0))))
        data['areas'] = [1 / 3, 1 / 3, 1 / 3]
        with self.assertRaises(LayoutError):
            layout_from_data(data)


class LinkCommandTests(SimpleTestCase):

    def test_prints_threshold(self):
        out = io.StringIO()
        call_command('link', k=2, eta='0', stdout=out)
        self.assertIn('threshold: 1/3600', out.getvalue())
        self.assertIn('lambda_L: 1/6', out.getvalue())

    def test_writes_layout(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'layout.json'
            call_command('link', k=3, eta='1/16', out=str(path), stdout=io.StringIO())
            out = io.StringIO()
            call_command('link', config=str(path), stdout=out)
            self.assertIn('threshold: 1/28800', out.getvalue())

    def test_non_admissible_layout_fails(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'layout.json'
            data = layout_to_data(row_layout([F(1, 2), F(1, 4), F(1, 4)]))
            path.write_text(json.dumps(data))
            with self.assertRaises(CommandError):
                call_command('link', config=str(path), stdout=io.StringIO())
