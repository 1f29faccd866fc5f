import io
import math
import tempfile
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.flow.preservation import link_preservation_check
from apps.flow.trajectory import integrate_batch
from apps.geometry.layout import basepoints, standard_layout, swap_support
from apps.hamiltonian.builders import adjacent_swap, concatenate, rotation
from apps.hamiltonian.parser import parse

from .exceptions import ExtractionError, StrandCountError
from .extraction import ClosureSpec, extract_braid, frame_sweep
from .garside import equal, normal_form, normal_form_to_json, normal_form_to_word
from .loaders import load_word
from .permutations import (
    all_perms,
    complement_of_generator,
    compose_perm,
    delta,
    finishing_descents,
    finishing_set,
    generator_perm,
    identity_perm,
    length,
    reduced_word,
    starting_descents,
    starting_set,
    tau,
)
from .rendering import render_svg, render_trajectories_svg, render_word_svg
from .words import BraidWord, compose, exponent_sum, free_reduce, invert, parse_word, word_to_json


def w(k, *letters):
    return parse_word(k, letters)


def random_word(rng, k, max_length=10):
    n = int(rng.integers(0, max_length + 1))
    return BraidWord(k, tuple((int(rng.integers(1, k)), int(rng.choice([-1, 1]))) for _ in range(n)))


def rewrite(word, rng):
    """Apply one braid-group relation at a random place, in either direction."""
    k, letters = word.k, list(word.letters)
    moves = []
    for p in range(len(letters) + 1):
        moves.append(('insert', p))
    for p in range(len(letters) - 1):
        (i, s), (j, t) = letters[p], letters[p + 1]
        if i == j and s == -t:
            moves.append(('cancel', p))
        if abs(i - j) >= 2:
            moves.append(('commute', p))
    for p in range(len(letters) - 2):
        (i, s), (j, t), (m, u) = letters[p:p + 3]
        if s == t == u and i == m and abs(i - j) == 1:
            moves.append(('braid', p))
    kind, p = moves[int(rng.integers(len(moves)))]
    if kind == 'insert':
        i, s = int(rng.integers(1, k)), int(rng.choice([-1, 1]))
        letters[p:p] = [(i, s), (i, -s)]
    elif kind == 'cancel':
        del letters[p:p + 2]
    elif kind == 'commute':
        letters[p], letters[p + 1] = letters[p + 1], letters[p]
    else:
        (i, s), (j, _), _ = letters[p:p + 3]
        letters[p:p + 3] = [(j, s), (i, s), (j, s)]
    return BraidWord(k, tuple(letters))


class WordTests(SimpleTestCase):

    def test_compose_with_inverse_reduces_to_identity(self):
        a = w(3, 1)
        self.assertEqual(free_reduce(compose(a, invert(a))), BraidWord(3))

    def test_invert_reverses_and_flips(self):
        self.assertEqual(invert(w(3, 1, 2)), w(3, -2, -1))

    def test_free_reduce(self):
        self.assertEqual(free_reduce(w(3, 1, 2, -2, 1)), w(3, 1, 1))
        self.assertEqual(free_reduce(w(3, 1, 2, -2, -1)), BraidWord(3))

    def test_json_letters(self):
        self.assertEqual(word_to_json(w(3, 1, -2, 1)), [1, -2, 1])
        self.assertEqual(exponent_sum(w(3, 1, -2, 1)), 1)

    def test_rejects_bad_letters(self):
        with self.assertRaises(ValueError):
            parse_word(3, [0])
        with self.assertRaises(StrandCountError):
            parse_word(3, [3])

    def test_mismatched_strand_counts(self):
        with self.assertRaises(StrandCountError):
            compose(w(2, 1), w(3, 1))

    def test_load_word_infers_strands(self):
        self.assertEqual(load_word('[1, -2, 1]').k, 3)
        self.assertEqual(load_word('[]').k, 1)
        with self.assertRaises(ValueError):
            load_word('1, 2')


class PermutationTests(SimpleTestCase):

    def test_descent_shortcuts_match_divisibility(self):
        for k in range(2, 6):
            for perm in all_perms(k):
                self.assertEqual(starting_descents(perm), starting_set(perm), perm)
                self.assertEqual(finishing_descents(perm), finishing_set(perm), perm)

    def test_delta(self):
        for k in range(1, 6):
            self.assertEqual(length(delta(k)), k * (k - 1) // 2)
            self.assertEqual(starting_set(delta(k)), frozenset(range(1, k)))

    def test_tau_swaps_generators(self):
        k = 5
        for j in range(1, k):
            self.assertEqual(tau(generator_perm(k, j)), generator_perm(k, k - j))
        for perm in all_perms(4):
            self.assertEqual(tau(tau(perm)), perm)

    def test_complement_of_generator(self):
        for k in range(2, 6):
            for i in range(1, k):
                y = complement_of_generator(k, i)
                self.assertEqual(compose_perm(y, generator_perm(k, i)), delta(k))
                self.assertEqual(length(y) + 1, length(delta(k)))

    def test_reduced_word_rebuilds_permutation(self):
        for perm in all_perms(4):
            letters = reduced_word(perm)
            self.assertEqual(len(letters), length(perm))
            rebuilt = identity_perm(4)
            for j in letters:
                rebuilt = compose_perm(rebuilt, generator_perm(4, j))
            self.assertEqual(rebuilt, perm)


class NormalFormTests(SimpleTestCase):

    def test_cancellation(self):
        form = normal_form(w(2, 1, -1))
        self.assertEqual((form.inf, form.factors), (0, ()))

    def test_braid_relation(self):
        self.assertEqual(normal_form(w(3, 1, 2, 1)), normal_form(w(3, 2, 1, 2)))
        self.assertTrue(equal(w(3, 1, 2, 1), w(3, 2, 1, 2)))
        self.assertEqual(normal_form(w(3, 1, 2, 1)).inf, 1)

    def test_far_commutation(self):
        self.assertTrue(equal(w(4, 1, 3), w(4, 3, 1)))

    def test_full_twist_is_central(self):
        full_twist = w(3, 1, 2, 1, 1, 2, 1)
        for j in (1, 2, -1, -2):
            x = w(3, j)
            self.assertTrue(equal(compose(full_twist, x), compose(x, full_twist)))

    def test_noncommuting_neighbours(self):
        self.assertFalse(equal(w(3, 1, 2), w(3, 2, 1)))

    def test_negative_generator_in_b2(self):
        form = normal_form(w(2, -1))
        self.assertEqual(form.inf, -1)
        self.assertEqual(form.factors, ())

    def test_generator_and_inverse_differ(self):
        self.assertFalse(equal(w(2, 1), w(2, -1)))
        self.assertEqual(normal_form(w(2, 1)).inf, 1)

    def test_json(self):
        self.assertEqual(normal_form_to_json(normal_form(w(3, 1, 2))), {'inf': 0, 'factors': [[3, 1, 2]]})

    def test_mismatched_strand_counts(self):
        with self.assertRaises(StrandCountError):
            equal(w(2, 1), w(3, 1))

    def test_left_weighted(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            k = int(rng.integers(2, 6))
            form = normal_form(random_word(rng, k, 12))
            for factor in form.factors:
                self.assertNotIn(factor, (identity_perm(k), delta(k)))
            for a, b in zip(form.factors, form.factors[1:]):
                self.assertLessEqual(starting_set(b), finishing_set(a))

    def test_word_of_normal_form(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            word = random_word(rng, int(rng.integers(2, 5)))
            form = normal_form(word)
            self.assertEqual(normal_form(normal_form_to_word(form)), form)
            self.assertTrue(equal(word, normal_form_to_word(form)))

    def test_free_reduction_preserves_element(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            word = random_word(rng, int(rng.integers(2, 5)))
            self.assertTrue(equal(word, free_reduce(word)))

    def test_agrees_with_rewrite_oracle(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            k = int(rng.integers(2, 5))
            a = random_word(rng, k)
            b = a
            for _ in range(int(rng.integers(1, 6))):
                b = rewrite(b, rng)
            self.assertTrue(equal(a, b), (a, b))
            self.assertEqual(exponent_sum(a), exponent_sum(b))

    def test_exponent_sum_separates(self):
        rng = np.random.default_rng(7)
        checked = 0
        for _ in range(300):
            k = int(rng.integers(2, 5))
            a, b = random_word(rng, k), random_word(rng, k)
            if exponent_sum(a) != exponent_sum(b):
                self.assertFalse(equal(a, b))
                checked += 1
        self.assertGreater(checked, 100)


class ExtractionTests(SimpleTestCase):

    def flow(self, H, layout):
        report = link_preservation_check(H, layout)
        self.assertTrue(report.preserved)
        return integrate_batch(H, basepoints(layout)), report.sigma

    def test_stationary_strands(self):
        layout = standard_layout(2, 0)
        strands, sigma = self.flow(parse('0'), layout)
        self.assertEqual(extract_braid(strands, layout, sigma), BraidWord(2))

    def test_half_turn_is_positive_generator(self):
        layout = standard_layout(2, 0)
        strands, sigma = self.flow(adjacent_swap(layout, 1), layout)
        self.assertEqual(sigma, (2, 1))
        self.assertEqual(extract_braid(strands, layout, sigma), w(2, 1))

    def test_clockwise_half_turn_is_negative_generator(self):
        layout = standard_layout(2, 0)
        strands, sigma = self.flow(adjacent_swap(layout, 1, sign=-1), layout)
        self.assertEqual(extract_braid(strands, layout, sigma), w(2, -1))

    def test_full_twist(self):
        layout = standard_layout(2, 0)
        support = swap_support(layout, 1, 2)
        H = rotation(support.center, support.inner, support.outer, 2 * math.pi)
        strands, sigma = self.flow(H, layout)
        self.assertEqual(sigma, (1, 2))
        self.assertEqual(extract_braid(strands, layout, sigma), w(2, 1, 1))

    def test_projection_invariance(self):
        layout = standard_layout(3, 0)
        H = concatenate([adjacent_swap(layout, 1), adjacent_swap(layout, 2)])
        strands, sigma = self.flow(H, layout)
        expected = w(3, 1, 2)
        for angle in np.random.default_rng(8).uniform(0, 2 * math.pi, 8):
            self.assertTrue(equal(extract_braid(strands, layout, sigma, projection_angle=float(angle)), expected))

    def test_closure_invariance(self):
        layout = standard_layout(2, 0)
        strands, sigma = self.flow(adjacent_swap(layout, 1), layout)
        words = [
            extract_braid(strands, layout, sigma, ClosureSpec(orientation), projection_angle=0.7)
            for orientation in ('shorter', 'ccw', 'cw')
        ]
        for word in words:
            self.assertTrue(equal(word, w(2, 1)))

    def test_functoriality(self):
        layout = standard_layout(3, 0)
        first, second = adjacent_swap(layout, 1), adjacent_swap(layout, 2)
        strands, sigma = self.flow(first, layout)
        a = extract_braid(strands, layout, sigma)
        strands, sigma = self.flow(second, layout)
        b = extract_braid(strands, layout, sigma)
        strands, sigma = self.flow(concatenate([first, second]), layout)
        self.assertTrue(equal(extract_braid(strands, layout, sigma), compose(a, b)))

    def test_strand_count_mismatch(self):
        layout = standard_layout(2, 0)
        strands, _ = self.flow(parse('0'), layout)
        with self.assertRaises(StrandCountError):
            extract_braid(strands[:1], layout, (1, 2))

    def test_wrong_target_circles(self):
        layout = standard_layout(2, 0)
        strands, _ = self.flow(adjacent_swap(layout, 1), layout)
        with self.assertRaises(ExtractionError):
            extract_braid(strands, layout, (1, 2))

    def test_frame_sweep_through_collinear_points(self):
        points = [(-0.5, 0.0), (0.0, 0.0), (0.5, 0.0)]
        self.assertEqual(frame_sweep(points, 0.0, 2.0), w(3, -1, -2, -1))
        self.assertEqual(frame_sweep(points, 0.0, -2.0), w(3, 1, 2, 1))
        self.assertEqual(frame_sweep(points, 0.0, 1.0), BraidWord(3))


class RenderTests(SimpleTestCase):

    def test_identity_word(self):
        svg = render_word_svg(BraidWord(3))
        self.assertEqual(svg.count('<path'), 3)
        self.assertNotIn('stroke="white"', svg)

    def test_single_crossing_draws_rightward_strand_over(self):
        svg = render_word_svg(w(2, 1))
        paths = [chunk for chunk in svg.split('<path')[1:]]
        self.assertEqual(len(paths), 3)
        self.assertIn('white', paths[1])
        self.assertIn('black', paths[2])

    def test_two_crossings(self):
        svg = render_word_svg(w(2, 1, 1))
        self.assertEqual(svg.count('<path'), 6)
        self.assertEqual(svg.count('stroke="white"'), 2)

    def test_deterministic(self):
        self.assertEqual(render_word_svg(w(3, 1, -2, 1)), render_word_svg(w(3, 1, -2, 1)))

    def test_render_svg_dispatches_on_source(self):
        self.assertEqual(render_svg(w(2, 1)), render_word_svg(w(2, 1)))
        with self.assertRaises(TypeError):
            render_svg(w(2, 1), sigma=(2, 1))

    def test_trajectory_diagram(self):
        layout = standard_layout(2, 0)
        H = adjacent_swap(layout, 1)
        strands = integrate_batch(H, basepoints(layout))
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'flow.svg'
            svg = render_trajectories_svg(strands, layout, (2, 1), samples=50, path=str(path))
            self.assertTrue(path.exists())
        self.assertIn('<line', svg)


class BraidCommandTests(SimpleTestCase):

    def run_command(self, *args, **kwargs):
        out = io.StringIO()
        call_command('braid', *args, stdout=out, **kwargs)
        return out.getvalue()

    def test_compare_equal(self):
        self.assertEqual(self.run_command('compare', a='[1,2,1]', b='[2,1,2]').strip(), 'equal')

    def test_compare_not_equal(self):
        self.assertIn('not equal', self.run_command('compare', a='[1,2]', b='[2,1]'))

    def test_normalize(self):
        self.assertIn('inf: -1', self.run_command('normalize', a='[-1]'))

    def test_missing_word(self):
        with self.assertRaises(CommandError):
            self.run_command('compare', a='[1]')

    def test_bad_word(self):
        with self.assertRaises(CommandError):
            self.run_command('normalize', a='[0]')

    def test_extract(self):
        H = str(adjacent_swap(standard_layout(2, 0), 1))
        out = self.run_command('extract', hamiltonian=H, k=2)
        self.assertIn('sigma: 2 1', out)
        self.assertIn('word: [1]', out)

    def test_render_word(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'word.svg'
            call_command('render', word='[1, 1]', out=str(path), stdout=io.StringIO())
            self.assertIn('<svg', path.read_text())
