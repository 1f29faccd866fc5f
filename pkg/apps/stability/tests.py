import io
import itertools
import json
import math
import tempfile
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.braid.exceptions import StrandCountError
from apps.braid.extraction import extract_braid
from apps.braid.garside import equal
from apps.braid.words import BraidWord
from apps.flow.preservation import link_preservation_check
from apps.flow.trajectory import integrate_batch
from apps.geometry.layout import (
    LinkLayout, basepoints, link_hull_radius, proof_constants, standard_layout, swap_support,
)
from apps.hamiltonian.builders import BumpSite, adjacent_swap, concatenate, perturbation, plateau_bump, rotation, scaled
from apps.hamiltonian.exceptions import SupportError
from apps.hamiltonian.parser import parse

from .exceptions import PreservationError, RealizationError
from .harness import (
    ExperimentConfig, Perturbation, default_config, generate_sites, hofer_distance, hofer_distance_upper,
    run_stability, sweep_stability, window_certificate,
)
from .realization import pseudometric_lower_bound, realize_braid
from .serializers import ExperimentConfigSerializer, StabilityReportSerializer

F = Fraction


def w(k, *letters):
    return BraidWord(k, tuple((abs(v), 1 if v > 0 else -1) for v in letters))


class HoferDistanceTests(SimpleTestCase):

    def setUp(self):
        self.layout = standard_layout(2, 0)
        self.H = adjacent_swap(self.layout, 1)

    def test_identical(self):
        self.assertEqual(hofer_distance_upper(self.H, self.H), 0.0)

    def test_scaled_by_one(self):
        self.assertLess(hofer_distance_upper(self.H, scaled(self.H, 1)), 1e-12)

    def test_plateau_perturbation_brackets_delta(self):
        site = generate_sites(self.layout, np.random.default_rng(1))[0]
        delta = F(1, 8000)
        threshold = proof_constants(self.layout)['threshold']
        width = float(threshold - delta) / 2
        estimate = hofer_distance(self.H, perturbation(self.H, delta, site), width=width)
        self.assertLessEqual(estimate.lower, float(delta) + 1e-12)
        self.assertGreaterEqual(estimate.upper, float(delta) - 1e-12)
        self.assertLess(estimate.upper, float(threshold))

    def test_support_violation(self):
        with self.assertRaises(SupportError):
            hofer_distance_upper(parse('x'), parse('0'))


class WindowCertificateTests(SimpleTestCase):

    def setUp(self):
        self.layout = standard_layout(2, 0)

    def test_unperturbed(self):
        certificate = window_certificate(self.layout, 0.0)
        self.assertTrue(certificate.certified)
        self.assertEqual(certificate.skeleton.homology_dim, 4)

    def test_just_below_threshold(self):
        self.assertTrue(window_certificate(self.layout, 0.99 / 3600).certified)

    def test_far_above_threshold(self):
        certificate = window_certificate(self.layout, 1.0)
        self.assertFalse(certificate.certified)
        self.assertIn('break the shift', certificate.reason)


class GenerateSitesTests(SimpleTestCase):

    def setUp(self):
        self.layout = standard_layout(3, F(1, 16))
        self.hull = float(link_hull_radius(self.layout))
        self.limit = 0.98 + 1e-12

    def test_plateau_swallows_the_link(self):
        for site in generate_sites(self.layout, np.random.default_rng(4), count=25):
            offset = math.hypot(*(float(v) for v in site.center))
            self.assertGreaterEqual(float(site.inner), self.hull + offset)
            self.assertLessEqual(float(site.outer) + offset, self.limit)
            plateau_bump(site)

    def test_outside_the_link(self):
        for site in generate_sites(self.layout, np.random.default_rng(4), count=25, regime='outside'):
            offset = math.hypot(*(float(v) for v in site.center))
            self.assertGreater(offset - float(site.outer), self.hull)
            self.assertLess(offset + float(site.outer), self.limit)

    def test_unknown_regime(self):
        with self.assertRaises(ValueError):
            generate_sites(self.layout, np.random.default_rng(4), regime='inside')


class RunStabilityTests(SimpleTestCase):

    def test_small_plateau_perturbations_keep_the_braid(self):
        config = default_config(2, 0, trials=20, seed=2024)
        self.assertEqual(config.delta, F(1, 8000))
        report = run_stability(config)
        self.assertEqual(report.threshold, F(1, 3600))
        self.assertTrue(report.verdict)
        self.assertEqual([r.index for r in report.records], list(range(20)))
        for record in report.records:
            self.assertTrue(record.below_threshold)
            self.assertTrue(record.braid_equal)
            self.assertTrue(record.certificate)
            self.assertEqual(record.perturbed_word, w(2, 1))
            self.assertEqual(record.sigma_pair, ((2, 1), (2, 1)))

    def test_three_components(self):
        report = run_stability(default_config(3, 0, trials=20, seed=2025))
        self.assertTrue(report.verdict)
        self.assertEqual(len(report.records), 20)
        for record in report.records:
            self.assertTrue(record.below_threshold)
            self.assertEqual(record.perturbed_word, w(3, 1))

    def test_outside_regime(self):
        report = run_stability(default_config(3, 0, trials=2, seed=9, regime='outside'))
        self.assertTrue(report.verdict)
        self.assertEqual(report.records[0].base_word, w(3, 1))

    def test_zero_perturbation(self):
        config = default_config(2, 0, trials=0, seed=1)
        config = replace(config, perturbations=(Perturbation(hamiltonian=config.base_hamiltonian),), trials=1)
        (record,) = run_stability(config).records
        self.assertEqual(record.hofer_upper, 0.0)
        self.assertTrue(record.braid_equal)
        self.assertIsNone(record.delta)

    def test_large_perturbation_is_excluded(self):
        layout = standard_layout(2, 0)
        triple = concatenate([adjacent_swap(layout, 1)] * 3)
        config = replace(
            default_config(2, 0, trials=0, seed=1),
            perturbations=(Perturbation(hamiltonian=str(triple)),),
            trials=1,
        )
        report = run_stability(config)
        (record,) = report.records
        self.assertFalse(record.below_threshold)
        self.assertFalse(record.braid_equal)
        self.assertFalse(record.certificate)
        self.assertEqual(record.perturbed_word, w(2, 1, 1, 1))
        self.assertTrue(report.verdict)
        self.assertEqual(report.contradictions, [])

    def test_base_must_preserve_the_link(self):
        layout = standard_layout(2, 0)
        support = swap_support(layout, 1, 2)
        quarter = rotation(support.center, support.inner, support.outer, math.pi / 2)
        config = replace(default_config(2, 0, trials=1, seed=1), base_hamiltonian=str(quarter))
        with self.assertRaises(PreservationError):
            run_stability(config)

    def test_generated_trials_need_delta(self):
        with self.assertRaises(ValueError):
            ExperimentConfig(layout=standard_layout(2, 0), base_hamiltonian='0', seed=1, trials=2)

    def test_report_json(self):
        report = run_stability(default_config(2, 0, trials=1, seed=3))
        data = json.loads(json.dumps(StabilityReportSerializer(report).data))
        self.assertEqual(data['threshold'], '1/3600')
        self.assertEqual(data['lambda_L'], '1/6')
        self.assertEqual(data['seed'], 3)
        self.assertEqual(data['records'][0]['delta'], '1/8000')
        self.assertEqual(data['records'][0]['base_word'], {'k': 2, 'letters': [1]})
        self.assertIsInstance(data['records'][0]['hofer_upper'], str)


class SweepTests(SimpleTestCase):

    def test_plateau_sweep_survives(self):
        report = sweep_stability(default_config(2, 0, trials=1, seed=5), ['1/2', '4'])
        self.assertTrue(report.exploratory)
        self.assertEqual([e.factor for e in report.entries], [F(1, 2), F(4)])
        self.assertTrue(all(e.survived for e in report.entries))
        self.assertEqual(report.largest_stable_factor, F(4))


class RealizationTests(SimpleTestCase):

    def setUp(self):
        self.layout = standard_layout(2, 0)

    def test_identity(self):
        realization = realize_braid(BraidWord(2), self.layout)
        self.assertTrue(realization.H.root.is_constant())
        self.assertEqual(realization.hofer_upper, 0.0)

    def test_generator_and_square(self):
        single = realize_braid(w(2, 1), self.layout)
        double = realize_braid(w(2, 1, 1), self.layout)
        self.assertGreater(single.hofer_upper, 0)
        self.assertAlmostEqual(double.hofer_upper / single.hofer_upper, 2.0, delta=0.1)

    def extracted(self, word, layout):
        H = realize_braid(word, layout, verify=False, certify_norm=False).H
        preservation = link_preservation_check(H, layout)
        self.assertTrue(preservation.preserved, word)
        return extract_braid(integrate_batch(H, basepoints(layout)), layout, preservation.sigma)

    def test_round_trip_two_strands(self):
        for length in range(1, 5):
            for signs in itertools.product((1, -1), repeat=length):
                word = w(2, *signs)
                with self.subTest(word=str(word)):
                    self.assertTrue(equal(self.extracted(word, self.layout), word))

    def test_round_trip_three_strands(self):
        layout = standard_layout(3, 0)
        rng = np.random.default_rng(17)
        for _ in range(8):
            length = int(rng.integers(1, 5))
            letters = [int(rng.choice([1, 2])) * int(rng.choice([1, -1])) for _ in range(length)]
            word = w(3, *letters)
            with self.subTest(word=str(word)):
                self.assertTrue(equal(self.extracted(word, layout), word))

    def test_unequal_areas(self):
        layout = LinkLayout(
            k=2, eta=F(0), circles=self.layout.circles, areas=(F(1, 4), F(1, 2), F(1, 4)),
        )
        with self.assertRaises(RealizationError):
            realize_braid(w(2, 1), layout)

    def test_strand_count(self):
        with self.assertRaises(StrandCountError):
            realize_braid(w(3, 1), self.layout)

    def test_upper_bound_dominates_lower_bound(self):
        generator = realize_braid(w(2, 1), self.layout, verify=False)
        identity = realize_braid(BraidWord(2), self.layout)
        self.assertGreaterEqual(
            hofer_distance_upper(generator.H, identity.H),
            pseudometric_lower_bound(w(2, 1), BraidWord(2), self.layout),
        )


class PseudometricTests(SimpleTestCase):

    def setUp(self):
        self.layout = standard_layout(2, 0)

    def test_equal(self):
        self.assertEqual(pseudometric_lower_bound(w(2, 1, -1), BraidWord(2), self.layout), 0)

    def test_distinct(self):
        self.assertEqual(pseudometric_lower_bound(w(2, 1), BraidWord(2), self.layout), F(1, 3600))
        self.assertEqual(pseudometric_lower_bound(w(2, 1), w(2, -1), self.layout), F(1, 3600))
        self.assertEqual(pseudometric_lower_bound(w(2, -1), w(2, 1), self.layout), F(1, 3600))

    def test_mismatch(self):
        with self.assertRaises(StrandCountError):
            pseudometric_lower_bound(w(3, 1), w(2, 1), self.layout)

    def test_random_distinct_pairs(self):
        layout = standard_layout(3, 0)
        threshold = proof_constants(layout)['threshold']
        rng = np.random.default_rng(31)

        def random_word():
            letters = [int(rng.integers(1, 3)) * int(rng.choice((-1, 1))) for _ in range(rng.integers(1, 4))]
            return w(3, *letters)

        pairs = []
        while len(pairs) < 20:
            a, b = random_word(), random_word()
            if not equal(a, b):
                pairs.append((a, b))
        for a, b in pairs:
            self.assertEqual(pseudometric_lower_bound(a, b, layout), threshold)
        for a, b in pairs[:3]:
            ra = realize_braid(a, layout, verify=False)
            rb = realize_braid(b, layout, verify=False)
            self.assertGreaterEqual(hofer_distance_upper(ra.H, rb.H), threshold)


class ExperimentConfigJsonTests(SimpleTestCase):

    def test_standard_layout_and_default_base(self):
        serializer = ExperimentConfigSerializer(data={
            'k': 2, 'seed': 3, 'trials': 2, 'delta': '1/8000',
            'perturbations': [{'site': {'center': ['0', '0'], 'inner': '9/10', 'outer': '19/20'}, 'delta': '1/9000'}],
        })
        self.assertTrue(serializer.is_valid(), serializer.errors)
        config = serializer.save()
        self.assertEqual(config.base_hamiltonian, str(adjacent_swap(standard_layout(2, 0), 1)))
        self.assertEqual(config.perturbations[0].site, BumpSite((F(0), F(0)), F(9, 10), F(19, 20)))
        self.assertEqual(config.trials, 2)

    def test_seed_is_mandatory(self):
        self.assertFalse(ExperimentConfigSerializer(data={'k': 2, 'trials': 0}).is_valid())

    def test_float_delta_rejected(self):
        self.assertFalse(ExperimentConfigSerializer(data={'k': 2, 'seed': 1, 'trials': 1, 'delta': 0.001}).is_valid())


class StabilityCommandTests(SimpleTestCase):

    def test_default_experiment(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'report.json'
            svg_dir = Path(tmp) / 'svg'
            out, err = io.StringIO(), io.StringIO()
            call_command(
                'stability', k=2, seed=1, trials=2, out=str(path), svg_dir=str(svg_dir), stdout=out, stderr=err,
            )
            data = json.loads(path.read_text())
            self.assertTrue(data['verdict'])
            self.assertEqual(len(data['records']), 2)
            self.assertEqual(len(list(svg_dir.glob('*.svg'))), 2)
            self.assertIn('threshold: 1/3600', err.getvalue())
            self.assertIn('verdict: stable', err.getvalue())
            self.assertNotIn('threshold', out.getvalue())

    def test_reports_are_reproducible(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = Path(tmp) / 'cfg.json'
            config.write_text(json.dumps({'k': 2, 'seed': 8, 'trials': 1, 'delta': '1/8000'}))
            texts = []
            for name in ('a.json', 'b.json'):
                call_command('stability', config=str(config), out=str(Path(tmp) / name), stdout=io.StringIO())
                texts.append((Path(tmp) / name).read_text())
            self.assertEqual(texts[0], texts[1])

    def test_seed_required(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('stability', k=2, stdout=io.StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_invalid_config(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = Path(tmp) / 'cfg.json'
            config.write_text(json.dumps({'k': 2}))
            with self.assertRaises(CommandError) as ctx:
                call_command('stability', config=str(config), stdout=io.StringIO())
            self.assertEqual(ctx.exception.returncode, 1)

    def test_stdout_is_only_the_report(self):
        out, err = io.StringIO(), io.StringIO()
        call_command('stability', k=2, seed=1, trials=1, stdout=out, stderr=err)
        data = json.loads(out.getvalue())
        self.assertEqual(len(data['records']), 1)
        self.assertIn('threshold: 1/3600', err.getvalue())

    def test_bad_default_experiment_is_a_domain_error(self):
        for options in ({'k': 0, 'seed': 1}, {'k': 1, 'seed': 1}, {'k': 2, 'eta': 'abc', 'seed': 1}):
            with self.subTest(**options):
                with self.assertRaises(CommandError) as ctx:
                    call_command('stability', stdout=io.StringIO(), stderr=io.StringIO(), **options)
                self.assertEqual(ctx.exception.returncode, 1)
