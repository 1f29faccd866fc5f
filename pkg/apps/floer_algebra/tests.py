import io
import json
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from apps.geometry.layout import standard_layout

from .complexes import homology00, make_complex, shifted, validate, window
from .exceptions import MorphismError, ShapeError, WindowError
from .gf2 import extend_basis, matmul, nullspace, rank, solve
from .loaders import complex_from_data, complex_to_data
from .morphisms import (
    FilteredMorphism, MorphismEntry, compose, identity_morphism, induced_map, is_chain_homotopy,
    is_chain_map, theorem_skeleton_check,
)
from .spectrum import clusters, model_complex, model_continuation, spectrum_admissible, synthetic_complex

F = Fraction


def morphism(source, target, pairs, shift=0):
    return FilteredMorphism(source, target, tuple(MorphismEntry(*p) for p in pairs), F(shift))


def id_plus_d(c, shift=0):
    entries = [MorphismEntry(g.name, g.name) for g in c.generators]
    entries += [MorphismEntry(a.source, a.target, a.i, a.j) for a in c.arrows]
    return FilteredMorphism(c, c, tuple(entries), F(shift))


def off_spectrum(rng, low, high):
    """Random rational in [low, high] that no synthetic action can equal."""
    return F(2 * int(rng.integers(low * 1000, high * 1000)) + 1, 2000)


class Gf2Tests(SimpleTestCase):

    def test_rank_and_kernel(self):
        m = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
        self.assertEqual(rank(m), 2)
        kernel = nullspace(m)
        self.assertEqual(kernel.shape, (3, 1))
        self.assertFalse(matmul(m, kernel).any())

    def test_solve(self):
        a = np.array([[1, 0], [1, 1], [0, 1]], dtype=np.uint8)
        x = solve(a, np.array([1, 0, 1], dtype=np.uint8))
        np.testing.assert_array_equal(x, [1, 1])
        self.assertIsNone(solve(a, np.array([1, 0, 0], dtype=np.uint8)))

    def test_extend_basis_skips_dependent_columns(self):
        base = np.array([[1], [1], [0]], dtype=np.uint8)
        candidates = np.array([[1, 0, 1], [1, 1, 0], [0, 0, 0]], dtype=np.uint8)
        extended = extend_basis(base, candidates)
        self.assertEqual(extended.shape[1], 1)
        self.assertEqual(rank(np.hstack([base, extended])), 2)


class ValidateTests(SimpleTestCase):

    def test_single_arrow(self):
        report = validate(make_complex([('g', 1), ('h', 0)], [('g', 'h')]))
        self.assertTrue(report.valid)
        self.assertTrue(report.d00_squared_zero)

    def test_two_composable_arrows(self):
        report = validate(make_complex([('g', 2), ('h', 1), ('m', 0)], [('g', 'h'), ('h', 'm')]))
        self.assertFalse(report.valid)
        self.assertFalse(report.d00_squared_zero)

    def test_empty(self):
        self.assertTrue(validate(make_complex([])).valid)

    def test_action_must_decrease(self):
        report = validate(make_complex([('g', 0), ('h', 0)], [('g', 'h')]))
        self.assertFalse(report.valid)
        self.assertIn('does not decrease', report.violations[0])

    def test_label_range(self):
        report = validate(make_complex([('g', 1), ('h', 0)], [('g', 'h', 10, 0)]))
        self.assertFalse(report.valid)

    def test_unknown_and_duplicate(self):
        report = validate(make_complex([('g', 1), ('h', 0)], [('g', 'h'), ('g', 'h'), ('g', 'q')]))
        self.assertEqual(len(report.violations), 2)

    def test_mixed_component(self):
        # d10 d00 + d00 d10 = g -> m, cancelled by nothing
        c = make_complex([('g', 2), ('h', 1), ('m', 0)], [('g', 'h', 1, 0), ('h', 'm')])
        report = validate(c)
        self.assertTrue(report.d00_squared_zero)
        self.assertFalse(report.d10_anticommutes)

    def test_cancelling_square(self):
        c = make_complex(
            [('g', 2), ('h1', 1), ('h2', F(3, 2)), ('m', 0)],
            [('g', 'h1'), ('g', 'h2'), ('h1', 'm'), ('h2', 'm')],
        )
        self.assertTrue(validate(c).valid)


class WindowTests(SimpleTestCase):

    def setUp(self):
        self.c = make_complex([('g', 1), ('h', 0)], [('g', 'h')])

    def test_one_generator(self):
        w = window(self.c, F(-1, 2), F(1, 2))
        self.assertEqual(w.names(), ['h'])
        self.assertEqual(w.arrows, ())

    def test_everything(self):
        w = window(self.c, -5, 5)
        self.assertEqual(w.names(), ['g', 'h'])
        self.assertEqual(len(w.arrows), 1)

    def test_empty(self):
        self.assertEqual(len(window(self.c, 2, 3)), 0)

    def test_boundary_collision(self):
        with self.assertRaises(WindowError):
            window(self.c, 0, 2)

    def test_reversed(self):
        with self.assertRaises(WindowError):
            window(self.c, 1, F(-1, 2))


class HomologyTests(SimpleTestCase):

    def test_no_arrows(self):
        self.assertEqual(homology00(make_complex([('a', 0), ('b', 1), ('c', 2)])), 3)

    def test_one_d00_arrow(self):
        self.assertEqual(homology00(make_complex([('g', 1), ('h', 0)], [('g', 'h')])), 0)

    def test_other_labels_are_invisible(self):
        self.assertEqual(homology00(make_complex([('g', 1), ('h', 0)], [('g', 'h', 1, 0)])), 2)


class RandomComplexTests(SimpleTestCase):

    def test_random_complexes_are_valid(self):
        rng = np.random.default_rng(20240611)
        for _ in range(200):
            c = synthetic_complex(rng, int(rng.integers(1, 41)))
            report = validate(c)
            self.assertTrue(report.valid, report.violations)
            self.assertTrue(report.d00_squared_zero)
            self.assertTrue(report.d10_anticommutes)

    def test_window_subadditivity(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            c = synthetic_complex(rng, int(rng.integers(1, 41)))
            a, b, cut = sorted({off_spectrum(rng, -1, 4) for _ in range(3)} | {F(-3, 2)})[-3:]
            self.assertLessEqual(
                homology00(window(c, a, cut)),
                homology00(window(c, a, b)) + homology00(window(c, b, cut)),
            )

    def test_admissible_cluster_windows(self):
        rng = np.random.default_rng(11)
        gap, width = F(1), F(1, 10)
        for _ in range(100):
            c = synthetic_complex(rng, int(rng.integers(1, 41)), gap=gap, cluster_width=width)
            self.assertTrue(spectrum_admissible(c, gap, width))
            for group in clusters(c, width):
                low = min(c.action(name) for name in group)
                w = window(c, low - F(1, 4), low + 2 * width + F(1, 4))
                self.assertEqual(homology00(w), len(group))


class SpectrumTests(SimpleTestCase):

    def test_clusters(self):
        c = make_complex([('a', 0), ('b', F(1, 10)), ('c', 3)])
        self.assertEqual(clusters(c, F(1, 10)), [['a', 'b'], ['c']])

    def test_forbidden_spread(self):
        c = make_complex([('a', 0), ('b', F(1, 2))])
        self.assertFalse(spectrum_admissible(c, 1, F(1, 10)))

    def test_arrow_inside_cluster(self):
        c = make_complex([('a', F(1, 10)), ('b', 0)], [('a', 'b')])
        self.assertFalse(spectrum_admissible(c, 1, F(1, 10)))
        c = make_complex([('a', F(1, 10)), ('b', 0)], [('a', 'b', 0, 1)])
        self.assertTrue(spectrum_admissible(c, 1, F(1, 10)))

    def test_gap_must_exceed_twice_width(self):
        with self.assertRaises(ValueError):
            spectrum_admissible(make_complex([]), F(1, 5), F(1, 10))

    def test_model_complex(self):
        layout = standard_layout(2, 0)
        c = model_complex(layout, F(1, 100), [-1, 0, 1])
        self.assertEqual(len(c), 12)
        self.assertTrue(validate(c).valid)
        self.assertEqual(homology00(window(c, F(-1, 50), F(1, 10))), 4)
        self.assertEqual(homology00(window(c, F(1, 3) - F(1, 50), F(1, 3) + F(1, 10))), 4)
        self.assertEqual(c.action('x11@1'), F(1, 3) + F(2, 100))

    def test_model_scale_bound(self):
        with self.assertRaises(ValueError):
            model_complex(standard_layout(2, 0), F(1, 12), [0])

    def test_model_continuation_names(self):
        layout = standard_layout(2, 0)
        cplus = model_complex(layout, F(1, 100), [0])
        with self.assertRaises(ShapeError):
            model_continuation(cplus, model_complex(layout, F(1, 100), [0], suffix='-'), F(1, 500))
        m = model_continuation(cplus, model_complex(layout, F(1, 100), [0], suffix='-'), F(1, 500),
                               suffix_map=lambda name: name + '-')
        self.assertEqual(len(m.entries), 4)


class MorphismTests(SimpleTestCase):

    def setUp(self):
        self.c = make_complex([('x', 0), ('y', 1), ('w', F(1, 2)), ('z', 3)], [('y', 'x')])

    def test_identity_induces_identity(self):
        result = induced_map(identity_morphism(self.c), F(-1, 2), 2)
        np.testing.assert_array_equal(result.matrix, np.eye(1, dtype=np.uint8))

    def test_shifted_copy_is_isomorphism(self):
        target = shifted(self.c, F(1, 4))
        m = morphism(self.c, target, [(n, n) for n in self.c.names()], F(1, 2))
        self.assertTrue(is_chain_map(m))
        result = induced_map(m, F(-1, 2), 2)
        self.assertEqual(result.target_window, (F(0), F(5, 2)))
        self.assertEqual((result.source_dim, result.target_dim, result.rank), (1, 1, 1))

    def test_zero_morphism(self):
        result = induced_map(morphism(self.c, self.c, []), F(-1, 2), 2)
        self.assertEqual(result.rank, 0)

    def test_shift_contract(self):
        with self.assertRaises(MorphismError):
            induced_map(morphism(self.c, self.c, [('x', 'y')], F(1, 2)), F(-1, 2), 2)
        with self.assertRaises(MorphismError):
            morphism(self.c, self.c, [], -1)
        with self.assertRaises(ShapeError):
            morphism(self.c, self.c, [('x', 'nowhere')])

    def test_not_a_chain_map(self):
        # x -> w sends the boundary x to a non-boundary
        m = morphism(self.c, self.c, [('x', 'w')], F(1, 2))
        self.assertFalse(is_chain_map(m))
        with self.assertRaises(MorphismError):
            induced_map(m, F(-1, 4), 2)

    def test_composition_adds_shifts_and_keeps_chain_maps(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            c = synthetic_complex(rng, int(rng.integers(1, 21)))
            f, g = id_plus_d(c, F(1, 3)), id_plus_d(c, F(1, 5))
            self.assertTrue(is_chain_map(f))
            composite = compose(f, g)
            self.assertEqual(composite.shift, F(8, 15))
            self.assertTrue(is_chain_map(composite))
            np.testing.assert_array_equal(composite.matrix(), matmul(g.matrix(), f.matrix()))

    def test_compose_shape_mismatch(self):
        other = make_complex([('q', 0)])
        with self.assertRaises(ShapeError):
            compose(identity_morphism(self.c), identity_morphism(other))

    def test_chain_homotopy(self):
        c = make_complex([('x', 1), ('y', 0)], [('x', 'y')])
        K = morphism(c, c, [('y', 'x')], 1)
        self.assertTrue(is_chain_homotopy(identity_morphism(c, 1), morphism(c, c, [], 1), K))
        self.assertFalse(is_chain_homotopy(identity_morphism(c, 1), identity_morphism(c, 1), K))


class SkeletonTests(SimpleTestCase):

    def test_identities(self):
        c = make_complex([('x', 0), ('w', F(1, 2))])
        report = theorem_skeleton_check(c, c, identity_morphism(c), identity_morphism(c), (-1, 1))
        self.assertTrue(report.certified)
        self.assertEqual((report.forward_rank, report.backward_rank, report.composite_rank), (2, 2, 2))
        self.assertTrue(report.functorial)

    def test_zero_forward_map(self):
        c = make_complex([('x', 0)])
        report = theorem_skeleton_check(c, c, morphism(c, c, []), identity_morphism(c), (-1, 1))
        self.assertFalse(report.composition_is_identity)
        self.assertFalse(report.injective)
        self.assertFalse(report.certified)

    def test_injective_but_not_surjective(self):
        cplus = make_complex([('x', 0)])
        cminus = make_complex([('y', 0), ('z', F(1, 20))])
        f = morphism(cplus, cminus, [('x', 'y')], F(1, 10))
        g = morphism(cminus, cplus, [('y', 'x')], F(1, 10))
        report = theorem_skeleton_check(cplus, cminus, f, g, (-1, 1))
        self.assertTrue(report.composition_is_identity)
        self.assertTrue(report.certified)
        self.assertEqual(report.forward_rank, 1)
        self.assertEqual(induced_map(f, -1, 1).target_dim, 2)

    def test_model_continuations(self):
        layout = standard_layout(2, 0)
        cplus = model_complex(layout, F(1, 100), [0])
        cminus = model_complex(layout, F(1, 100), [0], offset=F(1, 1000))
        f = model_continuation(cplus, cminus, F(1, 500))
        g = model_continuation(cminus, cplus, F(1, 500))
        report = theorem_skeleton_check(cplus, cminus, f, g, (F(-1, 50), F(1, 10)))
        self.assertTrue(report.certified)
        self.assertEqual(report.homology_dim, 4)

    def test_shapes(self):
        c = make_complex([('x', 0)])
        other = make_complex([('y', 0)])
        with self.assertRaises(ShapeError):
            theorem_skeleton_check(c, other, identity_morphism(c), identity_morphism(c), (-1, 1))


class ComplexJsonTests(SimpleTestCase):

    def test_round_trip(self):
        c = make_complex([('g', F(3, 2)), ('h', 0)], [('g', 'h', 0, 1)])
        data = json.loads(json.dumps(complex_to_data(c)))
        self.assertEqual(data['generators'][0], {'name': 'g', 'action': '3/2'})
        self.assertEqual(data['arrows'][0], {'src': 'g', 'dst': 'h', 'i': 0, 'j': 1})
        self.assertEqual(complex_from_data(data), c)

    def test_float_action_rejected(self):
        with self.assertRaises(ShapeError):
            complex_from_data({'generators': [{'name': 'g', 'action': 0.5}]})


class AlgebraCommandTests(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def write(self, name, data):
        path = self.dir / name
        path.write_text(json.dumps(data))
        return str(path)

    def run_command(self, *args, **kwargs):
        out = io.StringIO()
        call_command('algebra', *args, stdout=out, **kwargs)
        return out.getvalue()

    def test_validate(self):
        path = self.write('c.json', {
            'generators': [{'name': 'g', 'action': '1'}, {'name': 'h', 'action': '0'}],
            'arrows': [{'src': 'g', 'dst': 'h', 'i': 0, 'j': 0}],
        })
        self.assertIn('valid: true', self.run_command('validate', complex=path))
        self.assertIn('homology00: 1', self.run_command('homology', complex=path, window=['-1/2', '1/2']))

    def test_skeleton(self):
        c = self.write('c.json', {'generators': [{'name': 'x', 'action': '0'}]})
        m = self.write('m.json', {'shift': '1/10', 'entries': [{'src': 'x', 'dst': 'x'}]})
        output = self.run_command('skeleton', source=c, target=c, morphism=m, backward=m, window=['-1', '1'])
        self.assertIn('certified: true', output)

    def test_model(self):
        output = self.run_command('model', k=2, morse_scale='1/100')
        self.assertEqual(len(json.loads(output)['generators']), 4)

    def test_missing_complex(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command('validate')
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_window(self):
        c = self.write('c.json', {'generators': [{'name': 'x', 'action': '0'}]})
        with self.assertRaises(CommandError) as ctx:
            self.run_command('homology', complex=c, window=['0', '1'])
        self.assertEqual(ctx.exception.returncode, 1)
