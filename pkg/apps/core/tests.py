import io
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction

from django.test import SimpleTestCase
from rest_framework import serializers

import braidflow

from .numbers import InexactNumberError, format_rational, format_real, parse_rational
from .serializers import PointField, RationalField


class NumberTests(SimpleTestCase):

    def test_parse(self):
        self.assertEqual(parse_rational('3/4'), Fraction(3, 4))
        self.assertEqual(parse_rational('0.25'), Fraction(1, 4))
        self.assertEqual(parse_rational(2), Fraction(2))

    def test_floats_and_garbage(self):
        for value in (0.5, True, 'a/b', '1/0', None):
            with self.assertRaises(InexactNumberError):
                parse_rational(value)

    def test_format(self):
        self.assertEqual(format_rational(Fraction(6, 4)), '3/2')
        self.assertEqual(format_rational(Fraction(-4, 2)), '-2')
        self.assertEqual(format_real(0.1), '0.10000000000000001')
        self.assertEqual(format_real(0.1, digits=3), '0.1')


class FieldTests(SimpleTestCase):

    def test_rational_field(self):
        field = RationalField(positive=True)
        self.assertEqual(field.to_internal_value('1/3'), Fraction(1, 3))
        self.assertEqual(field.to_representation(Fraction(1, 3)), '1/3')
        with self.assertRaises(serializers.ValidationError):
            field.to_internal_value('0')
        with self.assertRaises(serializers.ValidationError):
            field.to_internal_value(0.5)

    def test_point_field(self):
        self.assertEqual(PointField().run_validation(['1/2', 0]), (Fraction(1, 2), Fraction(0)))
        with self.assertRaises(serializers.ValidationError):
            PointField().run_validation(['1/2'])


class EntryPointTests(SimpleTestCase):

    def run_main(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = braidflow.main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def test_link(self):
        code, out, _ = self.run_main('link', '--k', '2', '--eta', '0')
        self.assertEqual(code, 0)
        self.assertIn('threshold: 1/3600', out)

    def test_braid_compare(self):
        code, out, _ = self.run_main('braid', 'compare', '--a', '[1,2,1]', '--b', '[2,1,2]')
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), 'equal')

    def test_hofer_of_zero(self):
        code, out, _ = self.run_main('hofer', '--hamiltonian', '0')
        self.assertEqual(code, 0)
        self.assertEqual(out.strip(), '[0, 0]')

    def test_missing_subcommand(self):
        code, _, err = self.run_main()
        self.assertEqual(code, 2)
        self.assertIn('usage: braidflow', err)

    def test_unknown_subcommand(self):
        code, _, err = self.run_main('migrate')
        self.assertEqual(code, 2)
        self.assertIn("unknown subcommand 'migrate'", err)

    def test_bad_flag_is_a_usage_error(self):
        code, _, _ = self.run_main('link', '--no-such-flag')
        self.assertEqual(code, 2)

    def test_domain_error(self):
        code, _, err = self.run_main('braid', 'compare', '--a', '[1]', '--b', '[1]', '--strands', '1')
        self.assertEqual(code, 1)
        self.assertIn('Error', err)

    def test_stability_with_no_components(self):
        code, out, err = self.run_main('stability', '--k', '0', '--seed', '1')
        self.assertEqual(code, 1)
        self.assertEqual(out, '')
        self.assertIn('Error', err)
