"""
Management command to compare, normalize or extract braid words.
"""
import json

from django.core.management.base import BaseCommand, CommandError

from apps.braid.extraction import ClosureSpec, ORIENTATIONS, extract_braid
from apps.braid.garside import equal, normal_form
from apps.braid.loaders import load_word
from apps.braid.serializers import BraidWordSerializer, NormalFormSerializer
from apps.braid.words import exponent_sum
from apps.core.exceptions import BraidflowError
from apps.flow.preservation import link_preservation_check
from apps.flow.trajectory import integrate_batch
from apps.geometry.layout import basepoints
from apps.geometry.loaders import load_layout
from apps.hamiltonian.exceptions import ParseError
from apps.hamiltonian.loaders import load_hamiltonian
from apps.hamiltonian.parser import GRAMMAR_HELP


class Command(BaseCommand):
    help = 'Braid words: compare two words, print a normal form, or extract the braid of a flow'

    def add_arguments(self, parser):
        parser.add_argument('action', choices=['compare', 'normalize', 'extract'])
        parser.add_argument('--a', type=str, help='First word, e.g. "[1, -2, 1]"')
        parser.add_argument('--b', type=str, help='Second word (compare)')
        parser.add_argument('--strands', type=int, help='Strand count for the words (default: inferred)')
        parser.add_argument('--hamiltonian', type=str, help='DSL text or @file (extract)')
        parser.add_argument('--k', type=int, help='Components of the standard layout (extract)')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta (extract)')
        parser.add_argument('--config', type=str, help='Layout JSON file (extract)')
        parser.add_argument('--angle', type=float, default=0.0, help='Projection angle (extract)')
        parser.add_argument('--closure', choices=ORIENTATIONS, default='shorter', help='Closure arcs (extract)')
        parser.add_argument('--json', action='store_true', help='Print JSON')

    def handle(self, *args, **options):
        action = options['action']
        try:
            if action == 'compare':
                self._compare(options)
            elif action == 'normalize':
                self._normalize(options)
            else:
                self._extract(options)
        except (BraidflowError, ValueError) as e:
            raise CommandError(str(e), returncode=1)

    def _words(self, options, names):
        missing = [f'--{name}' for name in names if not options.get(name)]
        if missing:
            raise CommandError(f'{options["action"]} needs {" and ".join(missing)}', returncode=2)
        k = options.get('strands')
        words = [load_word(options[name], k) for name in names]
        if k is None and len(words) > 1:
            k = max(w.k for w in words)
            words = [load_word(options[name], k) for name in names]
        return words

    def _compare(self, options):
        a, b = self._words(options, ['a', 'b'])
        result = equal(a, b)
        if options.get('json'):
            self.stdout.write(json.dumps({'equal': result, 'exponent_sums': [exponent_sum(a), exponent_sum(b)]}))
        else:
            self.stdout.write('equal' if result else 'not equal')

    def _normalize(self, options):
        (word,) = self._words(options, ['a'])
        form = normal_form(word)
        if options.get('json'):
            self.stdout.write(json.dumps(NormalFormSerializer(form).data))
        else:
            self.stdout.write(f'inf: {form.inf}')
            for factor in NormalFormSerializer(form).data['factors']:
                self.stdout.write(f'factor: {" ".join(str(p) for p in factor)}')

    def _extract(self, options):
        if not options.get('hamiltonian'):
            raise CommandError('extract needs --hamiltonian', returncode=2)
        if not options.get('config') and options.get('k') is None:
            raise CommandError('Provide --k or --config', returncode=2)
        try:
            H = load_hamiltonian(options['hamiltonian'])
        except ParseError as e:
            self.stderr.write(GRAMMAR_HELP)
            raise CommandError(f'Parse error: {e}', returncode=1)
        except OSError as e:
            raise CommandError(f'Cannot read Hamiltonian: {e}', returncode=1)

        layout = load_layout(options.get('config'), options.get('k'), options.get('eta'))
        report = link_preservation_check(H, layout)
        if not report.preserved:
            raise CommandError('The time-1 map does not preserve the link', returncode=1)
        strands = integrate_batch(H, basepoints(layout))
        word = extract_braid(strands, layout, report.sigma, ClosureSpec(options['closure']), options['angle'])
        if options.get('json'):
            data = dict(BraidWordSerializer(word).data)
            data['sigma'] = list(report.sigma)
            self.stdout.write(json.dumps(data))
        else:
            self.stdout.write(f'sigma: {" ".join(str(j) for j in report.sigma)}')
            self.stdout.write(f'word: {json.dumps(BraidWordSerializer(word).data["letters"])}')
