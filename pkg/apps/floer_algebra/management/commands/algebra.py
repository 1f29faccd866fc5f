"""
Management command for filtered complexes: validation, window homology and morphism checks.
"""
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_rational, parse_rational
from apps.floer_algebra.complexes import homology00, validate, window
from apps.floer_algebra.loaders import complex_to_data, load_complex, load_morphism
from apps.floer_algebra.morphisms import induced_map, theorem_skeleton_check
from apps.floer_algebra.serializers import ComplexReportSerializer, SkeletonReportSerializer
from apps.floer_algebra.spectrum import model_complex
from apps.geometry.loaders import load_layout


class Command(BaseCommand):
    help = 'Filtered Z/2 complexes: validate, window homology, induced maps, injectivity skeleton, model complexes'

    def add_arguments(self, parser):
        parser.add_argument('action', choices=['validate', 'homology', 'induced', 'skeleton', 'model'])
        parser.add_argument('--complex', type=str, help='Complex JSON (validate, homology)')
        parser.add_argument('--window', nargs=2, metavar=('A', 'B'), help='Open action window, rationals')
        parser.add_argument('--source', type=str, help='Source complex JSON (induced, skeleton)')
        parser.add_argument('--target', type=str, help='Target complex JSON (induced, skeleton)')
        parser.add_argument('--morphism', type=str, help='Morphism JSON source -> target (induced, skeleton)')
        parser.add_argument('--backward', type=str, help='Morphism JSON target -> source (skeleton)')
        parser.add_argument('--k', type=int, help='Components of the standard layout (model)')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta (model)')
        parser.add_argument('--config', type=str, help='Layout JSON file (model)')
        parser.add_argument('--morse-scale', type=str, help='Rational Morse scale (model)')
        parser.add_argument('--captures', type=int, nargs='+', default=[0], help='Capping translates (model)')
        parser.add_argument('--out', type=str, help='Write the model complex JSON here')
        parser.add_argument('--json', action='store_true', help='Print JSON')

    def handle(self, *args, **options):
        action = options['action']
        required = {
            'validate': ['complex'],
            'homology': ['complex'],
            'induced': ['source', 'target', 'morphism', 'window'],
            'skeleton': ['source', 'target', 'morphism', 'backward', 'window'],
            'model': ['morse_scale'],
        }[action]
        missing = [f'--{name.replace("_", "-")}' for name in required if not options.get(name)]
        if missing:
            raise CommandError(f'{action} needs {" and ".join(missing)}', returncode=2)
        try:
            getattr(self, f'_{action}')(options)
        except BraidflowError as e:
            raise CommandError(str(e), returncode=1)

    def _window(self, options):
        return tuple(parse_rational(v) for v in options['window'])

    def _validate(self, options):
        report = validate(load_complex(options['complex']))
        if options.get('json'):
            self.stdout.write(json.dumps(ComplexReportSerializer(report).data, indent=2))
            return
        self.stdout.write(f'valid: {str(report.valid).lower()}')
        for violation in report.violations:
            self.stdout.write(self.style.WARNING(f'  {violation}'))

    def _homology(self, options):
        c = load_complex(options['complex'])
        if options.get('window'):
            c = window(c, *self._window(options))
        self.stdout.write(f'generators: {len(c)}')
        self.stdout.write(f'homology00: {homology00(c)}')

    def _induced(self, options):
        source, target = load_complex(options['source']), load_complex(options['target'])
        m = load_morphism(options['morphism'], source, target)
        result = induced_map(m, *self._window(options))
        a, b = result.target_window
        self.stdout.write(f'target window: ({format_rational(a)}, {format_rational(b)})')
        self.stdout.write(f'dimensions: {result.source_dim} -> {result.target_dim}')
        self.stdout.write(f'rank: {result.rank}')
        for row in result.matrix:
            self.stdout.write(' '.join(str(int(v)) for v in row))

    def _skeleton(self, options):
        cplus, cminus = load_complex(options['source']), load_complex(options['target'])
        f = load_morphism(options['morphism'], cplus, cminus)
        g = load_morphism(options['backward'], cminus, cplus)
        report = theorem_skeleton_check(cplus, cminus, f, g, self._window(options))
        data = SkeletonReportSerializer(report).data
        if options.get('json'):
            self.stdout.write(json.dumps(data, indent=2))
            return
        for key, value in data.items():
            self.stdout.write(f'{key}: {str(value).lower() if isinstance(value, bool) else value}')
        if report.certified:
            self.stdout.write(self.style.SUCCESS('Injectivity certified'))

    def _model(self, options):
        if not options.get('config') and options.get('k') is None:
            raise CommandError('Provide --k or --config', returncode=2)
        layout = load_layout(options.get('config'), options.get('k'), options.get('eta'))
        try:
            c = model_complex(layout, parse_rational(options['morse_scale']), options['captures'])
        except ValueError as e:
            raise CommandError(str(e), returncode=1)
        text = json.dumps(complex_to_data(c), indent=2)
        if options.get('out'):
            Path(options['out']).write_text(text + '\n')
            self.stdout.write(self.style.SUCCESS(f'{len(c)} generators written to {options["out"]}'))
        else:
            self.stdout.write(text)
