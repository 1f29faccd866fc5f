"""
Management command to draw a braid word or the closed braid of a flow as SVG.
"""
from django.core.management.base import BaseCommand, CommandError

from apps.braid.extraction import ClosureSpec, ORIENTATIONS
from apps.braid.loaders import load_word
from apps.braid.rendering import render_svg
from apps.core.exceptions import BraidflowError
from apps.flow.preservation import link_preservation_check
from apps.flow.trajectory import integrate_batch
from apps.geometry.layout import basepoints
from apps.geometry.loaders import load_layout
from apps.hamiltonian.exceptions import ParseError
from apps.hamiltonian.loaders import load_hamiltonian
from apps.hamiltonian.parser import GRAMMAR_HELP


class Command(BaseCommand):
    help = 'Render a braid word, or the strands of a link-preserving flow, as an SVG diagram'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--word', type=str, help='Braid word, e.g. "[1, 1]"')
        source.add_argument('--hamiltonian', type=str, help='DSL text or @file')
        parser.add_argument('--strands', type=int, help='Strand count for --word')
        parser.add_argument('--k', type=int, help='Components of the standard layout')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta')
        parser.add_argument('--config', type=str, help='Layout JSON file')
        parser.add_argument('--angle', type=float, default=0.0, help='Projection angle')
        parser.add_argument('--closure', choices=ORIENTATIONS, default='shorter', help='Closure arcs')
        parser.add_argument('--out', type=str, required=True, help='SVG file to write')

    def handle(self, *args, **options):
        try:
            if options.get('word'):
                word = load_word(options['word'], options.get('strands'))
                render_svg(word, options['out'])
            else:
                self._render_flow(options)
        except (BraidflowError, ValueError) as e:
            raise CommandError(str(e), returncode=1)
        self.stdout.write(self.style.SUCCESS(f'Diagram written to {options["out"]}'))

    def _render_flow(self, options):
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
        render_svg(
            strands, options['out'], layout=layout, sigma=report.sigma,
            closure=ClosureSpec(options['closure']), projection_angle=options['angle'],
        )
