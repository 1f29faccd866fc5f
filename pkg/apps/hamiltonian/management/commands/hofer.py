"""
Management command to bracket the Hofer norm of a Hamiltonian.
"""
import json

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_real
from apps.hamiltonian.exceptions import ParseError
from apps.hamiltonian.hofer import hofer_norm
from apps.hamiltonian.loaders import load_hamiltonian
from apps.hamiltonian.parser import GRAMMAR_HELP
from apps.hamiltonian.serializers import HoferEstimateSerializer


class Command(BaseCommand):
    help = 'Estimate |H|_(1,inf) as an interval [lower, upper]'

    def add_arguments(self, parser):
        parser.add_argument('--hamiltonian', type=str, required=True, help='DSL text or @file')
        parser.add_argument('--t-nodes', type=int, help='Simpson nodes in t (default from settings)')
        parser.add_argument('--grid', type=int, help='Spatial grid resolution')
        parser.add_argument('--refine', type=int, help='Refinement rounds around extremizers')
        parser.add_argument('--threads', type=int, help='Worker threads over t-nodes')
        parser.add_argument('--width', type=float, help='Double the grid until the interval is at most this wide')
        parser.add_argument('--max-grid', type=int, help='Largest grid the width target may reach')
        parser.add_argument('--json', action='store_true', help='Print the estimate as JSON')

    def handle(self, *args, **options):
        try:
            H = load_hamiltonian(options['hamiltonian'])
        except ParseError as e:
            self.stderr.write(GRAMMAR_HELP)
            raise CommandError(f'Parse error: {e}', returncode=1)
        except OSError as e:
            raise CommandError(f'Cannot read Hamiltonian: {e}', returncode=1)

        try:
            estimate = hofer_norm(
                H,
                t_nodes=options.get('t_nodes'),
                grid=options.get('grid'),
                refine=options.get('refine'),
                workers=options.get('threads'),
                width=options.get('width'),
                max_grid=options.get('max_grid'),
            )
        except (BraidflowError, ValueError) as e:
            raise CommandError(str(e), returncode=1)

        if options.get('json'):
            self.stdout.write(json.dumps(HoferEstimateSerializer(estimate).data, indent=2))
            return
        self.stdout.write(f'[{format_real(estimate.lower)}, {format_real(estimate.upper)}]')
