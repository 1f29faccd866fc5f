"""
Management command to flow a link under a Hamiltonian and report preservation.
"""
import json

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_real
from apps.flow.preservation import link_preservation_check
from apps.flow.separation import strand_separation
from apps.flow.serializers import PreservationReportSerializer
from apps.flow.trajectory import dump_trajectories_csv, integrate_batch
from apps.geometry.layout import basepoints
from apps.geometry.loaders import load_layout
from apps.hamiltonian.exceptions import ParseError
from apps.hamiltonian.loaders import load_hamiltonian
from apps.hamiltonian.parser import GRAMMAR_HELP


class Command(BaseCommand):
    help = 'Integrate the strands of a link, check phi(L) = L and report sigma'

    def add_arguments(self, parser):
        parser.add_argument('--hamiltonian', type=str, required=True, help='DSL text or @file')
        parser.add_argument('--k', type=int, help='Components of the standard layout')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta')
        parser.add_argument('--config', type=str, help='Layout JSON file')
        parser.add_argument('--samples', type=int, help='Samples per circle')
        parser.add_argument('--tol', type=float, help='Circle-membership tolerance')
        parser.add_argument('--dump-trajectories', type=str, help='Write strand trajectories as CSV')
        parser.add_argument('--json', action='store_true', help='Print the report as JSON')

    def handle(self, *args, **options):
        if not options.get('config') and options.get('k') is None:
            raise CommandError('Provide --k or --config', returncode=2)
        try:
            H = load_hamiltonian(options['hamiltonian'])
        except ParseError as e:
            self.stderr.write(GRAMMAR_HELP)
            raise CommandError(f'Parse error: {e}', returncode=1)
        except OSError as e:
            raise CommandError(f'Cannot read Hamiltonian: {e}', returncode=1)

        try:
            layout = load_layout(options.get('config'), options.get('k'), options.get('eta'))
            report = link_preservation_check(H, layout, options.get('samples'), options.get('tol'))
            strands = integrate_batch(H, basepoints(layout))
            separation = strand_separation(strands) if layout.k > 1 else None
        except (BraidflowError, ValueError) as e:
            raise CommandError(str(e), returncode=1)

        if options.get('dump_trajectories'):
            dump_trajectories_csv(strands, options['dump_trajectories'])

        if options.get('json'):
            data = dict(PreservationReportSerializer(report).data)
            data['separation'] = None if separation is None else format_real(separation)
            self.stdout.write(json.dumps(data, indent=2))
        else:
            self.stdout.write(f'preserved: {"true" if report.preserved else "false"}')
            if report.sigma is not None:
                self.stdout.write(f'sigma: {" ".join(str(j) for j in report.sigma)}')
            self.stdout.write(f'max_deviation: {format_real(report.max_deviation)}')
            if separation is not None:
                self.stdout.write(f'separation: {format_real(separation)}')

        if not report.preserved:
            raise CommandError('The time-1 map does not preserve the link', returncode=1)
        self.stdout.write(self.style.SUCCESS('Link preserved'))
