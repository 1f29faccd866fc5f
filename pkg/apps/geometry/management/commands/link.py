"""
Management command to build or describe a link layout and its stability constants.
"""
import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_rational
from apps.geometry.layout import check_admissible, proof_constants
from apps.geometry.loaders import layout_to_data, load_layout


class Command(BaseCommand):
    help = 'Build or describe an admissible link and print lambda_L, epsilon_L and epsilon_L/k'

    def add_arguments(self, parser):
        parser.add_argument('--k', type=int, help='Number of link components (standard row layout)')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta, e.g. 1/16')
        parser.add_argument('--config', type=str, help='Layout JSON file instead of --k/--eta')
        parser.add_argument('--out', type=str, help='Write the layout JSON here')

    def handle(self, *args, **options):
        if not options.get('config') and options.get('k') is None:
            raise CommandError('Provide --k or --config', returncode=2)
        try:
            layout = load_layout(options.get('config'), options.get('k'), options.get('eta'))
        except BraidflowError as e:
            raise CommandError(str(e), returncode=1)

        report = check_admissible(layout)
        self.stdout.write(f'k: {layout.k}')
        self.stdout.write(f'eta: {format_rational(layout.eta)}')
        self.stdout.write(f'areas: {", ".join(format_rational(a) for a in layout.areas)}')
        self.stdout.write(f'lambda: {format_rational(report.lambda_)}')

        if not report.admissible:
            for violation in report.violations:
                self.stdout.write(self.style.WARNING(f'  {violation}'))
            raise CommandError('Layout is not admissible', returncode=1)

        constants = proof_constants(layout)
        self.stdout.write(f'lambda_L: {format_rational(constants["lambda_L"])}')
        self.stdout.write(f'epsilon_L: {format_rational(constants["epsilon_L"])}')
        self.stdout.write(f'threshold: {format_rational(constants["threshold"])}')

        if options.get('out'):
            Path(options['out']).write_text(json.dumps(layout_to_data(layout), indent=2) + '\n')
            self.stdout.write(self.style.SUCCESS(f'Layout written to {options["out"]}'))
