"""
Management command running the braid-type stability harness.
"""
import json
from dataclasses import replace
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_rational
from apps.stability.harness import StabilityHarness, default_config, get_stability_harness
from apps.stability.serializers import ExperimentConfigSerializer, StabilityReportSerializer, SweepReportSerializer


class Command(BaseCommand):
    help = 'Perturb a link-preserving Hamiltonian below the Hofer threshold and compare braid types'

    def add_arguments(self, parser):
        parser.add_argument('--config', type=str, help='Experiment config JSON')
        parser.add_argument('--k', type=int, help='Default experiment on the standard layout with k components')
        parser.add_argument('--eta', type=str, default='0', help='Rational eta for --k')
        parser.add_argument('--trials', type=int, help='Override the number of trials')
        parser.add_argument('--seed', type=int, help='Override the seed')
        parser.add_argument('--threads', type=int, help='Worker threads (default: available cores)')
        parser.add_argument('--out', type=str, help='Write the JSON report here')
        parser.add_argument('--svg-dir', type=str, help='Write one space-time diagram per trial here')
        parser.add_argument(
            '--sweep', type=str, nargs='+', metavar='FACTOR',
            help='Exploratory: rescale perturbations to these multiples of the threshold',
        )

    def _config(self, options):
        if options.get('config'):
            try:
                data = json.loads(Path(options['config']).read_text())
            except (OSError, ValueError) as e:
                raise CommandError(f'Cannot read config: {e}', returncode=1)
            if options.get('seed') is not None:
                data['seed'] = options['seed']
            serializer = ExperimentConfigSerializer(data=data)
            if not serializer.is_valid():
                raise CommandError(f'Invalid config: {serializer.errors}', returncode=1)
            config = serializer.save()
        elif options.get('k') is not None:
            if options.get('seed') is None:
                raise CommandError('--seed is required with --k', returncode=2)
            config = default_config(options['k'], options['eta'], seed=options['seed'])
        else:
            raise CommandError('Provide --config or --k', returncode=2)
        if options.get('trials') is not None:
            config = replace(config, trials=options['trials'])
        return config

    def handle(self, *args, **options):
        harness = StabilityHarness(options['threads']) if options.get('threads') else get_stability_harness()
        try:
            config = self._config(options)
            if options.get('sweep'):
                report = harness.sweep(config, options['sweep'])
                data = SweepReportSerializer(report).data
            else:
                report = harness.run(config, options.get('svg_dir'))
                data = StabilityReportSerializer(report).data
        except (BraidflowError, ValueError) as e:
            raise CommandError(str(e), returncode=1)

        text = json.dumps(data, indent=2)
        if options.get('out'):
            Path(options['out']).write_text(text + '\n')
            self.stdout.write(self.style.SUCCESS(f'Report written to {options["out"]}'))
        else:
            self.stdout.write(text)

        # stdout carries only the report
        self.stderr.write(f'threshold: {format_rational(report.threshold)}')
        if options.get('sweep'):
            largest = report.largest_stable_factor
            self.stderr.write(self.style.WARNING(
                f'exploratory: largest stable factor {format_rational(largest) if largest is not None else "none"}'
            ))
        elif report.verdict:
            self.stderr.write(self.style.SUCCESS(f'verdict: stable over {len(report.records)} trials'))
        else:
            self.stderr.write(self.style.ERROR(f'verdict: braid type changed in trials {report.contradictions}'))
            raise CommandError('Braid type changed below the threshold', returncode=1)
