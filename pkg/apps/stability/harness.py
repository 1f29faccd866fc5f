"""
Stability harness: perturb a link-preserving Hamiltonian by less than the
Hofer threshold and check that the braid type does not move.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from apps.braid.extraction import ClosureSpec, extract_braid
from apps.braid.garside import equal
from apps.braid.rendering import render_trajectories_svg
from apps.braid.words import BraidWord
from apps.core.conf import option
from apps.core.exceptions import BraidflowError
from apps.core.numbers import format_rational
from apps.floer_algebra.morphisms import SkeletonReport, contract_violations, theorem_skeleton_check
from apps.floer_algebra.spectrum import model_complex, model_continuation
from apps.flow.preservation import link_preservation_check
from apps.flow.separation import strand_separation
from apps.flow.trajectory import Trajectory, integrate_batch
from apps.geometry.layout import LinkLayout, basepoints, link_hull_radius, proof_constants, standard_layout
from apps.hamiltonian.builders import BumpSite, adjacent_swap, difference, perturbation
from apps.hamiltonian.evaluation import check_support
from apps.hamiltonian.expressions import HamiltonianExpr
from apps.hamiltonian.hofer import HoferEstimate, hofer_norm
from apps.hamiltonian.parser import parse

from .exceptions import PreservationError, SeparationError

logger = logging.getLogger(__name__)

REGIMES = ('hull', 'outside')


@dataclass(frozen=True)
class Perturbation:
    """A plateau bump scaled by ``delta``, or an explicit perturbed Hamiltonian."""

    site: Optional[BumpSite] = None
    delta: Optional[Fraction] = None
    hamiltonian: Optional[str] = None

    def __post_init__(self):
        if self.hamiltonian is None:
            if self.site is None or self.delta is None:
                raise ValueError('A perturbation needs a site and a delta, or an explicit Hamiltonian')
            if self.delta <= 0:
                raise ValueError(f'delta must be positive, got {format_rational(self.delta)}')


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One stability experiment.

    Trials beyond the explicit ``perturbations`` get random plateau sites
    from ``generate_sites`` scaled by ``delta``; trial n draws from
    default_rng([seed, n]).
    """

    layout: LinkLayout
    base_hamiltonian: str
    seed: int
    trials: int = 0
    perturbations: Tuple[Perturbation, ...] = ()
    delta: Optional[Fraction] = None
    regime: str = 'hull'
    flow_rtol: Optional[float] = None
    flow_atol: Optional[float] = None
    preservation_tol: Optional[float] = None
    separation_margin: Optional[float] = None
    projection_angle: float = 0.0
    closure: ClosureSpec = field(default_factory=ClosureSpec)

    def __post_init__(self):
        object.__setattr__(self, 'perturbations', tuple(self.perturbations))
        if self.regime not in REGIMES:
            raise ValueError(f'regime must be one of {", ".join(REGIMES)}, got {self.regime!r}')
        if self.trials < len(self.perturbations):
            object.__setattr__(self, 'trials', len(self.perturbations))
        if self.trials > len(self.perturbations) and (self.delta is None or self.delta <= 0):
            raise ValueError('Generated trials need a positive delta')


@dataclass(frozen=True)
class WindowCertificate:
    certified: bool
    displacement: Fraction
    reason: str = ''
    skeleton: Optional[SkeletonReport] = None


@dataclass(frozen=True)
class TrialRecord:
    index: int
    delta: Optional[Fraction]
    hofer_lower: float
    hofer_upper: float
    below_threshold: bool
    braid_equal: bool
    base_word: BraidWord
    perturbed_word: BraidWord
    sigma_pair: Tuple[Tuple[int, ...], Tuple[int, ...]]
    certificate: bool


@dataclass(frozen=True)
class StabilityReport:
    seed: int
    threshold: Fraction
    lambda_L: Fraction
    epsilon_L: Fraction
    records: Tuple[TrialRecord, ...]

    @property
    def verdict(self) -> bool:
        return all(r.braid_equal for r in self.records if r.below_threshold)

    @property
    def contradictions(self) -> List[int]:
        return [r.index for r in self.records if r.below_threshold and not r.braid_equal]


@dataclass(frozen=True)
class SweepEntry:
    factor: Fraction
    delta: Fraction
    survived: bool
    hofer_upper: Optional[float]
    reason: str = ''


@dataclass(frozen=True)
class SweepReport:
    """Exploratory: how far past the threshold braid types happened to survive."""

    threshold: Fraction
    entries: Tuple[SweepEntry, ...]
    exploratory: bool = True

    @property
    def largest_stable_factor(self) -> Optional[Fraction]:
        largest = None
        for entry in self.entries:
            if not entry.survived:
                break
            largest = entry.factor
        return largest


def hofer_distance(H1: HamiltonianExpr, H2: HamiltonianExpr, **hofer_options) -> HoferEstimate:
    """
    Hofer norm interval of H1 - H2.

    Raises:
        SupportError: either Hamiltonian is alive in the boundary collar
    """
    check_support(H1)
    check_support(H2)
    if H1.root == H2.root:
        return HoferEstimate(0.0, 0.0, 0, 0, 0)
    return hofer_norm(difference(H1, H2), **hofer_options)


def hofer_distance_upper(H1: HamiltonianExpr, H2: HamiltonianExpr, **hofer_options) -> float:
    """Upper end of |H1 - H2|, which bounds the Hofer distance of the time-1 maps from above."""
    return hofer_distance(H1, H2, **hofer_options).upper


def window_certificate(layout: LinkLayout, hofer_upper: float) -> WindowCertificate:
    """
    Replay the injectivity argument on model complexes.

    The perturbed model is the unperturbed one displaced by k * hofer_upper;
    continuation maps in both directions carry the window spacing as shift.
    """
    constants = proof_constants(layout)
    epsilon = constants['epsilon']
    k = layout.k
    displacement = k * Fraction(hofer_upper)
    scale = epsilon / (4 * k)
    cplus = model_complex(layout, scale, [-1, 0, 1])
    cminus = model_complex(layout, scale, [-1, 0, 1], offset=displacement)
    forward = model_continuation(cplus, cminus, epsilon)
    backward = model_continuation(cminus, cplus, epsilon)

    problems = contract_violations(forward) + contract_violations(backward)
    if problems:
        return WindowCertificate(False, displacement, f'{len(problems)} continuation entries break the shift')
    skeleton = theorem_skeleton_check(cplus, cminus, forward, backward, (-5 * epsilon, 5 * epsilon))
    reason = '' if skeleton.certified else 'composite is not the identity on the window'
    return WindowCertificate(skeleton.certified, displacement, reason, skeleton)


def _rational_unit(angle: float) -> Tuple[Fraction, Fraction]:
    return (
        Fraction(math.cos(angle)).limit_denominator(10 ** 6),
        Fraction(math.sin(angle)).limit_denominator(10 ** 6),
    )


def generate_sites(
    layout: LinkLayout,
    rng: np.random.Generator,
    count: int = 1,
    regime: str = 'hull',
    collar=None,
) -> List[BumpSite]:
    """
    Random plateau sites that leave the link untouched.

    ``hull``: the plateau swallows the whole link, so the bump has no
    gradient anywhere a strand goes. ``outside``: the whole support lies in
    the annulus between the link and the collar.
    """
    collar = Fraction(str(option(collar, 'SUPPORT_COLLAR')))
    hull = link_hull_radius(layout)
    slack = 1 - collar - hull
    if slack <= 0:
        raise ValueError('The link leaves no room for perturbations inside D')
    sites = []
    for _ in range(count):
        if regime == 'hull':
            px = Fraction(int(rng.integers(-1000, 1001)), 1000) * slack / 8
            py = Fraction(int(rng.integers(-1000, 1001)), 1000) * slack / 8
            offset = abs(px) + abs(py)
            inner = hull + offset + slack / 8
            room = 1 - collar - offset - inner
            outer = inner + room * Fraction(int(rng.integers(500, 1001)), 1000)
            sites.append(BumpSite((px, py), inner, outer))
        elif regime == 'outside':
            cx, cy = _rational_unit(float(rng.uniform(0.0, 2 * math.pi)))
            middle = hull + slack / 2
            # the rational unit vector is off by at most 1e-6
            outer = slack / 2 * Fraction(9, 10) - Fraction(1, 10 ** 5)
            sites.append(BumpSite((cx * middle, cy * middle), outer / 2, outer))
        else:
            raise ValueError(f'regime must be one of {", ".join(REGIMES)}, got {regime!r}')
    return sites


class StabilityHarness:
    """Runs stability experiments; the heavy lifting is delegated to the flow, braid and hamiltonian apps."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = option(workers, 'DEFAULT_THREADS')

    def perturbed_hamiltonian(self, config: ExperimentConfig, base: HamiltonianExpr, index: int):
        if index < len(config.perturbations):
            spec = config.perturbations[index]
        else:
            rng = np.random.default_rng([config.seed, index])
            spec = Perturbation(site=generate_sites(config.layout, rng, 1, config.regime)[0], delta=config.delta)
        if spec.hamiltonian is not None:
            return parse(spec.hamiltonian), None
        return perturbation(base, spec.delta, spec.site), spec.delta

    def braid_of(self, config: ExperimentConfig, H: HamiltonianExpr, label: str) -> Tuple[Tuple[int, ...], BraidWord, List[Trajectory]]:
        """
        Raises:
            PreservationError: the time-1 map of H does not preserve the link
            SeparationError: strands come closer than the margin
        """
        report = link_preservation_check(H, config.layout, tol=config.preservation_tol)
        if not report.preserved:
            raise PreservationError(f'{label}: the time-1 map does not preserve the link')
        strands = integrate_batch(H, basepoints(config.layout), config.flow_rtol, config.flow_atol)
        margin = option(config.separation_margin, 'SEPARATION_MARGIN')
        if len(strands) > 1:
            separation = strand_separation(strands)
            if separation < margin:
                raise SeparationError(f'{label}: strands come within {separation:.3e} < {margin}')
        word = extract_braid(
            strands, config.layout, report.sigma, config.closure, config.projection_angle, workers=1,
        )
        return report.sigma, word, strands

    def run(self, config: ExperimentConfig, svg_dir: Optional[str] = None) -> StabilityReport:
        """
        Raises:
            AdmissibilityError: the layout is not admissible
            PreservationError, SeparationError: a base or perturbed map fails a guard
        """
        constants = proof_constants(config.layout)
        threshold = constants['threshold']
        base = parse(config.base_hamiltonian)
        base_sigma, base_word, _ = self.braid_of(config, base, 'base')
        logger.info(f'Base braid {base_word} with sigma {base_sigma}; threshold {format_rational(threshold)}')
        if svg_dir:
            Path(svg_dir).mkdir(parents=True, exist_ok=True)

        def trial(index: int) -> TrialRecord:
            H, delta = self.perturbed_hamiltonian(config, base, index)
            sigma, word, strands = self.braid_of(config, H, f'trial {index}')
            # refine until a perturbation of size delta certifies below the threshold
            width = float(threshold - delta) / 2 if delta is not None and 0 < delta < threshold else None
            estimate = hofer_distance(base, H, workers=1, width=width)
            hofer_upper = estimate.upper
            below = hofer_upper < threshold
            braid_equal = sigma == base_sigma and equal(word, base_word)
            certificate = window_certificate(config.layout, hofer_upper).certified
            if below and not braid_equal:
                logger.error(f'Trial {index}: braid type changed at Hofer distance {hofer_upper:.6g} below the threshold')
            if below and not certificate:
                logger.error(f'Trial {index}: window certificate failed below the threshold')
            if svg_dir:
                render_trajectories_svg(
                    strands, config.layout, sigma, config.closure, config.projection_angle,
                    path=str(Path(svg_dir) / f'trial-{index:03d}.svg'),
                )
            logger.info(f'Trial {index}: hofer <= {hofer_upper:.6g}, word {word}, equal={braid_equal}')
            return TrialRecord(
                index=index,
                delta=delta,
                hofer_lower=estimate.lower,
                hofer_upper=hofer_upper,
                below_threshold=below,
                braid_equal=braid_equal,
                base_word=base_word,
                perturbed_word=word,
                sigma_pair=(base_sigma, sigma),
                certificate=certificate,
            )

        with ThreadPoolExecutor(max_workers=max(1, self.workers)) as pool:
            records = tuple(pool.map(trial, range(config.trials)))

        report = StabilityReport(
            seed=config.seed,
            threshold=threshold,
            lambda_L=constants['lambda_L'],
            epsilon_L=constants['epsilon_L'],
            records=records,
        )
        logger.info(f'Stability verdict {report.verdict} over {len(records)} trials')
        return report

    def sweep(self, config: ExperimentConfig, factors: Sequence) -> SweepReport:
        """
        Scale every perturbation to factor * threshold and record whether the braid type survived.

        Failures of the preservation or separation guards count as not surviving.
        """
        threshold = proof_constants(config.layout)['threshold']
        entries = []
        for factor in sorted(Fraction(f) for f in factors):
            delta = factor * threshold
            scaled = tuple(
                p if p.hamiltonian is not None else replace(p, delta=delta)
                for p in config.perturbations
            )
            try:
                report = self.run(replace(config, perturbations=scaled, delta=delta))
            except BraidflowError as exc:
                entries.append(SweepEntry(factor, delta, False, None, str(exc)))
                continue
            worst = max((r.hofer_upper for r in report.records), default=0.0)
            survived = all(r.braid_equal for r in report.records)
            entries.append(SweepEntry(factor, delta, survived, worst))
        return SweepReport(threshold=threshold, entries=tuple(entries))


def default_config(k: int = 2, eta=0, trials: int = 20, seed: int = 0, delta=None, regime: str = 'hull') -> ExperimentConfig:
    """
    A half-turn of circles 1 and 2 on the standard layout, with plateau
    perturbations of size 9/20 of the threshold unless delta is given.
    """
    layout = standard_layout(k, eta)
    if delta is None:
        delta = proof_constants(layout)['threshold'] * Fraction(9, 20)
    return ExperimentConfig(
        layout=layout,
        base_hamiltonian=str(adjacent_swap(layout, 1)),
        seed=seed,
        trials=trials,
        delta=Fraction(delta),
        regime=regime,
    )


# Singleton instance
_stability_harness = None


def get_stability_harness() -> StabilityHarness:
    """Get or create the stability harness singleton."""
    global _stability_harness
    if _stability_harness is None:
        _stability_harness = StabilityHarness()
    return _stability_harness


def run_stability(config: ExperimentConfig, svg_dir: Optional[str] = None) -> StabilityReport:
    return get_stability_harness().run(config, svg_dir)


def sweep_stability(config: ExperimentConfig, factors: Sequence) -> SweepReport:
    return get_stability_harness().sweep(config, factors)
