"""
Convergence Bounds
==================

Exact margin and radius of a small corpus by candidate enumeration, and
the comparison of observed training time steps against

    worst case (all k updates computed on the same stale weights): t <= R^2 / delta^2
    optimal case (no delay):                                        t <= R^2 / (k delta^2)

For full-delay runs the generalised form of the worst-case argument is
checked as well: with m_i updates in step i,
(sum m_i)^2 <= (R^2 / delta^2) * sum m_i^2, which also covers partial steps.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from dep_tools.corpus.conll import Example
from dep_tools.convlab.candidates import build_candidates
from dep_tools.convlab.generator import SeparableSpec, generate_separable_corpus
from dep_tools.exceptions import ContractViolation
from dep_tools.features.config import FeatureConfig
from dep_tools.trainer.config import Backend, TrainConfig, TrainMode
from dep_tools.trainer.engine import train
from dep_tools.trainer.full_delay import DEFAULT_MAX_STEPS, train_full_delay
from dep_tools.trainer.trace import FULL_DELAY, TrainTrace
from dep_tools.utils.debug_logger import debug_log

# relative slack when comparing observed steps against a bound
BOUND_TOLERANCE = 1e-9

NOT_SEPARABLE = "not separable; bounds vacuous"

# epoch cap for convergence runs
MAX_EPOCHS = 1000


def within_bound(value: float, bound: float) -> bool:
    """value <= bound, treating floating-point ties as equal"""
    return value <= bound or math.isclose(value, bound, rel_tol=BOUND_TOLERANCE)


def compute_margin(
    corpus: Sequence[Example], separator: np.ndarray, config: FeatureConfig
) -> float:
    """
    min over examples and incorrect candidates z of U.Phi(x, y) - U.Phi(x, z).

    Returns math.inf when no example has an incorrect candidate. The value
    may be zero or negative; that is not an error.

    The feature space, hash width and order included, is that of ``config``.

    Raises:
        ContractViolation: separator length differs from the feature table
        EnumerationLimitError: a sentence longer than eight tokens
    """
    if separator.shape != (config.table_size,):
        raise ContractViolation("separator length does not match the feature table")
    margin = math.inf
    for sentence, gold in corpus:
        candidates = build_candidates(sentence, config)
        weights = separator[candidates.feature_ids]
        gold_score = float(candidates.phi(gold.heads) @ weights)
        for trees, phi in candidates.phi_blocks():
            incorrect = np.array([tree.heads != gold.heads for tree in trees])
            if incorrect.any():
                best_other = float((phi[incorrect] @ weights).max())
                margin = min(margin, gold_score - best_other)
    return margin


def compute_radius(corpus: Sequence[Example], config: FeatureConfig) -> float:
    """
    max over examples and candidates z of ||Phi(x, y) - Phi(x, z)||_2.

    Raises:
        EnumerationLimitError: a sentence longer than eight tokens
    """
    radius = 0.0
    for sentence, gold in corpus:
        candidates = build_candidates(sentence, config)
        gold_phi = candidates.phi(gold.heads)
        for _, phi in candidates.phi_blocks():
            radius = max(radius, float(np.linalg.norm(phi - gold_phi, axis=1).max()))
    return radius


@dataclass
class ConvergenceReport:
    mode: str
    k: int
    delta: float
    radius: float
    steps_observed: int
    full_steps: int
    partial_steps: int
    total_updates: int
    bound_worst: float
    bound_optimal: float
    separable: bool
    worst_verdict: Optional[bool]
    optimal_ratio: Optional[float]
    generalized_verdict: Optional[bool]
    converged: bool
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        for key in ('delta', 'bound_worst', 'bound_optimal'):
            if math.isinf(data[key]):
                data[key] = "inf"
        return data

    def render(self) -> str:
        """Plain-text block for terminals and logs"""
        lines = [
            f"mode={self.mode} k={self.k}",
            f"  delta={self.delta:.6g} R={self.radius:.6g}",
            f"  steps t={self.steps_observed} (full {self.full_steps}, partial {self.partial_steps}),"
            f" updates={self.total_updates}, converged={self.converged}",
            f"  bound_worst R^2/d^2={self.bound_worst:.6g}"
            f"  bound_optimal R^2/(k d^2)={self.bound_optimal:.6g}",
        ]
        if self.separable:
            lines.append(f"  worst-case verdict: {'PASS' if self.worst_verdict else 'FAIL'}")
            if self.generalized_verdict is not None:
                lines.append(
                    f"  partial-step inequality: {'PASS' if self.generalized_verdict else 'FAIL'}"
                )
            if self.optimal_ratio is not None:
                lines.append(f"  t / optimal bound = {self.optimal_ratio:.4g}")
        else:
            lines.append(f"  {self.note}")
        return "\n".join(lines)


def verify_bounds(trace: TrainTrace, delta: float, radius: float, k: int) -> ConvergenceReport:
    """
    Worst-case verdict on full time steps, optimal-case ratio without a
    verdict. delta <= 0 yields a report marked not separable.
    """
    if k < 1:
        raise ContractViolation(f"k must be positive, got {k}")
    common = dict(
        mode=trace.mode,
        k=k,
        delta=delta,
        radius=radius,
        steps_observed=trace.time_steps,
        full_steps=trace.full_steps,
        partial_steps=trace.partial_steps,
        total_updates=trace.total_updates,
        converged=trace.converged,
    )
    if not delta > 0:
        return ConvergenceReport(
            **common,
            bound_worst=math.inf,
            bound_optimal=math.inf,
            separable=False,
            worst_verdict=None,
            optimal_ratio=None,
            generalized_verdict=None,
            note=NOT_SEPARABLE,
        )

    bound_worst = 0.0 if math.isinf(delta) else radius**2 / delta**2
    bound_optimal = bound_worst / k
    counted = trace.full_steps if trace.mode == FULL_DELAY else trace.time_steps
    worst_verdict = within_bound(counted, bound_worst)

    generalized: Optional[bool] = None
    if trace.mode == FULL_DELAY:
        sizes = trace.step_sizes
        total = sum(sizes)
        generalized = within_bound(total**2, bound_worst * sum(m * m for m in sizes))

    # t / (R^2 / (k delta^2)) without dividing by the rounded optimal bound
    ratio = trace.time_steps * k / bound_worst if bound_worst > 0 else None
    return ConvergenceReport(
        **common,
        bound_worst=bound_worst,
        bound_optimal=bound_optimal,
        separable=True,
        worst_verdict=worst_verdict,
        optimal_ratio=ratio,
        generalized_verdict=generalized,
    )


@dataclass
class ConvergenceExperiment:
    spec: SeparableSpec
    delta: float
    radius: float
    reports: List[ConvergenceReport] = field(default_factory=list)

    @property
    def all_worst_verdicts_pass(self) -> bool:
        """Verdicts of the runs the worst-case bound covers: sequential and full delay"""
        return all(
            report.worst_verdict is not False
            for report in self.reports
            if report.mode in (TrainMode.SEQUENTIAL.value, FULL_DELAY)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'spec': self.spec.model_dump(),
            'delta': self.delta if math.isfinite(self.delta) else "inf",
            'radius': self.radius,
            'bounds_hold': self.all_worst_verdicts_pass,
            'reports': [report.to_dict() for report in self.reports],
        }


def run_convergence_experiment(
    spec: SeparableSpec,
    k: int,
    max_steps: int = DEFAULT_MAX_STEPS,
    epochs: Optional[int] = None,
    backend: Backend = Backend.PROCESS,
) -> ConvergenceExperiment:
    """
    Generate a separable corpus, measure delta and R, then run sequential
    (k = 1), full-delay (k) and lock-free (k) training and compare each
    against the bounds. Without ``epochs``, sequential and lock-free runs get
    enough epochs to reach the worst-case mistake bound.
    """
    corpus, separator = generate_separable_corpus(spec)
    config = spec.feature_config()
    with debug_log.timed("margin and radius enumeration", extra={'sentences': len(corpus)}):
        delta = compute_margin(corpus, separator, config)
        radius = compute_radius(corpus, config)
    debug_log.convlab("Measured margin and radius", "INFO", extra={
        'delta': delta,
        'radius': radius,
        'sentences': len(corpus),
    })

    experiment = ConvergenceExperiment(spec=spec, delta=delta, radius=radius)
    if epochs is None:
        # a non-final epoch holds at least one mistake
        bound = radius**2 / delta**2 if 0 < delta < math.inf else 0.0
        epochs = min(MAX_EPOCHS, math.floor(bound) + 2)

    sequential = TrainConfig(
        epochs=epochs, threads=1, mode=TrainMode.SEQUENTIAL, seed=spec.seed,
        shuffle=False, stop_when_converged=True,
    )
    _, trace = train(corpus, config, sequential)
    experiment.reports.append(verify_bounds(trace, delta, radius, 1))

    trace = train_full_delay(corpus, config, k, max_steps)
    experiment.reports.append(verify_bounds(trace, delta, radius, k))

    if k > 1:
        lockfree = TrainConfig(
            epochs=epochs, threads=k, mode=TrainMode.LOCKFREE, seed=spec.seed,
            backend=backend, stop_when_converged=True,
        )
        _, trace = train(corpus, config, lockfree)
        experiment.reports.append(verify_bounds(trace, delta, radius, k))

    for report in experiment.reports:
        debug_log.convlab(f"{report.mode} k={report.k}: t={report.steps_observed}", extra={
            'bound_worst': report.bound_worst,
            'worst_verdict': report.worst_verdict,
        })
    return experiment
