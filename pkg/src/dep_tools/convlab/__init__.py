"""
DEP-TOOLS Convergence Lab
=========================

Separable synthetic corpora with known margin, exact margin/radius by
enumeration, and checks of observed time steps against the mistake bounds.
"""

from .candidates import CandidateSet, build_candidates
from .generator import (
    Rule,
    SeparableSpec,
    PlantedGrammar,
    plant_grammar,
    hand_separator,
    u_optimal,
    generate_separable_corpus,
)
from .bounds import (
    NOT_SEPARABLE,
    ConvergenceReport,
    ConvergenceExperiment,
    compute_margin,
    compute_radius,
    verify_bounds,
    within_bound,
    run_convergence_experiment,
)

__all__ = [
    'CandidateSet',
    'build_candidates',
    'Rule',
    'SeparableSpec',
    'PlantedGrammar',
    'plant_grammar',
    'hand_separator',
    'u_optimal',
    'generate_separable_corpus',
    'NOT_SEPARABLE',
    'ConvergenceReport',
    'ConvergenceExperiment',
    'compute_margin',
    'compute_radius',
    'verify_bounds',
    'within_bound',
    'run_convergence_experiment',
]
