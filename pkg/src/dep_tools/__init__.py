"""
DEP-TOOLS: Graph-Based Dependency Parsing with Lock-Free Perceptron Training
============================================================================

A first- and second-order projective dependency parser trained with the
structured perceptron in three regimes (sequential, locked parallel and
lock-free parallel), plus a convergence laboratory that measures the
mistake bounds of delayed parallel updates on separable synthetic data.

Main Components:
- corpus: CoNLL-X reading/writing and tree validity
- features: hashed edge and sibling feature templates
- model: shared weight vector with lazy averaging
- decoder: Eisner dynamic programs and a brute-force oracle
- trainer: sequential / locked / lock-free / full-delay training
- convlab: margin, radius and bound verification
- evalbench: attachment accuracy and speed-up benchmarks
"""

__version__ = "1.0.0"
__license__ = "MIT"

import logging

from dep_tools.config import DepToolsConfig

logger = logging.getLogger(__name__)

# Global configuration instance
config = DepToolsConfig()

validation_result = config.validate_environment()
if not validation_result['valid']:
    logger.warning(f"Environment validation failed: {validation_result['issues']}")
if validation_result['warnings']:
    logger.info(f"Environment warnings: {validation_result['warnings']}")
