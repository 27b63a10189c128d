"""
DEP-TOOLS Configuration
=======================

Environment-driven defaults. CLI flags override every value here.
"""

import os
import logging
from typing import Dict, Any

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


class DepToolsConfig:
    """Global configuration for DEP-TOOLS"""

    VERSION = "1.0.0"

    # Feature / model defaults
    HASH_BITS = int(os.getenv('DEP_TOOLS_HASH_BITS', '22'))
    ORDER = int(os.getenv('DEP_TOOLS_ORDER', '1'))

    # Training defaults
    EPOCHS = int(os.getenv('DEP_TOOLS_EPOCHS', '10'))
    THREADS = int(os.getenv('DEP_TOOLS_THREADS', '1'))
    SEED = int(os.getenv('DEP_TOOLS_SEED', '1'))
    BACKEND = os.getenv('DEP_TOOLS_BACKEND', 'process')

    # Output
    LOG_LEVEL = os.getenv('DEP_TOOLS_LOG_LEVEL', 'INFO')
    REPORT_DIR = os.getenv('DEP_TOOLS_REPORT_DIR', '.dep_reports')

    @classmethod
    def validate_environment(cls) -> Dict[str, Any]:
        """Validate environment configuration"""
        issues = []
        warnings = []

        if not 16 <= cls.HASH_BITS <= 30:
            issues.append(f"DEP_TOOLS_HASH_BITS must be in [16, 30], got {cls.HASH_BITS}")
        if cls.ORDER not in (1, 2):
            issues.append(f"DEP_TOOLS_ORDER must be 1 or 2, got {cls.ORDER}")
        if cls.BACKEND not in ('process', 'thread'):
            issues.append(f"DEP_TOOLS_BACKEND must be 'process' or 'thread', got {cls.BACKEND}")
        if cls.THREADS < 1:
            issues.append(f"DEP_TOOLS_THREADS must be positive, got {cls.THREADS}")

        cpu_count = os.cpu_count() or 1
        if cls.THREADS > cpu_count:
            warnings.append(f"{cls.THREADS} workers requested on {cpu_count} CPUs")

        return {
            'valid': len(issues) == 0,
            'issues': issues,
            'warnings': warnings
        }
