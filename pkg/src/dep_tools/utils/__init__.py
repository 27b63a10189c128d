"""
DEP-TOOLS Utilities
===================

Common helpers used throughout DEP-TOOLS.
"""

from .debug_logger import debug_log, StructuredDebugLogger

__all__ = [
    'debug_log',
    'StructuredDebugLogger'
]
