"""
DEP-TOOLS Reporting System
==========================

Versioned JSON and Markdown reports for convergence experiments and benchmarks.
"""

from .base import REPORT_KINDS, ReportGenerator, ReportConfig
from .generators import MarkdownGenerator

__all__ = [
    'REPORT_KINDS',
    'ReportGenerator',
    'ReportConfig',
    'MarkdownGenerator',
]
