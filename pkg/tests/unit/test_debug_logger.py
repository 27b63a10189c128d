"""
Unit tests for the structured debug logger
==========================================
"""

import logging

import pytest

from dep_tools.utils.debug_logger import StructuredDebugLogger


@pytest.fixture
def logger(caplog):
    caplog.set_level(logging.DEBUG, logger="dep_tools")
    return StructuredDebugLogger()


class TestStructuredDebugLogger:
    """Category prefixes, extras, timing and error ids"""

    def test_category_prefix_and_extra(self, logger, caplog):
        logger.trainer("epoch done", "INFO", extra={'mistakes': 3})
        assert caplog.messages[-1] == '[TRAINER] epoch done | Extra: {"mistakes": 3}'

    def test_level_gating(self, logger, caplog):
        logger.set_level("WARNING")
        logger.decoder("hidden")
        assert not caplog.messages

    def test_timed_block(self, logger, caplog):
        with logger.timed("decode", extra={'sentences': 2}):
            pass
        assert caplog.messages[-1].startswith("[PERFORMANCE] decode took ")
        assert '"sentences": 2' in caplog.messages[-1]

    def test_error_trace_returns_id(self, logger, caplog):
        try:
            raise ValueError("bad head")
        except ValueError as e:
            error_id = logger.error_trace("rejected", e)
        record = caplog.records[-1]
        assert record.levelno == logging.ERROR
        assert error_id in record.getMessage()
        assert '"exception_type": "ValueError"' in record.getMessage()
