"""
Tests for logging setup.
"""

import logging
import uuid

from core.logger import ROOT_LOGGER_NAME, ColoredFormatter, get_logger, setup_logger


def _record(level: int) -> logging.LogRecord:
    return logging.LogRecord("hsf.test", level, __file__, 1, "hello", None, None)


class TestColoredFormatter:
    """Tests for the console formatter."""

    def test_plain_without_color(self):
        text = ColoredFormatter(use_color=False).format(_record(logging.WARNING))

        assert "| WARNING |" in text
        assert "\033[" not in text

    def test_colored_copy_leaves_record_alone(self):
        record = _record(logging.ERROR)
        text = ColoredFormatter(use_color=True).format(record)

        assert "\033[31mERROR\033[0m" in text
        assert record.levelname == "ERROR"


class TestSetupLogger:
    """Tests for handler setup."""

    def setup_method(self):
        self.name = f"hsf_test_{uuid.uuid4().hex}"

    def teardown_method(self):
        logger = logging.getLogger(self.name)
        for handler in list(logger.handlers):
            handler.close()
            logger.removeHandler(handler)
        logger.propagate = True
        logger.setLevel(logging.NOTSET)

    def test_no_duplicate_handlers(self):
        setup_logger(self.name, level="DEBUG")
        logger = setup_logger(self.name, level="ERROR")

        assert len(logger.handlers) == 1
        assert logger.level == logging.ERROR
        assert not logger.propagate

    def test_dated_log_file(self, tmp_path):
        logger = setup_logger(self.name, log_to_file=True, log_dir=str(tmp_path / "logs"))
        logger.info("built G(3;2)")
        for handler in logger.handlers:
            handler.flush()

        files = list((tmp_path / "logs").glob("hsf_*.log"))
        assert len(files) == 1
        assert "built G(3;2)" in files[0].read_text()

    def test_dated_log_file_after_reconfigure(self, tmp_path):
        setup_logger(self.name, level="ERROR")
        self.teardown_method()

        logger = setup_logger(self.name, log_to_file=True, log_dir=str(tmp_path / "logs"))
        logger.info("built G(2;4)")
        for handler in logger.handlers:
            handler.flush()

        assert len(logger.handlers) == 2
        assert "built G(2;4)" in next((tmp_path / "logs").glob("hsf_*.log")).read_text()

    def test_fresh_logger_per_test(self):
        logger = logging.getLogger(self.name)

        assert not logger.handlers
        assert logger.propagate


class TestGetLogger:
    """Tests for namespaced loggers."""

    def test_module_loggers_are_children(self):
        assert get_logger("walk.solvers").name == f"{ROOT_LOGGER_NAME}.walk.solvers"

    def test_root_name_unchanged(self):
        assert get_logger().name == ROOT_LOGGER_NAME
