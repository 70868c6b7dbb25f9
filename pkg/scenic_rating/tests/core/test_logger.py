#!/usr/bin/env python
"""Tests for the logger module."""

import logging
from unittest.mock import MagicMock, patch

import pytest

from scenic_rating.core.logger import (
    ROOT_LOGGER_NAME,
    STAGES,
    ScenicLogger,
    StageFilter,
    get_logger,
    log_duration,
    parse_stages,
    stage_of,
)


def env(level="WARNING", log_file="", log_format="simple", stages=""):
    """side_effect for EnvFetcher.get serving the logging variables."""
    values = {
        "SCENIC_LOG_LEVEL": level,
        "SCENIC_LOG_FILE": log_file,
        "SCENIC_LOG_FORMAT": log_format,
        "SCENIC_LOG_STAGES": stages,
    }
    return lambda key, default="": values.get(key, default)


class TestScenicLogger:
    """Test cases for ScenicLogger."""

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_get_logger_default(self, mock_env):
        mock_env.side_effect = env()

        logger = ScenicLogger.get_logger()

        assert logger.name == ROOT_LOGGER_NAME
        assert logger.level == logging.WARNING
        assert len(logger.handlers) == 1

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_get_logger_debug_level(self, mock_env):
        mock_env.side_effect = env(level="debug")
        assert ScenicLogger.get_logger().level == logging.DEBUG

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_unknown_level_falls_back_to_warning(self, mock_env):
        mock_env.side_effect = env(level="LOUD")
        assert ScenicLogger.get_logger().level == logging.WARNING

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_detailed_format(self, mock_env):
        mock_env.side_effect = env(log_format="detailed")

        handler = ScenicLogger.get_logger().handlers[0]

        assert "%(asctime)s" in handler.formatter._fmt
        assert "%(stage)s" in handler.formatter._fmt

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_debug_format(self, mock_env):
        mock_env.side_effect = env(log_format="debug")
        assert "%(lineno)d" in ScenicLogger.get_logger().handlers[0].formatter._fmt

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_unknown_format_is_simple(self, mock_env):
        mock_env.side_effect = env(log_format="fancy")
        assert ScenicLogger.get_logger().handlers[0].formatter._fmt == "%(levelname)s: %(message)s"

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_configure_logging_with_file(self, mock_env, tmp_path):
        """Records also go to the file; missing directories are created."""
        log_file = tmp_path / "logs" / "scenic.log"
        mock_env.side_effect = env(level="INFO", log_file=str(log_file))

        logger = get_logger("trees")
        logger.info("grown")
        for handler in logging.getLogger(ROOT_LOGGER_NAME).handlers:
            handler.flush()

        assert len(logging.getLogger(ROOT_LOGGER_NAME).handlers) == 2
        assert "INFO: grown" in log_file.read_text(encoding="utf-8")

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    @patch("scenic_rating.core.logger.logging.FileHandler", side_effect=OSError("read-only"))
    def test_configure_logging_file_error(self, _mock_handler, mock_env, tmp_path):
        mock_env.side_effect = env(log_file=str(tmp_path / "scenic.log"))

        logger = ScenicLogger.get_logger()

        assert len(logger.handlers) == 1

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_configured_once(self, mock_env):
        mock_env.side_effect = env()

        ScenicLogger.get_logger()
        calls = mock_env.call_count
        ScenicLogger.get_logger("other")

        assert mock_env.call_count == calls

    def test_reset(self):
        with patch("scenic_rating.core.logger.EnvFetcher.get", side_effect=env()):
            ScenicLogger.get_logger()
        assert ScenicLogger._configured

        ScenicLogger.reset()

        assert not ScenicLogger._configured
        assert not logging.getLogger(ROOT_LOGGER_NAME).handlers


class TestGetLogger:
    """Test cases for get_logger."""

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_root(self, mock_env):
        mock_env.side_effect = env()
        assert get_logger().name == ROOT_LOGGER_NAME

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_child_propagates_to_root(self, mock_env):
        mock_env.side_effect = env()

        logger = get_logger("evaluation")

        assert logger.name == f"{ROOT_LOGGER_NAME}.evaluation"
        assert logger.parent is logging.getLogger(ROOT_LOGGER_NAME)

    def test_rejects_unknown_stage(self):
        with pytest.raises(ValueError, match="unknown logging stage"):
            get_logger("atomic_io")

    def test_every_stage_has_a_logger(self):
        with patch("scenic_rating.core.logger.EnvFetcher.get", side_effect=env()):
            names = {get_logger(stage).name for stage in STAGES}
        assert names == {f"{ROOT_LOGGER_NAME}.{stage}" for stage in STAGES}


def read_log(path):
    for handler in logging.getLogger(ROOT_LOGGER_NAME).handlers:
        handler.flush()
    return path.read_text(encoding="utf-8")


class TestStages:
    """Test cases for stage tagging and SCENIC_LOG_STAGES."""

    def test_stage_of(self):
        assert stage_of("scenic-rating.trees") == "trees"
        assert stage_of("scenic-rating.trees.grower") == "trees"
        assert stage_of("scenic-rating") == "-"
        assert stage_of("joblib") == "-"

    def test_parse_stages(self):
        assert parse_stages(" Trees, ensemble ,,") == frozenset({"trees", "ensemble"})
        assert parse_stages("") is None

    def test_filter_keeps_warnings_of_other_stages(self):
        stage_filter = StageFilter(frozenset({"trees"}))

        def record(name, level):
            return logging.LogRecord(name, level, __file__, 1, "message", None, None)

        assert stage_filter.filter(record("scenic-rating.trees", logging.DEBUG))
        assert not stage_filter.filter(record("scenic-rating.ensemble", logging.INFO))
        assert stage_filter.filter(record("scenic-rating.ensemble", logging.WARNING))

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_detailed_records_name_their_stage(self, mock_env, tmp_path):
        log_file = tmp_path / "scenic.log"
        mock_env.side_effect = env(level="INFO", log_file=str(log_file), log_format="detailed")

        get_logger("trees").info("grown")

        assert " - trees - INFO - grown" in read_log(log_file)

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_selection_narrows_info_records(self, mock_env, tmp_path):
        """Only the selected stages log below warning level."""
        log_file = tmp_path / "scenic.log"
        mock_env.side_effect = env(level="DEBUG", log_file=str(log_file), stages="trees")

        get_logger("trees").debug("split chosen")
        get_logger("ensemble").info("round accepted")
        get_logger("ensemble").warning("round discarded")

        text = read_log(log_file)
        assert "DEBUG: split chosen" in text
        assert "round accepted" not in text
        assert "WARNING: round discarded" in text

    @patch("scenic_rating.core.logger.EnvFetcher.get")
    def test_unknown_selected_stage_is_reported(self, mock_env, tmp_path):
        log_file = tmp_path / "scenic.log"
        mock_env.side_effect = env(log_file=str(log_file), stages="trees,forest")

        get_logger("trees")

        assert "Ignoring unknown log stages: forest" in read_log(log_file)


class TestLogDuration:
    """Test cases for log_duration."""

    def test_logs_elapsed_time(self):
        logger = MagicMock()
        with patch("scenic_rating.core.logger.time.perf_counter", side_effect=[10.0, 12.5]):
            with log_duration(logger, "Stage train"):
                pass
        logger.info.assert_called_once_with("%s took %.3fs", "Stage train", 2.5)

    def test_logs_when_the_block_raises(self):
        logger = MagicMock()
        with pytest.raises(RuntimeError):
            with log_duration(logger, "Stage load"):
                raise RuntimeError("boom")
        assert logger.info.call_count == 1
