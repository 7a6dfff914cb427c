import logging
import sys
from unittest.mock import patch

from tubelab.logging_config import setup_logging


class TestSetupLogging:
    """Тесты настройки логирования."""

    def test_prod_level_is_info(self):
        """В prod уровень логирования INFO."""
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = False
            with patch("logging.basicConfig") as mock_config:
                setup_logging()

                mock_config.assert_called_once()
                assert mock_config.call_args[1]["level"] == logging.INFO

    def test_dev_level_is_debug(self):
        """В dev/test уровень логирования DEBUG."""
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = True
            with patch("logging.basicConfig") as mock_config:
                with patch("logging.getLogger"):
                    setup_logging()

                assert mock_config.call_args[1]["level"] == logging.DEBUG

    def test_logs_go_to_stderr(self):
        """stdout остаётся для TSV."""
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = False
            with patch("logging.basicConfig") as mock_config:
                setup_logging()

                assert mock_config.call_args[1]["stream"] is sys.stderr

    def test_debug_format_includes_file_info(self):
        """В debug формате есть информация о файле и строке."""
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = True
            with patch("logging.basicConfig") as mock_config:
                with patch("logging.getLogger"):
                    setup_logging()

                fmt = mock_config.call_args[1]["format"]
                assert "filename" in fmt
                assert "lineno" in fmt
                assert "processName" in fmt

    def test_warnings_are_captured(self):
        """warnings.warn идёт в лог, а не мимо форматтера."""
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = False
            with patch("logging.basicConfig"), patch("logging.captureWarnings") as mock_capture:
                setup_logging()

        mock_capture.assert_called_once_with(True)

    def test_sqlalchemy_quieted_in_debug(self):
        with patch("tubelab.logging_config.settings") as mock_settings:
            mock_settings.debug = True
            with patch("logging.basicConfig"):
                setup_logging()

        assert logging.getLogger("sqlalchemy.engine").level == logging.WARNING
