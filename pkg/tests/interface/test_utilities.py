import pytest

from legwheel.config_tree import ConfigurationError
from legwheel.interface.utilities import (
    configure_logging_to_file,
    handle_exceptions,
)


def test_handle_exceptions_passes_results(mocker):
    logger = mocker.Mock()
    wrapped = handle_exceptions(lambda a, b=1: a + b, logger, with_debugger=False)
    assert wrapped(1, b=2) == 3
    logger.error.assert_not_called()


def test_handle_exceptions_reports_package_errors(mocker):
    logger = mocker.Mock()

    def fail():
        raise ConfigurationError("Bad value.", "dt")

    with pytest.raises(ConfigurationError):
        handle_exceptions(fail, logger, with_debugger=False)()
    logger.error.assert_called_once_with("ConfigurationError: Bad value.")
    logger.exception.assert_not_called()


def test_handle_exceptions_logs_tracebacks(mocker):
    logger = mocker.Mock()

    def fail():
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        handle_exceptions(fail, logger, with_debugger=False)()
    logger.exception.assert_called_once()


def test_handle_exceptions_opens_debugger(mocker):
    post_mortem = mocker.patch("legwheel.interface.utilities._post_mortem")

    def fail():
        raise RuntimeError("boom")

    assert handle_exceptions(fail, mocker.Mock(), with_debugger=True)() is None
    post_mortem.assert_called_once()


def test_handle_exceptions_lets_interrupts_through(mocker):
    logger = mocker.Mock()

    def interrupt():
        raise KeyboardInterrupt

    with pytest.raises(KeyboardInterrupt):
        handle_exceptions(interrupt, logger, with_debugger=False)()
    logger.exception.assert_not_called()


def test_logging_to_file(tmp_path):
    from loguru import logger

    sink = configure_logging_to_file(tmp_path)
    try:
        logger.debug("written to the log file")
    finally:
        logger.remove(sink)
    assert "written to the log file" in (tmp_path / "simulation.log").read_text()
