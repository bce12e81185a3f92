"""
===========================
Interface Utility Functions
===========================

Logging sinks and error handling shared by the ``legwheel`` command line
tools.

"""
import functools
import sys
from bdb import BdbQuit
from pathlib import Path
from typing import Any, Callable, Union

from loguru import logger

from legwheel.exceptions import LegWheelError

MESSAGE_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> "
    "- <level>{message}</level>"
)


def add_logging_sink(sink, verbose: bool, colorize: bool = False, serialize: bool = False):
    level = "DEBUG" if verbose else "ERROR"
    return logger.add(
        sink, colorize=colorize, level=level, format=MESSAGE_FORMAT, serialize=serialize
    )


def configure_logging_to_terminal(verbose: bool):
    logger.remove()  # Clear default configuration
    add_logging_sink(sys.stdout, verbose, colorize=True)


def configure_logging_to_file(output_directory: Union[str, Path]):
    log_file = Path(output_directory) / "simulation.log"
    return add_logging_sink(log_file, verbose=True)


def _post_mortem():
    import pdb
    import traceback

    traceback.print_exc()
    pdb.post_mortem()


def handle_exceptions(func: Callable, logger: Any, with_debugger: bool) -> Callable:
    """Logs errors raised by ``func`` and, if asked, opens a post-mortem debugger.

    Errors from ``legwheel`` itself are reported by type and message; anything
    else is logged with its traceback.

    """

    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (BdbQuit, KeyboardInterrupt):
            raise
        except Exception as e:
            if isinstance(e, LegWheelError):
                logger.error(f"{type(e).__name__}: {e}")
            else:
                logger.exception(f"Uncaught exception {e}")
            if with_debugger:
                _post_mortem()
            else:
                raise

    return wrapped
