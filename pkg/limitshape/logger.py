"""
Centralized logging configuration for the limit shape tools.
Provides a logger that writes to the console and to a per-session log file.
"""
import logging
import os
from datetime import datetime


# Default logs directory sits next to the package
DEFAULT_LOGS_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "logs")

# File format: datetime, level, file and function
FILE_LOG_FORMAT = "%(asctime)s %(levelname)s [%(filename)s - %(funcName)s] %(message)s"
FILE_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Console format: time only and function name
CONSOLE_LOG_FORMAT = "%(asctime)s %(levelname)s [%(funcName)s] %(message)s"
CONSOLE_DATE_FORMAT = "%H:%M:%S"

# Global logger instance
_logger = None


def _logs_dir():
    """Resolve the log directory; an empty LIMITSHAPE_LOG_DIR disables file logging."""
    return os.environ.get("LIMITSHAPE_LOG_DIR", DEFAULT_LOGS_DIR)


def get_logger(name=None):
    """
    Get or create the application logger.

    Args:
        name: Optional logger name. If None, uses "limitshape".

    Returns:
        logging.Logger: Configured logger instance
    """
    global _logger

    if _logger is not None:
        return _logger

    logger = logging.getLogger(name or "limitshape")
    logger.setLevel(logging.INFO)

    # Prevent duplicate handlers if called multiple times
    if logger.handlers:
        _logger = logger
        return _logger

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)
    console_handler.setFormatter(logging.Formatter(CONSOLE_LOG_FORMAT, datefmt=CONSOLE_DATE_FORMAT))
    logger.addHandler(console_handler)

    logs_dir = _logs_dir()
    if logs_dir:
        os.makedirs(logs_dir, exist_ok=True)
        log_path = os.path.join(logs_dir, f"limitshape_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log")
        file_handler = logging.FileHandler(log_path, mode='a', encoding='utf-8')
        file_handler.setLevel(logging.INFO)
        file_handler.setFormatter(logging.Formatter(FILE_LOG_FORMAT, datefmt=FILE_DATE_FORMAT))
        logger.addHandler(file_handler)

    # Prevent propagation to avoid duplicate logs
    logger.propagate = False

    _logger = logger
    return _logger


def set_verbosity(level):
    """Change the level of the application logger and all of its handlers."""
    logger = get_logger()
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)
    return logger
