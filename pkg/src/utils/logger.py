# src/utils/logger.py

import logging
import sys
import os
from datetime import datetime
from typing import Optional

ROOT_LOGGER_NAME = "PsaKit"

class CustomFormatter(logging.Formatter):
    """Colourised console format; the logger name shows which area emitted the record"""

    grey = "\x1b[38;20m"
    yellow = "\x1b[33;20m"
    red = "\x1b[31;20m"
    bold_red = "\x1b[31;1m"
    reset = "\x1b[0m"
    format_str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    LEVEL_COLOURS = {
        logging.DEBUG: grey,
        logging.INFO: grey,
        logging.WARNING: yellow,
        logging.ERROR: red,
        logging.CRITICAL: bold_red,
    }

    def format(self, record):
        colour = self.LEVEL_COLOURS.get(record.levelno, self.grey)
        formatter = logging.Formatter(colour + self.format_str + self.reset, datefmt="%Y-%m-%d %H:%M:%S")
        return formatter.format(record)

class UnicodeSafeStreamHandler(logging.StreamHandler):
    def emit(self, record):
        try:
            msg = self.format(record)
            stream = self.stream
            buffer = getattr(stream, 'buffer', None)
            if buffer is None:
                # captured streams (pytest, io.StringIO) have no binary buffer
                stream.write(msg + self.terminator)
            else:
                buffer.write(msg.encode(encoding='utf-8', errors='replace'))
                buffer.write(self.terminator.encode('utf-8'))
            self.flush()
        except Exception:
            self.handleError(record)

def _console_handler(level: int) -> UnicodeSafeStreamHandler:
    console_handler = UnicodeSafeStreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(CustomFormatter())
    return console_handler

def setup_logger(name: str = ROOT_LOGGER_NAME, log_dir: Optional[str] = None,
                 level: int = logging.INFO, log_to_file: bool = True) -> logging.Logger:
    """
    Set up and return a logger instance with both file and console handlers

    The console handler writes to stderr: stdout carries the machine-readable report.

    Args:
        name: The name of the logger
        log_dir: Directory for log files (defaults to <repo>/logs)
        level: Console log level
        log_to_file: Whether to attach the file handler

    Returns:
        logging.Logger: Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)

    # Prevent adding handlers multiple times; a later call only swaps in a console handler
    # on the current stderr, the old stream is left untouched
    if logger.handlers:
        for handler in list(logger.handlers):
            if isinstance(handler, UnicodeSafeStreamHandler):
                logger.removeHandler(handler)
        logger.addHandler(_console_handler(level))
        return logger

    if log_to_file:
        logs_dir = log_dir or os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(__file__))), 'logs')
        os.makedirs(logs_dir, exist_ok=True)

        log_file = os.path.join(logs_dir, f'psakit_{datetime.now().strftime("%Y%m%d_%H%M%S")}.log')
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        file_handler.setFormatter(file_formatter)
        logger.addHandler(file_handler)

    logger.addHandler(_console_handler(level))

    return logger

def get_logger(area: str) -> logging.Logger:
    """Child logger for a library area, e.g. get_logger('powers') -> PsaKit.powers"""
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{area}")
