# tests/test_logger.py

import io
import logging
import sys

from src.utils.logger import setup_logger, get_logger, UnicodeSafeStreamHandler


def _console_handlers(logger):
    return [h for h in logger.handlers if isinstance(h, UnicodeSafeStreamHandler)]


def test_second_setup_survives_a_closed_stderr(monkeypatch):
    name = "PsaKitTest.reconfigure"
    first = io.StringIO()
    monkeypatch.setattr(sys, "stderr", first)
    logger = setup_logger(name, log_to_file=False)
    logger.info("first run")
    first.close()

    second = io.StringIO()
    monkeypatch.setattr(sys, "stderr", second)
    again = setup_logger(name, level=logging.WARNING, log_to_file=False)
    assert again is logger
    handlers = _console_handlers(logger)
    assert len(handlers) == 1
    assert handlers[0].stream is second
    assert handlers[0].level == logging.WARNING

    logger.warning("second run")
    assert "second run" in second.getvalue()
    assert "WARNING" in second.getvalue()


def test_console_lines_name_the_area(monkeypatch):
    stream = io.StringIO()
    monkeypatch.setattr(sys, "stderr", stream)
    setup_logger("PsaKitTest.areas", log_to_file=False)
    logging.getLogger("PsaKitTest.areas.powers").info("built graph")
    assert "PsaKitTest.areas.powers - INFO - built graph" in stream.getvalue()


def test_file_handler_writes_debug_records(tmp_path, monkeypatch):
    monkeypatch.setattr(sys, "stderr", io.StringIO())
    logger = setup_logger("PsaKitTest.files", log_dir=str(tmp_path))
    logger.debug("detail")
    for handler in logger.handlers:
        handler.flush()
    logs = list(tmp_path.glob("psakit_*.log"))
    assert len(logs) == 1
    assert "detail" in logs[0].read_text(encoding="utf-8")


def test_area_loggers_are_children_of_the_root():
    assert get_logger("powers").name == "PsaKit.powers"
