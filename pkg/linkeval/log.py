"""
Global logging setup for linkeval.

Every record carries the id of the run that produced it, so warnings from
parallel workers and from several benchmark versions can be told apart in
the structured (JSON) stream used in CI.
"""
import logging
import os
import socket
from contextvars import ContextVar

import coloredlogs
import ujson as json

root_logger = logging.getLogger()

run_id_var: ContextVar[str | None] = ContextVar("run_id", default=None)


def get_run_id() -> str | None:
    return run_id_var.get()


def set_run_id(run_id: str | None):
    if run_id:
        run_id_var.set(run_id)


def clear_run_id():
    run_id_var.set(None)


class RunLogRecord(logging.LogRecord):
    def __init__(self, *args, run_id: str = "unk", **kwargs):
        super().__init__(*args, **kwargs)
        self.run_id = run_id


class RunLogFactory:
    def __call__(self, *args, **kwargs):
        return RunLogRecord(*args, run_id=get_run_id() or "unk", **kwargs)


logging.setLogRecordFactory(RunLogFactory())


class JsonFormatter(logging.Formatter):
    def __init__(self):
        super().__init__()
        self.hostname = socket.gethostname()

    def format(self, record: RunLogRecord) -> str:  # type: ignore
        log_data = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "file": record.filename,
            "line": record.lineno,
            "message": record.getMessage(),
            "hostname": self.hostname,
            "run_id": getattr(record, "run_id", "unk"),
        }
        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)
        return json.dumps(log_data)


TEXT_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(run_id)s - %(message)s"


def _level() -> int:
    return logging.DEBUG if os.getenv("DEBUG_LOG") else logging.INFO


def configure_logging(json_logs: bool = False) -> None:
    """Install a single root handler: JSON lines on stderr, or coloured text."""
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    if json_logs:
        handler = logging.StreamHandler()
        handler.setFormatter(JsonFormatter())
        root_logger.addHandler(handler)
        root_logger.setLevel(_level())
    else:
        coloredlogs.install(level=_level(), fmt=TEXT_FORMAT, logger=root_logger)

    logging.getLogger("joblib").setLevel(logging.WARNING)


def get_logger(name):
    _logger = logging.getLogger(name)

    if os.getenv("DEBUG_LOG"):
        _logger.setLevel(logging.DEBUG)

    return _logger
