from __future__ import annotations
import logging
import os
import sys

# LogRecord attributes that are plumbing, not payload
_RECORD_FIELDS = frozenset({
    "name", "msg", "args", "levelname", "levelno", "pathname", "filename",
    "module", "exc_info", "exc_text", "stack_info", "lineno", "funcName",
    "created", "msecs", "relativeCreated", "thread", "threadName",
    "processName", "process", "taskName", "message", "asctime",
})


class KeyValueFormatter(logging.Formatter):
    """One `key=value` line per record; `extra=` fields are appended sorted."""

    default_time_format = "%Y-%m-%dT%H:%M:%S"
    default_msec_format = "%s.%03d"

    def format(self, record: logging.LogRecord) -> str:  # noqa: D401
        parts = [
            f"ts={self.formatTime(record, self.datefmt)}",
            f"level={record.levelname}",
            f"logger={record.name}",
            f"msg={self._quote(record.getMessage())}",
        ]
        extras = {
            k: v for k, v in record.__dict__.items()
            if not k.startswith("_") and k not in _RECORD_FIELDS
        }
        parts.extend(f"{k}={self._quote(extras[k])}" for k in sorted(extras))
        if record.exc_info:
            parts.append(f"exc={self._quote(self.formatException(record.exc_info).splitlines()[-1])}")
        return " ".join(parts)

    @staticmethod
    def _quote(val) -> str:
        s = str(val)
        if not s or any(ch.isspace() for ch in s):
            return '"' + s.replace('"', "'") + '"'
        return s


def configure_logging(level: str, *, force: bool = True, stream=None) -> None:
    """Route all records to stderr (artifacts own stdout)."""
    lvl = getattr(logging, level.upper(), logging.INFO)
    root = logging.getLogger()
    if force:
        for h in list(root.handlers):
            root.removeHandler(h)
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(KeyValueFormatter())
    root.addHandler(handler)
    root.setLevel(lvl)
    if os.getenv("WSD_DEBUG_FOLDS"):
        logging.getLogger("wsd.folds").setLevel(logging.DEBUG)
    logging.getLogger(__name__).debug("logging_configured level=%s", level)


__all__ = ["configure_logging", "KeyValueFormatter"]
