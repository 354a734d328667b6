import io
import logging

from logging_utils import KeyValueFormatter, configure_logging


def _record(msg, *args, **extra):
    record = logging.LogRecord("wsd.test", logging.INFO, __file__, 1, msg, args, None)
    record.__dict__.update(extra)
    return record


def test_key_value_line():
    line = KeyValueFormatter().format(_record("xval_word_done word=%s", "state.n", folds=10))
    assert " level=INFO logger=wsd.test " in line
    assert line.endswith(' msg="xval_word_done word=state.n" folds=10')


def test_bare_values_stay_unquoted():
    line = KeyValueFormatter().format(_record("run_done"))
    assert "msg=run_done" in line


def test_configure_logging_routes_to_stream(monkeypatch):
    monkeypatch.delenv("WSD_DEBUG_FOLDS", raising=False)
    stream = io.StringIO()
    configure_logging("WARNING", stream=stream)
    logging.getLogger("wsd").info("hidden")
    logging.getLogger("wsd").warning("xval_skip word=%s", "age.n")
    assert stream.getvalue().count("\n") == 1
    assert "xval_skip word=age.n" in stream.getvalue()


def test_fold_debug_switch(monkeypatch):
    monkeypatch.setenv("WSD_DEBUG_FOLDS", "1")
    configure_logging("WARNING", stream=io.StringIO())
    assert logging.getLogger("wsd.folds").level == logging.DEBUG
    logging.getLogger("wsd.folds").setLevel(logging.NOTSET)
