import json
import logging

from pydantic import ValidationError

from depth_subconvexity.errors import (
    ErrorCode,
    InvalidGrid,
    NotCoprime,
    ReportIOError,
    VerificationFailed,
    map_exception,
)
from depth_subconvexity.harness.grid import RunConfig
from depth_subconvexity.logging import (
    CorrelationFilter,
    JSONFormatter,
    get_logger,
    set_correlation_id,
)


def _record(**extra) -> logging.LogRecord:
    rec = logging.LogRecord("depthsub", logging.INFO, __file__, 1, "verify_end", None, None)
    for key, value in extra.items():
        setattr(rec, key, value)
    return rec


def test_json_formatter_carries_event_and_correlation():
    set_correlation_id("abc12345")
    rec = _record(event="verify_end", fields={"failed": 0})
    CorrelationFilter().filter(rec)
    payload = json.loads(JSONFormatter().format(rec))
    assert payload["corr_id"] == "abc12345"
    assert payload["event"] == "verify_end" and payload["fields"] == {"failed": 0}
    assert payload["level"] == "INFO" and payload["ts"].endswith("Z")


def test_get_logger_level_override():
    assert get_logger("depthsub.test", level="DEBUG").level == logging.DEBUG


def test_error_codes():
    assert map_exception(VerificationFailed("x")).code == ErrorCode.VERIFICATION_FAILED
    assert map_exception(NotCoprime("x")).code == ErrorCode.CONFIG
    assert map_exception(InvalidGrid([({"p": 2}, "p must be odd")])).code == ErrorCode.CONFIG
    assert map_exception(ReportIOError("x")).code == ErrorCode.IO
    assert map_exception(FileNotFoundError("x")).code == ErrorCode.NOT_FOUND
    assert map_exception(ModuleNotFoundError("x")).code == ErrorCode.DEPENDENCY_MISSING
    assert map_exception(PermissionError("x")).code == ErrorCode.IO
    assert map_exception(RuntimeError("x")).code == ErrorCode.VERIFICATION_FAILED


def test_pydantic_errors_are_config_errors():
    try:
        RunConfig(verifier="delta", jobs=0)
    except ValidationError as exc:
        assert map_exception(exc).code == ErrorCode.CONFIG
    else:
        raise AssertionError("jobs=0 should not validate")


def test_invalid_grid_lists_rejects():
    err = InvalidGrid([({"p": i}, "bad") for i in range(25)])
    assert len(err.rejects) == 25
    assert "(+5 more)" in str(err)
