"""Tests for error translation into exit codes."""
import pytest
from rich.console import Console

from error_handling.exceptions import (
    ConfigurationError,
    EmptySweep,
    ErrorSeverity,
    InternalInconsistency,
    MalformedMatrix,
    NotCoherentSecure,
    SeparableState,
    UnphysicalInput,
)
from error_handling.handler import ErrorHandler


@pytest.fixture
def handler():
    return ErrorHandler(console=Console(record=True, width=200))


@pytest.mark.parametrize(
    "error,code",
    [
        (UnphysicalInput("bad"), 2),
        (MalformedMatrix("bad"), 2),
        (SeparableState("ppt"), 3),
        (NotCoherentSecure("no"), 3),
        (EmptySweep("none"), 4),
        (ConfigurationError("cfg"), 1),
        (InternalInconsistency("mismatch"), 1),
    ],
)
def test_exit_codes(handler, error, code):
    assert handler.handle(error) == code
    assert handler.last_error is error


def test_reason_is_single_line(handler):
    handler.handle(UnphysicalInput("lambda too\n  small"))
    text = handler.console.export_text()
    assert "unphysical: lambda too small" in text


def test_generic_errors(handler):
    assert handler.handle(ValueError("odd")) == 1
    assert "unexpected error: odd" in handler.console.export_text()


def test_custom_handler(handler):
    handler.register_handler(KeyError, lambda error: 7)
    assert handler.handle(KeyError("k")) == 7


def test_inconsistency_is_critical():
    assert InternalInconsistency("x").severity == ErrorSeverity.CRITICAL
