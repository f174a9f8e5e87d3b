"""
Error Handling Module

Central translation of library errors into log records, a one-line console
reason, and the CLI exit code.
"""

import logging
import traceback
from typing import Callable, Dict, Optional, Type

from rich.console import Console

from error_handling.exceptions import (
    EmptySweep,
    ErrorSeverity,
    GaussQKDError,
    NotCoherentSecure,
    SeparableState,
    UnphysicalInput,
)

logger = logging.getLogger(__name__)


class ErrorHandler:
    """
    Central error handling system for gaussqkd.
    Maps errors to handlers that log, report and choose an exit code.
    """

    def __init__(self, console: Optional[Console] = None, verbose: bool = False):
        self.verbose = verbose
        self.console = console or Console(stderr=True)
        self.error_registry: Dict[Type[Exception], Callable[[Exception], int]] = {}
        self.last_error: Optional[Exception] = None
        self._register_default_handlers()

    def _register_default_handlers(self) -> None:
        """Register default error handlers."""
        self.register_handler(UnphysicalInput, self._handle_unphysical)
        self.register_handler(SeparableState, self._handle_security)
        self.register_handler(NotCoherentSecure, self._handle_security)
        self.register_handler(EmptySweep, self._handle_empty)
        self.register_handler(GaussQKDError, self._handle_library_error)

    def register_handler(
        self, error_type: Type[Exception], handler: Callable[[Exception], int]
    ) -> None:
        """
        Register a handler function for a specific error type.

        Args:
            error_type: The type of exception to handle
            handler: Function returning the exit code for this error
        """
        self.error_registry[error_type] = handler

    def handle(self, error: Exception) -> int:
        """
        Handle an error based on its type.

        Args:
            error: The exception to handle

        Returns:
            Process exit code
        """
        self.last_error = error

        # Registration order puts specific types before the base class
        for error_type, handler in self.error_registry.items():
            if isinstance(error, error_type):
                return handler(error)

        return self._handle_generic(error)

    def _report(self, label: str, error: Exception) -> None:
        reason = " ".join(str(error).split())
        self.console.print(f"[red]{label}:[/red] {reason}", highlight=False)

    def _handle_unphysical(self, error: Exception) -> int:
        logger.warning(f"Unphysical input: {error}")
        self._report("unphysical", error)
        return UnphysicalInput.exit_code

    def _handle_security(self, error: Exception) -> int:
        logger.warning(f"Security precondition failed: {error}")
        self._report("insecure", error)
        return getattr(error, "exit_code", 3)

    def _handle_empty(self, error: Exception) -> int:
        logger.warning(f"Empty result: {error}")
        self._report("empty", error)
        return EmptySweep.exit_code

    def _handle_library_error(self, error: Exception) -> int:
        severity = getattr(error, "severity", ErrorSeverity.ERROR)
        if severity == ErrorSeverity.CRITICAL:
            logger.critical(f"{type(error).__name__}: {error}")
        else:
            logger.error(f"{type(error).__name__}: {error}")
        self._report("error", error)
        return getattr(error, "exit_code", 1)

    def _handle_generic(self, error: Exception) -> int:
        """Generic error handler for unregistered error types."""
        logger.error(f"Unexpected error: {error}")
        logger.debug(traceback.format_exc())
        self._report("unexpected error", error)
        return 1
