"""Unit tests for the gaussqkd library packages."""
