"""Test suite for gaussqkd."""
