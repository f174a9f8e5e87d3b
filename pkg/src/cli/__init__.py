"""CLI Interface module for gaussqkd."""
