"""Entanglement Diagnostics module for gaussqkd."""
