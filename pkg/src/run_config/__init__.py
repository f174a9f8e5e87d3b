"""Run Configuration module for gaussqkd."""
