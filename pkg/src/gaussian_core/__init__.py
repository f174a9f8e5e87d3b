"""Gaussian State Core module for gaussqkd."""
