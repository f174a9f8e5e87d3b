"""Sweep Runner module for gaussqkd."""
