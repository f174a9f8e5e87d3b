"""QKD Protocol module for gaussqkd."""
