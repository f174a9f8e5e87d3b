"""Error handling module for gaussqkd."""
