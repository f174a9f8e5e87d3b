"""Output Generator module for gaussqkd."""
