"""Protocol Efficiency module for gaussqkd."""
