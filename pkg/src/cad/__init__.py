"""Classical Advantage Distillation module for gaussqkd."""
