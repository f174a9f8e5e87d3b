"""gaussqkd - Gaussian-state toolkit and efficiency analysis for continuous-variable QKD."""

__version__ = "0.1.0"
