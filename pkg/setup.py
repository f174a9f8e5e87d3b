#!/usr/bin/env python
from setuptools import setup

# This file is kept for compatibility with older tools
# Most configuration is in pyproject.toml

if __name__ == "__main__":
    setup(
        name="gaussqkd",
        version="0.1.0",  # Match with pyproject.toml
    )
