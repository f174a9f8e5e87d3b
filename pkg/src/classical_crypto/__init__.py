"""Classical and Discrete Cryptography module for gaussqkd."""
