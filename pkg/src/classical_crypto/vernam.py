"""
One-time pad over bit strings: e = m XOR k, and m = e XOR k.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from error_handling.exceptions import ConfigurationError, KeyLengthError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BitString:
    """Immutable ordered sequence of bits."""
    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ConfigurationError(f"Bits must be 0 or 1; got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "BitString":
        """Parse a string such as '0100 1110'; whitespace is ignored."""
        cleaned = "".join(text.split())
        if any(ch not in "01" for ch in cleaned):
            raise ConfigurationError(f"Not a bit string: {text!r}")
        return cls(tuple(int(ch) for ch in cleaned))

    @classmethod
    def random(cls, length: int, rng: np.random.Generator) -> "BitString":
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=length)))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __xor__(self, other: "BitString") -> "BitString":
        return vernam(self, other)


BitLike = Union[BitString, str, Iterable[int]]


def as_bits(value: BitLike) -> BitString:
    if isinstance(value, BitString):
        return value
    if isinstance(value, str):
        return BitString.parse(value)
    return BitString(tuple(value))


def vernam(message: BitLike, key: BitLike) -> BitString:
    """
    Encrypt or decrypt with a one-time pad.

    Args:
        message: Plain or cipher text bits
        key: Key bits of the same length

    Returns:
        Bitwise XOR of message and key

    Raises:
        KeyLengthError: If the lengths differ
    """
    m, k = as_bits(message), as_bits(key)
    if len(m) != len(k):
        raise KeyLengthError(f"Message has {len(m)} bits but key has {len(k)}")
    return BitString(tuple(a ^ b for a, b in zip(m.bits, k.bits)))
