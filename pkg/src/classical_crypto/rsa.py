"""
Textbook RSA on small integers, for reproducing worked examples.

No padding and no big-number hardening; moduli are limited to 64 bits.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

from sympy import isprime

from error_handling.exceptions import InvalidExponent, MessageTooLarge

logger = logging.getLogger(__name__)

MAX_MODULUS_BITS = 64


def is_prime(n: int) -> bool:
    return bool(isprime(int(n)))


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base^exponent mod modulus by left-to-right square-and-multiply."""
    if modulus < 1:
        raise ValueError(f"Modulus must be positive; got {modulus}")
    if exponent < 0:
        raise ValueError(f"Exponent must be non-negative; got {exponent}")
    result = 1 % modulus
    base %= modulus
    for bit in bin(exponent)[2:]:
        result = (result * result) % modulus
        if bit == "1":
            result = (result * base) % modulus
    return result


def extended_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with a x + b y = g = gcd(a, b)."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_x, x = x, old_x - quotient * x
        old_y, y = y, old_y - quotient * y
    return old_r, old_x, old_y


def mod_inverse(value: int, modulus: int) -> int:
    """
    Multiplicative inverse of value modulo modulus.

    Raises:
        InvalidExponent: If value and modulus are not coprime
    """
    g, x, _ = extended_gcd(value % modulus, modulus)
    if g != 1:
        raise InvalidExponent(f"{value} has no inverse modulo {modulus} (gcd {g})")
    return x % modulus


@dataclass(frozen=True)
class RsaKeySet:
    """Primes, modulus, totient and the public/private exponent pair."""
    p: int
    q: int
    n: int
    phi: int
    l: int  # noqa: E741
    k: int

    @property
    def public_key(self) -> Tuple[int, int]:
        return self.l, self.n

    @property
    def private_key(self) -> Tuple[int, int]:
        return self.k, self.n


def rsa_keygen(p: int, q: int, l: int) -> RsaKeySet:  # noqa: E741
    """
    Build an RSA key set from two primes and a public exponent.

    Args:
        p: First prime
        q: Second, different prime
        l: Public exponent, coprime with (p - 1)(q - 1)

    Returns:
        RsaKeySet with k = l^-1 mod phi

    Raises:
        InvalidExponent: On non-prime or equal factors, or an exponent not coprime with phi
    """
    if p == q or not is_prime(p) or not is_prime(q):
        raise InvalidExponent(f"p and q must be distinct primes; got p={p}, q={q}")
    n = p * q
    if n.bit_length() > MAX_MODULUS_BITS:
        raise InvalidExponent(f"Modulus exceeds {MAX_MODULUS_BITS} bits")
    phi = (p - 1) * (q - 1)
    if not 1 < l < phi or math.gcd(l, phi) != 1:
        raise InvalidExponent(f"Public exponent {l} must lie in (1, {phi}) and be coprime with {phi}")
    keys = RsaKeySet(p=p, q=q, n=n, phi=phi, l=l, k=mod_inverse(l, phi))
    logger.debug(f"RSA keys: n={keys.n} phi={keys.phi} l={keys.l} k={keys.k}")
    return keys


def _check_message(value: int, n: int) -> None:
    if not 0 <= value < n:
        raise MessageTooLarge(f"Message {value} must satisfy 0 <= m < n = {n}")


def rsa_encrypt(m: int, l: int, n: int) -> int:  # noqa: E741
    """e = m^l mod n."""
    _check_message(m, n)
    return mod_pow(m, l, n)


def rsa_decrypt(e: int, k: int, n: int) -> int:
    """m = e^k mod n."""
    _check_message(e, n)
    return mod_pow(e, k, n)
