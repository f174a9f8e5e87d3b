"""Tests for the one-time pad, textbook RSA, BB84 and Ekert91."""
import math

import numpy as np
import pytest

from classical_crypto.bb84 import WORKED_EXAMPLE, bb84_from_choices, bb84_run
from classical_crypto.ekert import (
    chsh_value_exact,
    classical_chsh_bound,
    correlation,
    ekert91_run,
)
from classical_crypto.rsa import mod_inverse, mod_pow, rsa_decrypt, rsa_encrypt, rsa_keygen
from classical_crypto.vernam import BitString, vernam
from error_handling.exceptions import (
    ConfigurationError,
    InvalidExponent,
    KeyLengthError,
    MessageTooLarge,
)


# Vernam

def test_vernam_worked_example():
    assert str(vernam("010011101", "110100011")) == "100111110"


def test_vernam_is_an_involution():
    rng = np.random.default_rng(1)
    message = BitString.random(64, rng)
    key = BitString.random(64, rng)
    assert vernam(vernam(message, key), key) == message
    assert (message ^ key) ^ key == message


def test_vernam_length_mismatch():
    with pytest.raises(KeyLengthError):
        vernam("0101", "010")


def test_bitstring_parsing():
    assert str(BitString.parse("0100 1110")) == "01001110"
    with pytest.raises(ConfigurationError):
        BitString.parse("0120")


# RSA

def test_rsa_worked_example():
    keys = rsa_keygen(61, 53, 17)
    assert (keys.n, keys.phi, keys.k) == (3233, 3120, 2753)
    cipher = rsa_encrypt(123, keys.l, keys.n)
    assert cipher == 855
    assert rsa_decrypt(cipher, keys.k, keys.n) == 123


def test_rsa_round_trip_for_every_message():
    keys = rsa_keygen(61, 53, 17)
    for m in range(keys.n):
        assert rsa_decrypt(rsa_encrypt(m, keys.l, keys.n), keys.k, keys.n) == m


def test_mod_helpers_agree_with_builtins():
    for base, exponent, modulus in [(4, 13, 497), (123, 17, 3233), (2, 0, 7), (5, 3, 1)]:
        assert mod_pow(base, exponent, modulus) == pow(base, exponent, modulus)
    assert (mod_inverse(17, 3120) * 17) % 3120 == 1


def test_rsa_invalid_parameters():
    with pytest.raises(InvalidExponent):
        rsa_keygen(61, 53, 3)
    with pytest.raises(InvalidExponent):
        rsa_keygen(60, 53, 17)
    with pytest.raises(InvalidExponent):
        rsa_keygen(61, 61, 17)


def test_rsa_message_too_large():
    keys = rsa_keygen(61, 53, 17)
    with pytest.raises(MessageTooLarge):
        rsa_encrypt(keys.n, keys.l, keys.n)


# BB84

def test_bb84_worked_example():
    alice_bits, alice_bases, bob_bases, bob_bits = zip(*WORKED_EXAMPLE)
    run = bb84_from_choices(alice_bits, alice_bases, bob_bases, bob_bits)
    assert run.sifted_positions == [3, 4, 6, 8, 9]
    assert run.alice_key == run.bob_key == [1, 0, 1, 0, 0]
    assert run.error_rate == 0.0
    assert run.secure is True


def test_bb84_without_eavesdropper_has_no_errors():
    run = bb84_run(20_000, seed=2)
    assert run.error_rate == 0.0
    assert run.estimated_error == 0.0
    assert run.alice_key == run.bob_key
    assert run.secure is True


def test_bb84_sifting_keeps_half_the_rounds():
    n = 100_000
    run = bb84_run(n, seed=4)
    assert abs(run.sifted_fraction - 0.5) <= 3 * math.sqrt(0.25 / n)


def test_bb84_intercept_resend_error_rate():
    """Eve guesses the basis wrong half the time, then Bob errs half the time: QBER 1/4."""
    run = bb84_run(100_000, eavesdrop=True, seed=6)
    n_sifted = len(run.sifted_positions)
    assert abs(run.error_rate - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / n_sifted)
    assert run.eve_bases is not None


def test_bb84_disclosed_sample_is_removed_from_key():
    run = bb84_run(1_000, seed=8, disclose_fraction=0.5)
    assert set(run.disclosed_positions) <= set(run.sifted_positions)
    assert len(run.alice_key) == len(run.sifted_positions) - len(run.disclosed_positions)


def test_bb84_rejects_short_runs():
    with pytest.raises(ConfigurationError):
        bb84_run(7)
    with pytest.raises(ConfigurationError):
        bb84_run(100, disclose_fraction=1.0)


# Ekert91

def test_chsh_exact_and_classical_bound():
    assert chsh_value_exact() == pytest.approx(2 * math.sqrt(2), rel=1e-12)
    assert classical_chsh_bound() == 2.0
    assert correlation(1, 0) == pytest.approx(-1.0)


def test_ekert_chsh_estimate():
    """Sampled S lies within 3 standard errors of 2 sqrt(2)."""
    run = ekert91_run(100_000, seed=12)
    assert run.s_value is not None
    assert abs(run.s_value - 2 * math.sqrt(2)) <= 3 * run.s_standard_error
    assert run.secure is True


def test_ekert_key_has_no_errors():
    """Equal orientations are perfectly anticorrelated, so the flipped key of Bob matches."""
    run = ekert91_run(5_000, seed=1)
    assert run.error_rate == 0.0
    assert run.alice_key == run.bob_key
    assert len(run.alice_key) == len(run.sifted_positions) > 0


def test_ekert_rejects_few_pairs():
    with pytest.raises(ConfigurationError):
        ekert91_run(99)
