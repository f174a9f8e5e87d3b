"""Tests for bipartite entanglement diagnostics."""
import numpy as np
import pytest

from entanglement.bipartite import (
    StandardForm,
    block_invariants,
    entropy_of_entanglement,
    is_nppt,
    log_negativity,
    partial_transpose,
    ppt_spectrum,
    purify,
    to_standard_form,
)
from error_handling.exceptions import DimensionError, PurityError
from gaussian_core.state import (
    GaussianState,
    apply,
    partial_trace,
    symplectic_spectrum,
    tensor,
    thermal_state,
    two_mode_squeezed_vacuum,
)
from gaussian_core.symplectic import make_transform


def _local_scramble(gamma: np.ndarray) -> np.ndarray:
    local = make_transform("squeezer", {"r": 0.3}).compose(make_transform("phase_shift", {"theta": 0.8}))
    other = make_transform("phase_shift", {"theta": -1.3}).compose(make_transform("squeezer", {"r": -0.2}))
    return apply(local.direct_sum(other), GaussianState(gamma)).gamma


def test_block_invariants_of_standard_form(reference_state):
    inv = block_invariants(reference_state.covariance())
    assert inv.detA == pytest.approx(4.0)
    assert inv.detB == pytest.approx(4.0)
    assert inv.detC == pytest.approx(-0.75)


def test_block_invariants_requires_two_modes():
    with pytest.raises(DimensionError):
        block_invariants(np.eye(2))


def test_standard_form_recovered_after_local_transforms(reference_state):
    """Local symplectic maps leave the standard-form parameters unchanged."""
    form = to_standard_form(_local_scramble(reference_state.covariance()))
    assert form.lambda_a == pytest.approx(2.0)
    assert form.lambda_b == pytest.approx(2.0)
    assert form.k_x == pytest.approx(1.5)
    assert form.k_p == pytest.approx(0.5)
    assert form.is_symmetric


def test_standard_form_covariance_layout():
    gamma = StandardForm(2.0, 3.0, 1.0, -0.5).covariance()
    assert gamma[0, 2] == 1.0
    assert gamma[1, 3] == 0.5
    assert gamma[2, 2] == 3.0


def test_product_state_has_zero_couplings():
    form = to_standard_form(tensor(thermal_state(1.0), thermal_state(0.5)))
    assert form.k_x == pytest.approx(0.0, abs=1e-6)
    assert form.k_p == pytest.approx(0.0, abs=1e-6)
    assert form.lambda_a == pytest.approx(3.0)


def test_partial_transpose_flips_party_momentum(reference_state):
    pt = partial_transpose(reference_state.covariance(), 1)
    assert pt[1, 3] == pytest.approx(0.5)
    assert pt[3, 3] == pytest.approx(2.0)


def test_reference_state_log_negativity(reference_state):
    """LN = -1/2 log2(0.75) for lambda = 2, c_x = 1.5, c_p = 0.5."""
    gamma = reference_state.covariance()
    assert is_nppt(gamma)
    assert log_negativity(gamma) == pytest.approx(0.2075187496, abs=1e-9)
    assert min(ppt_spectrum(gamma)) == pytest.approx(np.sqrt(0.75))


def test_tmsv_log_negativity(tmsv):
    """LN of a TMSV with squeezing r is 2 r / ln 2."""
    r = 0.6
    assert log_negativity(tmsv(r).covariance()) == pytest.approx(2 * r / np.log(2))


def test_separable_states_have_zero_log_negativity():
    gamma = tensor(thermal_state(1.0), thermal_state(0.2)).gamma
    assert not is_nppt(gamma)
    assert log_negativity(gamma) == 0.0


def test_closed_form_and_spectral_paths_agree(state_sampler):
    """Closed-form LN and NPPT flag match the partial-transpose spectrum on random states."""
    for state in state_sampler(10_000, seed=3):
        gamma = state.covariance()
        assert state.log_negativity == pytest.approx(log_negativity(gamma), abs=1e-8)
        if abs(state.ppt_product - 1.0) > 1e-7:
            assert state.is_nppt == is_nppt(gamma)


def test_log_negativity_is_local_invariant(reference_state):
    gamma = reference_state.covariance()
    assert log_negativity(_local_scramble(gamma)) == pytest.approx(log_negativity(gamma))


def test_entropy_of_entanglement_tmsv():
    """Reduced state of a TMSV is thermal with mean photon number sinh^2 r."""
    r = 0.5
    n = np.sinh(r) ** 2
    expected = ((n + 1) * np.log2(n + 1) - n * np.log2(n))
    assert entropy_of_entanglement(two_mode_squeezed_vacuum(r)) == pytest.approx(expected)


def test_entropy_of_product_of_vacua_is_zero():
    assert entropy_of_entanglement(np.eye(4)) == pytest.approx(0.0, abs=1e-12)


def test_entropy_requires_pure_state(reference_state):
    with pytest.raises(PurityError):
        entropy_of_entanglement(reference_state.covariance())


def test_purify_reference_state(reference_state):
    """The purification is pure and reduces to the input state."""
    gamma = reference_state.covariance()
    purified = purify(gamma)
    assert np.allclose(symplectic_spectrum(purified), 1.0, atol=1e-9)
    assert np.allclose(partial_trace(GaussianState(purified), [0, 1]).gamma, gamma, atol=1e-10)


def test_purify_random_states(state_sampler):
    """Pure and reducing to the input on 10^3 random symmetric states."""
    for state in state_sampler(1_000, seed=31):
        gamma = state.covariance()
        purified = purify(gamma)
        assert np.allclose(symplectic_spectrum(purified), 1.0, atol=1e-6)
        assert np.allclose(partial_trace(GaussianState(purified), [0, 1]).gamma, gamma, atol=1e-6)


def test_purify_thermal_single_mode():
    gamma = thermal_state(2.0).gamma
    purified = purify(gamma)
    assert np.allclose(symplectic_spectrum(purified), 1.0, atol=1e-9)
    # entropy of the reduced thermal state from the purified global state
    n = 2.0
    expected = (n + 1) * np.log2(n + 1) - n * np.log2(n)
    assert entropy_of_entanglement(purified, party=0) == pytest.approx(expected)


def test_purify_pure_input_attaches_vacuum():
    gamma = two_mode_squeezed_vacuum(0.3).gamma
    purified = purify(gamma)
    assert np.allclose(purified[4:, 4:], np.eye(4))
    assert np.allclose(purified[:4, 4:], 0.0)
