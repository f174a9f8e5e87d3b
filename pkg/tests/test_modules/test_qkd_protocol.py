"""Tests for the shared state, the purification and Eve's conditional states."""
import numpy as np
import pytest

from entanglement.bipartite import log_negativity
from error_handling.exceptions import ConfigurationError, UnphysicalInput
from gaussian_core.state import (
    GaussianState,
    apply,
    condition_on_position,
    fidelity_hs,
    partial_trace,
    symplectic_spectrum,
)
from gaussian_core.symplectic import make_transform
from qkd_protocol.protocol import (
    coincidence_probs,
    error_rate,
    eve_conditional,
    eve_overlap,
    eve_overlap_squared,
    purify_abe,
)
from qkd_protocol.states import MeasurementModel, SymmetricStdState

OUTCOMES = [(0.3, 0.5), (1.0, 1.4), (0.8, 0.2), (2.0, 1.1)]


def _projector(sigma: float, u: float, v: float) -> GaussianState:
    s2 = sigma * sigma
    return GaussianState(np.diag([s2, 1 / s2, s2, 1 / s2]), [u, 0.0, v, 0.0])


def test_unphysical_parameters_rejected():
    """(lambda - c_x)(lambda + c_p) = 0.75 < 1 violates the uncertainty principle."""
    with pytest.raises(UnphysicalInput, match="uncertainty"):
        SymmetricStdState(1.0, 0.5, 0.5)
    with pytest.raises(UnphysicalInput):
        SymmetricStdState(2.0, 0.5, 1.0)
    with pytest.raises(UnphysicalInput):
        SymmetricStdState(2.0, 2.0, 0.0)
    with pytest.raises(UnphysicalInput):
        SymmetricStdState(float("nan"), 0.0, 0.0)


def test_reference_state_quantities(reference_state):
    assert reference_state.L == pytest.approx(1.75)
    assert reference_state.P == pytest.approx(1.5)
    assert reference_state.is_nppt
    assert reference_state.log_negativity == pytest.approx(0.2075187496, abs=1e-9)
    assert reference_state.coherent_constraint() == pytest.approx(-0.625)
    assert not reference_state.is_pure


def test_closed_form_purity_matches_determinant(random_states):
    for state in random_states[:50]:
        det = np.linalg.det(state.covariance())
        assert state.purity == pytest.approx(1 / np.sqrt(det))


def test_vacuum_like_state():
    state = SymmetricStdState(1.0, 0.0, 0.0)
    assert state.log_negativity == 0.0
    assert not state.is_nppt
    assert state.is_pure


def test_tmsv_state(tmsv):
    state = tmsv(0.4)
    assert state.lam == pytest.approx(np.cosh(0.8))
    assert state.c_x == state.c_p
    assert state.is_pure
    assert state.log_negativity == pytest.approx(log_negativity(state.covariance()))


def test_from_covariance_recovers_parameters(reference_state):
    local = make_transform("squeezer", {"r": 0.4}).direct_sum(make_transform("phase_shift", {"theta": 1.0}))
    scrambled = apply(local, reference_state.gaussian_state()).gamma
    restored = SymmetricStdState.from_covariance(scrambled)
    assert restored.lam == pytest.approx(2.0)
    assert restored.c_x == pytest.approx(1.5)
    assert restored.c_p == pytest.approx(0.5)


def test_from_covariance_rejects_asymmetric_state():
    gamma = np.diag([2.0, 2.0, 3.0, 3.0])
    with pytest.raises(UnphysicalInput):
        SymmetricStdState.from_covariance(gamma)


def test_auxiliaries_of_reference_state(reference_state):
    aux = reference_state.auxiliaries()
    assert aux.a == pytest.approx(2.25)
    assert aux.b == pytest.approx(2.0)
    assert aux.X == pytest.approx((np.sqrt(4.25) + 0.5) / 2)
    assert aux.Y == pytest.approx((np.sqrt(4.25) - 0.5) / 2)


def test_purification_is_pure_and_reduces_to_gamma_ab(state_sampler):
    """Global state of A, B and Eve is pure; tracing Eve out returns gamma_AB."""
    for state in state_sampler(1_000, seed=21):
        global_state = purify_abe(state)
        assert np.allclose(symplectic_spectrum(global_state), 1.0, atol=1e-6)
        assert np.allclose(partial_trace(global_state, [0, 1]).gamma, state.covariance(), atol=1e-6)
        assert np.allclose(partial_trace(global_state, [2, 3]).gamma, state.covariance(), atol=1e-6)


@pytest.mark.parametrize("u, v", OUTCOMES)
def test_eve_conditional_matches_homodyne_conditioning(reference_state, u, v):
    """Closed-form conditional states equal the Schur complement of the purification."""
    closed = eve_conditional(reference_state, u, v)
    numeric = condition_on_position(purify_abe(reference_state), [0, 1], [u, v])
    assert np.allclose(numeric.gamma, closed.gamma_pp, atol=1e-10)
    assert np.allclose(numeric.d, closed.d_pp, atol=1e-10)
    flipped = condition_on_position(purify_abe(reference_state), [0, 1], [-u, -v])
    assert np.allclose(flipped.d, closed.d_mm, atol=1e-10)


@pytest.mark.parametrize("u, v", OUTCOMES)
def test_overlap_matches_hs_fidelity(reference_state, u, v):
    e_pp, e_mm = eve_conditional(reference_state, u, v).states()
    assert eve_overlap_squared(reference_state, u, v) == pytest.approx(fidelity_hs(e_pp, e_mm), rel=1e-10)
    assert eve_overlap(reference_state, u, v) ** 2 == pytest.approx(eve_overlap_squared(reference_state, u, v))


def test_eve_conditional_states_are_pure(reference_state):
    e_pp, _ = eve_conditional(reference_state, 0.7, 0.9).states()
    assert symplectic_spectrum(e_pp) == pytest.approx([1.0, 1.0])


def test_overlap_is_vectorised(reference_state):
    u = np.linspace(0.1, 2.0, 7)
    values = eve_overlap(reference_state, u, 2 * u)
    assert values.shape == (7,)
    assert values[0] == pytest.approx(eve_overlap(reference_state, 0.1, 0.2))


@pytest.mark.parametrize("sigma", [0.3, 1.0, 2.0])
def test_coincidence_probs_are_projector_overlaps(reference_state, sigma):
    """p_same and p_diff equal Tr(rho_AB P) for squeezed projectors at (+u, +v) and (+u, -v)."""
    u, v = 0.6, 1.1
    probs = coincidence_probs(reference_state, sigma, u, v)
    rho = reference_state.gaussian_state()
    assert probs.p_same == pytest.approx(fidelity_hs(rho, _projector(sigma, u, v)), rel=1e-10)
    assert probs.p_diff == pytest.approx(fidelity_hs(rho, _projector(sigma, u, -v)), rel=1e-10)
    assert probs.p_same > probs.p_diff


def test_coincidence_probs_reject_bad_width(reference_state):
    with pytest.raises(ConfigurationError):
        coincidence_probs(reference_state, 0.0, 1.0, 1.0)


def test_error_rate_closed_form(reference_state):
    u, v = 0.8, 1.2
    expected = 1.0 / (1.0 + np.exp(4 * 1.5 * u * v / 1.75))
    assert error_rate(reference_state, u, v) == pytest.approx(expected)
    assert error_rate(reference_state, -u, v) == pytest.approx(expected)
    assert error_rate(reference_state, 0.0, v) == pytest.approx(0.5)


def test_finite_width_error_rate(reference_state):
    """Finite sigma equals p_diff / (p_same + p_diff) and tends to the sharp limit."""
    u, v = 0.8, 1.2
    probs = coincidence_probs(reference_state, 0.5, u, v)
    finite = error_rate(reference_state, u, v, MeasurementModel(0.5))
    assert finite == pytest.approx(probs.error_fraction)
    assert finite > error_rate(reference_state, u, v)
    limit = error_rate(reference_state, u, v, MeasurementModel(1e-5))
    assert limit == pytest.approx(error_rate(reference_state, u, v), rel=1e-6)


def test_error_rate_large_arguments_stay_finite(tmsv):
    value = error_rate(tmsv(1.0), 50.0, 50.0)
    assert 0.0 <= value < 1e-100


def test_measurement_model():
    assert MeasurementModel.sharp().is_sharp
    assert not MeasurementModel(0.1).is_sharp
    with pytest.raises(ConfigurationError):
        MeasurementModel(-1.0)


@pytest.mark.slow
def test_overlap_matches_hs_fidelity_on_random_states(state_sampler):
    """Closed-form overlap exponent and the fidelity of the conditional states agree on 10^4 draws."""
    rng = np.random.default_rng(99)
    states = state_sampler(10_000, seed=23)
    outcomes = rng.uniform(0.0, 1.5, size=(len(states), 2))
    for state, (u, v) in zip(states, outcomes):
        e_pp, e_mm = eve_conditional(state, u, v).states()
        closed = -np.log(eve_overlap_squared(state, u, v))
        numeric = -np.log(fidelity_hs(e_pp, e_mm))
        assert abs(closed - numeric) <= 1e-8 * (1.0 + abs(closed)), (state, u, v)
        assert eve_overlap(state, u, v) ** 2 == pytest.approx(eve_overlap_squared(state, u, v), rel=1e-12)


def test_error_rate_matches_sampled_outcomes():
    """Share of opposite-sign pairs among samples with |x0A|, |x0B| within 0.05 of 1."""
    state = SymmetricStdState(2.0, 1.0, 0.5)
    rng = np.random.default_rng(2718)
    samples = rng.multivariate_normal(np.zeros(2), state.gamma_x / 2.0, size=1_000_000)
    near = np.all(np.abs(np.abs(samples) - 1.0) < 0.05, axis=1)
    kept = samples[near]
    assert len(kept) > 1_500
    sampled = np.mean(np.sign(kept[:, 0]) != np.sign(kept[:, 1]))
    expected = error_rate(state, 1.0, 1.0)
    assert expected == pytest.approx(0.2086, abs=1e-3)
    standard_error = np.sqrt(expected * (1.0 - expected) / len(kept))
    assert abs(sampled - expected) < 3.0 * standard_error
