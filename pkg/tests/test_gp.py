import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dickegp import model
from dickegp.errors import StepCountTooSmall
from dickegp.gp import NumberBasisState, gp_closed_form, gp_loop, min_loop_steps, rotate_state
from dickegp.sector_ed import ground_state

P = model.ModelParams(1.0, 1.0)


def superposition(photons, weights, phases=None):
    weights = np.asarray(weights, dtype=float)
    amps = np.sqrt(weights / weights.sum()).astype(complex)
    if phases is not None:
        amps = amps * np.exp(1j * np.asarray(phases))
    return NumberBasisState(np.asarray(photons), amps)


@st.composite
def states(draw, max_photon=12):
    photons = draw(st.lists(st.integers(0, max_photon), min_size=1, max_size=6, unique=True))
    weights = draw(st.lists(st.floats(0.05, 1.0), min_size=len(photons), max_size=len(photons)))
    phases = draw(st.lists(st.floats(-math.pi, math.pi), min_size=len(photons), max_size=len(photons)))
    return superposition(photons, weights, phases)


def test_state_validation():
    with pytest.raises(ValueError):
        NumberBasisState(np.array([0, 1]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        NumberBasisState(np.array([-1]), np.array([1.0]))
    with pytest.raises(ValueError):
        NumberBasisState(np.array([2, 2]), np.array([0.6, 0.8]))


def test_rotate_state_examples():
    s = superposition([0, 3, 5], [1, 2, 3])
    assert np.array_equal(rotate_state(s, 0.0).amplitudes, s.amplitudes)
    assert rotate_state(NumberBasisState.fock(1), math.pi).amplitudes == pytest.approx([-1.0])
    r = rotate_state(superposition([0, 2], [1, 1]), math.pi / 2)
    assert r.amplitudes == pytest.approx(np.array([1, -1]) / math.sqrt(2), abs=1e-15)


@given(states(), st.floats(-10, 10))
def test_rotation_preserves_norm(state, phi):
    assert np.linalg.norm(rotate_state(state, phi).amplitudes) == pytest.approx(1.0, abs=1e-12)


def test_gp_closed_form_examples():
    assert gp_closed_form(NumberBasisState.fock(0)) == 0.0
    assert gp_closed_form(NumberBasisState.fock(1)) == pytest.approx(2 * math.pi)
    gs = ground_state(P, 1, 0.3)
    assert gp_closed_form(NumberBasisState.from_ground_state(gs)) == 0.0


def test_gp_loop_examples():
    assert gp_loop(NumberBasisState.fock(0), 16) == 0.0
    assert gp_loop(NumberBasisState.fock(1), 16) == pytest.approx(2 * math.pi, abs=1e-13)
    state = NumberBasisState.from_ground_state(ground_state(P, 4, 1.2))
    closed = gp_closed_form(state)
    assert abs(gp_loop(state, 512) - closed) <= 1e-3 * closed


def test_gp_loop_step_precondition():
    state = NumberBasisState.fock(5)
    assert min_loop_steps(state) == 21
    with pytest.raises(StepCountTooSmall) as info:
        gp_loop(state, 20)
    assert info.value.minimum == 21
    gp_loop(state, 21)
    with pytest.raises(StepCountTooSmall):
        gp_loop(NumberBasisState.fock(0), 7)


@given(states(), st.floats(-math.pi, math.pi))
def test_gauge_invariance(state, chi):
    shifted = NumberBasisState(state.photons, state.amplitudes * np.exp(1j * chi))
    k = min_loop_steps(state) + 16
    assert gp_closed_form(shifted) == pytest.approx(gp_closed_form(state), abs=1e-12)
    assert gp_loop(shifted, k) == pytest.approx(gp_loop(state, k), abs=1e-12)


def _third_cumulant(state):
    p, n = state.probabilities, state.photons
    mean = np.dot(p, n)
    return np.dot(p, (n - mean) ** 3)


def test_loop_error_matches_cumulant_expansion():
    # for a rotation family the per-segment overlap is the characteristic function of the
    # photon distribution, so the loop error is -(2 pi)^3 kappa_3 / (6 K^2) + O(K^-4)
    state = superposition([0, 1, 4], [0.5, 0.3, 0.2])
    for k in (256, 1024):
        predicted = -((2 * math.pi) ** 3) * _third_cumulant(state) / (6 * k**2)
        assert gp_loop(state, k) - gp_closed_form(state) == pytest.approx(predicted, rel=2e-3)


def test_loop_convergence_order():
    state = superposition([0, 1, 2, 5], [0.4, 0.3, 0.2, 0.1])
    ks = np.array([64, 128, 256, 512, 1024])
    errors = np.array([abs(gp_loop(state, k) - gp_closed_form(state)) for k in ks])
    exponent = -np.polyfit(np.log(ks), np.log(errors), 1)[0]
    assert 1.8 <= exponent <= 2.2


def test_ed_gp_approaches_mean_field():
    # sector discreteness makes the finite-N error oscillate, so check an O(1/N) envelope
    lam = 1.2
    target = model.gp_per_atom(P, lam)
    for n in (16, 32, 64, 128, 256):
        gs = ground_state(P, n, lam)
        gap = abs(gp_closed_form(NumberBasisState.from_ground_state(gs)) / n - target)
        assert gap <= 2 * math.pi / n
