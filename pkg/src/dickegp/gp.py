"""Geometric phase of a single-mode state under the photon-number rotation
``R(phi) = exp(-i phi a^+ a)``.

Two independent routes are provided: the closed form ``2 pi <a^+ a>`` and a
discretized Pancharatnam loop product over rotated copies of the state.  For
eigenstates of H the connection is constant, so the two must agree up to the
discretization error of the loop.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import StepCountTooSmall

MIN_LOOP_STEPS = 8


@dataclass(frozen=True)
class NumberBasisState:
    """Map from photon number to complex amplitude, stored as two arrays."""

    photons: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        photons = np.asarray(self.photons, dtype=np.int64)
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if photons.shape != amplitudes.shape or photons.ndim != 1:
            raise ValueError("photons and amplitudes must be 1-d arrays of equal length")
        if np.unique(photons).size != photons.size:
            raise ValueError("photon numbers must be distinct")
        if np.any(photons < 0):
            raise ValueError("photon numbers must be non-negative")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state must be unit-norm, got norm {norm!r}")
        object.__setattr__(self, "photons", photons)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def fock(cls, n):
        return cls(np.array([n]), np.array([1.0]))

    @classmethod
    def from_ground_state(cls, gs):
        """Ground state from :func:`dickegp.sector_ed.ground_state`."""
        return cls(gs.basis.photons, gs.amplitudes)

    @property
    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    @property
    def mean_photons(self):
        return float(np.dot(self.photons, self.probabilities))

    def overlap(self, other):
        """``<self|other>`` (the photon-number supports must coincide)."""
        if not np.array_equal(self.photons, other.photons):
            raise ValueError("states live on different bases")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def rotate_state(state, phi):
    return NumberBasisState(state.photons, state.amplitudes * np.exp(-1j * phi * state.photons))


def gp_closed_form(state):
    return 2.0 * math.pi * state.mean_photons


def min_loop_steps(state):
    """Smallest admissible K: K >= 8 and K > 4 <a^+ a>."""
    return max(MIN_LOOP_STEPS, math.floor(4.0 * state.mean_photons) + 1)


def gp_loop(state, steps):
    """Pancharatnam estimate ``-sum_k arg <psi(phi_k)|psi(phi_k+1)>``.

    The chain is closed at ``phi_K = 2 pi``, where the rotated state equals the
    original, so no gauge fixing is needed.  The result is not reduced mod 2 pi.
    """
    if steps < min_loop_steps(state):
        raise StepCountTooSmall(steps, min_loop_steps(state))
    angles = 2.0 * math.pi * np.arange(steps + 1) / steps
    chain = [rotate_state(state, phi) for phi in angles[:-1]]
    chain.append(state)
    total = 0.0
    for left, right in zip(chain[:-1], chain[1:]):
        total -= np.angle(left.overlap(right))
    return float(total)
