"""Thermodynamic-limit (Holstein-Primakoff mean-field) results for the
rotating-wave Dicke model

    H = w a^+ a + (w0/2) Jz + (lam/sqrt(N)) (J+ a + J- a^+)

with spin-j = N/2 collective operators.  After displacing the photon and
Holstein-Primakoff bosons by ``sqrt(N) alpha`` and ``sqrt(N) beta`` the
Hamiltonian expands as ``N H0 + sqrt(N) H1 + H2 + ...``; this module
evaluates those pieces and the closed forms that follow from minimizing H0.

All functions are pure.  The coupling ``lam`` is passed per call so that one
:class:`ModelParams` serves a whole coupling sweep.
"""

import enum
import math
from dataclasses import dataclass

from .errors import BetaOutOfRange, NegativeCoupling, NonPositiveParameter


@dataclass(frozen=True)
class ModelParams:
    """Photon frequency ``omega`` and atomic splitting ``omega0`` (hbar = 1)."""

    omega: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        for name in ("omega", "omega0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise NonPositiveParameter(f"{name} must be a positive finite number, got {value!r}")


def validate_params(omega, omega0):
    return ModelParams(float(omega), float(omega0))


class Phase(enum.Enum):
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"


@dataclass(frozen=True)
class MeanFieldSolution:
    coupling: float
    delta: float
    alpha: float
    beta: float
    phase: Phase

    @property
    def k(self):
        return 1.0 - self.beta**2


@dataclass(frozen=True)
class H2Coefficients:
    """Coefficients of the O(1) quadratic form, one per operator monomial.

    ====================  =========================
    field                 monomial
    ====================  =========================
    ``cc``                c^+ c
    ``dd``                d^+ d
    ``hop``               c^+ d + c d^+
    ``pair``              c^+ d^+ + c d
    ``squeeze_d``         (d^+)^2 + d^2
    ``quad_d``            (d^+ + d)^2
    ``cross``             (d^+ + d)(c^+ + c)
    ====================  =========================
    """

    cc: float
    dd: float
    hop: float
    pair: float
    squeeze_d: float
    quad_d: float
    cross: float

    MONOMIALS = ("cc", "dd", "hop", "pair", "squeeze_d", "quad_d", "cross")

    def as_dict(self):
        return {name: getattr(self, name) for name in self.MONOMIALS}


@dataclass(frozen=True)
class FluctuationCoefficients:
    h1_c: float
    h1_d: float
    h2: H2Coefficients


def _check_coupling(lam):
    if not lam >= 0:
        raise NegativeCoupling(f"coupling must be >= 0, got {lam!r}")


def critical_coupling(params):
    return math.sqrt(params.omega0 * params.omega / 2.0)


def mean_field(params, lam):
    """Displacements minimizing H0; the non-negative branch is returned.

    At and below the critical coupling the solution is the undisplaced
    vacuum (``delta`` is reported as 1 there).
    """
    _check_coupling(lam)
    lam = float(lam)
    if lam <= critical_coupling(params):
        return MeanFieldSolution(lam, 1.0, 0.0, 0.0, Phase.NORMAL)
    delta = params.omega * params.omega0 / (2.0 * lam**2)
    beta = math.sqrt((1.0 - delta) / 2.0)
    alpha = lam * math.sqrt(1.0 - delta**2) / (2.0 * params.omega)
    return MeanFieldSolution(lam, delta, alpha, beta, Phase.SUPERRADIANT)


def ground_energy_per_atom(params, lam):
    _check_coupling(lam)
    if lam <= critical_coupling(params):
        return -params.omega0 / 4.0
    delta = params.omega * params.omega0 / (2.0 * lam**2)
    return -(lam**2 * (1.0 - delta**2) / (4.0 * params.omega) + params.omega0 * delta / 4.0)


def h0_energy(params, lam, alpha, beta):
    """Leading (order N) energy per atom at arbitrary displacements."""
    if beta**2 > 1.0:
        raise BetaOutOfRange(f"beta^2 must be <= 1, got beta={beta!r}")
    w, w0 = params.omega, params.omega0
    sqrt_k = math.sqrt(1.0 - beta**2)
    return w * alpha**2 + 0.5 * w0 * (beta**2 - 0.5) - 2.0 * lam * alpha * beta * sqrt_k


def fluctuation_coefficients(params, lam, alpha, beta):
    """Linear (H1) and quadratic (H2) fluctuation coefficients.

    Up to sign (``-1/2 dH0/dalpha`` and ``+1/2 dH0/dbeta``, from the opposite
    shift directions of the two bosons) the H1 coefficients are the gradient
    of H0, so both vanish at the mean-field minimum.
    """
    if beta**2 >= 1.0:
        raise BetaOutOfRange(f"beta^2 must be < 1, got beta={beta!r}")
    w, w0 = params.omega, params.omega0
    k = 1.0 - beta**2
    sqrt_k = math.sqrt(k)

    h1_c = -w * alpha + lam * beta * sqrt_k
    # (1 - 2 beta^2) / sqrt(k): d/dbeta of beta*sqrt(k)
    h1_d = 0.5 * w0 * beta - lam * alpha * (1.0 - 2.0 * beta**2) / sqrt_k

    anharmonic = lam * alpha * beta / (2.0 * sqrt_k)
    h2 = H2Coefficients(
        cc=w,
        dd=0.5 * w0 + 4.0 * anharmonic,
        hop=lam * sqrt_k,
        pair=0.0,
        squeeze_d=anharmonic,
        quad_d=anharmonic * beta**2 / (2.0 * k),
        cross=-lam * beta**2 / (2.0 * sqrt_k),
    )
    return FluctuationCoefficients(h1_c, h1_d, h2)


def gp_per_atom(params, lam):
    """Ground-state geometric phase per atom, ``2 pi <a^+ a> / N``, in radians."""
    _check_coupling(lam)
    lc = critical_coupling(params)
    if lam <= lc:
        return 0.0
    return math.pi / (2.0 * params.omega**2) * (lam**2 - lc**4 / lam**2)


def gp_slope_at_critical(params):
    """Right derivative of :func:`gp_per_atom` at the critical coupling."""
    return 2.0 * math.pi * critical_coupling(params) / params.omega**2
