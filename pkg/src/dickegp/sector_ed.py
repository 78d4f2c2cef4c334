"""Finite-N exact diagonalization in excitation-number sectors.

The rotating-wave Hamiltonian conserves ``M = a^+ a + Jz + N/2``.  Inside a
sector the states ``|n = M - q> (x) |j = N/2, m = q - N/2>`` with
``q = 0 .. min(M, N)`` span a space on which H is a real symmetric
tridiagonal matrix.  Lowest eigenvalues are found by Sturm-count bisection
(vectorized over all sectors of a scan) and eigenvectors by shifted inverse
iteration.  :func:`dense_oracle` builds the full truncated Hamiltonian in the
product basis for brute-force cross-checks.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionTooLarge,
    InvalidSector,
    NegativeCoupling,
    NoConvergence,
    ScanBoundaryHit,
)

DENSE_MAX_DIM = 2000
TIE_TOLERANCE = 1e-12
_BISECTION_BUDGET = 200
_PAD = 1e300


@dataclass(frozen=True)
class SectorBasis:
    n_atoms: int
    excitation: int

    def __post_init__(self):
        _check_sector(self.n_atoms, self.excitation)

    @property
    def dimension(self):
        return min(self.excitation, self.n_atoms) + 1

    @property
    def excited_atoms(self):
        return np.arange(self.dimension)

    @property
    def photons(self):
        return self.excitation - self.excited_atoms

    @property
    def m(self):
        return self.excited_atoms - self.n_atoms / 2.0


@dataclass(frozen=True)
class TridiagonalMatrix:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 1 or offdiag.shape != (diag.size - 1,):
            raise ValueError("need d >= 1 diagonal and d - 1 off-diagonal entries")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def dimension(self):
        return self.diag.size

    def to_dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def matvec(self, v):
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


@dataclass(frozen=True)
class ScanPolicy:
    """Sector scan range ``M = 0 .. ceil(m_max_factor * N * max(1, lam^2 / w^2))``."""

    m_max_factor: float = 6.0
    require_interior: bool = True

    def __post_init__(self):
        if not self.m_max_factor > 0:
            raise ValueError(f"m_max_factor must be positive, got {self.m_max_factor!r}")

    def upper_sector(self, params, n_atoms, lam):
        return math.ceil(self.m_max_factor * n_atoms * max(1.0, lam**2 / params.omega**2))


@dataclass(frozen=True)
class EDGroundState:
    n_atoms: int
    coupling: float
    sector: int
    energy: float
    amplitudes: np.ndarray
    photon_expectation: float

    @property
    def basis(self):
        return SectorBasis(self.n_atoms, self.sector)

    @property
    def energy_per_atom(self):
        return self.energy / self.n_atoms

    @property
    def gp(self):
        return 2.0 * math.pi * self.photon_expectation

    @property
    def gp_per_atom(self):
        return self.gp / self.n_atoms


def _check_sector(n_atoms, excitation):
    if int(n_atoms) != n_atoms or n_atoms < 1:
        raise InvalidSector(f"need an integer N >= 1, got {n_atoms!r}")
    if int(excitation) != excitation or excitation < 0:
        raise InvalidSector(f"need an integer M >= 0, got {excitation!r}")


def _check_coupling(lam):
    if not lam >= 0:
        raise NegativeCoupling(f"coupling must be >= 0, got {lam!r}")


def build_sector(params, n_atoms, lam, excitation):
    """Tridiagonal block of H for excitation number ``excitation``."""
    _check_sector(n_atoms, excitation)
    _check_coupling(lam)
    basis = SectorBasis(int(n_atoms), int(excitation))
    q = basis.excited_atoms.astype(float)
    n = basis.photons.astype(float)
    diag = params.omega * n + 0.5 * params.omega0 * (q - n_atoms / 2.0)
    # <m+1| J+ |m> = sqrt((N - q)(q + 1)),  <n-1| a |n> = sqrt(n)
    offdiag = (lam / math.sqrt(n_atoms)) * np.sqrt(n[:-1] * (n_atoms - q[:-1]) * (q[:-1] + 1.0))
    return TridiagonalMatrix(diag, offdiag)


def sturm_count(diag, offdiag, x):
    """Number of eigenvalues strictly below ``x``.

    Works on stacked inputs: ``diag`` of shape (..., d), ``offdiag`` of shape
    (..., d - 1) and ``x`` broadcastable to ``diag[..., 0]``.  Uses the LDL^T
    pivot recurrence; zero pivots are nudged to a tiny negative value.
    """
    diag = np.asarray(diag, dtype=float)
    offdiag_sq = np.asarray(offdiag, dtype=float) ** 2
    x = np.asarray(x, dtype=float)
    tiny = np.finfo(float).tiny
    pivot = diag[..., 0] - x
    pivot = np.where(pivot == 0.0, -tiny, pivot)
    count = (pivot < 0).astype(np.int64)
    for i in range(1, diag.shape[-1]):
        pivot = (diag[..., i] - x) - offdiag_sq[..., i - 1] / pivot
        pivot = np.where(pivot == 0.0, -tiny, pivot)
        count += pivot < 0
    return count


def _lowest_bracket(diag, offdiag):
    """Interval holding the smallest eigenvalue: Gershgorin below, min diagonal above."""
    radius = np.zeros_like(diag)
    radius[..., :-1] += np.abs(offdiag)
    radius[..., 1:] += np.abs(offdiag)
    return (diag - radius).min(axis=-1), diag.min(axis=-1)


def _converged(lo, hi):
    eps = np.finfo(float).eps
    return hi - lo <= 2.0 * eps * np.maximum(np.abs(lo), np.abs(hi)) + 4.0 * np.finfo(float).tiny


def lowest_eigenvalues(diag, offdiag, prune=False):
    """Smallest eigenvalue of each stacked tridiagonal matrix by bisection.

    With ``prune=True`` only the matrices that can still hold the overall
    minimum (lower bracket below the best upper bracket) keep being refined;
    the others are returned with a coarse value that is a valid lower bound.
    """
    diag = np.atleast_2d(np.asarray(diag, dtype=float))
    offdiag = np.asarray(offdiag, dtype=float).reshape(diag.shape[0], diag.shape[1] - 1)
    lo, hi = _lowest_bracket(diag, offdiag)
    pad = 1e-3 * np.maximum(hi - lo, 1.0)
    lo, hi = lo - pad, hi + pad
    active = np.ones(lo.shape, dtype=bool)
    for _ in range(_BISECTION_BUDGET):
        active &= ~_converged(lo, hi)
        if prune and active.any():
            best_hi = hi.min()
            active &= lo <= best_hi
        if not active.any():
            return 0.5 * (lo + hi) if not prune else np.where(_converged(lo, hi), 0.5 * (lo + hi), lo)
        idx = np.flatnonzero(active)
        mid = 0.5 * (lo[idx] + hi[idx])
        below = sturm_count(diag[idx], offdiag[idx], mid) >= 1
        hi[idx[below]] = mid[below]
        lo[idx[~below]] = mid[~below]
    raise NoConvergence(f"bisection did not converge within {_BISECTION_BUDGET} steps")


def _inverse_iteration(tri, energy, iterations=4):
    d = tri.dimension
    if d == 1:
        return np.ones(1)
    scale = max(1.0, abs(energy), float(np.abs(tri.diag).max()))
    # shifted just below the lowest eigenvalue: T - sI is positive definite,
    # so the LDL^T solve below needs no pivoting
    shift = energy - 1e-10 * scale
    a = tri.diag - shift
    e = tri.offdiag
    pivots = np.empty(d)
    mult = np.empty(d - 1)
    pivots[0] = a[0]
    for i in range(1, d):
        mult[i - 1] = e[i - 1] / pivots[i - 1]
        pivots[i] = a[i] - mult[i - 1] * e[i - 1]
    if not np.all(pivots > 0):
        raise NoConvergence("shifted sector matrix is not positive definite; eigenvalue is inaccurate")
    v = np.ones(d) / math.sqrt(d)
    for _ in range(iterations):
        y = v.copy()
        for i in range(1, d):
            y[i] -= mult[i - 1] * y[i - 1]
        y /= pivots
        for i in range(d - 2, -1, -1):
            y[i] -= mult[i] * y[i + 1]
        v = y / np.linalg.norm(y)
    # fix the sign: off-diagonals are non-negative, so the ground vector alternates;
    # make the first component positive
    if v[0] < 0:
        v = -v
    return v


def sector_ground(tri):
    """Smallest eigenvalue and unit eigenvector of a symmetric tridiagonal matrix."""
    energy = float(lowest_eigenvalues(tri.diag[None, :], tri.offdiag[None, :])[0])
    vec = _inverse_iteration(tri, energy)
    # Rayleigh quotient is at least as accurate as the bracket midpoint
    energy = float(vec @ tri.matvec(vec))
    residual = np.linalg.norm(tri.matvec(vec) - energy * vec)
    if residual > 1e-10 * max(1.0, abs(energy)):
        raise NoConvergence(f"eigen-residual {residual:.3e} exceeds tolerance")
    return energy, vec


def _stacked_sectors(params, n_atoms, lam, m_max):
    """All sectors M = 0..m_max padded to a common width N + 1."""
    width = min(m_max, n_atoms) + 1
    m = np.arange(m_max + 1, dtype=float)[:, None]
    q = np.arange(width, dtype=float)[None, :]
    dims = np.minimum(np.arange(m_max + 1), n_atoms) + 1
    valid = q < dims[:, None]
    n = m - q
    diag = np.where(valid, params.omega * n + 0.5 * params.omega0 * (q - n_atoms / 2.0), _PAD)
    qo = q[:, :-1]
    no = n[:, :-1]
    coupled = (qo + 1) < dims[:, None]
    offdiag = np.where(
        coupled,
        (lam / math.sqrt(n_atoms)) * np.sqrt(np.clip(no * (n_atoms - qo) * (qo + 1.0), 0.0, None)),
        0.0,
    )
    return diag, offdiag


def sector_minima(params, n_atoms, lam, m_max):
    """Lowest eigenvalue of every sector M = 0..m_max (fully refined)."""
    _check_sector(n_atoms, m_max)
    _check_coupling(lam)
    diag, offdiag = _stacked_sectors(params, int(n_atoms), float(lam), int(m_max))
    return lowest_eigenvalues(diag, offdiag)


def ground_state(params, n_atoms, lam, scan=ScanPolicy()):
    """Global ground state over the sector scan.

    Sectors within :data:`TIE_TOLERANCE` of the minimum are tied and the
    smallest M wins.  Raises :class:`ScanBoundaryHit` when the winning sector
    is the last one scanned (and the policy requires an interior minimum).
    """
    _check_sector(n_atoms, 0)
    _check_coupling(lam)
    n_atoms, lam = int(n_atoms), float(lam)
    m_max = scan.upper_sector(params, n_atoms, lam)
    diag, offdiag = _stacked_sectors(params, n_atoms, lam, m_max)
    minima = lowest_eigenvalues(diag, offdiag, prune=True)
    best = minima.min()
    sector = int(np.flatnonzero(minima <= best + TIE_TOLERANCE * max(1.0, abs(best)))[0])
    if scan.require_interior and sector == m_max:
        raise ScanBoundaryHit(n_atoms, lam, sector, scan.m_max_factor)
    energy, vec = sector_ground(build_sector(params, n_atoms, lam, sector))
    photons = SectorBasis(n_atoms, sector).photons
    photon_expectation = float(np.dot(photons, vec**2))
    return EDGroundState(n_atoms, lam, sector, energy, vec, photon_expectation)


def dense_hamiltonian(params, n_atoms, lam, photon_cutoff):
    """Truncated H in the product basis ``|n> (x) |j, m>``, index ``n * (N + 1) + q``."""
    _check_sector(n_atoms, photon_cutoff)
    _check_coupling(lam)
    n_atoms = int(n_atoms)
    dim = (photon_cutoff + 1) * (n_atoms + 1)
    if dim > DENSE_MAX_DIM:
        raise DimensionTooLarge(f"dense dimension {dim} exceeds {DENSE_MAX_DIM}")
    j = n_atoms / 2.0
    m = np.arange(n_atoms + 1) - j
    jz = np.diag(m)
    jplus = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), -1)
    a = np.diag(np.sqrt(np.arange(1, photon_cutoff + 1, dtype=float)), 1)
    num = a.T @ a
    eye_a = np.eye(photon_cutoff + 1)
    eye_s = np.eye(n_atoms + 1)
    g = lam / math.sqrt(n_atoms)
    return (
        params.omega * np.kron(num, eye_s)
        + 0.5 * params.omega0 * np.kron(eye_a, jz)
        + g * (np.kron(a, jplus) + np.kron(a.T, jplus.T))
    )


def excitation_operator(n_atoms, photon_cutoff):
    """Diagonal of ``a^+ a + Jz + N/2`` in the dense product basis."""
    n = np.repeat(np.arange(photon_cutoff + 1), n_atoms + 1)
    q = np.tile(np.arange(n_atoms + 1), photon_cutoff + 1)
    return (n + q).astype(float)


def dense_oracle(params, n_atoms, lam, photon_cutoff):
    """Full sorted spectrum of the truncated dense Hamiltonian."""
    return np.linalg.eigvalsh(dense_hamiltonian(params, n_atoms, lam, photon_cutoff))
