"""Coupling sweeps across a ladder of atom numbers, numerical derivatives of
the geometric phase, critical-point estimation and the finite-size fit of the
peak derivative against N.

Sweep work items ``(N, lam)`` are independent; with ``workers > 1`` they run
in a process pool and are written back into pre-indexed slots, so the result
does not depend on completion order.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import model
from .errors import (
    GridDoesNotBracket,
    GridTooSmall,
    InputError,
    LadderTooSmall,
    NonUniformGrid,
)
from .sector_ed import ScanPolicy, ground_state

UNIFORM_RTOL = 1e-6


@dataclass(frozen=True)
class SweepResult:
    """ED arrays have shape ``(len(n_ladder), len(lambda_grid))``."""

    params: model.ModelParams
    n_ladder: tuple
    lambda_grid: np.ndarray
    e0_ed: np.ndarray
    gp_ed: np.ndarray
    sector: np.ndarray
    scan_upper: np.ndarray
    e0_analytic: np.ndarray
    gp_analytic: np.ndarray

    def row(self, n_atoms):
        try:
            return self.n_ladder.index(n_atoms)
        except ValueError:
            raise KeyError(f"N={n_atoms} is not in the ladder {self.n_ladder}") from None

    def records(self):
        """Flat rows sorted by (n_atoms, lambda)."""
        out = []
        for i in np.argsort(self.n_ladder, kind="stable"):
            for j, lam in enumerate(self.lambda_grid):
                out.append(
                    dict(
                        n_atoms=self.n_ladder[i],
                        omega=self.params.omega,
                        omega0=self.params.omega0,
                        lambda_=float(lam),
                        sector=int(self.sector[i, j]),
                        e0_per_atom_ed=float(self.e0_ed[i, j]),
                        gp_per_atom_ed=float(self.gp_ed[i, j]),
                        e0_per_atom_analytic=float(self.e0_analytic[j]),
                        gp_per_atom_analytic=float(self.gp_analytic[j]),
                    )
                )
        return out


@dataclass(frozen=True)
class ScalingFit:
    n_ladder: tuple
    peak_slopes: np.ndarray
    peak_locations: np.ndarray
    slope: float
    intercept: float
    r_squared: float
    target: float

    @property
    def relative_deviation(self):
        return (self.slope - self.target) / self.target


def _check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1:
        raise GridTooSmall("coupling grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise InputError("coupling grid must be strictly increasing")
    if grid[0] < 0:
        raise InputError("coupling grid must be non-negative")
    return grid


def uniform_grid(lambda_min, lambda_max, steps):
    return np.linspace(lambda_min, lambda_max, steps)


def _ed_point(args):
    params, n_atoms, lam, scan = args
    gs = ground_state(params, n_atoms, lam, scan)
    return gs.sector, gs.energy_per_atom, gs.gp_per_atom, scan.upper_sector(params, n_atoms, lam)


def sweep(params, n_ladder, lambda_grid, scan=ScanPolicy(), workers=1):
    """ED and analytic ground-state series on a (N, lambda) grid."""
    grid = _check_grid(lambda_grid)
    ladder = tuple(int(n) for n in n_ladder)
    if not ladder:
        raise LadderTooSmall("atom-number ladder is empty")
    items = [(params, n, float(lam), scan) for n in ladder for lam in grid]
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_ed_point, items, chunksize=max(1, len(items) // (4 * workers))))
    else:
        results = [_ed_point(item) for item in items]

    shape = (len(ladder), grid.size)
    sector = np.empty(shape, dtype=np.int64)
    upper = np.empty(shape, dtype=np.int64)
    e0 = np.empty(shape)
    gp = np.empty(shape)
    for slot, (m, e, g, top) in enumerate(results):
        i, j = divmod(slot, grid.size)
        sector[i, j], e0[i, j], gp[i, j], upper[i, j] = m, e, g, top

    return SweepResult(
        params=params,
        n_ladder=ladder,
        lambda_grid=grid,
        e0_ed=e0,
        gp_ed=gp,
        sector=sector,
        scan_upper=upper,
        e0_analytic=np.array([model.ground_energy_per_atom(params, lam) for lam in grid]),
        gp_analytic=np.array([model.gp_per_atom(params, lam) for lam in grid]),
    )


def grid_spacing(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.size < 3:
        raise GridTooSmall(f"need at least 3 grid points, got {grid.size}")
    steps = np.diff(grid)
    h = (grid[-1] - grid[0]) / (grid.size - 1)
    if h <= 0 or np.any(np.abs(steps - h) > UNIFORM_RTOL * h):
        raise NonUniformGrid("grid spacing is not uniform")
    return h


def derivative_series(grid, values):
    """Central differences inside, first-order one-sided differences at the ends."""
    h = grid_spacing(grid)
    values = np.asarray(values, dtype=float)
    if values.shape != np.shape(grid):
        raise ValueError("grid and values differ in length")
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    out[0] = (values[1] - values[0]) / h
    out[-1] = (values[-1] - values[-2]) / h
    return out


def analytic_gp_derivative(params, lam, side="right"):
    """Exact d(gp_per_atom)/d(lambda); at the kink the requested one-sided value."""
    lc = model.critical_coupling(params)
    if lam < lc or (lam == lc and side == "left"):
        return 0.0
    return math.pi / params.omega**2 * (lam + lc**4 / lam**3)


def estimate_critical_point(sweep_result, n_atoms=None):
    """Grid coupling of largest second difference of gp per atom.

    ``n_atoms=None`` uses the analytic series.  Ties go to the smaller coupling.
    """
    grid = sweep_result.lambda_grid
    lc = model.critical_coupling(sweep_result.params)
    if grid.size < 3 or not grid[0] < lc < grid[-1]:
        raise GridDoesNotBracket(f"grid [{grid[0]}, {grid[-1]}] does not bracket lambda_c={lc}")
    if n_atoms is None:
        values = sweep_result.gp_analytic
    else:
        values = sweep_result.gp_ed[sweep_result.row(n_atoms)]
    return curvature_peak(grid, values)


def curvature_peak(grid, values):
    values = np.asarray(values, dtype=float)
    if values.size < 3:
        raise GridTooSmall("need at least 3 points for a second difference")
    second = values[2:] - 2.0 * values[1:-1] + values[:-2]
    i = int(np.argmax(second))
    if not second[i] > 0:
        raise GridDoesNotBracket("series has no positive curvature peak")
    return float(grid[i + 1])


def _linear_fit(x, y):
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.intercept), float(fit.rvalue**2)


def scaling_fit(params, n_ladder, lambda_grid, scan=ScanPolicy(), workers=1, engine="ed"):
    """Least-squares line of the peak total derivative d(gamma0)/d(lambda) vs N.

    ``engine="ed"`` takes the maximum of the central-difference series of the
    ED gp over the grid.  ``engine="analytic"`` uses the exact derivative with
    the right-hand limit at the critical coupling included.
    """
    ladder = tuple(int(n) for n in n_ladder)
    if len(ladder) < 4:
        raise LadderTooSmall(f"scaling fit needs at least 4 atom numbers, got {len(ladder)}")
    grid = _check_grid(lambda_grid)
    lc = model.critical_coupling(params)
    if not grid[0] < lc < grid[-1]:
        raise GridDoesNotBracket(f"grid [{grid[0]}, {grid[-1]}] does not bracket lambda_c={lc}")

    if engine == "ed":
        result = sweep(params, ladder, grid, scan, workers)
        peaks, where = [], []
        for i, n in enumerate(ladder):
            deriv = derivative_series(grid, result.gp_ed[i]) * n
            k = int(np.argmax(deriv))
            peaks.append(deriv[k])
            where.append(grid[k])
    elif engine == "analytic":
        candidates = np.append(grid[grid > lc], lc)
        deriv = np.array([analytic_gp_derivative(params, lam, "right") for lam in candidates])
        k = int(np.argmax(deriv))
        peaks = [n * deriv[k] for n in ladder]
        where = [candidates[k]] * len(ladder)
    else:
        raise ValueError(f"unknown engine {engine!r}")

    slope, intercept, r2 = _linear_fit(np.array(ladder, dtype=float), np.array(peaks))
    return ScalingFit(
        n_ladder=ladder,
        peak_slopes=np.array(peaks),
        peak_locations=np.array(where),
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        target=model.gp_slope_at_critical(params),
    )
