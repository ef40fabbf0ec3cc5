"""Coordinate-space check of the algebraic spectrum.

H1 = -(1/2) d^2/dx^2 + V1(x) is discretized with the 3-point Laplacian on a
uniform grid with Dirichlet walls, and the lowest eigenvalues of the
resulting symmetric tridiagonal matrix are compared with
``hbar_omega * e_n``. Nothing here uses the ladder algebra; the only shared
input is the partner potential V1 built from the superpotential.
"""

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import potentials as pot
from .potentials import PotentialKind
from .serialize import dumps_json, fmt

__all__ = [
    "GridSpec",
    "GridConvergenceError",
    "OracleRow",
    "OracleResult",
    "default_grid",
    "refine",
    "solve_spectrum",
    "converged_spectrum",
    "compare",
]

#: Smallest error-reduction factor accepted when h is halved (second order gives 4).
RICHARDSON_FACTOR = 3.5

DEFAULT_POINTS = 4000


class GridConvergenceError(RuntimeError):
    """The finite-difference eigenvalues did not show second-order convergence."""


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    points: int = DEFAULT_POINTS
    radial: bool = False

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.points < 200:
            raise ValueError(f"grid needs at least 200 interior points, got {self.points}")
        if self.radial and self.x_min != 0.0:
            raise ValueError("radial grids start at r = 0")

    @property
    def h(self):
        return (self.x_max - self.x_min) / (self.points + 1)

    def nodes(self):
        return self.x_min + self.h * np.arange(1, self.points + 1)


def refine(grid):
    """Same interval with the spacing halved (interior nodes are kept)."""
    return replace(grid, points=2 * grid.points + 1)


def default_grid(model, points=DEFAULT_POINTS):
    p = model.raw_params
    if model.kind is PotentialKind.HO:
        half = 12.0 / math.sqrt(p["omega"])
        return GridSpec(-half, half, points)
    if model.kind is PotentialKind.MORSE:
        return GridSpec(-3.0 / p["lambda"], 14.0 / p["lambda"], points)
    if model.kind is PotentialKind.SCARF:
        return GridSpec(-14.0 / p["lambda"], 14.0 / p["lambda"], points)
    return GridSpec(0.0, 60.0 * (p["L"] + 3) ** 2 / p["Z"], points, radial=True)


def _check_levels(model, n_levels):
    if n_levels < 0:
        raise ValueError(f"n_levels must be >= 0, got {n_levels}")
    if n_levels > pot.bound_state_count(model) + 1:
        raise ValueError(
            f"{model.label} has only {pot.bound_state_count(model) + 1} bound levels, asked for {n_levels}"
        )


def solve_spectrum(model, grid, n_levels):
    """Lowest ``n_levels`` eigenvalues of the discretized H1, ascending."""
    _check_levels(model, n_levels)
    if n_levels == 0:
        return np.zeros(0)
    if model.kind is PotentialKind.COULOMB and not grid.radial:
        raise ValueError("Coulomb needs a radial grid")
    x = grid.nodes()
    h2 = grid.h * grid.h
    diag = 1.0 / h2 + pot.partner_potential_V1(model, x)
    off = np.full(grid.points - 1, -0.5 / h2)
    return eigh_tridiagonal(
        diag, off, eigvals_only=True, select="i", select_range=(0, n_levels - 1)
    )


def converged_spectrum(model, n_levels, grid=None, max_doublings=5):
    """Richardson-extrapolated eigenvalues after a second-order convergence check.

    Eigenvalues are computed on ``grid``, ``grid/2`` and ``grid/4``. Each level
    must shrink its successive differences by at least
    :data:`RICHARDSON_FACTOR`; if not, the base grid is refined and the check
    repeated. Returns ``(values, grid)`` where ``grid`` is the finest grid used.
    """
    _check_levels(model, n_levels)
    grid = default_grid(model) if grid is None else grid
    if n_levels == 0:
        return np.zeros(0), grid
    for _ in range(max_doublings + 1):
        g1, g2 = refine(grid), refine(refine(grid))
        e0 = solve_spectrum(model, grid, n_levels)
        e1 = solve_spectrum(model, g1, n_levels)
        e2 = solve_spectrum(model, g2, n_levels)
        d01, d12 = np.abs(e0 - e1), np.abs(e1 - e2)
        # differences at round-off level carry no convergence information
        floor = 1e-11 * max(1.0, float(np.max(np.abs(e2))))
        ok = (d12 <= floor) | (d01 >= RICHARDSON_FACTOR * d12)
        if np.all(ok):
            return (4.0 * e2 - e1) / 3.0, g2
        grid = g1
    raise GridConvergenceError(
        f"no second-order convergence for {model.label} after {max_doublings} grid doublings"
    )


@dataclass(frozen=True)
class OracleRow:
    n: int
    E_algebraic: float
    E_numeric: float
    rel_diff: float


@dataclass(frozen=True)
class OracleResult:
    rows: tuple
    grid: GridSpec
    spectral_scale: float

    HEADER = ("n", "E_algebraic", "E_numeric", "rel_diff")

    @property
    def max_rel_diff(self):
        return max((r.rel_diff for r in self.rows), default=0.0)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.HEADER)
        for r in self.rows:
            writer.writerow([r.n, fmt(r.E_algebraic), fmt(r.E_numeric), fmt(r.rel_diff)])
        return buf.getvalue()

    def to_records(self):
        return [
            {"n": r.n, "E_algebraic": r.E_algebraic, "E_numeric": r.E_numeric, "rel_diff": r.rel_diff}
            for r in self.rows
        ]

    def to_json(self):
        return dumps_json(self.to_records())


def compare(model, n_levels, grid=None):
    """Pair the converged finite-difference levels with ``hbar_omega * e_n``.

    ``rel_diff = |E_num - E_alg| / max(|E_alg|, scale)`` with
    ``scale = hbar_omega * e_m`` and ``m = min(n_levels, bound_state_count)``.
    """
    _check_levels(model, n_levels)
    grid = default_grid(model) if grid is None else grid
    if n_levels == 0:
        return OracleResult((), grid, 0.0)
    numeric, used = converged_spectrum(model, n_levels, grid)
    top = min(n_levels, pot.bound_state_count(model))
    ladder = pot.energy_ladder(model, top)
    scale = model.hbar_omega * ladder[top]
    rows = []
    for n in range(n_levels):
        alg = model.hbar_omega * ladder[n]
        num = float(numeric[n])
        rows.append(OracleRow(n, alg, num, abs(num - alg) / max(abs(alg), scale)))
    return OracleResult(tuple(rows), used, scale)
