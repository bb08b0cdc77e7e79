"""Discrete Karhunen-Loeve expansion on a uniform time grid.

The covariance operator is discretized with the rectangle rule, so the
eigenproblem is ``(K dt) v = lam v`` and the eigenfunctions ``v / sqrt(dt)``
are orthonormal in the weighted inner product ``dt * sum conj(f) g``.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .errors import (DegenerateModeError, GridMismatchError, NotHermitianError,
                     NotPositiveSemidefiniteError, ShiftSpecError)
from .stochastic import PathEnsemble

__all__ = [
    "KLExpansion",
    "brownian_kernel",
    "kl_decompose",
    "kl_coefficients",
    "kl_reconstruct",
    "relative_reconstruction_error",
    "fourier_basis",
    "standard_basis",
    "truncation_errors",
]


@dataclass(frozen=True, eq=False)
class KLExpansion:
    """Eigenvalues (nonincreasing) and eigenfunctions as columns on ``grid``."""

    eigenvalues: np.ndarray
    eigenfunctions: np.ndarray
    grid: np.ndarray
    dt: float

    @property
    def n_modes(self):
        return self.eigenvalues.size

    def gram(self):
        phi = self.eigenfunctions
        return self.dt * (np.conj(phi).T @ phi)


def brownian_kernel(n):
    """``min(s, t)`` on the right-endpoint grid ``t_j = j / n``, ``j = 1..n``."""
    t = np.arange(1, n + 1) / n
    return np.minimum.outer(t, t), t


def _uniform_step(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2:
        raise ShiftSpecError("grid needs at least two points (or pass dt)")
    steps = np.diff(grid)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0):
        raise ShiftSpecError("grid must be uniform and increasing")
    return float(steps[0])


def kl_decompose(kernel, grid, dt=None, tol=1e-8):
    """Eigen-decomposition of the discretized covariance operator.

    Raises
    ------
    NotHermitianError
        If ``kernel`` deviates from its adjoint by more than ``tol`` (relative).
    NotPositiveSemidefiniteError
        If an eigenvalue is below ``-tol`` times the largest one.
    """
    K = np.asarray(kernel)
    grid = np.asarray(grid, dtype=float)
    if K.ndim != 2 or K.shape != (grid.size, grid.size):
        raise GridMismatchError("kernel shape does not match the grid")
    if dt is None:
        dt = _uniform_step(grid)
    scale = max(float(np.max(np.abs(K))), np.finfo(float).tiny)
    asym = float(np.max(np.abs(K - np.conj(K.T))))
    if asym > tol * scale:
        raise NotHermitianError(f"kernel is not Hermitian (max deviation {asym:.3e})")
    Kh = 0.5 * (K + np.conj(K.T))
    w, V = np.linalg.eigh(Kh * dt)
    w, V = w[::-1], V[:, ::-1]
    if w.size and w[-1] < -tol * max(abs(w[0]), np.finfo(float).tiny):
        raise NotPositiveSemidefiniteError(
            f"kernel is indefinite (min eigenvalue {w[-1]:.3e})", float(w[-1]))
    w = np.where(w < 0, 0.0, w)
    return KLExpansion(w, V / np.sqrt(dt), grid, float(dt))


def _select_columns(ensemble, grid):
    times = ensemble.time_grid
    idx = np.searchsorted(times, grid - 1e-12)
    ok = (idx < times.size) & np.isclose(times[np.minimum(idx, times.size - 1)], grid,
                                         rtol=0, atol=1e-9)
    if not np.all(ok):
        raise GridMismatchError("ensemble does not sample every point of the KL grid")
    return ensemble.paths[:, idx]


def kl_coefficients(ensemble, expansion, n_modes=None, threshold=DEFAULTS.mode_threshold):
    """``Z[i, k] = dt * sum_j X_i(t_j) conj(phi_k(t_j)) / sqrt(lam_k)``.

    By default every mode with ``lam_k > threshold`` is extracted; asking
    for a mode at or below the threshold raises DegenerateModeError.
    """
    lam = expansion.eigenvalues
    if n_modes is None:
        n_modes = int(np.count_nonzero(lam > threshold))
    if n_modes > lam.size:
        raise ShiftSpecError(f"only {lam.size} modes available")
    if n_modes and lam[n_modes - 1] <= threshold:
        raise DegenerateModeError(
            f"mode {n_modes} has eigenvalue {lam[n_modes - 1]:.3e} <= {threshold:g}")
    X = _select_columns(ensemble, expansion.grid)
    phi = expansion.eigenfunctions[:, :n_modes]
    Z = expansion.dt * (X @ np.conj(phi)) / np.sqrt(lam[:n_modes])
    return Z


def kl_reconstruct(expansion, Z, n_modes, seed=0):
    """``X(t) = sum_{k < n_modes} sqrt(lam_k) Z_k phi_k(t)`` on the expansion grid."""
    Z = np.atleast_2d(Z)
    if n_modes > Z.shape[1] or n_modes > expansion.n_modes:
        raise ShiftSpecError("n_modes exceeds the available coefficients")
    if n_modes == 0:
        paths = np.zeros((Z.shape[0], expansion.grid.size))
    else:
        amp = Z[:, :n_modes] * np.sqrt(expansion.eigenvalues[:n_modes])
        paths = amp @ expansion.eigenfunctions[:, :n_modes].T
        if np.isrealobj(expansion.eigenfunctions) and np.all(np.isreal(paths)):
            paths = paths.real
    return PathEnsemble(expansion.grid, paths, seed, "reconstruction")


def relative_reconstruction_error(original, reconstruction):
    """``mean ||X - X_hat||^2 / mean ||X||^2`` on the reconstruction grid."""
    X = _select_columns(original, reconstruction.time_grid)
    denom = float(np.sum(np.abs(X) ** 2))
    if denom == 0:
        return 0.0
    return float(np.sum(np.abs(X - reconstruction.paths) ** 2)) / denom


def fourier_basis(grid, dt=None):
    """Columns ``exp(2j*pi*k*t)`` ordered ``k = 0, 1, -1, 2, -2, ...``, orthonormal on the grid."""
    grid = np.asarray(grid, dtype=float)
    n = grid.size
    ks = [0]
    for k in range(1, n):
        ks += [k, -k]
    ks = np.array(ks[:n])
    dt = dt or _uniform_step(grid)
    period = n * dt
    # on an n-point uniform grid these n frequencies are orthogonal
    B = np.exp(2j * np.pi * np.outer(grid - grid[0], ks) / period)
    return B / np.sqrt(period)


def standard_basis(grid, dt=None):
    grid = np.asarray(grid, dtype=float)
    return np.eye(grid.size) / np.sqrt(dt or _uniform_step(grid))


def truncation_errors(ensemble, basis, grid, dt=None, n_modes_list=None):
    """Relative mean-square error of keeping the first ``n`` basis columns."""
    dt = dt or _uniform_step(grid)
    X = _select_columns(ensemble, np.asarray(grid, dtype=float))
    coef = dt * (X @ np.conj(basis))
    energy = np.sum(np.abs(coef) ** 2, axis=0)
    total = float(np.sum(np.abs(X) ** 2) * dt)
    if n_modes_list is None:
        n_modes_list = range(basis.shape[1] + 1)
    captured = np.concatenate(([0.0], np.cumsum(energy)))
    return np.array([max(total - captured[n], 0.0) / total for n in n_modes_list])
