"""Gaussian processes attached to translate systems.

All randomness flows from one integer seed.  Path ``i`` draws from its own
substream ``SeedSequence(seed).spawn(M)[i]``, so an ensemble does not depend
on how its paths are scheduled.
"""

import csv
import io
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .density import CoefficientSequence, Transform, lattice_tail
from .errors import GridMismatchError, NotPositiveSemidefiniteError, ShiftSpecError
from .functions import PiecewiseConstant, SampledFunction, SpectralIndicator, exponential

__all__ = [
    "PathEnsemble",
    "CovarianceSequence",
    "stationary_gaussian",
    "gaussian_paths",
    "brownian_paths",
    "mu_gaussian_increments",
    "stochastic_integral",
    "multiplication_unitary",
    "nongaussian_realization",
    "empirical_covariance",
    "l2_mu_norm2",
]

KINDS = ("brownian", "mu_gaussian", "stationary", "kernel", "reconstruction")


@dataclass(frozen=True, eq=False)
class PathEnsemble:
    """``paths[i, j]`` is the value of path ``i`` at ``time_grid[j]``."""

    time_grid: np.ndarray
    paths: np.ndarray
    seed: int
    kind: str

    def __post_init__(self):
        t = np.asarray(self.time_grid, dtype=float).copy()
        x = np.array(self.paths, copy=True)
        if x.ndim != 2 or x.shape[1] != t.size:
            raise ShiftSpecError("paths must have shape (M, len(time_grid))")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ShiftSpecError("time grid must be increasing")
        if self.kind not in KINDS:
            raise ShiftSpecError(f"unknown ensemble kind {self.kind!r}")
        t.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "time_grid", t)
        object.__setattr__(self, "paths", x)

    @property
    def m_paths(self):
        return self.paths.shape[0]

    def increments(self):
        return np.diff(self.paths, axis=1)

    def set_values(self, mask):
        """``X_A`` for a union ``A`` of grid cells, one value per path."""
        mask = np.asarray(getattr(mask, "mask", mask), dtype=bool)
        inc = self.increments()
        if mask.shape != (inc.shape[1],):
            raise GridMismatchError("cell mask does not match the ensemble grid")
        return inc[:, mask].sum(axis=1)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cplx = np.iscomplexobj(self.paths)
        w.writerow(["path_id", "t", "value"] + (["imag"] if cplx else []))
        for i, row in enumerate(self.paths):
            for t, v in zip(self.time_grid, row):
                rec = [i, repr(float(t)), repr(float(np.real(v)))]
                if cplx:
                    rec.append(repr(float(np.imag(v))))
                w.writerow(rec)
        return buf.getvalue()


@dataclass(frozen=True, eq=False)
class CovarianceSequence:
    """``values[k] = r_k`` for ``k = 0..K``; ``r_{-k} = conj(r_k)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        if v.ndim != 1 or v.size == 0:
            raise ShiftSpecError("covariance needs at least r_0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_coefficients(cls, c):
        """Take the ``k >= 0`` half of a Hermitian :class:`CoefficientSequence`."""
        if c.k_min > 0 or c.k_max < 0:
            raise ShiftSpecError("coefficient range must contain k = 0")
        return cls(c.values[-c.k_min:])

    def toeplitz(self, n):
        """``C[j, k] = r(k - j)`` for ``0 <= j, k < n``."""
        if n > self.values.size:
            raise ShiftSpecError(f"need r_0..r_{n - 1}, have {self.values.size} values")
        j = np.arange(n)
        d = j[None, :] - j[:, None]
        r = self.values
        C = np.where(d >= 0, r[np.abs(d)], np.conj(r[np.abs(d)]))
        return C.real if np.all(r.imag == 0) else C

    def min_eigenvalue(self, n=None):
        return float(np.linalg.eigvalsh(self.toeplitz(n or self.values.size))[0])


def _substreams(seed, m):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(m)]


def _symmetric_factor(C):
    """Hermitian ``S`` with ``S S* = C``; refuses indefinite ``C``."""
    w, V = np.linalg.eigh(C)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -1e-10 * scale:
        raise NotPositiveSemidefiniteError(
            f"covariance is not positive semidefinite (min eigenvalue {w[0]:.3e})", float(w[0]))
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ np.conj(V.T)


def stationary_gaussian(r, n, M=DEFAULTS.m_paths, seed=DEFAULTS.seed):
    """Centred Gaussian vectors ``(X_0..X_{n-1})`` with ``E(conj(X_j) X_k) = r(k - j)``.

    ``r`` is a :class:`CovarianceSequence` or a Hermitian
    :class:`CoefficientSequence`.  Complex covariances produce circular
    complex samples.
    """
    if isinstance(r, CoefficientSequence):
        r = CovarianceSequence.from_coefficients(r)
    C = r.toeplitz(n)
    S = _symmetric_factor(C)
    cplx = np.iscomplexobj(C)
    out = np.empty((M, n), dtype=complex if cplx else float)
    for i, rng in enumerate(_substreams(seed, M)):
        if cplx:
            z = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
            # X = conj(S) z gives E(conj(X_j) X_k) = (S S*)[j, k]
            out[i] = np.conj(S) @ z
        else:
            out[i] = S @ rng.standard_normal(n)
    return PathEnsemble(np.arange(n, dtype=float), out, seed, "stationary")


def gaussian_paths(kernel, time_grid, M=DEFAULTS.m_paths, seed=DEFAULTS.seed):
    """Real centred Gaussian paths whose covariance is the matrix ``kernel``."""
    K = np.asarray(kernel, dtype=float)
    S = _symmetric_factor(0.5 * (K + K.T))
    n = K.shape[0]
    out = np.empty((M, n))
    for i, rng in enumerate(_substreams(seed, M)):
        out[i] = S @ rng.standard_normal(n)
    return PathEnsemble(time_grid, out, seed, "kernel")


def _increment_paths(variances, M, seed):
    sd = np.sqrt(np.asarray(variances, dtype=float))
    n = sd.size
    paths = np.zeros((M, n + 1))
    for i, rng in enumerate(_substreams(seed, M)):
        paths[i, 1:] = np.cumsum(rng.standard_normal(n) * sd)
    return paths


def brownian_paths(n_times, M=DEFAULTS.m_paths, seed=DEFAULTS.seed):
    """Brownian motion on ``t_j = j / (n_times - 1)``, started at 0."""
    if n_times < 2:
        raise ShiftSpecError("n_times must be >= 2")
    n = n_times - 1
    paths = _increment_paths(np.full(n, 1.0 / n), M, seed)
    return PathEnsemble(np.arange(n + 1) / n, paths, seed, "brownian")


def mu_gaussian_increments(mu_density, M=DEFAULTS.m_paths, seed=DEFAULTS.seed):
    """Independent increments with ``Var = p_j / n_grid`` on the cells of the density grid.

    ``X_t`` is the running sum over cells left of ``t``, so ``X_A`` for a
    cell union ``A`` is :meth:`PathEnsemble.set_values`.  With ``p == 1``
    this reproduces :func:`brownian_paths` bit for bit.
    """
    p = np.asarray(mu_density.values, dtype=float)
    if np.any(p < 0):
        raise ShiftSpecError("density must be nonnegative")
    n = p.size
    paths = _increment_paths(p / n, M, seed)
    return PathEnsemble(np.arange(n + 1) / n, paths, seed, "mu_gaussian")


def stochastic_integral(m, ensemble):
    """``sum_j m(t_j) (X_{t_{j+1}} - X_{t_j})`` for every path."""
    vals = np.asarray(getattr(m, "values", m), dtype=complex)
    inc = ensemble.increments()
    if vals.shape != (inc.shape[1],):
        raise GridMismatchError(
            f"multiplier has {vals.size} samples, ensemble has {inc.shape[1]} cells")
    return inc @ vals


def l2_mu_norm2(m, mu_density):
    """``integral |m|^2 p dx`` on the grid."""
    vals = np.asarray(getattr(m, "values", m), dtype=complex)
    if vals.shape != mu_density.values.shape:
        raise GridMismatchError("multiplier and density grids differ")
    return float(np.mean(np.abs(vals) ** 2 * mu_density.values))


def multiplication_unitary(m):
    """``m -> e_1 m``, the translation operator in the spectral picture."""
    return m * exponential(1, m.n_grid)


def empirical_covariance(ensemble):
    """``E(conj(X_s) X_t)`` estimated over paths."""
    X = ensemble.paths
    return (np.conj(X).T @ X) / X.shape[0]


def nongaussian_realization(psi, s_grid, t_grid, n_terms=DEFAULTS.n_terms, tail_correction=True):
    """Kernel ``K(s, t) = sum_n conj(psi_hat(s + n)) psi_hat(t + n)``.

    This is the covariance of ``X_t = (psi_hat(t + n))_n`` in ``l2(Z)``.
    The diagonal is the spectral density.  For piecewise-constant ``psi``
    the lattice tail beyond ``n_terms`` is added in closed form.
    """
    if n_terms < 1:
        raise ShiftSpecError("n_terms must be >= 1")
    if isinstance(psi, (PiecewiseConstant, SpectralIndicator)):
        f = Transform(psi)
    elif isinstance(psi, SampledFunction) and psi.domain == "frequency":
        f = psi
    else:
        raise ShiftSpecError("need an exact generator or frequency-domain samples")
    s = np.asarray(s_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    ns = np.arange(-n_terms, n_terms + 1)
    As = f(s[:, None] + ns[None, :])
    At = As if t is s or (t.shape == s.shape and np.array_equal(t, s)) else f(t[:, None] + ns[None, :])
    K = np.conj(As) @ At.T
    if tail_correction and isinstance(psi, PiecewiseConstant):
        K = K + lattice_tail(psi, psi, s[:, None], t[None, :], n_terms)
    return K
