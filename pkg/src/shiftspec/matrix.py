"""Matrix-valued densities of finite generator families.

For ``F = (psi_1, ..., psi_N)`` the matrix density has entries
``P[r, s](x) = sum_n conj(f_r(x + n)) f_s(x + n)`` with ``f = psi`` or
``f = psi_hat``.  Each ``P(x)`` is Hermitian positive semidefinite and the
grid average of ``P`` is the Gram matrix of the family.
"""

import json
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .density import Transform, periodize_product
from .dependence import GridSet
from .errors import GridMismatchError, NotHermitianError, ShiftSpecError, ZeroFunctionError
from .functions import (PiecewiseConstant, SampledFunction, SpectralIndicator,
                        inner_product)

__all__ = [
    "MatrixDensityGrid",
    "CyclicDecomposition",
    "Lemma22Result",
    "matrix_density",
    "gram_integral",
    "gram_matrix",
    "lemma22_check",
    "weighted_norm",
    "cyclic_decomposition",
]


@dataclass(frozen=True, eq=False)
class MatrixDensityGrid:
    """``matrices[j]`` is the N x N matrix at ``x = j / n_grid``."""

    matrices: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrices, dtype=complex).copy()
        if m.ndim != 3 or m.shape[1] != m.shape[2] or m.shape[0] == 0:
            raise ShiftSpecError("matrices must have shape (n_grid, N, N)")
        if np.max(np.abs(m - np.conj(np.swapaxes(m, 1, 2)))) >= 1e-12 * max(1.0, np.max(np.abs(m))):
            raise NotHermitianError("matrix density is not Hermitian")
        # symmetrize away rounding so downstream eigh sees exact Hermitian input
        m = 0.5 * (m + np.conj(np.swapaxes(m, 1, 2)))
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def n_grid(self):
        return self.matrices.shape[0]

    @property
    def n_family(self):
        return self.matrices.shape[1]

    def diagonal(self, r):
        return self.matrices[:, r, r].real.copy()

    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.matrices).min())

    def to_json(self):
        return json.dumps({
            "n_family": self.n_family,
            "n_grid": self.n_grid,
            "matrices": [[[[float(z.real), float(z.imag)] for z in row] for row in mat]
                         for mat in self.matrices],
        })

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        try:
            arr = np.asarray(d["matrices"], dtype=float)
            return cls(arr[..., 0] + 1j * arr[..., 1])
        except (KeyError, IndexError, ValueError) as exc:
            raise ShiftSpecError(f"malformed matrix-density document: {exc}") from exc


def _evaluator(psi, domain):
    if domain == "time":
        if isinstance(psi, SampledFunction) and psi.domain != "time":
            raise ShiftSpecError("time-domain density needs time-domain samples")
        return psi
    if domain == "frequency":
        if isinstance(psi, SampledFunction):
            if psi.domain != "frequency":
                raise ShiftSpecError("frequency-domain density needs frequency samples")
            return psi
        if isinstance(psi, (PiecewiseConstant, SpectralIndicator)):
            return Transform(psi)
        raise ShiftSpecError(f"unsupported generator type {type(psi).__name__}")
    raise ShiftSpecError(f"unknown domain {domain!r}")


def matrix_density(family, n_grid=DEFAULTS.n_grid, n_terms=DEFAULTS.n_terms,
                   domain="frequency", tail_correction=True):
    """Periodized cross products of a finite family on the grid ``j / n_grid``."""
    family = list(family)
    if not family:
        raise ShiftSpecError("family must be nonempty")
    for i, psi in enumerate(family):
        if psi.norm2() == 0:
            raise ZeroFunctionError(f"family member {i} is the zero function")
    evals = [_evaluator(psi, domain) for psi in family]
    N = len(family)
    out = np.empty((n_grid, N, N), dtype=complex)
    for r in range(N):
        for s in range(r, N):
            vals, _ = periodize_product(evals[r], evals[s], n_grid, n_terms, tail_correction)
            if r == s:
                vals = vals.real
            out[:, r, s] = vals
            out[:, s, r] = np.conj(vals)
    return MatrixDensityGrid(out)


def gram_integral(P):
    """Grid average of ``P`` (periodic trapezoid rule)."""
    return P.matrices.mean(axis=0)


def gram_matrix(family):
    """Directly integrated Gram matrix ``G[r, s] = <psi_r | psi_s>``."""
    N = len(family)
    G = np.empty((N, N), dtype=complex)
    for r in range(N):
        for s in range(N):
            G[r, s] = inner_product(family[r], family[s])
    return G


@dataclass(frozen=True)
class Lemma22Result:
    max_violation: float
    lam: float


def lemma22_check(P, v):
    """Check ``||P(x) v||^2 <= lam <v | P(x) v>`` with ``lam = max_x ||P(x)||``."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (P.n_family,):
        raise ShiftSpecError("vector length does not match the family size")
    lam = float(np.max(np.linalg.eigvalsh(P.matrices)[:, -1]))
    Pv = P.matrices @ v
    lhs = np.sum(np.abs(Pv) ** 2, axis=1)
    rhs = lam * np.real(np.conj(v) @ Pv.T)
    return Lemma22Result(float(np.max(lhs - rhs)), lam)


def weighted_norm(m, P):
    """``(integral sum_{r,s} conj(m_r) P[r, s] m_s dx)^(1/2)``.

    ``m`` holds one grid function per family member.
    """
    m = list(m)
    if len(m) != P.n_family:
        raise ShiftSpecError("need one multiplier per family member")
    vals = []
    for mr in m:
        arr = np.asarray(getattr(mr, "values", mr), dtype=complex)
        if arr.shape != (P.n_grid,):
            raise GridMismatchError("multiplier grid differs from the density grid")
        vals.append(arr)
    M = np.stack(vals, axis=1)  # (n_grid, N)
    quad = np.einsum("jr,jrs,js->j", np.conj(M), P.matrices, M).real
    return float(np.sqrt(max(np.mean(quad), 0.0)))


@dataclass(frozen=True)
class CyclicDecomposition:
    multiplicity: np.ndarray
    supports: tuple

    def to_dict(self):
        counts = np.bincount(self.multiplicity, minlength=len(self.supports) + 1)
        return {"multiplicity_histogram": {str(i): int(c) for i, c in enumerate(counts)},
                "supports": [{"index": i + 1, "measure": s.measure,
                              "intervals": [list(iv) for iv in s.intervals()]}
                             for i, s in enumerate(self.supports)]}


def cyclic_decomposition(P, tol=None):
    """Pointwise rank of ``P`` and its nested superlevel sets.

    An eigenvalue counts when it exceeds ``tol``; by default the threshold
    is relative, ``rank_rtol * trace(P(x))``.
    """
    w = np.linalg.eigvalsh(P.matrices)
    if tol is None:
        thresh = DEFAULTS.rank_rtol * np.trace(P.matrices, axis1=1, axis2=2).real
    else:
        thresh = np.full(P.n_grid, float(tol))
    thresh = np.maximum(thresh, np.finfo(float).tiny)
    mult = np.sum(w > thresh[:, None], axis=1).astype(np.int64)
    supports = tuple(GridSet(mult >= i) for i in range(1, P.n_family + 1))
    return CyclicDecomposition(mult, supports)
