"""Renormalization and L2-dependence of integer translates.

A translate system is L2-dependent exactly when its density vanishes on a
set ``E`` of positive measure.  The coefficients of the indicator of ``E``
then give a nontrivial relation ``sum_k c_k psi(x - k) = 0``.  On the
support of the density, dividing the transform by ``sqrt(p)`` yields a
generator whose density is the indicator of that support.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import polygamma

from .config import DEFAULTS
from .density import CoefficientSequence, Transform
from .errors import EmptySetError, GridMismatchError, ShiftSpecError, ZeroFunctionError
from .functions import PiecewiseConstant, SampledFunction, SpectralIndicator

__all__ = [
    "GridSet",
    "Renormalization",
    "essential_support",
    "renormalize",
    "detect_l2_dependence",
    "construct_dependence_coeffs",
    "verify_dependence",
    "density_norm",
    "symbol",
]


@dataclass(frozen=True, eq=False)
class GridSet:
    """A subset of [0, 1) made of whole grid cells ``[j/n, (j+1)/n)``."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        if m.ndim != 1 or m.size == 0:
            raise ShiftSpecError("mask must be a non-empty 1-d sequence")
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @property
    def n_grid(self):
        return self.mask.size

    @property
    def measure(self):
        return float(np.count_nonzero(self.mask)) / self.n_grid

    def complement(self):
        return GridSet(~self.mask)

    def __and__(self, other):
        if other.n_grid != self.n_grid:
            raise GridMismatchError("grid sizes differ")
        return GridSet(self.mask & other.mask)

    def __le__(self, other):
        if other.n_grid != self.n_grid:
            raise GridMismatchError("grid sizes differ")
        return bool(np.all(other.mask[self.mask]))

    def intervals(self):
        """Maximal runs as ``[(a, b), ...]`` with ``a < b`` in [0, 1]."""
        padded = np.concatenate(([False], self.mask, [False])).astype(np.int8)
        edges = np.flatnonzero(np.diff(padded))
        n = self.n_grid
        return [(int(s) / n, int(e) / n) for s, e in zip(edges[::2], edges[1::2])]

    @classmethod
    def from_intervals(cls, intervals, n_grid):
        x = np.arange(n_grid) / n_grid
        mask = np.zeros(n_grid, dtype=bool)
        for a, b in intervals:
            mask |= (x >= a - 1e-12) & (x < b - 1e-12)
        return cls(mask)

    def to_json(self):
        return json.dumps({"n_grid": self.n_grid, "measure": self.measure,
                           "intervals": [list(iv) for iv in self.intervals()]})

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        try:
            return cls.from_intervals(d["intervals"], int(d["n_grid"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ShiftSpecError(f"malformed grid-set document: {exc}") from exc


@dataclass(frozen=True)
class Renormalization:
    psi_ren: SampledFunction
    support: GridSet


def essential_support(p, tol=DEFAULTS.zero_tol):
    """Cells where ``p > tol``."""
    if not tol > 0:
        raise ShiftSpecError("tol must be positive")
    return GridSet(np.asarray(p.values) > tol)


def _transform_of(psi):
    if isinstance(psi, SampledFunction):
        if psi.domain != "frequency":
            raise ShiftSpecError("sampled generators must be given in the frequency domain")
        return psi
    if isinstance(psi, (PiecewiseConstant, SpectralIndicator)):
        return Transform(psi)
    raise ShiftSpecError(f"unsupported generator type {type(psi).__name__}")


def renormalize(psi, p, tol=DEFAULTS.zero_tol, n_terms=DEFAULTS.n_terms):
    """Frequency samples of ``psi_hat(t) * xi(t mod 1)`` with ``xi = 1_A / sqrt(p)``.

    ``A`` is the essential support of ``p``.  The result lives on the grid
    ``j / n_grid`` over ``[-n_terms, n_terms + 1)``, which is what
    :func:`spectral_density` needs to periodize it again.
    """
    if psi.norm2() == 0:
        raise ZeroFunctionError("psi is the zero function")
    support = essential_support(p, tol)
    xi = np.zeros(p.n_grid)
    xi[support.mask] = 1.0 / np.sqrt(p.values[support.mask])
    f = _transform_of(psi)
    n = p.n_grid
    x = np.arange(n) / n
    shells = np.arange(-n_terms, n_terms + 1)
    out = np.empty((shells.size, n), dtype=complex)
    for s in range(0, shells.size, 64):
        ns = shells[s:s + 64]
        out[s:s + ns.size] = f(x[None, :] + ns[:, None]) * xi[None, :]
    return Renormalization(SampledFunction(-n_terms, 1.0 / n, out.reshape(-1), "frequency"),
                           support)


def detect_l2_dependence(p, tol=DEFAULTS.zero_tol, min_measure=None):
    """Zero set of ``p`` if it has measure at least ``min_measure``, else None.

    ``min_measure`` defaults to two grid cells, so isolated zeros of a
    smooth density do not count as a dependence.
    """
    if min_measure is None:
        min_measure = 2.0 / p.n_grid
    if not min_measure > 0:
        raise ShiftSpecError("min_measure must be positive")
    zero = essential_support(p, tol).complement()
    return zero if zero.measure >= min_measure - 1e-15 else None


def construct_dependence_coeffs(E, k_max):
    """Coefficients ``c_k`` with ``sum_k c_k exp(-2j*pi*k*t) = 1_E(t)``.

    ``c_k = integral over E of exp(2j*pi*k*t) dt``, computed exactly for the
    cell union ``E``.  Then ``sum_k c_k psi(. - k)`` has transform
    ``1_E * psi_hat``, which vanishes when the density of ``psi`` does on ``E``.
    """
    if E.measure == 0:
        raise EmptySetError("dependence set is empty")
    ks = np.arange(-k_max, k_max + 1)
    c = np.zeros(ks.size, dtype=complex)
    for a, b in E.intervals():
        c += (b - a) * np.exp(1j * np.pi * ks * (a + b)) * np.sinc(ks * (b - a))
    return CoefficientSequence(-k_max, c)


def symbol(c, n_grid):
    """``m_c(t) = sum_k c_k exp(-2j*pi*k*t)`` on the grid ``j / n_grid``."""
    x = np.arange(n_grid) / n_grid
    return np.exp(-2j * np.pi * np.outer(x, c.indices)) @ c.values


def density_norm(c, p):
    """``(integral |m_c|^2 p dt)^(1/2)``, the density side of the isometry."""
    m = symbol(c, p.n_grid)
    return float(np.sqrt(np.mean(np.abs(m) ** 2 * p.values)))


def _pc_combination_norm(psi, c):
    ks = c.indices[c.values != 0]
    cs = c.values[c.values != 0]
    if ks.size == 0:
        return 0.0
    edges = np.unique(np.concatenate([psi.breakpoints + k for k in ks]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    vals = np.zeros(mids.size, dtype=complex)
    for k, ck in zip(ks, cs):
        vals += ck * psi(mids - k)
    return float(np.sqrt(np.sum(np.abs(vals) ** 2 * np.diff(edges))))


def _band_combination_norm(psi, c, half_width):
    # g_hat = m_c * psi_hat lives inside the span of S, so samples at spacing
    # h <= 1/span satisfy h * sum |g(nh)|^2 = ||g||^2 exactly (Plancherel
    # for band-limited functions); only the |x| > half_width tail is modelled
    lo = min(a for a, _ in psi.intervals)
    hi = max(b for _, b in psi.intervals)
    per_unit = int(np.ceil(2 * (hi - lo))) or 1
    h = 1.0 / per_unit
    n_half = int(half_width * per_unit)
    x = np.arange(-n_half, n_half + 1) * h
    g = np.zeros(x.size, dtype=complex)
    for k, ck in zip(c.indices, c.values):
        if ck != 0:
            g += ck * psi(x - k)
    body = h * float(np.sum(np.abs(g) ** 2))

    # far field: g(x) ~ -(1/(2j*pi*x)) sum_e J_e exp(2j*pi*e*x), J_e the jumps of
    # m_c * 1_S at the band edges e; pairs with (e - e') h integral do not
    # average out over the sample lattice
    edges, jumps = [], []
    for a, b in psi.intervals:
        for e, sgn in ((a, 1.0), (b, -1.0)):
            mk = complex(np.sum(c.values * np.exp(-2j * np.pi * c.indices * e)))
            edges.append(e)
            jumps.append(sgn * mk * np.exp(-2j * np.pi * psi.shift * e))
    edges = np.array(edges)
    jumps = np.array(jumps)
    d = (edges[:, None] - edges[None, :]) * h
    resonant = np.abs(d - np.rint(d)) < 1e-9
    amp = float(np.real(np.sum(np.outer(jumps, np.conj(jumps))[resonant])))
    tail = amp / (4 * np.pi ** 2 * h) * 2 * float(polygamma(1, n_half + 1))
    return float(np.sqrt(max(body + tail, 0.0)))


def verify_dependence(psi, c, half_width=20_000):
    """``|| sum_k c_k psi(. - k) ||`` by direct summation in the time domain.

    This never touches a density, so it is an independent check of
    :func:`density_norm`.  Piecewise-constant generators are handled
    exactly.  Band-limited generators are sampled at their Nyquist spacing
    over ``|x| <= half_width`` and the slowly decaying tail is added in
    closed form.  Frequency-domain samples fall back to Plancherel.
    """
    if not np.any(c.values):
        return 0.0
    if isinstance(psi, PiecewiseConstant):
        return _pc_combination_norm(psi, c)
    if isinstance(psi, SpectralIndicator):
        return _band_combination_norm(psi, c, half_width)
    if isinstance(psi, SampledFunction):
        if psi.domain == "frequency":
            t = psi.positions
            m = np.exp(-2j * np.pi * np.outer(t, c.indices)) @ c.values
            return float(np.sqrt(psi.step * np.sum(np.abs(m * psi.values) ** 2)))
        per_unit = 1.0 / psi.step
        if abs(per_unit - round(per_unit)) > 1e-9:
            raise ShiftSpecError("sample step must divide the unit translation")
        per_unit = int(round(per_unit))
        k_lo, k_hi = int(c.indices[0]), int(c.indices[-1])
        n = psi.values.size
        g = np.zeros(n + (k_hi - k_lo) * per_unit, dtype=complex)
        for k, ck in zip(c.indices, c.values):
            off = (k - k_lo) * per_unit
            g[off:off + n] += ck * psi.values
        return float(np.sqrt(psi.step * np.sum(np.abs(g) ** 2)))
    raise ShiftSpecError(f"unsupported generator type {type(psi).__name__}")
