"""Periodized spectral densities and their Fourier coefficients.

The central object is ``p(t) = sum_n |psi_hat(t + n)|**2`` sampled on the
left-endpoint grid ``t_j = j / n_grid``.  The lattice sum is truncated at
``|n| <= n_terms``.  For piecewise-constant generators the neglected tail
is added back analytically (see :func:`lattice_tail`), which brings the
truncation error from O(1/n_terms) down to O(1/n_terms**2).
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, polygamma

from .config import DEFAULTS
from .errors import (AliasingError, DomainTooSmallError, ShiftSpecError,
                     ZeroFunctionError)
from .functions import (PiecewiseConstant, SampledFunction, SpectralIndicator,
                        inner_product, translate)

__all__ = [
    "PeriodicDensity",
    "CoefficientSequence",
    "ClosabilityReport",
    "Transform",
    "lattice_tail",
    "periodize_abs2",
    "periodize_product",
    "spectral_density",
    "autocorrelation_coeffs",
    "density_fourier_coeffs",
    "closability_check",
]

_SHELL_BLOCK = 64


@dataclass(frozen=True, eq=False)
class PeriodicDensity:
    """Nonnegative samples ``values[j] = p(j / n_grid)`` of a 1-periodic density."""

    values: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).copy()
        if v.ndim != 1 or v.size == 0:
            raise ShiftSpecError("density needs a non-empty 1-d sample vector")
        if np.any(v < -1e-14 * max(1.0, float(np.max(np.abs(v))))):
            raise ShiftSpecError(f"density has negative samples (min {v.min():.3e})")
        np.maximum(v, 0.0, out=v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "tail_bound", float(self.tail_bound))

    @property
    def n_grid(self):
        return self.values.size

    @property
    def grid(self):
        return np.arange(self.n_grid) / self.n_grid

    def integral(self):
        # periodic trapezoid rule == grid mean
        return float(np.mean(self.values))

    def at(self, x):
        """Sample nearest to ``x`` (mod 1)."""
        idx = np.rint(np.asarray(x, dtype=float) * self.n_grid).astype(np.int64) % self.n_grid
        return self.values[idx]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "p"])
        for x, p in zip(self.grid, self.values):
            w.writerow([repr(float(x)), repr(float(p))])
        return buf.getvalue()

    def to_json(self):
        return json.dumps({"n_grid": self.n_grid,
                           "tail_bound": self.tail_bound,
                           "values": [float(v) for v in self.values]})

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        try:
            values = doc["values"]
            if "n_grid" in doc and int(doc["n_grid"]) != len(values):
                raise ShiftSpecError("n_grid does not match the number of values")
            return cls(values, doc.get("tail_bound", 0.0))
        except (KeyError, TypeError) as exc:
            raise ShiftSpecError(f"malformed density document: {exc}") from exc

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([float(r["p"]) for r in rows])


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Values ``c_k`` for ``k_min <= k <= k_min + len(values) - 1``."""

    k_min: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "k_min", int(self.k_min))

    @property
    def k_max(self):
        return self.k_min + self.values.size - 1

    @property
    def indices(self):
        return np.arange(self.k_min, self.k_max + 1)

    def __getitem__(self, k):
        if not self.k_min <= k <= self.k_max:
            raise IndexError(k)
        return self.values[k - self.k_min]

    def __len__(self):
        return self.values.size

    def norm(self):
        return float(np.linalg.norm(self.values))

    def to_json(self):
        return json.dumps({"k_min": self.k_min,
                           "values": [[float(v.real), float(v.imag)] for v in self.values]})


@dataclass(frozen=True)
class ClosabilityReport:
    in_l2: bool
    partial_sums: np.ndarray
    l2_norm2: float


@dataclass(frozen=True, eq=False)
class Transform:
    """The Fourier transform of a line function, as a callable on frequencies."""

    source: object

    def __call__(self, t):
        return self.source.fourier(t)


def _shell_sum(h, n_terms, block=_SHELL_BLOCK):
    """``sum_{|n| <= n_terms} h(n)`` for ``h`` returning grid-shaped arrays.

    Shells are visited in fixed blocks, so the result does not depend on
    anything but the inputs.
    """
    shells = np.arange(-n_terms, n_terms + 1)
    acc = None
    for s in range(0, shells.size, block):
        part = h(shells[s:s + block]).sum(axis=0)
        acc = part if acc is None else acc + part
    return acc


def _tail_weight(s, t, n_terms):
    """``sum_{|n| > n_terms} 1 / ((s + n) (t + n))`` in closed form."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    s, t = np.broadcast_arrays(s, t)
    a = n_terms + 1.0
    out = np.empty(s.shape)
    close = np.abs(s - t) < 1e-7
    if np.any(close):
        m = 0.5 * (s[close] + t[close])
        out[close] = polygamma(1, a + m) + polygamma(1, a - m)
    far = ~close
    if np.any(far):
        sf, tf = s[far], t[far]
        out[far] = ((digamma(a + tf) - digamma(a + sf)) / (tf - sf)
                    + (digamma(a - tf) - digamma(a - sf)) / (sf - tf))
    return out


def lattice_tail(f, g, s, t, n_terms):
    """Asymptotic tail ``sum_{|n| > n_terms} conj(f_hat(s+n)) g_hat(t+n)``.

    Only defined for piecewise-constant ``f`` and ``g``.  Writing
    ``f_hat(u) = sum_j w_j exp(-2j*pi*u*x_j) / (2j*pi*u)`` with jump weights
    ``w_j``, every pair of breakpoints whose difference is an integer gives
    an ``n``-independent numerator, and its ``1/((s+n)(t+n))`` tail sums in
    closed form.  Pairs with non-integer separation oscillate in ``n``; their
    O(1/n_terms**2) remainder is dropped.
    """
    xf, wf = f.jumps()
    xg, wg = g.jumps()
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    d = xf[:, None] - xg[None, :]
    commensurate = np.abs(d - np.rint(d)) < 1e-9
    out = np.zeros(np.broadcast(s, t).shape, dtype=complex)
    for j, l in zip(*np.nonzero(commensurate)):
        coef = np.conj(wf[j]) * wg[l]
        if coef != 0:
            out += coef * np.exp(2j * np.pi * (s * xf[j] - t * xg[l]))
    if not np.any(out):
        return out
    return out * _tail_weight(s, t, n_terms) / (4 * np.pi ** 2)


def _check_coverage(f, n_terms):
    if isinstance(f, SampledFunction):
        lo, hi = f.window
        if lo > -n_terms + 1e-12 or hi < n_terms + 1 - 1e-12:
            raise DomainTooSmallError(
                f"samples cover [{lo}, {hi}) but shells need [{-n_terms}, {n_terms + 1})")


def _aligned_shells(f, n_grid, n_terms):
    """Fast path: samples sit exactly on ``j/n_grid + n``; return (shells, n_grid) view."""
    if not isinstance(f, SampledFunction):
        return None
    if not math.isclose(f.step * n_grid, 1.0, rel_tol=1e-12):
        return None
    offset = (-n_terms - f.start) * n_grid
    if abs(offset - round(offset)) > 1e-6:
        return None
    i0 = int(round(offset))
    count = (2 * n_terms + 1) * n_grid
    if i0 < 0 or i0 + count > f.values.size:
        return None
    return f.values[i0:i0 + count].reshape(2 * n_terms + 1, n_grid)


def _uncorrected_tail_estimate(last_shell, n_terms, corrected):
    # a 1/n^2 decay beyond the last shell sums to about n_terms times its size;
    # after the analytic correction only an O(1/n_terms^2) remainder is left
    return float(2 * last_shell * (1 if corrected else n_terms))


def periodize_product(f, g, n_grid=DEFAULTS.n_grid, n_terms=DEFAULTS.n_terms,
                      tail_correction=True):
    """``sum_{|n| <= n_terms} conj(f(x_j + n)) g(x_j + n)`` on the grid.

    Returns ``(values, tail_bound)``.  When both arguments are transforms of
    piecewise-constant functions and ``tail_correction`` is set, the
    analytic tail from :func:`lattice_tail` is added.
    """
    if n_terms < 1:
        raise ShiftSpecError("n_terms must be >= 1")
    _check_coverage(f, n_terms)
    _check_coverage(g, n_terms)
    x = np.arange(n_grid) / n_grid

    fa = _aligned_shells(f, n_grid, n_terms)
    ga = fa if g is f else _aligned_shells(g, n_grid, n_terms)
    if fa is not None and ga is not None:
        values = np.einsum("nj,nj->j", np.conj(fa), ga)
        edges = [0, -1]
        last = max(float(np.max(np.abs(np.conj(fa[e]) * ga[e]))) for e in edges)
    else:
        def h(ns):
            pts = x[None, :] + ns[:, None]
            fv = f(pts)
            gv = fv if g is f else g(pts)
            return np.conj(fv) * gv
        values = _shell_sum(h, n_terms)
        last = float(np.max(np.abs(h(np.array([-n_terms, n_terms])))))

    corrected = (tail_correction and isinstance(f, Transform) and isinstance(g, Transform)
                 and isinstance(f.source, PiecewiseConstant)
                 and isinstance(g.source, PiecewiseConstant))
    if corrected:
        values = values + lattice_tail(f.source, g.source, x, x, n_terms)
    return values, _uncorrected_tail_estimate(last, n_terms, corrected)


def periodize_abs2(f, n_grid=DEFAULTS.n_grid, n_terms=DEFAULTS.n_terms, tail_correction=True):
    """Periodization ``sum_n |f(x + n)|**2`` sampled on ``x_j = j / n_grid``.

    ``f`` is anything evaluable on arrays: a time-domain line function, a
    :class:`Transform`, or a :class:`SampledFunction` whose window covers
    ``[-n_terms, n_terms + 1)``.
    """
    values, tail = periodize_product(f, f, n_grid, n_terms, tail_correction)
    return PeriodicDensity(np.maximum(values.real, 0.0), tail)


def spectral_density(psi, n_grid=DEFAULTS.n_grid, n_terms=DEFAULTS.n_terms,
                     tail_correction=True):
    """``p_psi(t) = sum_n |psi_hat(t + n)|**2`` on the grid."""
    if isinstance(psi, SampledFunction) and psi.domain == "frequency":
        source = psi
    elif isinstance(psi, (PiecewiseConstant, SpectralIndicator)):
        source = Transform(psi)
    else:
        raise ShiftSpecError(
            "spectral_density needs an exact generator or frequency-domain samples")
    if psi.norm2() == 0:
        raise ZeroFunctionError("psi is the zero function")
    return periodize_abs2(source, n_grid, n_terms, tail_correction)


def _sampled_time_autocorr(psi, k):
    shift = k / psi.step
    if abs(shift - round(shift)) > 1e-9:
        raise ShiftSpecError("sample step must divide the unit translation")
    m = int(round(shift))
    v = psi.values
    n = v.size
    if abs(m) >= n:
        return 0j
    # <psi | psi(. - k)>: psi(x_j - k) = v[j - m]
    if m >= 0:
        return complex(psi.step * np.vdot(v[m:], v[:n - m]))
    return complex(psi.step * np.vdot(v[:n + m], v[-m:]))


def autocorrelation_coeffs(psi, k_max):
    """``r_k = <psi | psi(. - k)>`` for ``|k| <= k_max``; Hermitian in ``k``."""
    if k_max < 0:
        raise ShiftSpecError("k_max must be >= 0")
    vals = np.empty(2 * k_max + 1, dtype=complex)
    for k in range(0, k_max + 1):
        if isinstance(psi, SampledFunction) and psi.domain == "time":
            r = _sampled_time_autocorr(psi, k)
        else:
            r = inner_product(psi, translate(psi, k))
        vals[k_max + k] = r
        vals[k_max - k] = np.conj(r)
    vals[k_max] = vals[k_max].real
    return CoefficientSequence(-k_max, vals)


def density_fourier_coeffs(p, k_max):
    """``p_hat(k) = (1/n_grid) sum_j exp(-2j*pi*k*j/n_grid) p_j`` for ``|k| <= k_max``."""
    n = p.n_grid
    if k_max >= n / 2:
        raise AliasingError(f"k_max={k_max} must be below n_grid/2={n / 2}")
    spec = np.fft.fft(p.values) / n
    ks = np.arange(-k_max, k_max + 1)
    return CoefficientSequence(-k_max, spec[ks % n])


def closability_check(p, k_max=None, tol=DEFAULTS.closability_tol):
    """Numerical test of ``sum_k |p_hat(k)|**2 < inf``.

    ``partial_sums[K] = sum_{|k| <= K} |p_hat(k)|**2`` for ``K = 0..k_max``.
    The density is declared square integrable when ``mean(p**2)`` is finite
    and the partial sums have settled between ``k_max/2`` and ``k_max``.
    """
    if k_max is None:
        k_max = p.n_grid // 2 - 1
    c = density_fourier_coeffs(p, k_max)
    mag = np.abs(c.values) ** 2
    centre = k_max
    sums = np.empty(k_max + 1)
    sums[0] = mag[centre]
    for K in range(1, k_max + 1):
        sums[K] = sums[K - 1] + mag[centre - K] + mag[centre + K]
    l2 = float(np.mean(p.values ** 2))
    s_full, s_half = sums[k_max], sums[k_max // 2]
    converged = abs(s_full - s_half) < tol * s_full if s_full > 0 else True
    return ClosabilityReport(bool(np.isfinite(l2) and converged), sums, l2)
