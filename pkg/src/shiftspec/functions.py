"""Functions on the line and on the circle.

Three concrete representations of a function in L2(R) share one duck-typed
interface (``__call__``, ``fourier``, ``norm2``, ``translate``):

* :class:`PiecewiseConstant` -- exact, compactly supported step function.
  Inner products, translations and Fourier transforms are closed form.
* :class:`SampledFunction` -- uniform samples on a finite window, in either
  the time or the frequency domain.
* :class:`SpectralIndicator` -- a band-limited function whose Fourier
  transform is the indicator of a finite union of intervals (the
  Shannon-type generators).

Fourier convention used everywhere::

    f_hat(t) = integral exp(-2j*pi*t*x) f(x) dx

Translation ``(T^k f)(x) = f(x - k)`` therefore multiplies ``f_hat`` by
``exp(-2j*pi*k*t)``.
"""

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import GridMismatchError, ShiftSpecError

__all__ = [
    "PiecewiseConstant",
    "SampledFunction",
    "SpectralIndicator",
    "PeriodicGridFunction",
    "fourier_transform",
    "sample_transform",
    "inner_product",
    "translate",
    "exponential",
]


def _as_integer_shift(k):
    if isinstance(k, (int, np.integer)):
        return int(k)
    if float(k).is_integer():
        return int(k)
    raise ShiftSpecError(f"translation must be by an integer, got {k!r}")


def _interval_transform(a, b, t):
    """Closed-form integral of exp(-2j*pi*t*x) over [a, b)."""
    width = b - a
    return width * np.exp(-1j * np.pi * t * (a + b)) * np.sinc(width * t)


@dataclass(frozen=True, eq=False)
class PiecewiseConstant:
    """Step function with value ``values[i]`` on ``[breakpoints[i], breakpoints[i+1])``.

    Zero outside ``[breakpoints[0], breakpoints[-1])``.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float).copy()
        v = np.asarray(self.values, dtype=complex).copy()
        if b.ndim != 1 or b.size < 2:
            raise ShiftSpecError("need at least two breakpoints")
        if not np.all(np.isfinite(b)):
            raise ShiftSpecError("breakpoints must be finite")
        if np.any(np.diff(b) <= 0):
            raise ShiftSpecError("breakpoints must be strictly increasing")
        if v.shape != (b.size - 1,):
            raise ShiftSpecError(
                f"expected {b.size - 1} values for {b.size} breakpoints, got {v.shape}")
        b.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def indicator(cls, a, b, height=1.0):
        return cls([a, b], [height])

    @property
    def support(self):
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def is_real(self):
        return bool(np.all(self.values.imag == 0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.zeros(x.shape, dtype=complex)
        out[inside] = self.values[idx[inside]]
        return out

    def norm2(self):
        return float(np.sum(np.abs(self.values) ** 2 * np.diff(self.breakpoints)))

    def translate(self, k):
        return PiecewiseConstant(self.breakpoints + _as_integer_shift(k), self.values)

    def affine(self, scale, shift=0.0, amplitude=1.0):
        """Return ``x -> amplitude * f(scale * x - shift)`` for ``scale > 0``."""
        if scale <= 0:
            raise ShiftSpecError("scale must be positive")
        return PiecewiseConstant((self.breakpoints + shift) / scale,
                                 amplitude * self.values)

    def jumps(self):
        """Breakpoints and the jump ``f(x+) - f(x-)`` at each of them.

        For ``t != 0`` the transform is ``sum(w * exp(-2j*pi*t*x)) / (2j*pi*t)``;
        the lattice-tail correction in :mod:`shiftspec.density` relies on it.
        """
        padded = np.concatenate([[0.0], self.values, [0.0]])
        return self.breakpoints, np.diff(padded)

    def fourier(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        b = self.breakpoints
        for i, v in enumerate(self.values):
            if v != 0:
                out += v * _interval_transform(b[i], b[i + 1], t)
        return out

    def to_json(self):
        return json.dumps({
            "breakpoints": [float(x) for x in self.breakpoints],
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        })

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        try:
            values = [complex(re, im) for re, im in doc["values"]]
            return cls(doc["breakpoints"], values)
        except (KeyError, TypeError, ValueError) as exc:
            raise ShiftSpecError(f"malformed piecewise-constant document: {exc}") from exc


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Uniform samples ``values[j] = f(start + j*step)``.

    ``domain`` says whether the samples are of ``f`` ("time") or of its
    Fourier transform ("frequency").  Between samples the function is
    linearly interpolated; outside the window it is zero.
    """

    start: float
    step: float
    values: np.ndarray
    domain: str = "time"

    def __post_init__(self):
        if not self.step > 0:
            raise ShiftSpecError("step must be positive")
        if self.domain not in ("time", "frequency"):
            raise ShiftSpecError(f"unknown domain {self.domain!r}")
        v = np.asarray(self.values, dtype=complex).copy()
        if v.ndim != 1 or v.size == 0:
            raise ShiftSpecError("values must be a non-empty 1-d sequence")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "step", float(self.step))

    @property
    def positions(self):
        return self.start + self.step * np.arange(self.values.size)

    @property
    def window(self):
        """Half-open window ``[start, start + n*step)`` covered by the samples."""
        return self.start, self.start + self.step * self.values.size

    def same_grid(self, other, rtol=1e-12):
        return (self.domain == other.domain
                and self.values.size == other.values.size
                and math.isclose(self.start, other.start, rel_tol=rtol, abs_tol=rtol)
                and math.isclose(self.step, other.step, rel_tol=rtol))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        pos = (x - self.start) / self.step
        n = self.values.size
        i0 = np.floor(pos).astype(np.int64)
        frac = pos - i0
        out = np.zeros(x.shape, dtype=complex)
        ok = (i0 >= 0) & (i0 < n)
        i1 = np.minimum(i0 + 1, n - 1)
        lo = self.values[np.clip(i0, 0, n - 1)]
        hi = np.where(i0 + 1 < n, self.values[i1], 0.0)
        out[ok] = (lo * (1 - frac) + hi * frac)[ok]
        return out

    def norm2(self):
        return float(self.step * np.sum(np.abs(self.values) ** 2))

    def translate(self, k):
        k = _as_integer_shift(k)
        if self.domain == "time":
            return SampledFunction(self.start + k, self.step, self.values, "time")
        phase = np.exp(-2j * np.pi * k * self.positions)
        return SampledFunction(self.start, self.step, self.values * phase, "frequency")

    def fourier(self, t):
        t = np.asarray(t, dtype=float)
        if self.domain == "frequency":
            return self(t)
        # Riemann sum; adequate for the diagnostic uses in this package
        x = self.positions
        out = np.empty(t.shape, dtype=complex)
        flat = t.reshape(-1)
        res = out.reshape(-1)
        chunk = max(1, 2_000_000 // x.size)
        for s in range(0, flat.size, chunk):
            tt = flat[s:s + chunk]
            res[s:s + chunk] = self.step * (np.exp(-2j * np.pi * np.outer(tt, x)) @ self.values)
        return out

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "re", "im"])
        for x, v in zip(self.positions, self.values):
            w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, domain="time"):
        rows = list(csv.DictReader(io.StringIO(text)))
        if len(rows) < 2:
            raise ShiftSpecError("need at least two samples")
        x = np.array([float(r["x"]) for r in rows])
        v = np.array([complex(float(r["re"]), float(r["im"])) for r in rows])
        steps = np.diff(x)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
            raise ShiftSpecError("samples must lie on a uniform increasing grid")
        return cls(x[0], float(steps.mean()), v, domain)


@dataclass(frozen=True, eq=False)
class SpectralIndicator:
    """Band-limited generator with ``f_hat = exp(-2j*pi*shift*t) * 1_S(t)``.

    ``S`` is a finite union of half-open intervals ``[a, b)`` on the frequency
    line.  ``shift`` counts integer translations applied in the time domain.
    """

    intervals: tuple
    shift: int = 0

    def __post_init__(self):
        ivs = []
        for a, b in self.intervals:
            a, b = float(a), float(b)
            if not b > a:
                raise ShiftSpecError(f"empty interval [{a}, {b})")
            ivs.append((a, b))
        ivs.sort()
        for (a0, b0), (a1, b1) in zip(ivs, ivs[1:]):
            if a1 < b0:
                raise ShiftSpecError("intervals must be disjoint")
        if not ivs:
            raise ShiftSpecError("need at least one interval")
        object.__setattr__(self, "intervals", tuple(ivs))
        object.__setattr__(self, "shift", _as_integer_shift(self.shift))

    def __call__(self, x):
        x = np.asarray(x, dtype=float) - self.shift
        out = np.zeros(x.shape, dtype=complex)
        for a, b in self.intervals:
            # inverse transform of 1_[a,b): conj of the forward kernel at -x
            out += (b - a) * np.exp(1j * np.pi * x * (a + b)) * np.sinc((b - a) * x)
        return out

    def fourier(self, t):
        t = np.asarray(t, dtype=float)
        mask = np.zeros(t.shape, dtype=bool)
        for a, b in self.intervals:
            mask |= (t >= a) & (t < b)
        out = mask.astype(complex)
        if self.shift:
            out *= np.exp(-2j * np.pi * self.shift * t)
        return out

    def norm2(self):
        return float(sum(b - a for a, b in self.intervals))

    def translate(self, k):
        return SpectralIndicator(self.intervals, self.shift + _as_integer_shift(k))


@dataclass(frozen=True, eq=False)
class PeriodicGridFunction:
    """Samples ``values[j] = m(j / n_grid)`` of a 1-periodic function."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        if v.ndim != 1 or v.size == 0:
            raise ShiftSpecError("values must be a non-empty 1-d sequence")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_grid(self):
        return self.values.size

    @property
    def grid(self):
        return np.arange(self.n_grid) / self.n_grid

    @classmethod
    def from_callable(cls, func, n_grid):
        return cls(func(np.arange(n_grid) / n_grid))

    @classmethod
    def trig_polynomial(cls, coeffs, n_grid, k_min=0):
        """``sum_k coeffs[k - k_min] * exp(2j*pi*k*x)`` on the grid."""
        x = np.arange(n_grid) / n_grid
        ks = k_min + np.arange(len(coeffs))
        return cls(np.exp(2j * np.pi * np.outer(x, ks)) @ np.asarray(coeffs, dtype=complex))

    def __mul__(self, other):
        if isinstance(other, PeriodicGridFunction):
            if other.n_grid != self.n_grid:
                raise GridMismatchError("grid sizes differ")
            return PeriodicGridFunction(self.values * other.values)
        return PeriodicGridFunction(self.values * other)

    __rmul__ = __mul__


def exponential(k, n_grid):
    """The Fourier basis element ``e_k(x) = exp(2j*pi*k*x)`` on the grid."""
    return PeriodicGridFunction(np.exp(2j * np.pi * k * np.arange(n_grid) / n_grid))


def fourier_transform(f, t):
    """Evaluate ``f_hat`` at the points ``t`` (any shape)."""
    return f.fourier(t)


def sample_transform(f, start, step, n):
    """``f_hat`` sampled on ``start + j*step`` as a frequency-domain function."""
    t = start + step * np.arange(n)
    return SampledFunction(start, step, f.fourier(t), "frequency")


def _pc_inner(f, g):
    edges = np.union1d(f.breakpoints, g.breakpoints)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return complex(np.sum(np.conj(f(mids)) * g(mids) * np.diff(edges)))


def _band_inner(f, g):
    d = g.shift - f.shift
    total = 0j
    for a0, b0 in f.intervals:
        for a1, b1 in g.intervals:
            a, b = max(a0, a1), min(b0, b1)
            if b > a:
                total += complex(_interval_transform(a, b, d))
    return total


def _band_pc_inner(band, f):
    # Plancherel: integral over the band of conj(f_hat) * band_hat, both smooth
    total = 0j
    for a, b in band.intervals:
        def integrand(t, part):
            v = np.conj(f.fourier(t)) * np.exp(-2j * np.pi * band.shift * t)
            return float(getattr(v, part))
        re = quad(integrand, a, b, args=("real",), epsabs=1e-13, limit=200)[0]
        im = quad(integrand, a, b, args=("imag",), epsabs=1e-13, limit=200)[0]
        total += complex(re, im)
    return total


def inner_product(f, g):
    """``<f|g> = integral conj(f) g``, conjugate-linear in the first slot."""
    if isinstance(f, PiecewiseConstant) and isinstance(g, PiecewiseConstant):
        return _pc_inner(f, g)
    if isinstance(f, SpectralIndicator) and isinstance(g, SpectralIndicator):
        return _band_inner(f, g)
    if isinstance(f, SampledFunction) and isinstance(g, SampledFunction):
        if not f.same_grid(g):
            raise GridMismatchError("sampled functions live on different grids")
        return complex(f.step * np.vdot(f.values, g.values))
    if isinstance(f, SpectralIndicator) and isinstance(g, PiecewiseConstant):
        return np.conj(_band_pc_inner(f, g))
    if isinstance(f, PiecewiseConstant) and isinstance(g, SpectralIndicator):
        return _band_pc_inner(g, f)
    raise GridMismatchError(
        f"no common grid for {type(f).__name__} and {type(g).__name__}")


def translate(f, k):
    """``(T^k f)(x) = f(x - k)``."""
    return f.translate(k)
