"""Dyadic filters, stretched Haar functions and their spectral densities.

The stretched pair for odd ``k`` is ``phi_k(x) = phi(x/k)/k`` and
``psi_k(x) = psi(x/k)/k``, where ``phi`` and ``psi`` are the Haar father
and mother.  Their densities have closed forms; see
:func:`stretched_haar_closed_form` for the two available normalizations.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .density import PeriodicDensity
from .errors import GridMismatchError, ShiftSpecError
from .functions import PiecewiseConstant

__all__ = [
    "StretchedHaar",
    "DyadicFilter",
    "QMFResult",
    "stretched_haar",
    "stretched_haar_density",
    "stretched_haar_closed_form",
    "haar_filter",
    "qmf_check",
    "consistency_check",
    "parseval_wavelet_check",
]

# below this |sin| the closed forms switch to their series limits
_SINGULAR = 1e-7


@dataclass(frozen=True)
class StretchedHaar:
    k: int
    father: PiecewiseConstant
    mother: PiecewiseConstant


def _check_odd(k):
    if int(k) != k or k < 1 or k % 2 == 0:
        raise ShiftSpecError(f"stretch factor must be an odd positive integer, got {k}")
    return int(k)


def stretched_haar(k):
    """Father ``1/k`` on ``[0, k)``; mother ``1/k`` on ``[0, k/2)`` and ``-1/k`` on ``[k/2, k)``."""
    k = _check_odd(k)
    father = PiecewiseConstant([0.0, k], [1.0 / k])
    mother = PiecewiseConstant([0.0, k / 2, k], [1.0 / k, -1.0 / k])
    return StretchedHaar(k, father, mother)


def _dirichlet_sq(k, u):
    """``(sin(k u) / sin(u))**2`` with the removable singularities filled in."""
    s = np.sin(u)
    out = np.empty_like(u)
    reg = np.abs(s) >= _SINGULAR
    out[reg] = (np.sin(k * u[reg]) / s[reg]) ** 2
    d = s[~reg]
    out[~reg] = k ** 2 * (1 - (k ** 2 - 1) * d ** 2 / 3)
    return out


def _quartic_ratio(k, u, trig):
    """``trig(k u)**4 / trig(u)**2``; near zeros of ``trig(u)`` this is about ``k**4 trig(u)**2``."""
    s = trig(u)
    out = np.empty_like(u)
    reg = np.abs(s) >= _SINGULAR
    out[reg] = trig(k * u[reg]) ** 4 / s[reg] ** 2
    out[~reg] = k ** 4 * s[~reg] ** 2
    return out


def stretched_haar_closed_form(k, which, t, form="table"):
    """Closed-form density of the stretched Haar father or mother at ``t``.

    Parameters
    ----------
    k : odd int
    which : {"father", "mother"}
    t : array_like
    form : {"table", "exact"}
        The two forms differ only for the mother with ``k > 1``.  "table"
        uses the commonly quoted prefactor ``1/(2k)**2``.  "exact" uses
        ``1/k**2``, which is what periodizing ``|psi_k_hat|**2`` produces
        and what the father/mother consistency relation requires.
    """
    k = _check_odd(k)
    if which not in ("father", "mother"):
        raise ShiftSpecError(f"which must be 'father' or 'mother', got {which!r}")
    if form not in ("table", "exact"):
        raise ShiftSpecError(f"form must be 'table' or 'exact', got {form!r}")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if k == 1:
        return np.ones(t.shape)
    if which == "father":
        return _dirichlet_sq(k, np.pi * t) / k ** 2
    u = np.pi * t / 2
    bracket = _quartic_ratio(k, u, np.sin) + _quartic_ratio(k, u, np.cos)
    pref = 1.0 / (2 * k) ** 2 if form == "table" else 1.0 / k ** 2
    return pref * bracket


def stretched_haar_density(k, which="father", n_grid=DEFAULTS.n_grid, form="table"):
    """:func:`stretched_haar_closed_form` sampled on ``j / n_grid``."""
    return PeriodicDensity(stretched_haar_closed_form(k, which, np.arange(n_grid) / n_grid, form))


@dataclass(frozen=True, eq=False)
class DyadicFilter:
    """Samples of a low-pass filter ``m0`` on ``j / n_grid`` with ``n_grid`` even."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex).copy()
        if v.ndim != 1 or v.size == 0 or v.size % 2:
            raise ShiftSpecError("filter needs an even number of samples")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_grid(self):
        return self.values.size

    @classmethod
    def from_callable(cls, func, n_grid):
        return cls(func(np.arange(n_grid) / n_grid))


def haar_filter(k=1, n_grid=DEFAULTS.n_grid):
    """``m0(t) = (1 + exp(-2j*pi*k*t)) / 2``, the filter of the k-stretched Haar father."""
    k = _check_odd(k)
    return DyadicFilter.from_callable(lambda t: (1 + np.exp(-2j * np.pi * k * t)) / 2, n_grid)


@dataclass(frozen=True)
class QMFResult:
    max_defect: float
    lowpass_defect: float


def qmf_check(m0):
    a = np.abs(m0.values) ** 2
    half = m0.n_grid // 2
    defect = np.abs(a + np.roll(a, -half) - 1.0)
    return QMFResult(float(defect.max()), float(abs(abs(m0.values[0]) - 1.0)))


def consistency_check(p_father, p_mother):
    """Max of ``|p_f(t) + p_m(t) - p_f(t/2) - p_f((t+1)/2)|`` over grid points.

    Only even indices ``j = 2i`` are used, where both half-angle arguments
    ``i / n`` and ``(i + n/2) / n`` are grid points.
    """
    n = p_father.n_grid
    if p_mother.n_grid != n:
        raise GridMismatchError("father and mother densities live on different grids")
    if n % 2:
        raise GridMismatchError("grid size must be even")
    pf, pm = p_father.values, p_mother.values
    i = np.arange(n // 2)
    lhs = pf[2 * i] + pm[2 * i]
    rhs = pf[i] + pf[i + n // 2]
    return float(np.max(np.abs(lhs - rhs)))


def _antiderivative(f):
    """Knots and values of ``F(x) = integral_{-inf}^x f``; linear between knots."""
    b = f.breakpoints
    F = np.concatenate(([0.0], np.cumsum(f.values * np.diff(b))))
    return b, F


def parseval_wavelet_check(mother, j_range, k_range, test_functions):
    """Truncated sums ``sum_{j,k} |<psi_jk | f>|**2 / ||f||**2``.

    ``psi_jk(x) = 2**(j/2) psi(2**j x - k)`` for ``j`` in ``j_range`` and
    ``k`` in ``k_range`` (inclusive integer pairs).  All functions are
    piecewise constant, so every inner product is exact: it is a sum of
    differences of the piecewise-linear antiderivative of ``f``.
    """
    j_lo, j_hi = j_range
    k_lo, k_hi = k_range
    ks = np.arange(k_lo, k_hi + 1)
    out = []
    for f in test_functions:
        norm2 = f.norm2()
        if norm2 == 0:
            out.append(0.0)
            continue
        knots_re, F_re = _antiderivative(PiecewiseConstant(f.breakpoints, f.values.real))
        knots_im, F_im = _antiderivative(PiecewiseConstant(f.breakpoints, f.values.imag))
        total = 0.0
        for j in range(j_lo, j_hi + 1):
            scale = 2.0 ** j
            coef = np.zeros(ks.size, dtype=complex)
            for a, b, v in zip(mother.breakpoints[:-1], mother.breakpoints[1:], mother.values):
                lo = (a + ks) / scale
                hi = (b + ks) / scale
                seg = (np.interp(hi, knots_re, F_re) - np.interp(lo, knots_re, F_re)
                       + 1j * (np.interp(hi, knots_im, F_im) - np.interp(lo, knots_im, F_im)))
                coef += np.conj(v) * seg
            total += scale * float(np.sum(np.abs(coef) ** 2))
        out.append(total / norm2)
    return np.array(out)
