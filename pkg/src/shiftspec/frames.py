"""Frame-type classification of integer-translate systems from their density.

For a generator with density ``p`` the translates are

* an orthonormal basis iff ``p == 1``,
* a Parseval frame for their span iff ``p`` is an indicator,
* a Bessel sequence with bound ``B`` iff ``p <= B``,
* a frame for their span iff ``A <= p <= B`` on the support of ``p``,
* a Riesz basis iff ``A <= p <= B`` almost everywhere.

On a grid, essential bounds become plain minima and maxima.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .config import DEFAULTS
from .errors import ShiftSpecError, ZeroFunctionError
from .density import autocorrelation_coeffs

__all__ = ["FrameReport", "VERDICTS", "classify", "gram_frame_bounds_oracle",
           "GramBounds"]

VERDICTS = ("ONB", "PARSEVAL", "RIESZ", "FRAME", "BESSEL", "NONE")

# properties implied by each verdict (used to check the verdict lattice)
_IMPLIES = {
    "ONB": ("ONB", "PARSEVAL", "RIESZ", "FRAME", "BESSEL"),
    "PARSEVAL": ("PARSEVAL", "FRAME", "BESSEL"),
    "RIESZ": ("RIESZ", "FRAME", "BESSEL"),
    "FRAME": ("FRAME", "BESSEL"),
    "BESSEL": ("BESSEL",),
    "NONE": (),
}


@dataclass(frozen=True)
class FrameReport:
    """Verdict plus the numbers it was derived from.

    ``A`` is the minimum of ``p`` over its support, ``B`` the maximum over
    the grid and ``support_mass`` the grid measure of the support.
    ``properties`` lists every condition the system satisfies, so that
    e.g. an ONB also reports PARSEVAL, RIESZ, FRAME and BESSEL.
    """

    verdict: str
    A: float
    B: float
    support_mass: float
    tol: float
    properties: tuple = field(default=())

    def to_dict(self):
        return {"verdict": self.verdict, "A": self.A, "B": self.B,
                "support_mass": self.support_mass, "tol": self.tol,
                "properties": list(self.properties)}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        if d.get("verdict") not in VERDICTS:
            raise ShiftSpecError(f"unknown verdict {d.get('verdict')!r}")
        return cls(d["verdict"], float(d["A"]), float(d["B"]),
                   float(d["support_mass"]), float(d["tol"]),
                   tuple(d.get("properties", _IMPLIES[d["verdict"]])))


def classify(p, tol=DEFAULTS.tol, cap=np.inf, zero_tol=DEFAULTS.zero_tol):
    """Classify the translate system whose density is ``p``.

    Parameters
    ----------
    p : PeriodicDensity
    tol : float
        Closeness tolerance for "equals 1", "equals 0" and for the lower
        frame bound.
    cap : float
        Densities whose maximum exceeds ``cap`` are reported as NONE.
    zero_tol : float
        Samples at or below this value are outside the support.  It is kept
        separate from ``tol`` so that a density which merely dips below
        ``tol`` near an isolated zero is not mistaken for one that vanishes
        on a set of positive measure.

    Returns
    -------
    FrameReport
    """
    if not 0 < tol < 0.5:
        raise ShiftSpecError("tol must lie in (0, 1/2)")
    v = np.asarray(p.values, dtype=float)
    B = float(v.max())
    if B <= zero_tol:
        raise ZeroFunctionError("density vanishes to within zero_tol")

    near0 = v <= tol
    near1 = np.abs(v - 1.0) <= tol
    n = v.size
    if np.all(near1):
        verdict, support = "ONB", np.ones(n, dtype=bool)
    elif np.all(near0 | near1) and np.any(near1):
        verdict, support = "PARSEVAL", near1
    else:
        support = v > zero_tol
        verdict = None
    support_mass = float(np.count_nonzero(support)) / n
    A = float(v[support].min())

    if verdict is None:
        if B > cap:
            verdict = "NONE"
        elif A >= tol and support_mass >= 1 - tol:
            verdict = "RIESZ"
        elif A >= tol:
            verdict = "FRAME"
        else:
            verdict = "BESSEL"
    return FrameReport(verdict, A, B, support_mass, float(tol), _IMPLIES[verdict])


@dataclass(frozen=True)
class GramBounds:
    lambda_min: float
    lambda_max: float


def gram_frame_bounds_oracle(psi, k_max=DEFAULTS.gram_k_max):
    """Extreme eigenvalues of the ``(2 k_max + 1)`` Gram section of the translates.

    ``G[j, k] = <psi_j | psi_k> = r(k - j)`` with ``r`` from direct
    integration, so this is independent of any periodized density.
    """
    if k_max < 1:
        raise ShiftSpecError("k_max must be >= 1")
    r = autocorrelation_coeffs(psi, 2 * k_max)
    pos = r.values[2 * k_max:]  # r(0), r(1), ..., r(2 k_max)
    # first column G[j, 0] = r(-j) = conj(r(j)); first row G[0, k] = r(k)
    G = toeplitz(np.conj(pos), pos)
    w = np.linalg.eigvalsh(G)
    return GramBounds(float(w[0]), float(w[-1]))
