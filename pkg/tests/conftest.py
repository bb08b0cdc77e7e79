import functools

import numpy as np
import pytest

from shiftspec import PiecewiseConstant, SpectralIndicator, spectral_density, stretched_haar

ACCEPTANCE_LINES = []


def record_acceptance(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def standard_error(samples):
    samples = np.asarray(samples)
    return float(samples.std(ddof=1) / np.sqrt(samples.size))


def within_se(samples, target, n_se=4):
    return abs(float(np.mean(samples)) - target) <= n_se * standard_error(samples)


def ratio_standard_error(num, den):
    """Delta-method standard error of ``mean(num) / mean(den)``."""
    num, den = np.asarray(num), np.asarray(den)
    ratio = num.mean() / den.mean()
    return float(np.std(num - ratio * den, ddof=1) / (den.mean() * np.sqrt(num.size)))


def _corpus():
    return {
        "haar_father": stretched_haar(1).father,
        "haar_mother": stretched_haar(1).mother,
        "phi3": stretched_haar(3).father,
        "psi3": stretched_haar(3).mother,
        "phi5": stretched_haar(5).father,
        "psi5": stretched_haar(5).mother,
        "ramp": PiecewiseConstant([0.0, 0.3, 1.7, 2.0], [1.0, 0.5j, -0.25]),
        "offset_box": PiecewiseConstant([-0.5, 0.75], [0.8]),
    }


PC_CORPUS = _corpus()
BAND_CORPUS = {
    "shannon_half": SpectralIndicator([(0.0, 0.5)]),
    "shannon_full": SpectralIndicator([(0.0, 1.0)]),
    "shannon_split": SpectralIndicator([(0.1, 0.3), (0.6, 0.8)]),
}
CORPUS = {**PC_CORPUS, **BAND_CORPUS}


@functools.lru_cache(maxsize=None)
def density_of(name, n_grid=4096, n_terms=1000):
    return spectral_density(CORPUS[name], n_grid, n_terms)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
