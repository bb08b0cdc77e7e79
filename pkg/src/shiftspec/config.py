"""Numerical defaults shared by every module and echoed into CLI reports."""

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class Defaults:
    n_grid: int = 4096
    n_terms: int = 1000
    # closeness tolerance for ONB / Parseval / frame-bound decisions
    tol: float = 1e-3
    # threshold below which a density sample counts as zero (support tests)
    zero_tol: float = 1e-9
    closability_tol: float = 1e-3
    k_max: int = 10
    gram_k_max: int = 30
    m_paths: int = 10_000
    seed: int = 20071019
    kl_n_grid: int = 512
    kl_modes: int = 10
    # relative rank threshold for the multiplicity function
    rank_rtol: float = 1e-6
    mode_threshold: float = 1e-12
    singular_guard: float = 1e-8

    def as_dict(self):
        return asdict(self)


DEFAULTS = Defaults()
