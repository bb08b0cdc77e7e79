"""Spectral densities, frame classification and Gaussian processes for integer translates."""

__version__ = "0.1.0"

from .config import DEFAULTS, Defaults
from .errors import (AliasingError, DegenerateModeError, DomainTooSmallError, EmptySetError,
                     GridMismatchError, NotHermitianError, NotPositiveSemidefiniteError,
                     ShiftSpecError, ZeroFunctionError)
from .functions import (PeriodicGridFunction, PiecewiseConstant, SampledFunction,
                        SpectralIndicator, exponential, fourier_transform, inner_product,
                        sample_transform, translate)
from .density import (CoefficientSequence, PeriodicDensity, Transform, autocorrelation_coeffs,
                      closability_check, density_fourier_coeffs, periodize_abs2,
                      spectral_density)
from .frames import FrameReport, classify, gram_frame_bounds_oracle
from .dependence import (GridSet, construct_dependence_coeffs, density_norm,
                         detect_l2_dependence, essential_support, renormalize,
                         verify_dependence)
from .matrix import (MatrixDensityGrid, cyclic_decomposition, gram_integral, gram_matrix,
                     lemma22_check, matrix_density, weighted_norm)
from .wavelets import (DyadicFilter, consistency_check, haar_filter, parseval_wavelet_check,
                       qmf_check, stretched_haar, stretched_haar_closed_form,
                       stretched_haar_density)
from .stochastic import (CovarianceSequence, PathEnsemble, brownian_paths,
                         empirical_covariance, mu_gaussian_increments, multiplication_unitary,
                         nongaussian_realization, stationary_gaussian, stochastic_integral)
from .kl import KLExpansion, kl_coefficients, kl_decompose, kl_reconstruct
