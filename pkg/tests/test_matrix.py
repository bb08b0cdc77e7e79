import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shiftspec import (GridMismatchError, MatrixDensityGrid, NotHermitianError,
                       PiecewiseConstant, ShiftSpecError, SpectralIndicator, ZeroFunctionError,
                       cyclic_decomposition, gram_integral, gram_matrix, lemma22_check,
                       matrix_density, spectral_density, weighted_norm)
from shiftspec.functions import exponential

from conftest import BAND_CORPUS, PC_CORPUS

FAMILIES = {
    "haar_pair": [PC_CORPUS["haar_father"], PC_CORPUS["haar_mother"]],
    "stretched3": [PC_CORPUS["phi3"], PC_CORPUS["psi3"]],
    "stretched5": [PC_CORPUS["phi5"], PC_CORPUS["psi5"]],
    "mixed_pc": [PC_CORPUS["ramp"], PC_CORPUS["offset_box"], PC_CORPUS["phi3"]],
    "bands": [BAND_CORPUS["shannon_half"], BAND_CORPUS["shannon_split"],
              SpectralIndicator([(0.25, 1.0)])],
    "shifted_bands": [BAND_CORPUS["shannon_half"], SpectralIndicator([(0.25, 1.0)], shift=1)],
    "box_and_band": [PC_CORPUS["haar_father"], SpectralIndicator([(1.0, 1.5)])],
}


@functools.lru_cache(maxsize=None)
def density_of_family(name, n_grid=1000, n_terms=1000):
    return matrix_density(FAMILIES[name], n_grid, n_terms)


@pytest.mark.parametrize("name", ["haar_pair", "stretched3", "stretched5", "mixed_pc", "bands"])
def test_gram_identity(name):
    G = gram_matrix(FAMILIES[name])
    np.testing.assert_allclose(gram_integral(density_of_family(name)), G, atol=1e-6)


@pytest.mark.parametrize("name", ["box_and_band", "shifted_bands"])
def test_gram_identity_with_band_edge_jump(name):
    # a non-constant density with a jump: the grid mean is only O(1/n) accurate
    G = gram_matrix(FAMILIES[name])
    assert np.max(np.abs(gram_integral(density_of_family(name)) - G)) < 1 / 1000


@pytest.mark.parametrize("name", ["haar_pair", "stretched3", "stretched5", "mixed_pc"])
def test_time_domain_gram_identity(name):
    # 3840 = 64 * 60 puts every corpus breakpoint on the grid, so the rule is exact
    P = matrix_density(FAMILIES[name], 3840, 6, domain="time")
    np.testing.assert_allclose(gram_integral(P), gram_matrix(FAMILIES[name]), atol=1e-12)


def test_translated_pair_gram():
    f = PC_CORPUS["phi3"]
    P = matrix_density([f, f.translate(1)], 3840, 6, domain="time")
    np.testing.assert_allclose(gram_integral(P), [[1 / 3, 2 / 9], [2 / 9, 1 / 3]], atol=1e-12)


def test_haar_and_its_translate_are_orthonormal_pointwise():
    f = PC_CORPUS["haar_father"]
    P = matrix_density([f, f.translate(1)], 64, 3, domain="time")
    np.testing.assert_array_equal(P.matrices, np.broadcast_to(np.eye(2), P.matrices.shape))
    assert weighted_norm([np.ones(64), -np.ones(64)], P) == pytest.approx(np.sqrt(2), abs=1e-12)


def test_repeated_generator_is_rank_one():
    f = PC_CORPUS["haar_father"]
    P = matrix_density([f, f], 64, 3, domain="time")
    np.testing.assert_array_equal(P.matrices, np.ones((64, 2, 2)))
    dec = cyclic_decomposition(P)
    assert np.all(dec.multiplicity == 1)
    assert dec.supports[1].measure == 0.0


@pytest.mark.parametrize("name", ["haar_pair", "stretched3", "mixed_pc"])
def test_time_and_frequency_domains_share_gram(name):
    # 3000 cells put every breakpoint (thirds included) on the time grid
    fam = FAMILIES[name]
    Pt = matrix_density(fam, 3000, 8, domain="time")
    np.testing.assert_allclose(gram_integral(Pt), gram_integral(density_of_family(name)), atol=1e-6)


def test_diagonal_is_scalar_density():
    P = density_of_family("stretched3")
    p = spectral_density(PC_CORPUS["psi3"], 1000, 1000)
    np.testing.assert_allclose(P.diagonal(1), p.values, atol=1e-12)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_positive_semidefinite(name):
    P = density_of_family(name)
    assert P.min_eigenvalue() > -1e-8 * np.max(np.trace(P.matrices, axis1=1, axis2=2).real)


def test_haar_pair_is_identity():
    P = density_of_family("haar_pair")
    np.testing.assert_allclose(P.matrices, np.broadcast_to(np.eye(2), P.matrices.shape), atol=1e-5)


def test_quadratic_form_bound_over_seeded_trials():
    rng = np.random.default_rng(2024)
    names = sorted(FAMILIES)
    worst = -np.inf
    for trial in range(100):
        P = density_of_family(names[trial % len(names)])
        v = rng.normal(size=P.n_family) + 1j * rng.normal(size=P.n_family)
        worst = max(worst, lemma22_check(P, v).max_violation)
    assert worst <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_quadratic_form_bound_random_psd(N, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(16, N, N)) + 1j * rng.normal(size=(16, N, N))
    P = MatrixDensityGrid(X @ np.conj(np.swapaxes(X, 1, 2)))
    v = rng.normal(size=N) + 1j * rng.normal(size=N)
    res = lemma22_check(P, v)
    assert res.max_violation <= 1e-9 * max(res.lam, 1.0) ** 2 * np.vdot(v, v).real
    assert res.lam >= 0


def test_quadratic_form_bound_shape_check():
    with pytest.raises(ShiftSpecError):
        lemma22_check(density_of_family("haar_pair"), np.ones(3))


def test_weighted_norm_of_haar_pair():
    P = density_of_family("haar_pair")
    one = np.ones(P.n_grid)
    assert weighted_norm([one, one], P) == pytest.approx(np.sqrt(2), abs=1e-5)


def test_weighted_norm_matches_combination():
    # multiplying psi_hat by exp(2j pi k t) shifts psi by -k
    fam = FAMILIES["mixed_pc"]
    P = density_of_family("mixed_pc")
    ks = [0, 2, -1]
    m = [exponential(k, P.n_grid) for k in ks]
    shifted = [f.translate(-k) for f, k in zip(fam, ks)]
    direct = np.sqrt(np.real(np.sum(gram_matrix(shifted))))
    assert weighted_norm(m, P) == pytest.approx(direct, rel=1e-5)


def test_weighted_norm_grid_mismatch():
    P = density_of_family("haar_pair")
    with pytest.raises(GridMismatchError):
        weighted_norm([np.ones(8), np.ones(8)], P)
    with pytest.raises(ShiftSpecError):
        weighted_norm([np.ones(P.n_grid)], P)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_cyclic_supports_are_nested(name):
    dec = cyclic_decomposition(density_of_family(name))
    for outer, inner in zip(dec.supports, dec.supports[1:]):
        assert inner <= outer
    assert np.all(dec.multiplicity <= len(FAMILIES[name]))


def test_cyclic_nested_bands():
    # generators with transforms 1_[0,1) and 1_[1,1.5) are pointwise orthogonal
    fam = [SpectralIndicator([(0.0, 1.0)]), SpectralIndicator([(1.0, 1.5)])]
    dec = cyclic_decomposition(matrix_density(fam, 256, 10))
    assert dec.supports[0].intervals() == [(0.0, 1.0)]
    assert dec.supports[1].intervals() == [(0.0, 0.5)]
    assert sum(s.measure for s in dec.supports) == pytest.approx(np.mean(dec.multiplicity))


def test_overlapping_bands_share_a_direction():
    # transforms 1_[0,1) and 1_[0,1/2) are parallel on [0, 1/2): rank one there
    fam = [SpectralIndicator([(0.0, 1.0)]), SpectralIndicator([(0.0, 0.5)])]
    dec = cyclic_decomposition(matrix_density(fam, 256, 10))
    assert np.all(dec.multiplicity == 1)


def test_cyclic_box_and_band():
    dec = cyclic_decomposition(density_of_family("box_and_band"))
    assert dec.supports[0].measure == 1.0
    assert dec.supports[1].intervals() == [(0.0, 0.5)]
    hist = dec.to_dict()["multiplicity_histogram"]
    assert hist == {"0": 0, "1": 500, "2": 500}


def test_cyclic_rank_one_family():
    f = PC_CORPUS["phi3"]
    P = matrix_density([f, f.translate(1)], 512, 500)
    dec = cyclic_decomposition(P)
    assert dec.supports[1].measure == 0.0


def test_not_hermitian():
    M = np.zeros((4, 2, 2), dtype=complex)
    M[:, 0, 1] = 1.0
    with pytest.raises(NotHermitianError):
        MatrixDensityGrid(M)


def test_json_round_trip():
    P = density_of_family("stretched3")
    back = MatrixDensityGrid.from_json(P.to_json())
    np.testing.assert_allclose(back.matrices, P.matrices, atol=1e-15)


def test_errors():
    with pytest.raises(ShiftSpecError):
        matrix_density([])
    with pytest.raises(ZeroFunctionError):
        matrix_density([PiecewiseConstant([0, 1], [0])], 16, 2)
    with pytest.raises(ShiftSpecError):
        matrix_density([PC_CORPUS["phi3"]], 16, 2, domain="space")
