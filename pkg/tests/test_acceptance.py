"""Acceptance criteria, one test and one printed PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also collected in the terminal summary.
"""

import time

import numpy as np

from shiftspec import (PeriodicGridFunction, SpectralIndicator, autocorrelation_coeffs,
                       brownian_paths, classify, consistency_check,
                       construct_dependence_coeffs, cyclic_decomposition,
                       density_fourier_coeffs, detect_l2_dependence, gram_frame_bounds_oracle,
                       gram_integral, gram_matrix, kl_coefficients, kl_decompose,
                       kl_reconstruct, lemma22_check, matrix_density, mu_gaussian_increments,
                       renormalize, spectral_density, stochastic_integral, stretched_haar,
                       stretched_haar_density, verify_dependence)
from shiftspec.cli import run
from shiftspec.kl import brownian_kernel, relative_reconstruction_error
from shiftspec.stochastic import l2_mu_norm2

import oracles
from conftest import (BAND_CORPUS, CORPUS, PC_CORPUS, density_of, ratio_standard_error,
                      record_acceptance, standard_error)

ODD = (1, 3, 5)


def test_criterion_01_haar_onb():
    start = time.perf_counter()
    rep = classify(spectral_density(PC_CORPUS["haar_father"], n_grid=4096, n_terms=1000))
    elapsed = time.perf_counter() - start
    ok = (rep.verdict == "ONB" and abs(rep.A - 1) < 1e-3 and abs(rep.B - 1) < 1e-3
          and elapsed < 5.0)
    detail = f"verdict={rep.verdict} A={rep.A:.6f} B={rep.B:.6f} runtime={elapsed:.2f}s"
    assert record_acceptance(1, ok, detail), detail


def test_criterion_02_stretched_haar_closed_forms():
    gaps = {}
    for k in ODD:
        pair = stretched_haar(k)
        for which in ("father", "mother"):
            closed = stretched_haar_density(k, which, 4096)
            periodized = spectral_density(getattr(pair, which), n_grid=4096, n_terms=1000)
            gaps[f"{which[0]}{k}"] = float(np.max(np.abs(closed.values - periodized.values)))
    p = spectral_density(PC_CORPUS["phi3"], n_grid=3072, n_terms=1000)
    half, third = p.values[1536], p.values[1024]
    spots_ok = abs(half - 1 / 9) <= 1e-5 and abs(third) <= 1e-5
    ok = max(gaps.values()) < 1e-4 and spots_ok
    detail = ("sup gaps " + " ".join(f"{k}={v:.2e}" for k, v in gaps.items())
              + f"; p_phi3(1/2)={half:.8f} p_phi3(1/3)={third:.2e}")
    assert record_acceptance(2, ok, detail), detail


def test_criterion_03_bessel_constant():
    parts, ok = [], True
    for name in ("phi3", "psi3"):
        rep = classify(density_of(name))
        good = rep.verdict == "BESSEL" and abs(rep.B - 1) <= 1e-3 and rep.A < 1e-3
        ok &= good
        parts.append(f"{name}: {rep.verdict} A={rep.A:.2e} B={rep.B:.6f}")
    detail = "; ".join(parts)
    assert record_acceptance(3, ok, detail), detail


def test_criterion_04_consistency_relation():
    closed, periodized = {}, {}
    for k in ODD:
        closed[k] = consistency_check(stretched_haar_density(k, "father", 4096),
                                      stretched_haar_density(k, "mother", 4096))
        pair = stretched_haar(k)
        periodized[k] = consistency_check(spectral_density(pair.father, 4096, 1000),
                                          spectral_density(pair.mother, 4096, 1000))
    ok = max(closed.values()) < 1e-9 and max(periodized.values()) < 1e-4
    detail = ("closed-form defect " + " ".join(f"k={k}:{v:.2e}" for k, v in closed.items())
              + "; periodized defect " + " ".join(f"k={k}:{v:.2e}" for k, v in periodized.items()))
    assert record_acceptance(4, ok, detail), detail


def test_criterion_05_duality():
    worst = {}
    for name, psi in PC_CORPUS.items():
        p = spectral_density(psi, n_grid=4096, n_terms=2000)
        gap = density_fourier_coeffs(p, 10).values - autocorrelation_coeffs(psi, 10).values
        worst[name] = float(np.max(np.abs(gap)))
    name = max(worst, key=worst.get)
    ok = worst[name] < 1e-4
    detail = f"max |p_hat(k) - <psi|psi_k>| over {len(worst)} generators = {worst[name]:.2e} ({name})"
    assert record_acceptance(5, ok, detail), detail


def test_criterion_06_gram_oracle():
    bad = []
    for name, psi in CORPUS.items():
        p = density_of(name)
        g = gram_frame_bounds_oracle(psi, 30)
        if not (p.values.min() - 0.05 <= g.lambda_min and g.lambda_max <= p.values.max() + 0.05):
            bad.append(f"{name}[{g.lambda_min:.3f},{g.lambda_max:.3f}]")
    ok = not bad
    detail = (f"all {len(CORPUS)} generators inside [min p - 0.05, max p + 0.05]" if ok
              else "outside: " + ", ".join(bad))
    assert record_acceptance(6, ok, detail), detail


def test_criterion_07_renormalization():
    n = 4096
    names = ["shannon_half", "shannon_split", "phi3", "psi3", "phi5", "psi5"]
    errs = {}
    for name in names:
        p = density_of(name)
        ren = renormalize(CORPUS[name], p, n_terms=1000)
        q = spectral_density(ren.psi_ren, n_grid=n, n_terms=999)
        zeros = ~ren.support.mask
        near = np.zeros(n, dtype=bool)
        for shift in range(-2, 3):
            near |= np.roll(zeros, shift)
        errs[name] = float(np.max(np.abs(q.values - ren.support.mask)[~near]))
    ok = max(errs.values()) < 5e-3
    detail = "sup |p_ren - 1_A| " + " ".join(f"{k}={v:.1e}" for k, v in errs.items())
    assert record_acceptance(7, ok, detail), detail


def test_criterion_08_dependence_construction():
    psi = BAND_CORPUS["shannon_half"]
    E = detect_l2_dependence(density_of("shannon_half"))
    ks = [1, 2, 5, 10, 20, 30, 40, 50]
    ratios = []
    for K in ks:
        c = construct_dependence_coeffs(E, K)
        ratios.append(verify_dependence(psi, c) / c.norm())
    monotone = all(a >= b for a, b in zip(ratios, ratios[1:]))
    ok = E is not None and ratios[-1] < 0.02 and monotone
    detail = (f"E={E.intervals()} residual/||c|| at k_max=50 is {ratios[-1]:.4f} (need < 0.02); "
              f"nonincreasing over k_max={ks}: {monotone}")
    assert record_acceptance(8, ok, detail), detail


MATRIX_FAMILIES = {
    "haar_pair": [PC_CORPUS["haar_father"], PC_CORPUS["haar_mother"]],
    "stretched3": [PC_CORPUS["phi3"], PC_CORPUS["psi3"]],
    "stretched5": [PC_CORPUS["phi5"], PC_CORPUS["psi5"]],
    "phi3_translates": [PC_CORPUS["phi3"], PC_CORPUS["phi3"].translate(1)],
    "mixed_pc": [PC_CORPUS["ramp"], PC_CORPUS["offset_box"], PC_CORPUS["phi3"]],
    "bands": list(BAND_CORPUS.values()),
    "nested_bands": [SpectralIndicator([(0.0, 1.0)]), SpectralIndicator([(1.0, 1.5)])],
}


def test_criterion_09_matrix_density():
    gram_dev = 0.0
    densities = {}
    for name, fam in MATRIX_FAMILIES.items():
        if all(hasattr(f, "breakpoints") for f in fam):
            # every corpus breakpoint lies on the 3840-cell grid
            P = matrix_density(fam, 3840, 8, domain="time")
        else:
            P = matrix_density(fam, 4000, 1000)
        densities[name] = P
        gram_dev = max(gram_dev, float(np.max(np.abs(gram_integral(P) - gram_matrix(fam)))))
    rng = np.random.default_rng(20071019)
    names = sorted(densities)
    violation = -np.inf
    for trial in range(100):
        P = densities[names[trial % len(names)]]
        v = rng.normal(size=P.n_family) + 1j * rng.normal(size=P.n_family)
        violation = max(violation, lemma22_check(P, v).max_violation)
    nested = all(inner <= outer
                 for P in densities.values()
                 for outer, inner in zip(cyclic_decomposition(P).supports,
                                         cyclic_decomposition(P).supports[1:]))
    ok = gram_dev <= 1e-6 and violation <= 1e-9 and nested
    detail = (f"max gram deviation {gram_dev:.2e}; quadratic-form bound max violation {violation:.2e} "
              f"over 100 trials; supports nested on {len(densities)} families: {nested}")
    assert record_acceptance(9, ok, detail), detail


def test_criterion_10_stochastic_isometry():
    M = 10_000
    names = sorted(CORPUS)
    worst_z = 0.0
    for trial in range(20):
        rng = np.random.default_rng(1000 + trial)
        fine = density_of(names[trial % len(names)])
        p = type(fine)(fine.values.reshape(64, -1).mean(axis=1))
        m = PeriodicGridFunction.trig_polynomial(
            rng.normal(size=5) + 1j * rng.normal(size=5), 64, k_min=-2)
        I2 = np.abs(stochastic_integral(m, mu_gaussian_increments(p, M, seed=trial))) ** 2
        worst_z = max(worst_z, abs(I2.mean() - l2_mu_norm2(m, p)) / standard_error(I2))
    ens = brownian_paths(65, M, seed=20071019)
    prod = ens.paths[:, 32] * ens.paths[:, 64]
    z_bm = abs(prod.mean() - 0.5) / standard_error(prod)
    ok = worst_z <= 4 and z_bm <= 4
    detail = (f"worst |z| over 20 (m, mu) pairs = {worst_z:.2f}; "
              f"E(X_1/2 X_1) = {prod.mean():.4f} (|z| = {z_bm:.2f})")
    assert record_acceptance(10, ok, detail), detail


def test_criterion_11_karhunen_loeve():
    start = time.perf_counter()
    n, M = 512, 10_000
    K, grid = brownian_kernel(n)
    exp = kl_decompose(K, grid)
    ens = brownian_paths(n + 1, M, seed=20071019)
    Z = kl_coefficients(ens, exp, n_modes=10)
    corr_dev = float(np.max(np.abs(np.corrcoef(Z[:, :5].T) - np.eye(5))))
    rec = kl_reconstruct(exp, Z, 10)
    err = relative_reconstruction_error(ens, rec)
    X = ens.paths[:, 1:]
    se = ratio_standard_error(np.sum((X - rec.paths) ** 2, axis=1), np.sum(X ** 2, axis=1))
    z_tail = abs(err - oracles.BROWNIAN_TAIL_10) / se
    elapsed = time.perf_counter() - start
    lam1 = exp.eigenvalues[0]
    ok = (abs(lam1 - oracles.BROWNIAN_LAMBDA1) <= 2e-3 and corr_dev <= 0.05
          and z_tail <= 4 and elapsed < 60)
    detail = (f"lambda_1={lam1:.5f} (4/pi^2={oracles.BROWNIAN_LAMBDA1:.5f}); "
              f"Z corr dev {corr_dev:.3f}; 10-mode error {err:.5f} vs tail "
              f"{oracles.BROWNIAN_TAIL_10:.5f} (|z| = {z_tail:.2f}); runtime {elapsed:.1f}s")
    assert record_acceptance(11, ok, detail), detail


def test_criterion_12_determinism(tmp_path):
    density_file = tmp_path / "p.csv"
    density_file.write_text(density_of("phi3", 256, 200).to_csv())
    commands = [
        ["simulate", "--kind", "brownian", "--m-paths", "2000"],
        ["simulate", "--kind", "mu_gaussian", "--density-file", str(density_file),
         "--m-paths", "500"],
        ["simulate", "--kind", "stationary", "--builtin", "stretched_haar_father:3",
         "--m-paths", "2000", "--n-times", "16"],
        ["kl"],
        ["kl", "--n-grid", "64", "--seed", "7", "--m-paths", "500"],
    ]
    mismatched = []
    for i, argv in enumerate(commands):
        a, b = tmp_path / f"{i}a", tmp_path / f"{i}b"
        assert run(argv + ["--out", str(a)]) == 0
        assert run(argv + ["--out", str(b)]) == 0
        for f in sorted(a.iterdir()):
            if f.read_bytes() != (b / f.name).read_bytes():
                mismatched.append(f"{' '.join(argv[:3])}:{f.name}")
    ok = not mismatched
    detail = (f"{len(commands)} seeded commands re-run, all outputs byte-identical" if ok
              else "differences in " + ", ".join(mismatched))
    assert record_acceptance(12, ok, detail), detail
