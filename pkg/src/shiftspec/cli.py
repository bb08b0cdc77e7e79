"""Command-line front end.

Every subcommand writes a JSON report (validated against
:mod:`shiftspec.schemas`) plus CSV plot data into the output directory.
The output directory is ``--out``, else ``$SHIFTSPEC_OUT``, else the
current directory.  Exit codes: 0 success, 1 invalid input, 2 failed
computation.
"""

import argparse
import csv
import io
import json
import os
import re
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .config import DEFAULTS
from .density import PeriodicDensity, autocorrelation_coeffs, spectral_density
from .dependence import (construct_dependence_coeffs, density_norm, detect_l2_dependence,
                         renormalize, verify_dependence)
from .errors import ShiftSpecError
from .frames import classify
from .functions import PiecewiseConstant, SampledFunction, SpectralIndicator
from .kl import (brownian_kernel, kl_coefficients, kl_decompose, kl_reconstruct,
                 relative_reconstruction_error)
from .matrix import cyclic_decomposition, gram_integral, gram_matrix, matrix_density
from .schemas import validate_function_spec, validate_report
from .stochastic import (CovarianceSequence, brownian_paths, empirical_covariance,
                         gaussian_paths, mu_gaussian_increments, stationary_gaussian)
from .wavelets import (consistency_check, haar_filter, qmf_check, stretched_haar,
                       stretched_haar_density)

OUT_ENV = "SHIFTSPEC_OUT"


class UsageError(Exception):
    """Bad command line or input file (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- inputs

_SHANNON = re.compile(r"\[\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)")


def builtin_function(name):
    """Resolve a builtin generator name."""
    base, _, arg = name.partition(":")
    if base == "haar_father" and not arg:
        return stretched_haar(1).father
    if base == "haar_mother" and not arg:
        return stretched_haar(1).mother
    if base in ("stretched_haar_father", "stretched_haar_mother"):
        try:
            k = int(arg)
        except ValueError as exc:
            raise UsageError(f"builtin {name!r} needs an integer stretch factor") from exc
        try:
            pair = stretched_haar(k)
        except ShiftSpecError as exc:
            raise UsageError(str(exc)) from exc
        return pair.father if base.endswith("father") else pair.mother
    if base == "shannon":
        pieces = _SHANNON.findall(arg)
        rebuilt = "+".join(f"[{a},{b})" for a, b in pieces)
        if not pieces or rebuilt != arg.replace(" ", ""):
            raise UsageError(f"shannon builtin expects intervals like [0,0.5), got {arg!r}")
        try:
            return SpectralIndicator([(float(a), float(b)) for a, b in pieces])
        except ShiftSpecError as exc:
            raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown builtin {name!r}")


def _complex_list(values):
    return [complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in values]


def function_from_spec(doc):
    """Build a generator from a parsed function-spec document."""
    try:
        validate_function_spec(doc)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid function spec: {exc.message}") from exc
    try:
        if doc["kind"] == "builtin":
            return builtin_function(doc["name"])
        if doc["kind"] == "piecewise":
            return PiecewiseConstant(doc["breakpoints"], _complex_list(doc["values"]))
        return SampledFunction(doc["start"], doc["step"], _complex_list(doc["values"]),
                               doc.get("domain", "time"))
    except ShiftSpecError as exc:
        raise UsageError(f"invalid function spec: {exc}") from exc


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _functions(args, allow_many=False):
    items = [builtin_function(b) for b in (args.builtin or [])]
    items += [function_from_spec(_read_json(f)) for f in (args.function or [])]
    if not items:
        raise UsageError("give a generator with --builtin or --function")
    if not allow_many and len(items) > 1:
        raise UsageError("this command takes exactly one generator")
    return items


def _read_density(path):
    text = _text(path)
    try:
        if text.lstrip().startswith("{"):
            return PeriodicDensity.from_json(text)
        return PeriodicDensity.from_csv(text)
    except (ShiftSpecError, KeyError, ValueError) as exc:
        raise UsageError(f"malformed density file {path}: {exc}") from exc


def _text(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------- outputs

def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _cplx(z):
    return [float(np.real(z)), float(np.imag(z))]


def _matrix(M):
    return [[_cplx(z) for z in row] for row in np.asarray(M)]


class _Writer:
    def __init__(self, out_dir, prefix):
        self.dir = Path(out_dir)
        self.prefix = prefix
        self.names = []

    def write(self, suffix, text):
        self.dir.mkdir(parents=True, exist_ok=True)
        name = f"{self.prefix}_{suffix}"
        (self.dir / name).write_text(text)
        self.names.append(name)
        return name


# ---------------------------------------------------------------- commands

def _cmd_density(args, w):
    psi, = _functions(args)
    p = spectral_density(psi, args.n_grid, args.n_terms)
    w.write("density.csv", p.to_csv())
    return {"n_grid": p.n_grid, "tail_bound": p.tail_bound, "integral": p.integral(),
            "norm2": psi.norm2(), "min": float(p.values.min()), "max": float(p.values.max())}


def _cmd_classify(args, w):
    psi, = _functions(args)
    p = spectral_density(psi, args.n_grid, args.n_terms)
    w.write("density.csv", p.to_csv())
    return classify(p, args.tol).to_dict()


def _cmd_renormalize(args, w):
    psi, = _functions(args)
    p = spectral_density(psi, args.n_grid, args.n_terms)
    ren = renormalize(psi, p, n_terms=args.n_terms)
    q = spectral_density(ren.psi_ren, args.n_grid, args.n_terms)
    w.write("density.csv", _csv(["x", "p", "p_ren"], zip(p.grid, p.values, q.values)))
    dev = np.abs(q.values - ren.support.mask)
    return {"support": [list(iv) for iv in ren.support.intervals()],
            "support_mass": ren.support.measure,
            "max_deviation_from_indicator": float(dev.max())}


def _cmd_depend(args, w):
    psi, = _functions(args)
    p = spectral_density(psi, args.n_grid, args.n_terms)
    E = detect_l2_dependence(p)
    if E is None:
        return {"dependent": False, "zero_set": []}
    k_max = args.k_max
    c = construct_dependence_coeffs(E, k_max)
    w.write("coefficients.csv", _csv(["k", "re", "im"],
                                     ((k, float(v.real), float(v.imag))
                                      for k, v in zip(c.indices, c.values))))
    residual = verify_dependence(psi, c)
    return {"dependent": True, "zero_set": [list(iv) for iv in E.intervals()],
            "k_max": k_max, "coefficient_norm": c.norm(), "residual": residual,
            "relative_residual": residual / c.norm(), "density_side_norm": density_norm(c, p)}


def _cmd_matrix(args, w):
    family = _functions(args, allow_many=True)
    P = matrix_density(family, args.n_grid, args.n_terms, args.domain)
    G = gram_integral(P)
    D = gram_matrix(family)
    dec = cyclic_decomposition(P)
    w.write("density.json", P.to_json())
    w.write("multiplicity.csv", _csv(["x", "multiplicity"],
                                     zip(np.arange(P.n_grid) / P.n_grid, dec.multiplicity)))
    out = {"n_family": P.n_family, "gram_integral": _matrix(G), "gram_direct": _matrix(D),
           "max_gram_deviation": float(np.max(np.abs(G - D))),
           "min_eigenvalue": P.min_eigenvalue()}
    out.update(dec.to_dict())
    return out


def _cmd_wavelet(args, w):
    k = args.k
    try:
        pair = stretched_haar(k)
    except ShiftSpecError as exc:
        raise UsageError(str(exc)) from exc
    pf = stretched_haar_density(k, "father", args.n_grid, args.form)
    pm = stretched_haar_density(k, "mother", args.n_grid, args.form)
    w.write("densities.csv", _csv(["t", "p_father", "p_mother"], zip(pf.grid, pf.values, pm.values)))
    q = qmf_check(haar_filter(k, args.n_grid))
    out = {"k": k, "form": args.form, "consistency_defect": consistency_check(pf, pm),
           "qmf_max_defect": q.max_defect, "qmf_lowpass_defect": q.lowpass_defect,
           "father_frame": classify(pf, args.tol).to_dict(),
           "mother_frame": classify(pm, args.tol).to_dict()}
    if args.periodize:
        sf = spectral_density(pair.father, args.n_grid, args.n_terms)
        sm = spectral_density(pair.mother, args.n_grid, args.n_terms)
        out["periodized_consistency_defect"] = consistency_check(sf, sm)
        out["closed_form_gap_father"] = float(np.max(np.abs(sf.values - pf.values)))
        out["closed_form_gap_mother"] = float(np.max(np.abs(sm.values - pm.values)))
    return out


def _cmd_simulate(args, w):
    if args.kind == "brownian":
        ens = brownian_paths(args.n_times, args.m_paths, args.seed)
    elif args.kind == "mu_gaussian":
        if not args.density_file:
            raise UsageError("--kind mu_gaussian needs --density-file")
        ens = mu_gaussian_increments(_read_density(args.density_file), args.m_paths, args.seed)
    else:
        psi, = _functions(args)
        r = CovarianceSequence.from_coefficients(autocorrelation_coeffs(psi, args.n_times - 1))
        ens = stationary_gaussian(r, args.n_times, args.m_paths, args.seed)
    w.write("paths.csv", ens.to_csv())
    C = empirical_covariance(ens)
    w.write("covariance.csv", _csv(["s", "t", "re", "im"],
                                   ((s, t, float(C[i, j].real), float(C[i, j].imag))
                                    for i, s in enumerate(ens.time_grid)
                                    for j, t in enumerate(ens.time_grid))))
    return {"kind": args.kind, "m_paths": ens.m_paths, "n_times": int(ens.time_grid.size),
            "seed": args.seed,
            "mean_abs_max": float(np.max(np.abs(ens.paths.mean(axis=0)))),
            "variance_at_end": float(np.real(C[-1, -1]))}


def _cmd_kl(args, w):
    n = args.n_grid
    if args.kernel == "brownian":
        K, grid = brownian_kernel(n)
        ens = brownian_paths(n + 1, args.m_paths, args.seed)
    else:
        doc = _read_json(args.kernel)
        try:
            K = np.asarray(doc["kernel"], dtype=float)
            grid = np.asarray(doc["grid"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"kernel file needs numeric 'grid' and 'kernel': {exc}") from exc
        n = grid.size
        ens = gaussian_paths(K, grid, args.m_paths, args.seed)
    exp = kl_decompose(K, grid)
    lam = exp.eigenvalues
    modes = min(args.modes, int(np.count_nonzero(lam > DEFAULTS.mode_threshold)))
    w.write("eigenvalues.csv", _csv(["k", "lambda"], ((i + 1, float(v)) for i, v in enumerate(lam))))
    Z = kl_coefficients(ens, exp, modes)
    rows = []
    for m in sorted({0, 1, 2, 5, modes} & set(range(modes + 1))):
        rec = kl_reconstruct(exp, Z, m, args.seed)
        rows.append({"n_modes": m, "empirical": relative_reconstruction_error(ens, rec),
                     "predicted": float(lam[m:].sum() / lam.sum())})
    w.write("reconstruction.csv", _csv(["n_modes", "empirical", "predicted"],
                                       ((r["n_modes"], r["empirical"], r["predicted"]) for r in rows)))
    return {"n_grid": n, "modes": modes, "eigenvalues": [float(v) for v in lam[:modes]],
            "trace_defect": float(abs(lam.sum() - exp.dt * np.trace(K))),
            "reconstruction": rows}


COMMANDS = {
    "density": _cmd_density,
    "classify": _cmd_classify,
    "renormalize": _cmd_renormalize,
    "depend": _cmd_depend,
    "matrix": _cmd_matrix,
    "wavelet": _cmd_wavelet,
    "simulate": _cmd_simulate,
    "kl": _cmd_kl,
}


def build_parser():
    parser = _Parser(prog="shiftspec", description="Spectral analysis of integer-translate systems.")
    parser.add_argument("--version", action="version", version=f"shiftspec {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p, generator=True, many=False):
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
        p.add_argument("--n-grid", type=int, default=DEFAULTS.n_grid)
        p.add_argument("--n-terms", type=int, default=DEFAULTS.n_terms)
        p.add_argument("--tol", type=float, default=DEFAULTS.tol)
        p.add_argument("--k-max", type=int, default=50)
        p.add_argument("--seed", type=int, default=DEFAULTS.seed)
        p.add_argument("--m-paths", type=int, default=DEFAULTS.m_paths)
        if generator:
            p.add_argument("--builtin", action="append",
                           help="haar_father, haar_mother, stretched_haar_father:K, "
                                "stretched_haar_mother:K or shannon:[a,b)")
            p.add_argument("--function", action="append", help="function-spec JSON file")

    for name in ("density", "classify", "renormalize", "depend"):
        common(sub.add_parser(name))
    p = sub.add_parser("matrix")
    common(p)
    p.add_argument("--domain", choices=("time", "frequency"), default="frequency")
    p = sub.add_parser("wavelet")
    common(p, generator=False)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--form", choices=("table", "exact"), default="table")
    p.add_argument("--periodize", action="store_true",
                   help="also compare against periodized densities")
    p = sub.add_parser("simulate")
    common(p)
    p.add_argument("--kind", choices=("brownian", "mu_gaussian", "stationary"), default="brownian")
    p.add_argument("--n-times", type=int, default=65)
    p.add_argument("--density-file")
    p = sub.add_parser("kl")
    common(p, generator=False)
    p.set_defaults(n_grid=DEFAULTS.kl_n_grid)
    p.add_argument("--kernel", default="brownian", help="'brownian' or a JSON file {grid, kernel}")
    p.add_argument("--modes", type=int, default=DEFAULTS.kl_modes)
    return parser


def _parameters(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "out")}


def run(argv=None):
    """Run the CLI; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; choose from " + ", ".join(COMMANDS))
        if args.n_grid < 2 or args.n_terms < 1 or args.m_paths < 1:
            raise UsageError("--n-grid must be >= 2, --n-terms and --m-paths >= 1")
        out_dir = args.out or os.environ.get(OUT_ENV) or "."
        writer = _Writer(out_dir, args.command)
        result = COMMANDS[args.command](args, writer)
    except UsageError as exc:
        print(f"shiftspec: error: {exc}", file=sys.stderr)
        return 1
    except ShiftSpecError as exc:
        print(f"shiftspec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "version": __version__,
              "parameters": _parameters(args), "defaults": DEFAULTS.as_dict(),
              "result": result, "outputs": sorted(writer.names + [f"{args.command}_report.json"])}
    try:
        validate_report(report)
    except jsonschema.ValidationError as exc:
        print(f"shiftspec: internal report error: {exc.message}", file=sys.stderr)
        return 2
    path = Path(out_dir) / f"{args.command}_report.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(json.dumps(result, sort_keys=True))
    return 0


def main():
    sys.exit(run())
