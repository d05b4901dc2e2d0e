"""Command-line verification harness.

Runs the per-module invariant suites over configurable parameter grids and
emits machine-readable reports.  Every check becomes one CheckRecord; the
JSON/CSV output is deterministic for a fixed configuration apart from the
runtime_ms field.

Exit status: 0 when every record passes, 1 when any fails (the failing
records are printed to stderr), 2 on usage errors.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .bessel import log_bessel_ik, log_ik_uniform_asymptotic
from .clifford import commutator_report
from .errors import EdgespecError, PreconditionError
from .grids import build_grid, nystrom_assemble, operator_norm
from .kernels import ConeKernel, WeightedAction, free_schur_integrals
from .model import FiberSpectrum, ModelBlock, check_witt, solve_scalar
from .parametrix import EdgeFunction, mapping_bounds
from .scales import (DEFAULT_SEED, ScaleGenerator, intersection_scale_check,
                     random_psd_block, same_scale_demo, tensor_generator,
                     tensor_positivity_check)

SUITES = ("bessel", "schur", "model", "parametrix", "gb", "scales", "witt",
          "all")


@dataclass(frozen=True)
class CheckRecord:
    check: str
    params: dict
    measured: float
    bound: float
    passed: bool
    runtime_ms: int

    def as_dict(self):
        return {"check": self.check, "params": self.params,
                "measured": self.measured, "bound": self.bound,
                "pass": self.passed, "runtime_ms": self.runtime_ms}

    def param_string(self):
        return ";".join(f"{k}={self.params[k]}" for k in sorted(self.params))


@dataclass
class RunConfig:
    grid_n: int = 400
    x_min: float = 1e-4
    x_max: float = 1e3
    y_modes: int = 16
    nu: float = 2.0
    beta: float = 0.0
    spectrum: tuple = (1.6, -1.6, 2.6, -2.6)
    gap: float = 1.0
    delta_min: float = 0.05
    tol_factor: float = 1.1
    seed: int = DEFAULT_SEED
    output_format: str = "json"


def _record(check, params, measured, bound, passed, t0):
    return CheckRecord(check, dict(params), float(measured),
                       float(bound), bool(passed),
                       int(round((time.time() - t0) * 1000)))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _suite_bessel(cfg: RunConfig):
    out = []
    t0 = time.time()
    nus = np.exp(np.linspace(math.log(0.5), math.log(50.0), 20))
    xs = np.exp(np.linspace(math.log(1e-3), math.log(1e3), 20))
    worst = 0.0
    for nu in nus:
        li0, lk0, *_ = log_bessel_ik(nu, xs)
        li1, lk1, *_ = log_bessel_ik(nu + 1.0, xs)
        prod = np.exp(li0 + lk1) + np.exp(li1 + lk0)
        worst = max(worst, float(np.max(np.abs(xs * prod - 1.0))))
    out.append(_record("bessel.wronskian", {"grid": "20x20"},
                       worst, 1e-10, worst <= 1e-10, t0))
    for mu in (10.0, 20.0, 40.0):
        t0 = time.time()
        li_r, lk_r, *_ = log_bessel_ik(mu, xs)
        li_a, lk_a, ei, ek = log_ik_uniform_asymptotic(mu, xs)
        err = max(float(np.max(np.abs(np.expm1(li_a - li_r)) / ei)),
                  float(np.max(np.abs(np.expm1(lk_a - lk_r)) / ek)))
        out.append(_record("bessel.olver_vs_eta_bound", {"mu": mu},
                           err, 1.0, err <= 1.0, t0))
    return out


def _suite_schur(cfg: RunConfig):
    out = []
    nu, beta = cfg.nu, cfg.beta
    t0 = time.time()
    row, col = free_schur_integrals(nu)
    grid = build_grid(cfg.grid_n, cfg.x_min, cfg.x_max)
    kern = (ConeKernel("free", nu, delta_min=cfg.delta_min) if beta == 0.0
            else ConeKernel("bessel", nu, beta, delta_min=cfg.delta_min))
    op = nystrom_assemble(kern, WeightedAction(-2, 0), grid,
                          refine_diagonal=True)
    measured = operator_norm(op)
    out.append(_record("schur.weighted_norm", {"nu": nu, "beta": beta},
                       measured, 1.05 * row, measured <= 1.05 * row, t0))
    if beta == 0.0:
        # column integral int_0^infty x^{-2} k(x, 1) dx; both branches decay
        # like powers, so a wide log-panel rule resolves it to quadrature
        # precision.
        t0 = time.time()
        from .kernels import weighted_kernel_matrix
        col_quad = 0.0
        # split at the kernel's branch kink x = y = 1
        for lo, hi in ((1e-10, 1.0), (1.0, 1e8)):
            quad = build_grid(1024, lo, hi, scheme="log_gauss_panels")
            kcol = weighted_kernel_matrix(kern, WeightedAction(-2, 0),
                                          quad.nodes, np.array([1.0]))[:, 0]
            col_quad += float(kcol @ quad.weights)
        rel = abs(col_quad - col) / col
        out.append(_record("schur.col_integral", {"nu": nu},
                           rel, 1e-8, rel <= 1e-8, t0))
    return out


def _suite_model(cfg: RunConfig):
    t0 = time.time()
    grid = build_grid(cfg.grid_n, max(cfg.x_min, 1e-2), min(cfg.x_max, 1e2))
    block = ModelBlock("scalar_L2", cfg.nu, cfg.beta)
    from .grids import fd_assemble_model
    from .model import interior_slice
    t_nodes = np.log(grid.nodes)
    g = np.exp(-t_nodes ** 2)
    f = solve_scalar(block, g, grid)
    resid = fd_assemble_model(cfg.nu, cfg.beta, grid).apply(f) - g
    sl = interior_slice(grid.n)
    w = grid.weights[sl]
    rel = math.sqrt(float(w @ resid[sl] ** 2) / float(w @ g[sl] ** 2))
    return [_record("model.round_trip", {"nu": cfg.nu, "beta": cfg.beta,
                                         "n": cfg.grid_n},
                    rel, 1e-2, rel <= 1e-2, t0)]


def _suite_parametrix(cfg: RunConfig):
    out = []
    rng = np.random.default_rng(cfg.seed)
    grid = build_grid(max(cfg.grid_n, 200), 1e-2, 1e2)
    nus = tuple(abs(s) + 0.5 for s in cfg.spectrum if s > 0) or (2.1,)
    mask = (grid.nodes > 0.05) & (grid.nodes < 0.8)
    for order, n_c in (("first", 2), ("second", 1)):
        t0 = time.time()
        s = np.zeros((grid.n, cfg.y_modes, len(nus), n_c))
        s[mask] = rng.normal(size=(int(mask.sum()), cfg.y_modes,
                                   len(nus), n_c))
        u = EdgeFunction(s, support_flag=True)
        rep = mapping_bounds(u, nus, grid, order)
        out.append(_record(f"parametrix.residual_{order}",
                           {"order": order, "n": grid.n},
                           rep.residual_rel, 1e-8,
                           rep.residual_rel <= 1e-8, t0))
        out.append(_record(f"parametrix.fitted_c_{order}",
                           {"order": order, "n": grid.n},
                           rep.fitted_c, math.inf, True, t0))
    return out


def _suite_gb(cfg: RunConfig):
    out = []
    names = ("gb.anticommutator_gamma_s", "gb.anticommutator_gamma_t",
             "gb.commutator_t_s")
    t0 = time.time()
    for name, mat in zip(names, commutator_report()):
        worst = max(abs(complex(v)) for v in mat)
        out.append(_record(name, {}, worst, 0.0, worst == 0.0, t0))
    return out


def _suite_scales(cfg: RunConfig):
    out = []
    rng = np.random.default_rng(cfg.seed)
    t0 = time.time()

    def gen(d):
        g = rng.normal(size=(d, d))
        return ScaleGenerator(g @ g.T + (d + 1.0) * np.eye(d))

    g1, g2 = gen(5), gen(4)
    try:
        tensor_generator(g1, g2)
        tensor_ok, tensor_err = True, 0.0
    except EdgespecError as exc:  # pragma: no cover - defensive
        tensor_ok, tensor_err = False, 1.0
    out.append(_record("scales.tensor_power_identity", {"dims": "5x4"},
                       tensor_err, 1e-10, tensor_ok, t0))
    t0 = time.time()
    rep = intersection_scale_check(g1, g2, s=1.3, theta=0.4, trials=50,
                                   seed=cfg.seed)
    out.append(_record("scales.intersection_sandwich", {"s": 1.3,
                                                        "theta": 0.4},
                       rep["worst_margin"], 1e-10,
                       rep["violations"] == 0, t0))
    t0 = time.time()
    a = random_psd_block(3, 2, rng)
    b = random_psd_block(3, 2, rng)
    pos = tensor_positivity_check(a, b, trials=20, seed=cfg.seed)
    lam = min(pos["lambda_min_tensor"], pos["lambda_min_sum"],
              pos["lambda_min_monotone"])
    out.append(_record("scales.tensor_positivity", {"trials": 20},
                       lam, -1e-10, pos["passes"], t0))
    t0 = time.time()
    demo = same_scale_demo(a=1.0, n=cfg.grid_n)
    ratios = [f["resid_zero_condition"] / max(f["resid_a_condition"], 1e-300)
              for f in demo["eigenfunctions"]]
    out.append(_record("scales.boundary_fingerprint", {"a": 1.0,
                                                       "n": cfg.grid_n},
                       min(ratios), 10.0, min(ratios) >= 10.0, t0))
    return out


def _suite_witt(cfg: RunConfig):
    t0 = time.time()
    rep = check_witt(FiberSpectrum(tuple(cfg.spectrum), cfg.gap))
    return [_record("witt.spectral_gap",
                    {"spectrum": ",".join(str(s) for s in cfg.spectrum),
                     "gap": cfg.gap},
                    rep.min_abs, cfg.gap, rep.passes, t0)]


_SUITE_FUNCS = {
    "bessel": _suite_bessel,
    "schur": _suite_schur,
    "model": _suite_model,
    "parametrix": _suite_parametrix,
    "gb": _suite_gb,
    "scales": _suite_scales,
    "witt": _suite_witt,
}


def run_suite(name: str, config: RunConfig):
    """Execute one named suite (or "all"), sorted by (check, params)."""
    if name not in SUITES:
        raise PreconditionError(f"unknown suite {name!r}")
    names = _SUITE_FUNCS.keys() if name == "all" else (name,)
    records = []
    for nm in names:
        records.extend(_SUITE_FUNCS[nm](config))
    records.sort(key=lambda r: (r.check, r.param_string()))
    return records


# ---------------------------------------------------------------------------
# output formats
# ---------------------------------------------------------------------------

def _fmt_real(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        return format(v, ".12g")
    return str(v)


def emit(records, fmt: str = "json") -> bytes:
    """Serialize CheckRecords as JSON (array of objects) or CSV."""
    if not records:
        raise PreconditionError("emit requires at least one record")
    if fmt == "json":
        payload = [r.as_dict() for r in records]
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["check", "param_string", "measured", "bound", "pass",
                     "runtime_ms"])
        for r in records:
            wr.writerow([r.check, r.param_string(), _fmt_real(r.measured),
                         _fmt_real(r.bound), str(r.passed).lower(),
                         r.runtime_ms])
        return buf.getvalue().encode("utf-8")
    raise PreconditionError(f"unknown output format {fmt!r}")


# ---------------------------------------------------------------------------
# argument parsing / entry point
# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="edgespec",
        description="Run numerical verification suites for the cone-edge "
                    "model-operator toolkit.")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--grid-n", type=int, default=400)
    p.add_argument("--x-min", type=float, default=1e-4)
    p.add_argument("--x-max", type=float, default=1e3)
    p.add_argument("--nu", type=float, default=2.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--spectrum", type=str, default="1.6,-1.6,2.6,-2.6",
                   help="comma-separated fiber eigenvalues")
    p.add_argument("--gap", type=float, default=1.0)
    p.add_argument("--delta-min", type=float, default=0.05)
    p.add_argument("--tol-factor", type=float, default=1.1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=str, default=None)
    return p


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        spectrum = tuple(float(s) for s in args.spectrum.split(",") if s)
    except ValueError:
        print("error: --spectrum must be a comma-separated list of reals",
              file=sys.stderr)
        return 2
    seed = args.seed
    env_seed = os.environ.get("EDGESPEC_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            print("error: EDGESPEC_SEED must be an integer", file=sys.stderr)
            return 2
    cfg = RunConfig(grid_n=args.grid_n, x_min=args.x_min, x_max=args.x_max,
                    nu=args.nu, beta=args.beta, spectrum=spectrum,
                    gap=args.gap, delta_min=args.delta_min,
                    tol_factor=args.tol_factor, seed=seed,
                    output_format=args.output)
    try:
        records = run_suite(args.suite, cfg)
        payload = emit(records, args.output)
    except EdgespecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    failing = [r for r in records if not r.passed]
    for r in failing:
        print(f"FAIL {r.check} [{r.param_string()}] measured="
              f"{_fmt_real(r.measured)} bound={_fmt_real(r.bound)}",
              file=sys.stderr)
    return 1 if failing else 0


if __name__ == "__main__":
    sys.exit(main())
