"""Command-line interface.

Commands:
    ising-qfi    direction-optimized QFI growth series of the power-law
                 chain; CSV (t,qfi,nx,ny,nz) plus a JSON sidecar with the
                 echoed config and the (t_p, ratio) optimum.
    sweep-fit    per-(alpha, N) optima and the fitted enhancing
                 exponents; two CSV outputs.
    bound-curve  regime-resolved ceiling of the enhancing exponent over
                 an alpha grid.
    verify       dense-oracle equivalence suite on small systems.

Exit codes: 0 success, 2 validation, 3 runtime/IO, 4 verification
failure.  Numbers are written with 17 significant digits, comma
separated, LF line endings.  QFIGROWTH_THREADS (an integer) is the only
environment variable consulted; it parallelizes sweep cells, and output
is assembled deterministically regardless of schedule.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import exact_engine as engine
from . import ising_analytic as ising
from . import limits
from .hamiltonian import build_power_law_ising
from .lattice import build_lattice

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3
EXIT_VERIFY = 4

DEFAULT_DT = 0.05
DEFAULT_TAU = 2.0
DEFAULT_MAX_POINTS = 1000


def _fmt(x):
    return f"{x:.17g}"


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sidecar(path, config, results):
    doc = {"config": config, "results": results}
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _thread_count():
    raw = os.environ.get("QFIGROWTH_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _apply_config_file(args, parser_dests):
    """Merge --config JSON over parsed flags; unknown keys are rejected."""
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("config file must hold a JSON object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if dest not in parser_dests:
            raise ValueError(f"unknown config key {key!r}")
        setattr(args, dest, value)
    return args


def _parse_alpha_spec(values):
    """Alpha list given as floats or as a start:stop:step range string."""
    out = []
    for v in values:
        if isinstance(v, str) and ":" in v:
            start, stop, step = (float(p) for p in v.split(":"))
            if step <= 0:
                raise ValueError("alpha range step must be positive")
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            out.extend(start + k * step for k in range(n))
        else:
            out.append(float(v))
    return out


def _effective_config(args, skip=("config", "command", "func")):
    cfg = {}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        cfg[key] = value
    return cfg


# ---------------------------------------------------------------- ising-qfi


def cmd_ising_qfi(args):
    if args.n < 2:
        raise ValueError("need at least two spins (--n >= 2)")
    if args.alpha < 0:
        raise ValueError("alpha must be non-negative")
    if args.tau <= 0:
        raise ValueError("tau must be positive")
    t_max = args.t_max
    if t_max is None:
        t_max = ising.default_t_max(args.n, args.alpha, args.norm_at_one, args.boundary)
    series = ising.qfi_time_series(
        args.n, args.alpha, t_max, args.dt, args.norm_at_one, args.boundary
    )
    # a grid ending before tau still reports its closest admissible point
    floor = min(args.tau, float(series.times[-1]))
    t_p, ratio = ising.optimal_enhancement_point(series, t_min=floor)
    ising.series_to_csv(series, args.out)
    cfg = _effective_config(args)
    cfg["t_max"] = float(t_max)
    write_sidecar(args.out + ".json", cfg, {"t_p": t_p, "ratio": ratio})
    return EXIT_OK


# ---------------------------------------------------------------- sweep-fit


def sweep_cell(n, alpha, tau, dt, t_max=None, max_points=DEFAULT_MAX_POINTS,
               at_alpha_one="unit", boundary="ring"):
    """One (alpha, N) sweep cell.

    Returns (t_p, fq_at_tp, ratio, fq_max): the enhancing-factor optimum
    restricted to t >= tau, and the maximal QFI over the whole grid.
    """
    if t_max is None:
        t_max = ising.default_t_max(n, alpha, at_alpha_one, boundary)
    eff_dt = max(dt, t_max / max_points)
    series = ising.qfi_time_series(n, alpha, t_max, eff_dt, at_alpha_one, boundary)
    floor = min(tau, float(series.times[-1]))
    t_p, ratio = ising.optimal_enhancement_point(series, t_min=floor)
    k = int(np.argmax(series.qfi))
    return t_p, ratio * t_p, ratio, float(series.qfi[k])


def run_sweep(alphas, ns, tau=DEFAULT_TAU, dt=DEFAULT_DT, t_max=None,
              max_points=DEFAULT_MAX_POINTS, at_alpha_one="unit", boundary="ring"):
    """Sweep all (alpha, N) cells and fit the enhancing exponents.

    Delta is fit from the optimum points (N, F_Q(t_p), t_p); Delta_f from
    the maximal QFI per size.  Cells may run on QFIGROWTH_THREADS
    threads; rows come back in deterministic (alpha, N) order.
    """
    cells = [(a, n) for a in alphas for n in ns]

    def work(cell):
        a, n = cell
        return cell, sweep_cell(n, a, tau, dt, t_max, max_points, at_alpha_one, boundary)

    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(work, cells))
    else:
        results = dict(map(work, cells))

    sweep_rows = []
    fit_rows = []
    for a in alphas:
        pts_rate = []
        pts_max = []
        for n in ns:
            t_p, fq_tp, ratio, fq_max = results[(a, n)]
            sweep_rows.append((a, float(n), t_p, fq_max, ratio))
            pts_rate.append((n, fq_tp, t_p))
            pts_max.append((n, fq_max, t_p))
        fit_rate = limits.fit_scaling(pts_rate, tau, alpha=a)
        fit_max = limits.fit_scaling(pts_max, tau, alpha=a)
        fit_rows.append(
            (a, fit_rate.delta, fit_max.delta_f, fit_rate.r_squared[0], fit_max.r_squared[1])
        )
    return sweep_rows, fit_rows


def cmd_sweep_fit(args):
    alphas = _parse_alpha_spec(args.alpha)
    ns = [int(n) for n in args.n]
    if any(a < 0 for a in alphas):
        raise ValueError("alpha must be non-negative")
    if len(set(ns)) < 3:
        raise ValueError("need at least three distinct N values per alpha")
    if any(n < 2 for n in ns):
        raise ValueError("every N must be >= 2")
    if args.tau <= 0:
        raise ValueError("tau must be positive")
    sweep_rows, fit_rows = run_sweep(
        alphas, sorted(set(ns)), args.tau, args.dt, args.t_max,
        args.max_points, args.norm_at_one, args.boundary,
    )
    write_csv(args.out_sweep, ["alpha", "N", "t_p", "F_Q", "ratio"], sweep_rows)
    write_csv(
        args.out_fit,
        ["alpha", "delta", "delta_f", "r2_delta", "r2_delta_f"],
        fit_rows,
    )
    write_sidecar(args.out_fit + ".json", _effective_config(args), {"n_cells": len(sweep_rows)})
    return EXIT_OK


# ---------------------------------------------------------------- bound-curve


def cmd_bound_curve(args):
    alphas = _parse_alpha_spec(args.alpha)
    if any(a < 0 for a in alphas):
        raise ValueError("alpha must be non-negative")
    if args.d < 1:
        raise ValueError("dimension must be a positive integer")
    rows = []
    for a in alphas:
        dm = limits.delta_max(a, args.d)
        rows.append((a, dm.value, limits.regime_for(a, args.d)))
    write_csv(args.out, ["alpha", "delta_max", "regime"], rows)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _verify_checks(n_max, seed=20240615):
    rng = np.random.default_rng(seed)
    checks = []

    # closed-form moments and optimal QFI against the dense engine
    worst = 0.0
    for n in range(2, n_max + 1):
        lat = build_lattice(1, [n])
        for alpha in (0.0, 0.5, 1.5, 3.0):
            H = build_power_law_ising(lat, alpha)
            J = ising.coupling_matrix(n, alpha)
            psi0 = engine.coherent_spin_state(n, (1.0, 0.0, 0.0))
            for t in np.linspace(0.2, ising.default_t_max(n, alpha), 8):
                psi = engine.evolve(psi0, H, t)
                vecs = [
                    engine.collective_matrix(
                        engine.CollectiveOperator(directions=np.eye(3)[k], n_spins=n)
                    )
                    @ psi.amplitudes
                    for k in range(3)
                ]
                mean = np.array([np.vdot(psi.amplitudes, v).real for v in vecs])
                second = np.array(
                    [[np.vdot(vecs[a], vecs[b]).real for b in range(3)] for a in range(3)]
                )
                second = (second + second.T) / 2.0
                m = ising.moments_from_couplings(J, t)
                err = max(
                    np.abs(m.mean - mean).max(), np.abs(m.second - second).max()
                )
                fq_analytic, n_hat = ising.optimal_collective_qfi(m)
                gamma_dense = second - np.outer(mean, mean)
                fq_dense = 4.0 * float(np.linalg.eigvalsh(gamma_dense)[-1])
                err = max(err, abs(fq_analytic - fq_dense) / n**2)
                worst = max(worst, err)
    checks.append(("analytic moments and optimal QFI vs dense engine", worst, 1e-8))

    # spectral vs pure QFI and the cat/product anchors
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(2, min(n_max, 5) + 1))
        amp = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        psi = engine.PureState(amplitudes=amp / np.linalg.norm(amp), n_spins=n)
        d = rng.normal(size=3)
        K = engine.CollectiveOperator(directions=d / np.linalg.norm(d), n_spins=n)
        worst = max(
            worst, abs(engine.qfi_spectral(engine.pure_to_density(psi), K) - engine.qfi_pure(psi, K))
        )
    for n in range(2, n_max + 1):
        K = engine.CollectiveOperator(directions=np.array([0.0, 0.0, 1.0]), n_spins=n)
        worst = max(worst, abs(engine.qfi_pure(engine.ghz_state(n), K) - n**2))
        plus_x = engine.coherent_spin_state(n, (1.0, 0.0, 0.0))
        worst = max(worst, abs(engine.qfi_pure(plus_x, K) - n))
    checks.append(("spectral QFI vs pure QFI, cat and product anchors", worst, 1e-8))

    # skew-information ratio window
    low, high = np.inf, -np.inf
    for _ in range(40):
        n = int(rng.integers(2, min(n_max, 4) + 1))
        dim = 2**n
        rank = int(rng.integers(2, 4))
        mats = rng.normal(size=(rank, dim)) + 1j * rng.normal(size=(rank, dim))
        weights = rng.dirichlet(np.ones(rank))
        rho = np.zeros((dim, dim), dtype=complex)
        for w, v in zip(weights, mats):
            v = v / np.linalg.norm(v)
            rho += w * np.outer(v, v.conj())
        sigma = engine.DensityMatrix(matrix=rho, n_spins=n)
        d = rng.normal(size=3)
        K = engine.CollectiveOperator(directions=d / np.linalg.norm(d), n_spins=n)
        ops = [engine.site_operator(K, s) for s in range(n)]
        s_val = engine.skew_information_sum(sigma, ops)
        if s_val < 1e-12:
            continue
        ratio = engine.qfi_spectral(sigma, K) / s_val
        low, high = min(low, ratio), max(high, ratio)
    ok = (low >= 1.0 - 1e-8) and (high <= 2.0 + 1e-8)
    checks.append(("skew-information ratio inside [1, 2]", 0.0 if ok else 1.0, 0.5))

    # unitary covariance of the QFI
    worst = 0.0
    for _ in range(10):
        n = int(rng.integers(2, min(n_max, 4) + 1))
        lat = build_lattice(1, [n])
        H = build_power_law_ising(lat, 1.5)
        t = float(rng.uniform(0.2, 2.0))
        psi0 = engine.coherent_spin_state(n, (1.0, 0.0, 0.0))
        psi_t = engine.evolve(psi0, H, t)
        d = rng.normal(size=3)
        K = engine.CollectiveOperator(directions=d / np.linalg.norm(d), n_spins=n)
        moved = sum(engine.heisenberg_op(H, t, K, s) for s in range(n))
        worst = max(worst, abs(engine.qfi_pure(psi_t, K) - engine.qfi_pure(psi0, moved)))
    checks.append(("unitary covariance of the QFI", worst, 1e-8))
    return checks


def cmd_verify(args):
    if not (2 <= args.n_max <= 8):
        raise ValueError("--n-max must lie in [2, 8]")
    failures = 0
    for name, err, tol in _verify_checks(args.n_max):
        ok = err <= tol
        failures += 0 if ok else 1
        print(f"[{'ok' if ok else 'FAIL'}] {name}: max deviation {err:.3e} (tol {tol:.1e})")
    if failures:
        print(f"{failures} verification check(s) failed", file=sys.stderr)
        return EXIT_VERIFY
    print("all verification checks passed")
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser():
    parser = argparse.ArgumentParser(prog="qfigrowth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ising-qfi", help="QFI growth series of the power-law chain")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--boundary", choices=("open", "ring"), default="open")
    p.add_argument("--norm-at-one", choices=("unit", "harmonic"), default="unit")
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_ising_qfi)

    p = sub.add_parser("sweep-fit", help="size sweeps and enhancing-exponent fits")
    p.add_argument("--alpha", nargs="+", required=True)
    p.add_argument("--n", nargs="+", type=int, required=True)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--dt", type=float, default=DEFAULT_DT)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--max-points", type=int, default=DEFAULT_MAX_POINTS)
    p.add_argument("--boundary", choices=("open", "ring"), default="ring")
    p.add_argument("--norm-at-one", choices=("unit", "harmonic"), default="unit")
    p.add_argument("--out-sweep", required=True)
    p.add_argument("--out-fit", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_sweep_fit)

    p = sub.add_parser("bound-curve", help="enhancing-exponent ceiling over alpha")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_bound_curve)

    p = sub.add_parser("verify", help="dense-oracle equivalence suite")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        dests = set(vars(args))
        args = _apply_config_file(args, dests)
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
