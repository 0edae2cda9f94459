"""Render qfigrowth CSV outputs as figures.

Three panel types, tied to the CSV schemas published by the qfigrowth CLI:

    growth       one or more ``t,qfi,nx,ny,nz`` series; plots F_Q/N versus
                 t and circles the enhancing-factor optimum (largest
                 F_Q(t)/t among sampled t >= tau) once per series.
    exponents    one ``alpha,delta,delta_f,r2_delta,r2_delta_f`` table;
                 plots both exponents versus alpha as marker series.
    bound-curve  one ``alpha,delta_max,regime`` table; plots the ceiling
                 with dashed markers at regime changes.

Renders are pure functions of the input CSV bytes: fixed style, fixed
dpi, no timestamps.  Input files that fail schema validation or carry no
data rows abort with a nonzero exit and no image.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PANELS = ("growth", "exponents", "bound-curve")

GROWTH_HEADER = ["t", "qfi", "nx", "ny", "nz"]
FIT_HEADER = ["alpha", "delta", "delta_f", "r2_delta", "r2_delta_f"]
BOUND_HEADER = ["alpha", "delta_max", "regime"]

OPTIMUM_GID = "optimum-circle"

_STYLE = {
    "figure.figsize": (7.0, 4.6),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


@dataclass(frozen=True)
class PlotSpec:
    inputs: tuple
    output: Path
    panel: str
    tau: float = 2.0

    def __post_init__(self):
        if self.panel not in PANELS:
            raise ValueError(f"panel must be one of {PANELS}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.tau <= 0:
            raise ValueError("tau must be positive")


def _read_table(path, header, numeric):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != header:
        raise ValueError(f"{path}: expected header {','.join(header)}")
    body = rows[1:]
    if not body:
        raise ValueError(f"{path}: no data rows")
    cols = {name: [] for name in header}
    for row in body:
        if len(row) != len(header):
            raise ValueError(f"{path}: malformed row {row}")
        for name, value in zip(header, row):
            cols[name].append(float(value) if name in numeric else value)
    return {
        name: (np.array(vals) if name in numeric else vals) for name, vals in cols.items()
    }


def load_growth_csv(path):
    return _read_table(path, GROWTH_HEADER, set(GROWTH_HEADER))


def load_fit_csv(path):
    return _read_table(path, FIT_HEADER, set(FIT_HEADER))


def load_bound_csv(path):
    return _read_table(path, BOUND_HEADER, {"alpha", "delta_max"})


def _optimum_point(t, qfi, tau):
    """Sampled maximizer of qfi/t for t >= tau (falls back to the last point)."""
    mask = t >= min(tau, t[t > 0].max()) - 1e-12
    mask &= t > 0
    ts, fs = t[mask], qfi[mask]
    k = int(np.argmax(fs / ts))
    return float(ts[k]), float(fs[k])


def _growth_figure(spec):
    fig, ax = plt.subplots()
    for path in spec.inputs:
        data = load_growth_csv(path)
        t, qfi = data["t"], data["qfi"]
        scale = qfi[0] if t[0] == 0.0 and qfi[0] > 0 else 1.0
        label = Path(path).stem
        (line,) = ax.plot(t, qfi / scale, lw=1.4, label=label)
        t_opt, f_opt = _optimum_point(t, qfi, spec.tau)
        ax.scatter(
            [t_opt],
            [f_opt / scale],
            s=70,
            facecolors="none",
            edgecolors=line.get_color(),
            linewidths=1.6,
            zorder=5,
            gid=OPTIMUM_GID,
        )
    ax.set_xlabel("evolution time t")
    ax.set_ylabel("F_Q / N")
    ax.set_title("QFI growth (circles: optimum of F_Q/t)")
    ax.legend(loc="best", fontsize=8)
    return fig


def _exponents_figure(spec):
    if len(spec.inputs) != 1:
        raise ValueError("the exponents panel takes exactly one fit CSV")
    data = load_fit_csv(spec.inputs[0])
    order = np.argsort(data["alpha"])
    alpha = data["alpha"][order]
    fig, ax = plt.subplots()
    ax.plot(alpha, data["delta"][order], "o-", label="delta (with preparation time)")
    ax.plot(alpha, data["delta_f"][order], "s--", label="delta_f (QFI only)")
    ax.axhline(0.0, color="k", lw=0.8, alpha=0.6)
    ax.set_xlabel("power-law exponent alpha")
    ax.set_ylabel("enhancing exponent")
    ax.set_title("Fitted metrological enhancing exponents")
    ax.legend(loc="best", fontsize=8)
    return fig


def _bound_figure(spec):
    if len(spec.inputs) != 1:
        raise ValueError("the bound-curve panel takes exactly one CSV")
    data = load_bound_csv(spec.inputs[0])
    order = np.argsort(data["alpha"])
    alpha = data["alpha"][order]
    value = data["delta_max"][order]
    regime = [data["regime"][k] for k in order]
    fig, ax = plt.subplots()
    ax.plot(alpha, value, "o-", lw=1.4)
    for k in range(1, len(alpha)):
        if regime[k] != regime[k - 1]:
            boundary = 0.5 * (alpha[k - 1] + alpha[k])
            ax.axvline(boundary, color="k", ls="--", lw=0.9, alpha=0.6)
    seen = {}
    for a, r in zip(alpha, regime):
        seen.setdefault(r, []).append(a)
    for r, xs in seen.items():
        ax.annotate(r, (float(np.mean(xs)), float(value.max()) + 0.04), ha="center", fontsize=8)
    ax.set_ylim(top=float(value.max()) + 0.12)
    ax.set_xlabel("power-law exponent alpha")
    ax.set_ylabel("max enhancing exponent")
    ax.set_title("Ceiling of the metrological enhancement")
    return fig


def build_figure(spec):
    with plt.rc_context(_STYLE):
        if spec.panel == "growth":
            return _growth_figure(spec)
        if spec.panel == "exponents":
            return _exponents_figure(spec)
        return _bound_figure(spec)


def count_optimum_circles(fig):
    return sum(
        1
        for ax in fig.axes
        for artist in ax.collections
        if artist.get_gid() == OPTIMUM_GID
    )


def render(spec):
    """Write the panel as PNG; returns the output path."""
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output, format="png", metadata={"Software": "qfigrowth-plots"})
    finally:
        plt.close(fig)
    return spec.output


def main(argv=None):
    parser = argparse.ArgumentParser(prog="qfigrowth-plots", description=__doc__)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="input CSV (repeatable for the growth panel)")
    parser.add_argument("--out", required=True)
    parser.add_argument("--panel", choices=PANELS, required=True)
    parser.add_argument("--tau", type=float, default=2.0,
                        help="search floor for the circled optimum")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(
            inputs=tuple(args.inputs), output=Path(args.out), panel=args.panel, tau=args.tau
        )
        render(spec)
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())
