"""Figure rendering for sweep output, one PNG next to each CSV."""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_sweep"]

_XLABELS = {
    "epsilon": "energy threshold (J)",
    "e_sat": "energy saturation level (J)",
    "lambda1": "primary density (per m^2 s)",
    "lambda2": "secondary density (per m^2 s)",
    "p1": "primary transmit power (W)",
    "t_i": "information slot (s)",
    "t_e": "harvest window (s)",
    "d": "pair distance (m)",
    "alpha": "path-loss exponent",
    "rho": "guard radius (m)",
    "zeta": "SINR threshold",
    "zeta_db": "SINR threshold (dB)",
    "sigma2": "noise power (W)",
    "x": "reliability threshold x",
}

# per kind: (ylabel, analytic line columns, (mc, stderr) pairs)
_PLOT_SPECS = {
    "energy-coverage": (
        "energy coverage probability",
        ["pi_eps"],
        [("pi_eps_mc", "pi_eps_stderr")],
    ),
    "transmit-prob": (
        "probability",
        ["pi_eps", "pi_rho", "pi_s"],
        [("pi_s_mc", "pi_s_stderr")],
    ),
    "coverage": (
        "coverage probability",
        ["pc_primary", "pc_secondary"],
        [("pc_primary_mc", "pc_primary_stderr"),
         ("pc_secondary_mc", "pc_secondary_stderr")],
    ),
    "coverage-rician": (
        "coverage probability",
        ["pc_primary_rayleigh", "pc_secondary_rayleigh"],
        [("pc_primary_mc", "pc_primary_stderr"),
         ("pc_secondary_mc", "pc_secondary_stderr")],
    ),
    "throughput": (
        "spatial throughput (bpcu per m^2 s)",
        ["throughput_primary", "throughput_secondary"],
        [("throughput_primary_mc", "throughput_primary_stderr"),
         ("throughput_secondary_mc", "throughput_secondary_stderr")],
    ),
    "meta": (
        "fraction of links above x",
        ["meta_primary", "meta_secondary"],
        [("meta_primary_mc", "meta_primary_stderr"),
         ("meta_secondary_mc", "meta_secondary_stderr")],
    ),
}


def _series(rows, col):
    vals = [row[col] for row in rows]
    return vals if any(not math.isnan(v) for v in vals) else None


def render_sweep(spec, columns, rows, csv_path) -> str | None:
    """Render one sweep's curves to PNG; returns the path or None."""
    if spec.name not in _PLOT_SPECS:
        return None
    ylabel, line_cols, mc_cols = _PLOT_SPECS[spec.name]
    xs = [row[spec.swept_param] for row in rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for col in line_cols:
        ys = _series(rows, col)
        if ys is not None:
            ax.plot(xs, ys, label=col)
    for col, err_col in mc_cols:
        if col not in columns:
            continue
        ys = _series(rows, col)
        if ys is None:
            continue
        errs = [row[err_col] for row in rows]
        ax.errorbar(xs, ys, yerr=errs, fmt="o", markersize=3.5,
                    capsize=2, linestyle="none", label=col)
    ax.set_xlabel(_XLABELS.get(spec.swept_param, spec.swept_param))
    ax.set_ylabel(ylabel)
    ax.set_title(spec.name)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()

    base, _ = os.path.splitext(csv_path)
    png_path = base + ".png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)
    return png_path
