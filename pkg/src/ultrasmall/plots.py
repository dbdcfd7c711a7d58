"""Figure rendering for the CLI report paths (PNG next to the delimited
output). Uses the Agg backend so it works headless."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_scaling_figure(fit, path) -> None:
    """Mean distance (with 5/95 quantile band) against loglog N plus the
    fitted line."""
    x = np.array([p["loglog_n"] for p in fit.points])
    y = np.array([p["mean"] for p in fit.points])
    lo = np.array([p["q05"] for p in fit.points])
    hi = np.array([p["q95"] for p in fit.points])
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.errorbar(x, y, yerr=[y - lo, hi - y], fmt="o", capsize=3, label="mean (5-95% band)")
    xs = np.linspace(x.min(), x.max(), 50)
    ax.plot(xs, fit.slope * xs + fit.intercept, "r--",
            label=f"fit: {fit.slope:.2f} loglog N + {fit.intercept:.2f}")
    ax.set_xlabel("log log N")
    ax.set_ylabel("distance")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_ccdf_figure(hist: dict, fit, path) -> None:
    """Log-log degree CCDF with the fitted tail slope 1 - tau_hat."""
    degrees = np.array(sorted(hist))
    counts = np.array([hist[d] for d in degrees], dtype=float)
    total = counts.sum()
    surv = (total - np.cumsum(counts)) / total
    keep = (degrees > 0) & (surv > 0)
    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.loglog(degrees[keep], surv[keep], ".", ms=3, label="empirical CCDF")
    if fit is not None:
        xs = degrees[keep].astype(float)
        anchor_x = xs[len(xs) // 2]
        anchor_y = surv[keep][len(xs) // 2]
        ys = anchor_y * (xs / anchor_x) ** (1.0 - fit.tau_hat)
        ax.loglog(xs, ys, "r--", label=f"slope 1 - tau, tau = {fit.tau_hat:.2f}")
    ax.set_xlabel("degree")
    ax.set_ylabel("P{degree > x}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_trace_figure(report_obj: dict, path) -> None:
    """Threshold and coefficient trace of a bound construction."""
    trace = report_obj.get("trace")
    if not trace:
        return
    ks = np.arange(len(trace["ell"]))
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2))
    axes[0].semilogy(ks, trace["ell"], "o-", label="threshold")
    axes[0].semilogy(ks, trace["eta"], "s--", label="N / threshold")
    axes[0].set_xlabel("level k")
    axes[0].legend(fontsize=8)
    if trace["alpha"]:
        kk = np.arange(1, len(trace["alpha"]) + 1)
        axes[1].semilogy(kk, trace["alpha"], "o-", label="alpha")
        axes[1].semilogy(kk, trace["beta"], "s--", label="beta")
        axes[1].set_xlabel("level k")
        axes[1].legend(fontsize=8)
    else:
        axes[1].axis("off")
    fig.suptitle(
        f"{report_obj['family']} N={report_obj['n']} gamma={report_obj['gamma']}"
        f" eps={report_obj['epsilon']} total={report_obj['total']:.3g}",
        fontsize=9,
    )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
