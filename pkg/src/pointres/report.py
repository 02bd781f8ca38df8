"""Figure rendering for the report paths.

Everything draws through the Agg backend straight to files; nothing here
opens a window. Each function takes the already-computed result object, so
rendering never recomputes or perturbs the numerics it illustrates.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import ExperimentReport, kmin_limit_cdf
from .rootfind import CountingReport, ResonanceSet


def save_resonance_figure(rs: ResonanceSet, path: str, k_values=None) -> str:
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    if rs.roots:
        re = [r.k.real for r in rs.roots]
        im = [r.k.imag for r in rs.roots]
        sizes = [14.0 * r.multiplicity for r in rs.roots]
        ax.scatter(re, im, s=sizes, c="tab:blue", alpha=0.75, lw=0)
    if k_values:
        x = np.linspace(-rs.region, rs.region, 601)
        for kj in k_values:
            ax.plot(x, -kj * np.log(np.abs(x) + 1.0), lw=0.8, ls="--",
                    label=f"K = {kj:.4g}")
        ax.legend(loc="lower left", fontsize=8)
    ax.set_xlabel("Re k")
    ax.set_ylabel("Im k")
    ax.set_title(f"resonances, |k| <= {rs.region:g}")
    ax.axhline(0.0, color="0.7", lw=0.6)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_counting_figure(cr: CountingReport, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    r = np.asarray(cr.radii)
    n = np.asarray(cr.counts)
    ax.step(r, n, where="post", label="N(R)")
    if math.isfinite(cr.ad_estimate):
        ax.plot(r, cr.ad_estimate * r, ls="--", lw=1.0,
                label=f"slope {cr.ad_estimate:.4g}")
    ax.set_xlabel("R")
    ax.set_ylabel("count")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_log_density_figure(cr: CountingReport, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    h = np.asarray(cr.h_grid)
    low, high = (np.asarray(row) for row in cr.log_counts)
    r0, r1 = cr.log_radii
    ax.step(h, (high - low) / (r1 - r0), where="post",
            label=f"annulus density, R in [{r0:g}, {r1:g}]")
    for loc, height in cr.ad_log_steps:
        ax.axvline(loc, color="tab:red", lw=0.7, ls=":")
        ax.annotate(f"{loc:.3g}", (loc, height), fontsize=7, rotation=90,
                    textcoords="offset points", xytext=(3, 3))
    ax.set_xlabel("h")
    ax.set_ylabel("crossings per unit radius")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_cdf_figure(rep: ExperimentReport, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    if rep.cdf_table:
        t = np.array([row[0] for row in rep.cdf_table])
        f = np.array([row[1] for row in rep.cdf_table])
        ax.step(t, f, where="post", label="empirical")
        if rep.kind == "kmin":
            grid = np.linspace(min(0.0, t.min()), t.max(), 400)
            r = rep.config.get("r", 1.0)
            ax.plot(grid, kmin_limit_cdf(grid, r), ls="--", label="limit law")
    label = f"KS = {rep.ks:.4f}" if rep.ks is not None else ""
    ax.set_xlabel("t")
    ax.set_ylabel("CDF")
    ax.set_title(f"{rep.kind} {label}".strip())
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def save_exceedance_figure(rep: ExperimentReport, path: str) -> str:
    fig, ax = plt.subplots(figsize=(6.5, 4.2))
    vs = rep.aggregates.get("v_values", [])
    ax.hist(vs, bins=40, color="tab:blue", alpha=0.8)
    for key, row in rep.aggregates.get("exceedance", {}).items():
        ax.axvline(row["threshold"], color="tab:red", lw=0.9, ls="--")
        ax.annotate(key, (row["threshold"], ax.get_ylim()[1] * 0.9),
                    fontsize=7, rotation=90)
    ax.set_xlabel("V")
    ax.set_ylabel("trials")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
