"""Figures for the report paths of the command line tool.

Rendering is headless (Agg) and the PNG metadata is stripped so two runs on
the same data write identical bytes.
"""

from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

GOLDEN = (math.sqrt(5) - 1.0) / 2.0
FIG_WIDTH = 5.0
PIECE_COLORS = ["#08589e", "#4eb3d3", "#e34a33", "#fdbb84"]


def setup_style() -> None:
    plt.rc("font", family="serif", size=9)
    plt.rc("axes", labelsize=10, titlesize=10, grid=True)
    plt.rc("grid", linestyle=":", linewidth=0.5, alpha=0.6)
    plt.rc("legend", fontsize=8, frameon=False)
    plt.rc("xtick", labelsize=8)
    plt.rc("ytick", labelsize=8)
    plt.rc("lines", linewidth=1.2, markersize=4)
    plt.rc("figure", figsize=(FIG_WIDTH, FIG_WIDTH * GOLDEN), dpi=100)
    plt.rc("savefig", dpi=150, bbox="tight")


def _save(fig, path) -> None:
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)


def plot_gap(rows: Sequence, path, title: str = "") -> None:
    """Norm estimate and Kazhdan lower bound against the modulus."""
    setup_style()
    ns = [r.modulus for r in rows]
    fig, ax = plt.subplots()
    ax.plot(ns, [r.norm_estimate for r in rows], "o-", color="#08589e", label=r"$\|\pi(\mu_S)\|$ on $\ell^2_0$")
    ax.plot(ns, [r.kazhdan_lower for r in rows], "s--", color="#e34a33", label=r"$1 - $ certified upper")
    bad = [r for r in rows if r.components > 1]
    if bad:
        ax.plot([r.modulus for r in bad], [r.norm_estimate for r in bad], "x", color="k", label="disconnected")
    ax.set_xlabel("modulus $n$")
    ax.set_ylabel("value")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="center right")
    _save(fig, path)


def plot_pieces(rows: Sequence[tuple[float, float, int, int]], path, title: str = "") -> None:
    """Explored orbit points coloured by piece, on signed log axes."""
    setup_style()
    fig, ax = plt.subplots(figsize=(FIG_WIDTH, FIG_WIDTH))
    for k in range(1, 5):
        pts = [(x, y) for x, y, piece, _ in rows if piece == k]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=6, color=PIECE_COLORS[k - 1], label=f"$A_{k}$ ({len(pts)})", linewidths=0)
    ax.set_xlabel(r"$\mathrm{sign}(x)\,\log_{10}(1+|x|)$")
    ax.set_ylabel(r"$\mathrm{sign}(y)\,\log_{10}(1+|y|)$")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", markerscale=2)
    _save(fig, path)
