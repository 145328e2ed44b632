"""Matplotlib rendering for the report-producing CLI paths.

Kept separate from the computations: every figure here is drawn from the
same arrays that go into the delimited output, so the rendered file is a
view of the CSV, never an extra computation.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.labelsize": 11,
    "legend.fontsize": 9,
}


def save_curves(path: str, x: np.ndarray, curves: dict, xlabel: str,
                ylabel: str, title: str = "") -> None:
    """Write a line plot of named curves over a shared abscissa."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for label, y in curves.items():
            ax.plot(x, y, label=label, lw=1.2)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title, fontsize=11)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def save_heatmap(path: str, x: np.ndarray, y: np.ndarray, z: np.ndarray,
                 xlabel: str, ylabel: str, title: str = "") -> None:
    """Write a pcolormesh of z(x, y); z is indexed [ix, iy]."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        mesh = ax.pcolormesh(x, y, z.T, shading="auto", cmap="viridis")
        fig.colorbar(mesh, ax=ax)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title, fontsize=11)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
