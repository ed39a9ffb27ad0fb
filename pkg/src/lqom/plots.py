"""Static SVG figures for the CLI. Output is byte-stable for fixed data."""
from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .output import atomic_write  # noqa: E402

STYLE = {
    "svg.hashsalt": "lqom",
    "svg.fonttype": "path",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
}


def _save(fig, path):
    buf = io.BytesIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return atomic_write(path, buf.getvalue())


def line_panels(path, x, panels, xlabel, title=None):
    """``panels`` maps y-label -> {legend label: y-array}; one subplot per entry."""
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(len(panels), 1, figsize=(6, 2.6 * len(panels)), sharex=True, squeeze=False)
        for ax, (ylabel, series) in zip(axes[:, 0], panels.items()):
            for label, y in series.items():
                ax.plot(x, y, label=label)
            ax.set_ylabel(ylabel)
            if len(series) > 1:
                ax.legend(frameon=False, fontsize=8)
        axes[-1, 0].set_xlabel(xlabel)
        if title:
            axes[0, 0].set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def level_diagram(path, x, curves, xlabel, ylabel="energy"):
    """Energy levels; ``curves`` maps (n, N) -> y-array. Colour encodes n, dash encodes N."""
    colours = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    dashes = ["-", "--", "-.", ":"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 4))
        for (n, N), y in sorted(curves.items()):
            ax.plot(x, y, dashes[N % len(dashes)], color=colours[n % len(colours)], label=f"n={n}, N={N}")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(frameon=False, fontsize=6, ncol=2)
        fig.tight_layout()
        return _save(fig, path)


def heatmap(path, t, omega, Z, title=None):
    """Spectrum map, omega vertical and time horizontal; ``Z`` has shape (omega, t) on uniform grids."""
    Z = np.asarray(Z)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 4))
        t, omega = np.asarray(t), np.asarray(omega)
        mesh = ax.imshow(
            Z,
            origin="lower",
            aspect="auto",
            cmap="viridis",
            interpolation="nearest",
            extent=(t[0], t[-1] if t[-1] > t[0] else t[0] + 1, omega[0], omega[-1]),
        )
        fig.colorbar(mesh, ax=ax, label="S(omega; t)")
        ax.set_xlabel("t")
        ax.set_ylabel("omega")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)
