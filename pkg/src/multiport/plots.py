"""Figure rendering for the command-line reports.

Every function takes data already computed by the library, draws a single
matplotlib figure with the Agg backend, and writes it to a file; nothing here
ever opens a window or recomputes physics.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_hom(grid, p_boson, p_fermion, path: str) -> None:
    """Coincidence probability vs delay-bandwidth product for both classes."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid, p_boson, label="boson", color="tab:blue")
    ax.plot(grid, p_fermion, label="fermion", color="tab:red")
    ax.axhline(0.5, color="gray", lw=0.8, ls="--", label="distinguishable")
    ax.set_xlabel(r"$\Delta\omega\,\Delta\tau$")
    ax.set_ylabel("coincidence probability")
    ax.set_ylim(-0.05, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_dist_scan(grid, curves: dict, path: str) -> None:
    """Transition probabilities vs delay for several output sets.

    ``curves`` maps a label like "1,2,3 boson" to a list of probabilities
    aligned with ``grid``.
    """
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, values in curves.items():
        style = "-" if label.endswith("boson") else "--"
        ax.plot(grid, values, style, label=label)
    ax.set_xlabel(r"$\Delta\omega\,\Delta\tau$")
    ax.set_ylabel("transition probability")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scatter(points: dict, predictions: dict, path: str) -> None:
    """(NM, CV) scatter per particle class with the closed-form predictions.

    ``points`` maps a class label to a list of (nm, cv) pairs; ``predictions``
    maps the same labels to a single (nm, cv) pair.
    """
    colors = {"boson": "tab:blue", "thermal": "tab:orange",
              "fermion": "tab:red", "dist": "tab:green"}
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, pts in points.items():
        if not pts:
            continue
        nm, cv = zip(*pts)
        ax.scatter(nm, cv, s=12, alpha=0.6,
                   color=colors.get(label, "black"), label=label)
    for label, (nm, cv) in predictions.items():
        ax.scatter([nm], [cv], marker="x", s=80,
                   color=colors.get(label, "black"))
    ax.set_xlabel("NM")
    ax.set_ylabel("CV")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
