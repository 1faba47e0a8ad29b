"""Figure rendering for scan output.

Matplotlib is imported lazily so the data path never touches it; scans
render to files only (Agg backend), never to a screen.
"""

from __future__ import annotations

__all__ = ["render_bs_scan", "render_lossy_scan"]


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    return plt, fig, ax


def render_bs_scan(rows: list[dict], path: str) -> None:
    """Anticoncentration score versus photon number, one curve per m/n ratio."""
    plt, fig, ax = _axes()
    ratios = sorted({row["ratio"] for row in rows})
    for ratio in ratios:
        pts = [(row["n"], row["ac"]) for row in rows if row["ratio"] == ratio]
        pts.sort()
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            marker=".",
            markersize=3,
            linewidth=1.0,
            label=f"m = {ratio}n",
        )
    ax.set_xlabel("photon number n")
    ax.set_ylabel("anticoncentration score")
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_lossy_scan(rows: list[dict], path: str) -> None:
    """Lossy fidelity versus mode count, one curve per transmissivity."""
    plt, fig, ax = _axes()
    etas = sorted({row["eta"] for row in rows}, reverse=True)
    for eta in etas:
        pts = [(row["m"], row["fidelity"]) for row in rows if row["eta"] == eta]
        pts.sort()
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            marker="o",
            markersize=3,
            linewidth=1.0,
            label=f"eta = {eta:g}",
        )
    ax.set_xlabel("number of modes m")
    ax.set_ylabel("LXEB fidelity")
    ax.grid(alpha=0.3)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
