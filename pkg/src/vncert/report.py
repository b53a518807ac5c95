"""Figure rendering for sweep results.

Sweeps emit delimited data (CSV or JSON lines); when plotting is
requested the same rows are also rendered to PNG files next to the data:
one figure per scheme, analytic curves with empirical error bars.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_MODE_STYLE = {
    "both-unknown": dict(color="tab:blue", marker="o"),
    "one-fixed": dict(color="tab:red", marker="s"),
}


def _rows_for(rows, scheme, mode):
    sel = [r for r in rows if r["scheme"] == scheme and r["mode"] == mode]
    return sorted(sel, key=lambda r: r["d"])


def _plot_scheme(ax, rows, scheme, analytic_key, value_key, stderr_key, ylabel):
    for mode, style in _MODE_STYLE.items():
        sel = _rows_for(rows, scheme, mode)
        if not sel:
            continue
        ds = [r["d"] for r in sel]
        ax.plot(ds, [r[analytic_key] for r in sel], "-", color=style["color"],
                label=f"{mode} (analytic)")
        ax.errorbar(ds, [r[value_key] for r in sel],
                    yerr=[4 * r[stderr_key] for r in sel], fmt=style["marker"],
                    color=style["color"], capsize=3, linestyle="none",
                    label=f"{mode} (empirical, 4 s.e.)")
    ax.set_xlabel("dimension d")
    ax.set_ylabel(ylabel)
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)


def save_sweep_figures(rows: list[dict], out_dir, stem: str) -> list[Path]:
    """Render one figure per scheme present in ``rows``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    if any(r["scheme"] == "symmetric" for r in rows):
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        _plot_scheme(ax, rows, "symmetric", "p_succ_analytic", "p_succ_hat",
                     "p_succ_stderr", "success probability")
        ax.set_title("Symmetric discrimination")
        fig.tight_layout()
        path = out_dir / f"{stem}_symmetric.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    if any(r["scheme"] == "asymmetric" for r in rows):
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        _plot_scheme(ax, rows, "asymmetric", "p2_analytic", "p2_hat",
                     "p2_stderr", "false negative probability")
        ax.set_title("Asymmetric discrimination (false positives structurally zero)")
        fig.tight_layout()
        path = out_dir / f"{stem}_asymmetric.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
