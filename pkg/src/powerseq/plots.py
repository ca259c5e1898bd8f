"""Optional figure rendering for report artifacts.

Everything here is presentation only: the delimited/JSON outputs are the
canonical results and the CLI renders these figures only when asked.
Matplotlib is imported lazily with the Agg backend so headless runs and
library users who never plot pay nothing.
"""

from __future__ import annotations

__all__ = ["render_norm_profile", "render_residual_traces", "render_fourier_trace"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_norm_profile(path, entries, title="power-norm profile"):
    """Line plot of log ||T^n|| against n.

    ``entries`` are (n, log_norm) pairs or profile rows (n, log_norm, regime,
    segment); regimes, when present, get their own markers.
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    rows = [tuple(e) for e in entries]
    ns = [r[0] for r in rows]
    logs = [r[1] for r in rows]
    ax.plot(ns, logs, lw=0.8, color="#444444", zorder=1)
    if rows and len(rows[0]) >= 3:
        styles = {"peak": ("^", "#c0392b"), "plateau": ("o", "#2980b9"),
                  "ramp": (".", "#7f8c8d")}
        for regime, (marker, color) in styles.items():
            xs = [r[0] for r in rows if r[2] == regime]
            ys = [r[1] for r in rows if r[2] == regime]
            if xs:
                ax.scatter(xs, ys, s=12, marker=marker, color=color,
                           label=regime, zorder=2)
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("n")
    ax.set_ylabel("log ||T^n||")
    ax.set_title(title)
    ax.axhline(0.0, color="black", lw=0.5, ls=":")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_residual_traces(path, traces, title="power-sequence residuals"):
    """Semilog plot of the named defect traces of a convergence report."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, rows in traces.items():
        rows = [r for r in rows if r[1] > 0]
        if rows:
            ax.semilogy([r[0] for r in rows], [r[1] for r in rows],
                        lw=1.0, label=name)
    ax.set_xlabel("n")
    ax.set_ylabel("defect")
    ax.set_title(title)
    if traces:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_fourier_trace(path, rows, title="Fourier coefficients"):
    """|mu_hat(k)| against k from (k, re, im, abs) rows; log k when spread out."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ks = [r[0] for r in rows]
    mags = [r[3] for r in rows]
    ax.plot(ks, mags, marker="o", ms=3, lw=0.8, color="#2c3e50")
    positive = [k for k in ks if k > 0]
    if positive and max(ks) > 64 * min(positive):
        ax.set_xscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel("|mu_hat(k)|")
    ax.set_ylim(bottom=0.0)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
