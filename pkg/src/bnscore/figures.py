"""Render sweep curves to PNG files (headless matplotlib)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .analysis import SweepCurve  # noqa: E402

__all__ = ["render_sweep_figures"]

_COLORS = {"bdeu": "tab:orange", "bds": "darkblue"}
_PANEL_TITLES = ("singular fixture (d1)", "non-singular fixture (d2)")


def _closest_to_one(alphas):
    return min(range(len(alphas)), key=lambda i: abs(alphas[i] - 1.0))


def _two_panel(curve_d1: SweepCurve, curve_d2: SweepCurve, extract, ylabel: str,
               path: Path, logy: bool = False) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for ax, curve, title in zip(axes, (curve_d1, curve_d2), _PANEL_TITLES):
        for kind in ("bdeu", "bds"):
            recs = curve.for_score(kind)
            if not recs:
                continue
            xs = [r.alpha for r in recs]
            ys = [extract(r) for r in recs]
            ax.plot(xs, ys, color=_COLORS[kind], label=kind)
            i1 = _closest_to_one(xs)
            ax.plot([xs[i1]], [ys[i1]], "o", color=_COLORS[kind], markersize=5)
        ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel("imaginary sample size alpha")
        ax.set_title(title)
        ax.legend()
    axes[0].set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_single_sweep(curve: SweepCurve, path: str | Path) -> Path:
    """One figure for one DAG pair: Bayes factor and the two difference panels."""
    import math

    path = Path(path)
    fig, axes = plt.subplots(1, 3, figsize=(12.0, 3.4))
    panels = (
        (lambda r: math.exp(r.log_bf_rev), "Bayes factor (g+ / g-)", True),
        (lambda r: r.ee_minus - r.ee_plus, "expected entropy difference", False),
        (lambda r: r.me_minus - r.me_plus, "weighted entropy difference", False),
    )
    for ax, (extract, label, logy) in zip(axes, panels):
        for kind in sorted({r.score for r in curve.records}):
            recs = curve.for_score(kind)
            xs = [r.alpha for r in recs]
            ax.plot(xs, [extract(r) for r in recs], color=_COLORS.get(kind), label=kind)
        ax.set_xscale("log")
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel("imaginary sample size alpha")
        ax.set_ylabel(label)
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_sweep_figures(curve_d1: SweepCurve, curve_d2: SweepCurve,
                         out_dir: str | Path) -> list[Path]:
    """Write the three standard figures; returns the created paths.

    Bayes factors are plotted in the (larger DAG / smaller DAG) orientation,
    the one whose natural range matches the bundled reference curves; the
    difference panels subtract the larger DAG's quantity from the smaller's.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    import math

    return [
        _two_panel(
            curve_d1,
            curve_d2,
            lambda r: math.exp(r.log_bf_rev),
            "Bayes factor (g+ / g-)",
            out / "bayes_factors.png",
            logy=True,
        ),
        _two_panel(
            curve_d1,
            curve_d2,
            lambda r: r.ee_minus - r.ee_plus,
            "expected entropy difference (g- minus g+)",
            out / "expected_entropy_difference.png",
        ),
        _two_panel(
            curve_d1,
            curve_d2,
            lambda r: r.me_minus - r.me_plus,
            "weighted entropy difference (g- minus g+)",
            out / "me_difference.png",
        ),
    ]
