"""Scatter figures for two-dimensional covariate data and assignments.

Figures render to standalone SVG bytes with a pinned hash salt and no
date metadata, so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import io

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .core import CovariateSet

__all__ = ["assignment_figure", "render_svg"]

SVG_HASH_SALT = "qbalance"


def assignment_figure(x: CovariateSet, w: np.ndarray | None = None,
                      method: str | None = None,
                      imbalance: float | None = None):
    """Scatter the covariate points, marker class by assignment sign.

    Only 2-D covariates can be drawn. Without an assignment all points
    share one neutral marker class.
    """
    if x.n != 2:
        raise ValueError(f"plotting requires 2-D covariates, got n = {x.n}")
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    pts = x.x
    if w is None:
        ax.scatter(pts[0], pts[1], marker="o", color="0.5",
                   label=f"subjects ({x.m})")
        title = None
    else:
        w = np.asarray(w, dtype=float)
        plus = w > 0
        ax.scatter(pts[0, plus], pts[1, plus], marker="o", color="C0",
                   label=f"group +1 ({int(plus.sum())})")
        ax.scatter(pts[0, ~plus], pts[1, ~plus], marker="s", color="C3",
                   label=f"group -1 ({int((~plus).sum())})")
        title = method or "assignment"
        if imbalance is not None:
            title = f"{title}   imbalance = {imbalance:.4f}"
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.legend(title=title, loc="best")
    fig.tight_layout()
    return fig


def render_svg(fig) -> bytes:
    """Serialize a figure to reproducible standalone SVG bytes."""
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        buffer = io.BytesIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buffer.getvalue()
