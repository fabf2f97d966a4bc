"""Figure rendering for the report path.

Two figures back the delimited outputs: a session timeline (log-scale IKI
per keystroke with phase shading) and the privacy-utility tradeoff curve
from a sweep. Rendering is optional and file-based; nothing here touches
the analysis results.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .events import compute_ikis
from .pipeline import SessionAnalysis
from .segmentation import PLANNING, REVISING, TRANSLATING
from .sweep import SweepRow

_PHASE_COLORS = {
    PLANNING: "#4878cf",
    TRANSLATING: "#6acc65",
    REVISING: "#ee854a",
}


def session_timeline_figure(analysis: SessionAnalysis, path: str | Path) -> Path:
    """IKI vs keystroke index on a log scale, phases shaded behind."""
    ikis = compute_ikis(analysis.session).values.astype(float)
    x = np.arange(1, len(ikis) + 1)

    fig, ax = plt.subplots(figsize=(9.0, 3.2))
    for seg in analysis.segments:
        ax.axvspan(
            seg.start_event + 0.5,
            seg.end_event + 0.5,
            color=_PHASE_COLORS[seg.phase],
            alpha=0.15,
            linewidth=0,
        )
    ax.plot(x, np.maximum(ikis, 1.0), ".", markersize=2.5, color="#333333")
    ax.set_yscale("log")
    ax.set_xlabel("keystroke index")
    ax.set_ylabel("IKI (ms)")
    rep = analysis.clc_report
    ax.set_title(
        f"session {analysis.session.session_id or '(unnamed)'}  "
        f"rho={rep.rho:.2f}  verdict={rep.verdict}  r={analysis.r} ms",
        fontsize=10,
    )
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=c, alpha=0.35) for c in _PHASE_COLORS.values()
    ]
    ax.legend(handles, list(_PHASE_COLORS), fontsize=8, loc="upper right", ncol=3)
    ax.grid(True, which="major", alpha=0.25)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def sweep_figure(rows: list[SweepRow], path: str | Path) -> Path:
    """Accuracy and leakage vs quantization resolution, twin axes."""
    r = [row.r_ms for row in rows]
    acc = [100.0 * row.accuracy for row in rows]
    pooled = [row.pooled_entropy_bits for row in rows]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(r, acc, "o-", color="#2166ac", label="CLC accuracy (%)")
    ax.set_xlabel("resolution r (ms)")
    ax.set_ylabel("accuracy (%)", color="#2166ac")
    ax.set_ylim(0, 100)
    ax2 = ax.twinx()
    ax2.plot(r, pooled, "^-", color="#b2182b", label="pooled IKI entropy (bits)")
    ax2.set_ylabel("pooled entropy (bits)", color="#b2182b")
    ax.grid(True, alpha=0.25)
    lines, labels = ax.get_legend_handles_labels()
    lines2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(lines + lines2, labels + labels2, fontsize=8, loc="lower left")
    ax.set_title("privacy-utility tradeoff (quantized IKIs)", fontsize=10)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
