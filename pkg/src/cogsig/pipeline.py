"""End-to-end session analysis: quantize, segment, pair, correlate, and
summarize into the cogsig-report-v1 document.

This is the one place the individual analyzers are wired together, shared by
the CLI, the privacy sweep, baseline calibration, and the test harness.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import clc, segmentation
from .complexity import ComplexityProfile, NgramModel, default_model, profile_document
from .entropy_spectral import (
    IkiHistogram,
    SPECTRAL_MIN_LENGTH,
    iki_entropy,
    spectral_slope,
)
from .errors import EmptyLog
from .events import (
    DEFAULT_RESOLUTION_MS,
    Session,
    compute_ikis,
    quantize_session,
    reconstruct_text,
)

REPORT_SCHEMA = "cogsig-report-v1"


@dataclass(frozen=True)
class SessionAnalysis:
    session: Session  # quantized view actually analyzed
    r: int
    word_count: int
    pairs: clc.LatencyComplexityPairs
    clc_report: clc.ClcReport
    segments: list[segmentation.Segment]
    bursts: list[segmentation.Burst]
    revision: segmentation.RevisionStats
    histogram: IkiHistogram
    entropy_bits: float
    spectral_slope_value: float | None
    privacy_mode: bool


def analyze_session(
    session: Session,
    model: NgramModel | None = None,
    r: int = DEFAULT_RESOLUTION_MS,
    planning_threshold_ms: int = segmentation.PLANNING_THRESHOLD_MS,
    burst_break_ms: float = segmentation.BURST_BREAK_MS,
    tau: float = clc.DEFAULT_TAU,
    n_min: int = clc.DEFAULT_N_MIN,
    with_spectrum: bool = True,
) -> SessionAnalysis:
    """Run the full analysis at quantization resolution ``r``.

    Full-mode sessions get their complexity profile from the reconstructed
    text (``model`` defaults to the bundled reference model); privacy-mode
    sessions are paired on their cbin tags instead.
    """
    if len(session.events) < 2:
        raise EmptyLog("need at least 2 events to analyze")
    q = quantize_session(session, r)
    ikis = compute_ikis(q)

    if q.privacy_mode:
        word_count = sum(1 for e in q.events if e.cbin is not None)
        pairs = clc.pair_latency_complexity(q)
    else:
        text, _ = reconstruct_text(q)
        profile = profile_document(model or default_model(), text)
        word_count = len(profile)
        pairs = clc.pair_latency_complexity(q, profile)

    rho = clc.compute_clc(pairs) if pairs.n >= 2 else 0.0
    report = clc.build_report(rho, pairs.n, tau=tau, n_min=n_min)

    slope = None
    if with_spectrum and len(ikis) >= SPECTRAL_MIN_LENGTH and np.ptp(ikis.values) > 0:
        slope = spectral_slope(ikis)

    hist = IkiHistogram.from_ikis(ikis.values, max(r, DEFAULT_RESOLUTION_MS))
    return SessionAnalysis(
        session=q,
        r=int(r),
        word_count=word_count,
        pairs=pairs,
        clc_report=report,
        segments=segmentation.segment_phases(q, planning_threshold_ms),
        bursts=segmentation.detect_bursts(q, burst_break_ms),
        revision=segmentation.revision_stats(q),
        histogram=hist,
        entropy_bits=iki_entropy(hist),
        spectral_slope_value=slope,
        privacy_mode=q.privacy_mode,
    )


def phase_summary(segments: list[segmentation.Segment]) -> dict:
    out = {
        phase: {"count": 0, "total_ms": 0}
        for phase in (segmentation.PLANNING, segmentation.TRANSLATING, segmentation.REVISING)
    }
    for s in segments:
        out[s.phase]["count"] += 1
        out[s.phase]["total_ms"] += s.duration_ms
    return out


def burst_summary(bursts: list[segmentation.Burst]) -> dict:
    lengths = np.asarray([b.length_chars for b in bursts], dtype=np.float64)
    return {
        "count": len(bursts),
        "mean_len_chars": float(lengths.mean()) if len(lengths) else 0.0,
        "sd_len_chars": float(lengths.std(ddof=1)) if len(lengths) > 1 else 0.0,
    }


def report_dict(analysis: SessionAnalysis) -> dict:
    """The cogsig-report-v1 JSON document (plain dict)."""
    rep = analysis.clc_report
    rev = analysis.revision
    return {
        "schema": REPORT_SCHEMA,
        "session": analysis.session.session_id,
        "writer": analysis.session.writer,
        "r_ms": analysis.r,
        "privacy_mode": analysis.privacy_mode,
        "word_count": analysis.word_count,
        "clc": {
            "rho": rep.rho,
            "n": rep.n,
            "verdict": rep.verdict,
            "threshold_used": rep.threshold_used,
            "power_at_n": rep.power_at_n,
        },
        "phase_summary": phase_summary(analysis.segments),
        "burst_summary": burst_summary(analysis.bursts),
        "revision_summary": {
            "revision_episodes": rev.revision_episodes,
            "deleted_chars": rev.deleted_chars,
            "single_char_typo_fixes": rev.single_char_typo_fixes,
            "paste_flags": rev.paste_flags,
        },
        "iki_histogram": {
            "bin_width_ms": analysis.histogram.bin_width_ms,
            "counts": {str(k): v for k, v in sorted(analysis.histogram.counts.items())},
        },
        "entropy_bits": analysis.entropy_bits,
        "spectral_slope": analysis.spectral_slope_value,
    }


def to_privacy_session(session: Session, profile: ComplexityProfile | None = None,
                       model: NgramModel | None = None) -> Session:
    """What a privacy-mode collector would have produced for this session:
    payloads stripped, octile complexity bins attached to word-start events."""
    text, origin = reconstruct_text(session)
    if profile is None:
        profile = profile_document(model or default_model(), text)
    bin_at_event = {
        origin[start]: int(profile.bins[wi])
        for wi, start in enumerate(profile.char_starts)
    }
    events = tuple(
        replace(e, payload=None, cbin=bin_at_event.get(i))
        for i, e in enumerate(session.events)
    )
    return replace(session, events=events, privacy_mode=True)
