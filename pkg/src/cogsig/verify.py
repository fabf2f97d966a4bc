"""Tamper-evident evidence records and multi-session consistency checks.

An evidence record keeps only aggregates: the rounded CLC score, the
quantized IKI histogram, phase/revision/burst summaries, and a salt. Raw
timings and text never enter the record, so retaining it after a decision
leaks neither content nor a usable biometric. The commitment is SHA-256
over a canonical serialization (UTF-8, lexicographically sorted keys, no
insignificant whitespace, shortest round-trip numbers), which makes the
digest reproducible across independent implementations.

Consistency checking follows the forgery model: a rehearsed performance can
fake one session, but across sessions it shows implausibly uniform CLC,
suppressed revision activity, and uniform bursts. Acceptance intervals are
calibrated by resampling a genuine synthesized population rather than by a
closed-form variance test, because CLC is bounded and non-Gaussian.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources

import numpy as np

from .clc import ClcReport
from .errors import IncompleteAnalysis, SerializationFailure, TooFewSessions
from .pipeline import SessionAnalysis, analyze_session, burst_summary, phase_summary

EVIDENCE_SCHEMA = "cogsig-evr-v1"
SALT_BYTES = 16

_ALLOWED_KEYS = {
    "schema_version",
    "writer",
    "session",
    "word_count",
    "clc_rounded",
    "verdict",
    "iki_histogram",
    "phase_summary",
    "revision_summary",
    "burst_summary",
    "salt",
    "created_at",
}


def canonical_bytes(obj) -> bytes:
    """Canonical JSON: sorted keys, compact separators, UTF-8, shortest
    round-trip decimal floats, no NaN/Inf."""
    try:
        return json.dumps(
            obj,
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
            allow_nan=False,
        ).encode("utf-8")
    except (TypeError, ValueError) as exc:
        raise SerializationFailure(str(exc)) from None


@dataclass(frozen=True)
class EvidenceRecord:
    writer: str
    session: str
    word_count: int
    clc_rounded: float
    verdict: str
    iki_histogram: dict
    phase_summary: dict
    revision_summary: dict
    burst_summary: dict
    salt: str  # 16 random bytes, lowercase hex
    created_at: str
    schema_version: str = EVIDENCE_SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "writer": self.writer,
            "session": self.session,
            "word_count": self.word_count,
            "clc_rounded": self.clc_rounded,
            "verdict": self.verdict,
            "iki_histogram": self.iki_histogram,
            "phase_summary": self.phase_summary,
            "revision_summary": self.revision_summary,
            "burst_summary": self.burst_summary,
            "salt": self.salt,
            "created_at": self.created_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvidenceRecord":
        extra = set(d) - _ALLOWED_KEYS
        if extra:
            raise SerializationFailure(f"unexpected evidence fields: {sorted(extra)}")
        return cls(**{k: d[k] for k in d if k != "schema_version"},
                   schema_version=d.get("schema_version", EVIDENCE_SCHEMA))


def round_clc(rho: float) -> float:
    value = round(float(rho), 2)
    return 0.0 if value == 0.0 else value  # normalize -0.0


def build_evidence(
    report: ClcReport,
    aggregates: dict,
    salt: bytes,
    created_at: str | None = None,
) -> EvidenceRecord:
    """Assemble the record from a CLC report and session aggregates.

    ``aggregates`` must carry writer, session, word_count, iki_histogram,
    phase_summary, revision_summary and burst_summary (the shape produced by
    ``evidence_aggregates``). Deterministic given inputs, salt and
    created_at.
    """
    required = {
        "writer", "session", "word_count", "iki_histogram",
        "phase_summary", "revision_summary", "burst_summary",
    }
    missing = required - set(aggregates)
    if missing:
        raise IncompleteAnalysis(f"missing aggregates: {sorted(missing)}")
    if len(salt) != SALT_BYTES:
        raise IncompleteAnalysis(f"salt must be {SALT_BYTES} bytes, got {len(salt)}")
    return EvidenceRecord(
        writer=str(aggregates["writer"]),
        session=str(aggregates["session"]),
        word_count=int(aggregates["word_count"]),
        clc_rounded=round_clc(report.rho),
        verdict=report.verdict,
        iki_histogram=aggregates["iki_histogram"],
        phase_summary=aggregates["phase_summary"],
        revision_summary=aggregates["revision_summary"],
        burst_summary=aggregates["burst_summary"],
        salt=salt.hex(),
        created_at=created_at or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def evidence_aggregates(analysis: SessionAnalysis) -> dict:
    return {
        "writer": analysis.session.writer,
        "session": analysis.session.session_id,
        "word_count": analysis.word_count,
        "iki_histogram": {
            "bin_width_ms": analysis.histogram.bin_width_ms,
            "counts": {str(k): v for k, v in sorted(analysis.histogram.counts.items())},
        },
        "phase_summary": phase_summary(analysis.segments),
        "revision_summary": {
            "revision_episodes": analysis.revision.revision_episodes,
            "deleted_chars": analysis.revision.deleted_chars,
            "single_char_typo_fixes": analysis.revision.single_char_typo_fixes,
            "paste_flags": analysis.revision.paste_flags,
        },
        "burst_summary": burst_summary(analysis.bursts),
    }


def commit(record: EvidenceRecord) -> str:
    """SHA-256 digest (lowercase hex) of the canonical serialization."""
    return hashlib.sha256(canonical_bytes(record.to_dict())).hexdigest()


def verify_commitment(record: EvidenceRecord, digest: str) -> bool:
    return commit(record) == digest.lower()


def audit_content_free(record_dict: dict) -> list[str]:
    """Schema-level privacy audit: no per-event arrays, no text payloads.

    Returns a list of violations (empty means the record is content-free).
    """
    issues = []
    extra = set(record_dict) - _ALLOWED_KEYS
    if extra:
        issues.append(f"unexpected fields: {sorted(extra)}")

    def walk(node, path):
        if isinstance(node, list):
            issues.append(f"{path}: arrays are not allowed in evidence records")
        elif isinstance(node, dict):
            for k, v in node.items():
                walk(v, f"{path}.{k}")
        elif isinstance(node, str):
            if path.split(".")[-1] not in (
                "schema_version", "writer", "session", "verdict", "salt", "created_at",
            ) and not node.isdigit():
                issues.append(f"{path}: unexpected free-form string")
            if len(node) > 64:
                issues.append(f"{path}: string too long for an aggregate field")

    walk(record_dict, "record")
    return issues


# --- baselines and consistency ----------------------------------------------

@dataclass(frozen=True)
class BaselineProfile:
    writer: str
    clc_mean: float
    clc_var: float
    burst_len_mean: float
    revision_rate_mean: float  # revision episodes per word
    sessions_observed: int

    def to_dict(self) -> dict:
        return {
            "writer": self.writer,
            "clc_mean": self.clc_mean,
            "clc_var": self.clc_var,
            "burst_len_mean": self.burst_len_mean,
            "revision_rate_mean": self.revision_rate_mean,
            "sessions_observed": self.sessions_observed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BaselineProfile":
        return cls(**d)


def calibrate_baseline(sessions, model=None, r: int = 5) -> BaselineProfile:
    """Trust-on-first-use enrollment: per-writer means/variances over >= 3
    sessions verified genuine at enrollment time."""
    sessions = list(sessions)
    if len(sessions) < 3:
        raise TooFewSessions(f"enrollment needs >= 3 sessions, got {len(sessions)}")
    analyses = [analyze_session(s, model=model, r=r, with_spectrum=False) for s in sessions]
    clcs = np.asarray([a.clc_report.rho for a in analyses])
    bursts = np.asarray([burst_summary(a.bursts)["mean_len_chars"] for a in analyses])
    rates = np.asarray(
        [a.revision.revision_episodes / max(a.word_count, 1) for a in analyses]
    )
    return BaselineProfile(
        writer=sessions[0].writer,
        clc_mean=float(clcs.mean()),
        clc_var=float(clcs.var(ddof=1)),
        burst_len_mean=float(bursts.mean()),
        revision_rate_mean=float(rates.mean()),
        sessions_observed=len(sessions),
    )


@dataclass(frozen=True)
class PopulationNorms:
    """Per-session statistics of a genuine reference population; acceptance
    intervals for profiles of m sessions are derived from these pools by
    seeded resampling (a synthesizer-calibrated stand-in for field norms)."""

    clc: np.ndarray
    revision_rate: np.ndarray
    burst_len_sd: np.ndarray
    source: str = "synthetic"

    @classmethod
    def from_dict(cls, d: dict) -> "PopulationNorms":
        return cls(
            clc=np.asarray(d["clc"], dtype=np.float64),
            revision_rate=np.asarray(d["revision_rate"], dtype=np.float64),
            burst_len_sd=np.asarray(d["burst_len_sd"], dtype=np.float64),
            source=d.get("source", "synthetic"),
        )

    def to_dict(self) -> dict:
        return {
            "clc": self.clc.tolist(),
            "revision_rate": self.revision_rate.tolist(),
            "burst_len_sd": self.burst_len_sd.tolist(),
            "source": self.source,
        }


def _sample_var(a: np.ndarray, axis: int) -> np.ndarray:
    return np.var(a, axis=axis, ddof=1)


_NORMS_CACHE: PopulationNorms | None = None
_BOOT_REPS = 4000
_BOOT_SEED = 20240917
# FPR budget per component; roughly 3% joint on genuine profiles
CLC_VAR_Q = (0.005, 0.995)
LOW_DISPERSION_Q = 0.002


def default_population_norms() -> PopulationNorms:
    global _NORMS_CACHE
    if _NORMS_CACHE is None:
        raw = resources.files("cogsig.data").joinpath("population_norms.json").read_text("utf-8")
        _NORMS_CACHE = PopulationNorms.from_dict(json.loads(raw))
    return _NORMS_CACHE


def _bootstrap_interval(pool: np.ndarray, m: int, stat, q_lo: float, q_hi: float,
                        seed: int = _BOOT_SEED) -> tuple[float, float]:
    rng = np.random.Generator(np.random.PCG64(seed))
    idx = rng.integers(0, len(pool), size=(_BOOT_REPS, m))
    stats = stat(pool[idx], axis=1)
    return float(np.quantile(stats, q_lo)), float(np.quantile(stats, q_hi))


@dataclass(frozen=True)
class ConsistencyResult:
    flag: bool
    n_records: int
    statistics: dict = field(default_factory=dict)


def consistency_check(
    records,
    norms: PopulationNorms | None = None,
    baseline: BaselineProfile | None = None,
) -> ConsistencyResult:
    """Flag a writer's record set when (a) within-writer CLC variance falls
    outside the population-calibrated acceptance interval, or (b) revision
    rate or burst-length dispersion is anomalously low.

    The enrolled baseline, when given, contributes a reported mean-shift
    statistic but does not by itself raise the flag.

    Norms are a normed-test reference: the bundled pool is calibrated on
    1500-word sessions, and burst-length dispersion in particular shifts
    with session length. For a different deployment regime, rebuild the
    pool from matching sessions (scripts/build_data.py).
    """
    records = list(records)
    if len(records) < 2:
        raise TooFewSessions(f"need >= 2 records for a consistency check, got {len(records)}")
    writers = {r.writer for r in records}
    if len(writers) != 1:
        raise TooFewSessions(f"records span multiple writers: {sorted(writers)}")
    norms = norms or default_population_norms()
    m = len(records)

    clcs = np.asarray([r.clc_rounded for r in records])
    rates = np.asarray(
        [r.revision_summary["revision_episodes"] / max(r.word_count, 1) for r in records]
    )
    burst_sds = np.asarray([r.burst_summary["sd_len_chars"] for r in records])

    clc_var = float(clcs.var(ddof=1))
    var_lo, var_hi = _bootstrap_interval(np.round(norms.clc, 2), m, _sample_var, *CLC_VAR_Q)
    rate_lo, _ = _bootstrap_interval(norms.revision_rate, m, np.mean, LOW_DISPERSION_Q, 0.5)
    bsd_lo, _ = _bootstrap_interval(norms.burst_len_sd, m, np.mean, LOW_DISPERSION_Q, 0.5)

    variance_flag = not (var_lo <= clc_var <= var_hi)
    revision_flag = float(rates.mean()) < rate_lo
    burst_flag = float(burst_sds.mean()) < bsd_lo

    stats: dict = {
        "clc_variance": clc_var,
        "clc_variance_interval": [var_lo, var_hi],
        "clc_variance_flag": variance_flag,
        "revision_rate_mean": float(rates.mean()),
        "revision_rate_min": rate_lo,
        "revision_rate_flag": revision_flag,
        "burst_len_sd_mean": float(burst_sds.mean()),
        "burst_len_sd_min": bsd_lo,
        "burst_len_sd_flag": burst_flag,
    }
    if baseline is not None:
        shift = float(clcs.mean()) - baseline.clc_mean
        pop_sd = float(np.std(norms.clc, ddof=1))
        stats["baseline_mean_shift"] = shift
        stats["baseline_mean_shift_sigmas"] = (
            shift / (pop_sd / math.sqrt(m)) if pop_sd > 0 else 0.0
        )
    return ConsistencyResult(
        flag=variance_flag or revision_flag or burst_flag,
        n_records=m,
        statistics=stats,
    )
