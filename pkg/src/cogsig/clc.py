"""Cognitive Load Correlation: rank correlation between per-word complexity
and the pause preceding each word, plus the composition/transcription
decision rule and its statistical power.

The estimator is Spearman's rho with average-rank tie handling. Rank
correlation is invariant under any strictly monotone transform of either
coordinate, which is what makes the verdict robust to privacy quantization
whenever quantization preserves the pause order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .complexity import ComplexityProfile, tokenize
from .errors import AlignmentFailure, InvalidParameters, TooFewPairs
from .events import Session, reconstruct_text

DEFAULT_TAU = 0.22
DEFAULT_N_MIN = 100

# Root of equal likelihood between the two Gaussian population models
# N(0.45, 0.12^2) and N(0.07, 0.08^2) used for threshold derivation and
# synthesis targets. Re-derived by tests/test_clc.py via numeric
# root-finding; the shipped default threshold stays at DEFAULT_TAU.
EQUAL_LIKELIHOOD_TAU = 0.232131

COMPOSITION_MEAN = 0.45
COMPOSITION_SD = 0.12
TRANSCRIPTION_MEAN = 0.07
TRANSCRIPTION_SD = 0.08

_NORMAL = NormalDist()


@dataclass(frozen=True)
class LatencyComplexityPairs:
    pauses_ms: np.ndarray
    complexity: np.ndarray  # surprisal bits, or cbin levels in privacy mode

    @property
    def n(self) -> int:
        return len(self.pauses_ms)


@dataclass(frozen=True)
class ClcReport:
    rho: float
    n: int
    verdict: str  # composition | transcription | inconclusive
    threshold_used: float
    power_at_n: float | None


def pair_latency_complexity(
    session: Session, profile: ComplexityProfile | None = None
) -> LatencyComplexityPairs:
    """Pair each word (after the first) with the IKI that precedes its first
    character.

    Full mode requires a profile computed on the session's reconstructed
    text; privacy mode reads the cbin tags the collector attached to
    word-start events.
    """
    t = session.times()
    if session.privacy_mode:
        idxs = [i for i, e in enumerate(session.events) if e.cbin is not None]
        if not idxs:
            raise AlignmentFailure("privacy-mode session has no cbin tags")
        pauses, levels = [], []
        for i in idxs[1:]:  # first word has no preceding pause
            pauses.append(t[i] - t[i - 1])
            levels.append(session.events[i].cbin)
        return LatencyComplexityPairs(
            pauses_ms=np.asarray(pauses, dtype=np.int64),
            complexity=np.asarray(levels, dtype=np.float64),
        )

    if profile is None:
        raise AlignmentFailure("full-mode pairing requires a complexity profile")
    text, origin = reconstruct_text(session)
    words = tuple(tok.word for tok in tokenize(text))
    if words != profile.words:
        raise AlignmentFailure(
            "profile does not match the reconstructed document "
            f"({len(profile.words)} vs {len(words)} words)"
        )
    pauses, bits = [], []
    for wi in range(1, len(profile.words)):
        ev = origin[profile.char_starts[wi]]
        if ev == 0:
            continue
        pauses.append(t[ev] - t[ev - 1])
        bits.append(profile.surprisal_bits[wi])
    return LatencyComplexityPairs(
        pauses_ms=np.asarray(pauses, dtype=np.int64),
        complexity=np.asarray(bits, dtype=np.float64),
    )


def average_ranks(a: np.ndarray) -> np.ndarray:
    """1-based ranks with ties assigned the mean of their positions."""
    a = np.asarray(a)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(len(a), dtype=np.float64)
    sorted_a = a[order]
    i = 0
    while i < len(a):
        j = i
        while j + 1 < len(a) and sorted_a[j + 1] == sorted_a[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x: np.ndarray, y: np.ndarray) -> float:
    """Spearman rank correlation (Pearson correlation of average ranks)."""
    rx = average_ranks(x)
    ry = average_ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = math.sqrt(float(rx @ rx) * float(ry @ ry))
    if denom == 0.0:
        return 0.0  # a constant coordinate carries no rank information
    return float(rx @ ry) / denom


def compute_clc(pairs: LatencyComplexityPairs) -> float:
    if pairs.n < 2:
        raise TooFewPairs(f"need at least 2 pairs, got {pairs.n}")
    return spearman(pairs.pauses_ms, pairs.complexity)


def classify(
    rho: float, n: int, tau: float = DEFAULT_TAU, n_min: int = DEFAULT_N_MIN
) -> str:
    """composition if rho >= tau, transcription if rho < tau; inconclusive
    whenever fewer than n_min pairs back the estimate."""
    if n < n_min:
        return "inconclusive"
    return "composition" if rho >= tau else "transcription"


def power(n: int, rho1: float, rho0: float, alpha: float = 0.05) -> float:
    """Power of the one-sided Fisher-z test separating rho1 from rho0 at
    level alpha with n pairs (normal approximation, SE = 1/sqrt(n-3))."""
    if n < 4:
        raise InvalidParameters(f"need n >= 4, got {n}")
    if not (-1.0 < rho0 <= rho1 < 1.0):
        raise InvalidParameters(f"need -1 < rho0 <= rho1 < 1, got {rho0}, {rho1}")
    if not (0.0 < alpha < 1.0):
        raise InvalidParameters(f"need 0 < alpha < 1, got {alpha}")
    delta = math.atanh(rho1) - math.atanh(rho0)
    z_crit = _NORMAL.inv_cdf(1.0 - alpha)
    return _NORMAL.cdf(delta * math.sqrt(n - 3) - z_crit)


def build_report(
    rho: float,
    n: int,
    tau: float = DEFAULT_TAU,
    n_min: int = DEFAULT_N_MIN,
    alpha: float = 0.05,
) -> ClcReport:
    """Assemble the decision report; power is quoted for the conservative
    class edges (0.35 vs 0.12) at the observed pair count."""
    power_at_n = power(n, 0.35, 0.12, alpha) if n >= 4 else None
    return ClcReport(
        rho=float(rho),
        n=int(n),
        verdict=classify(rho, n, tau=tau, n_min=n_min),
        threshold_used=float(tau),
        power_at_n=power_at_n,
    )
