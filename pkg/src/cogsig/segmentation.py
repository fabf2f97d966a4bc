"""Timeline segmentation into planning / translating / revising phases,
burst detection, and revision statistics.

Phase rules, applied per inter-key interval:

* any IKI >= planning threshold (default 1000 ms) is its own planning
  segment, regardless of what surrounds it;
* a run of >= 2 consecutive backspace/delete events, its entry interval,
  and the contiguous insert run that follows (the retyping) are revising;
* everything else is translating.

Planning takes precedence on ties: a long pause right before a deletion run
is planning, the deletions themselves are revising.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyLog
from .events import Session, compute_ikis

PLANNING_THRESHOLD_MS = 1000
BURST_BREAK_MS = 2000

PLANNING = "planning"
TRANSLATING = "translating"
REVISING = "revising"

_DELETING = ("backspace", "delete")


@dataclass(frozen=True)
class Segment:
    phase: str
    start_event: int
    end_event: int  # index of the event closing the last interval
    duration_ms: int
    mean_iki_ms: float


@dataclass(frozen=True)
class Burst:
    start_event: int
    end_event: int
    length_chars: int
    mean_iki_ms: float


@dataclass(frozen=True)
class RevisionStats:
    revision_episodes: int
    deleted_chars: int
    single_char_typo_fixes: int
    paste_flags: int


def _deletion_runs(kinds: list[str], min_len: int = 2) -> list[tuple[int, int]]:
    """Maximal [start, end] event ranges of consecutive deletions."""
    runs = []
    i = 0
    n = len(kinds)
    while i < n:
        if kinds[i] in _DELETING:
            j = i
            while j + 1 < n and kinds[j + 1] in _DELETING:
                j += 1
            if j - i + 1 >= min_len:
                runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def segment_phases(
    session: Session, planning_threshold_ms: int = PLANNING_THRESHOLD_MS
) -> list[Segment]:
    """Label every inter-key interval and merge runs into tiling segments."""
    if len(session.events) < 2:
        raise EmptyLog("need at least 2 events to segment")
    ikis = compute_ikis(session).values
    kinds = [e.kind for e in session.events]
    t = session.times()
    n_iki = len(ikis)

    phase = np.full(n_iki, 1, dtype=np.int8)  # 0 planning, 1 translating, 2 revising

    for a, b in _deletion_runs(kinds):
        # entry interval + intra-run intervals
        lo = max(a - 1, 0)
        phase[lo:b] = 2
        # retyping: contiguous inserts after the run, stopped by a planning pause
        e = b
        while (
            e + 1 < len(kinds)
            and kinds[e + 1] == "insert"
            and ikis[e] < planning_threshold_ms
        ):
            phase[e] = 2
            e += 1

    phase[ikis >= planning_threshold_ms] = 0  # planning wins ties

    segments: list[Segment] = []
    i = 0
    while i < n_iki:
        if phase[i] == 0:
            j = i  # planning segments hold exactly one long interval
        else:
            j = i
            while j + 1 < n_iki and phase[j + 1] == phase[i]:
                j += 1
        name = (PLANNING, TRANSLATING, REVISING)[phase[i]]
        segments.append(
            Segment(
                phase=name,
                start_event=i,
                end_event=j + 1,
                duration_ms=int(t[j + 1] - t[i]),
                mean_iki_ms=float(np.mean(ikis[i : j + 1])),
            )
        )
        i = j + 1
    return segments


def detect_bursts(session: Session, burst_break_ms: float = BURST_BREAK_MS) -> list[Burst]:
    """Maximal runs of insert events whose internal IKIs stay below the
    break threshold; any deletion (or other non-insert event) ends a burst."""
    if len(session.events) < 2:
        raise EmptyLog("need at least 2 events to detect bursts")
    ikis = compute_ikis(session).values
    kinds = [e.kind for e in session.events]
    bursts: list[Burst] = []

    def emit(a: int, b: int) -> None:
        internal = ikis[a:b]  # intervals strictly inside the run
        bursts.append(
            Burst(
                start_event=a,
                end_event=b,
                length_chars=b - a + 1,
                mean_iki_ms=float(np.mean(internal)) if len(internal) else 0.0,
            )
        )

    start = None
    for i, kind in enumerate(kinds):
        if kind != "insert":
            if start is not None:
                emit(start, i - 1)
                start = None
            continue
        if start is None:
            start = i
        elif ikis[i - 1] >= burst_break_ms:
            emit(start, i - 1)
            start = i
    if start is not None:
        emit(start, len(kinds) - 1)
    return bursts


def revision_stats(session: Session) -> RevisionStats:
    """Counts of revision episodes, deletions, single-character typo fixes,
    and equal-timestamp paste bursts.

    A typo fix compares the deleted character with the re-inserted one, which
    needs payloads; in privacy mode any single-deletion-then-insert counts.
    """
    kinds = [e.kind for e in session.events]
    n = len(kinds)
    deleted_chars = sum(1 for k in kinds if k in _DELETING)

    episodes = 0
    for a, b in _deletion_runs(kinds):
        if b + 1 < n and kinds[b + 1] == "insert":
            episodes += 1

    # deleted-character identity via replay (full mode only)
    deleted_at: dict[int, str | None] = {}
    if not session.privacy_mode:
        chars: list[str] = []
        for idx, e in enumerate(session.events):
            if e.kind in ("insert", "enter"):
                ch = e.payload if e.kind == "insert" else "\n"
                if 0 <= e.pos <= len(chars):
                    chars.insert(e.pos, ch)
            elif e.kind in _DELETING and 0 <= e.pos < len(chars):
                deleted_at[idx] = chars.pop(e.pos)

    typo_fixes = 0
    for i, kind in enumerate(kinds):
        if kind not in _DELETING:
            continue
        solo = (i == 0 or kinds[i - 1] not in _DELETING) and (
            i + 1 >= n or kinds[i + 1] not in _DELETING
        )
        if not solo or i + 1 >= n or kinds[i + 1] != "insert":
            continue
        if session.privacy_mode:
            typo_fixes += 1
        else:
            replacement = session.events[i + 1].payload
            if deleted_at.get(i) is not None and replacement != deleted_at[i]:
                typo_fixes += 1

    t = session.times()
    paste_flags = 0
    i = 0
    while i < n:
        if kinds[i] == "insert":
            j = i
            while j + 1 < n and kinds[j + 1] == "insert" and t[j + 1] == t[i]:
                j += 1
            if j - i + 1 >= 3:
                paste_flags += 1
            i = j + 1
        else:
            i += 1
    return RevisionStats(
        revision_episodes=episodes,
        deleted_chars=deleted_chars,
        single_char_typo_fixes=typo_fixes,
        paste_flags=paste_flags,
    )
