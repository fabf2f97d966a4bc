"""Keystroke event streams: the cogsig-v1 wire format, IKI extraction,
privacy quantization, and document replay.

Wire format (JSONL, UTF-8, one record per line):

    {"schema":"cogsig-v1","session":"s1","writer":"w1","r":5,"privacy":false}
    {"t": 0, "kind": "insert", "payload": "a", "pos": 0}
    {"t": 150, "kind": "insert", "payload": "b", "pos": 1}

The header line is optional on input; ``serialize`` always writes one.
Timestamps are integer milliseconds from session start and must be
monotonically non-decreasing (equal timestamps are legal and mark pastes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    EmptyLog,
    InvalidResolution,
    MalformedRecord,
    NonMonotonicTimestamp,
    PositionOutOfRange,
    PrivacyModeActive,
)

SCHEMA = "cogsig-v1"
EVENT_KINDS = ("insert", "backspace", "delete", "cursor_move", "enter")
DEFAULT_RESOLUTION_MS = 5


@dataclass(frozen=True)
class KeystrokeEvent:
    """One edit event.

    ``pos`` is the document index the edit applies to: the insertion point
    for insert/enter, the index of the removed character for
    backspace/delete, and the new caret position for cursor_move.
    ``payload`` is present iff kind == "insert" and the session is not in
    privacy mode. ``cbin`` (0-7) appears only on privacy-mode word starts.
    """

    t: int
    kind: str
    pos: int
    payload: str | None = None
    cbin: int | None = None


@dataclass(frozen=True)
class Session:
    events: tuple[KeystrokeEvent, ...]
    resolution_r: int = DEFAULT_RESOLUTION_MS
    privacy_mode: bool = False
    writer: str = ""
    session_id: str = ""

    def times(self) -> np.ndarray:
        return np.fromiter((e.t for e in self.events), dtype=np.int64, count=len(self.events))


@dataclass(frozen=True)
class IkiSeries:
    """Inter-key intervals in ms; ``index_map[i]`` is the index of the event
    that terminates interval i."""

    values: np.ndarray
    index_map: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def quantize(iki, r):
    """Floor *iki* down to a multiple of the resolution ``r`` (ms).

    Accepts a scalar or a numpy array; scalars come back as int.
    Idempotent, and the error is bounded by ``0 <= iki - quantize(iki, r) < r``.
    """
    if r < 1:
        raise InvalidResolution(f"resolution must be >= 1 ms, got {r}")
    r = int(r)
    if isinstance(iki, np.ndarray):
        return (iki.astype(np.int64) // r) * r
    return int(int(iki) // r) * r


def quantize_session(session: Session, r: int) -> Session:
    """Re-time a session so every IKI is quantized at resolution ``r``.

    The first timestamp is kept; subsequent timestamps are rebuilt from the
    cumulative sum of per-interval ``quantize`` values, so interval i of the
    result equals ``quantize(interval_i, r)`` exactly.
    """
    if r < 1:
        raise InvalidResolution(f"resolution must be >= 1 ms, got {r}")
    if not session.events:
        raise EmptyLog("cannot quantize an empty session")
    if r == 1:
        return replace(session, resolution_r=1)
    t = session.times()
    new_t = np.empty_like(t)
    new_t[0] = t[0]
    if len(t) > 1:
        new_t[1:] = t[0] + np.cumsum(quantize(np.diff(t), r))
    events = tuple(replace(e, t=int(nt)) for e, nt in zip(session.events, new_t))
    return replace(session, events=events, resolution_r=int(r))


def compute_ikis(session: Session) -> IkiSeries:
    """Differences of consecutive event timestamps."""
    if len(session.events) < 2:
        raise EmptyLog("need at least 2 events to form an interval")
    t = session.times()
    return IkiSeries(values=np.diff(t), index_map=np.arange(1, len(t)))


# --- wire format -----------------------------------------------------------

_EVENT_KEYS = {"t", "kind", "payload", "pos", "cbin"}


def _parse_event(obj: dict, line_no: int, privacy: bool) -> KeystrokeEvent:
    if not isinstance(obj, dict):
        raise MalformedRecord(line_no, "event record must be a JSON object")
    unknown = set(obj) - _EVENT_KEYS
    if unknown:
        raise MalformedRecord(line_no, f"unknown fields {sorted(unknown)}")
    try:
        t = obj["t"]
        kind = obj["kind"]
        pos = obj["pos"]
    except KeyError as exc:
        raise MalformedRecord(line_no, f"missing field {exc.args[0]!r}") from None
    if not isinstance(t, int) or isinstance(t, bool) or t < 0:
        raise MalformedRecord(line_no, f"t must be a non-negative integer, got {t!r}")
    if kind not in EVENT_KINDS:
        raise MalformedRecord(line_no, f"unknown kind {kind!r}")
    if not isinstance(pos, int) or isinstance(pos, bool) or pos < 0:
        raise MalformedRecord(line_no, f"pos must be a non-negative integer, got {pos!r}")
    payload = obj.get("payload")
    if payload is not None:
        if kind != "insert":
            raise MalformedRecord(line_no, f"payload not allowed on kind {kind!r}")
        if privacy:
            raise MalformedRecord(line_no, "payload present in privacy-mode session")
        if not isinstance(payload, str) or len(payload) != 1:
            raise MalformedRecord(line_no, "payload must be a single character")
    elif kind == "insert" and not privacy:
        raise MalformedRecord(line_no, "insert without payload outside privacy mode")
    cbin = obj.get("cbin")
    if cbin is not None:
        if not isinstance(cbin, int) or isinstance(cbin, bool) or not 0 <= cbin <= 7:
            raise MalformedRecord(line_no, f"cbin must be an integer 0-7, got {cbin!r}")
        if not privacy:
            raise MalformedRecord(line_no, "cbin only valid in privacy mode")
    return KeystrokeEvent(t=t, kind=kind, pos=pos, payload=payload, cbin=cbin)


def parse_log(data: str | bytes) -> Session:
    """Parse a cogsig-v1 JSONL log into a Session.

    Raises MalformedRecord (with line number), NonMonotonicTimestamp, or
    EmptyLog. A missing header line implies defaults (r=5, privacy off).
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedRecord(0, f"not valid UTF-8: {exc}") from None
    lines = data.splitlines()
    header = {"session": "", "writer": "", "r": DEFAULT_RESOLUTION_MS, "privacy": False}
    events: list[KeystrokeEvent] = []
    saw_header = False
    prev_t = -1
    for line_no, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(line_no, f"invalid JSON: {exc.msg}") from None
        if isinstance(obj, dict) and "schema" in obj:
            if saw_header or events:
                raise MalformedRecord(line_no, "header must be the first record")
            if obj["schema"] != SCHEMA:
                raise MalformedRecord(line_no, f"unsupported schema {obj['schema']!r}")
            saw_header = True
            header["session"] = str(obj.get("session", ""))
            header["writer"] = str(obj.get("writer", ""))
            r = obj.get("r", DEFAULT_RESOLUTION_MS)
            if not isinstance(r, int) or isinstance(r, bool) or r < 1:
                raise MalformedRecord(line_no, f"r must be a positive integer, got {r!r}")
            header["r"] = r
            privacy = obj.get("privacy", False)
            if not isinstance(privacy, bool):
                raise MalformedRecord(line_no, f"privacy must be boolean, got {privacy!r}")
            header["privacy"] = privacy
            continue
        event = _parse_event(obj, line_no, header["privacy"])
        if event.t < prev_t:
            raise NonMonotonicTimestamp(
                f"line {line_no}: t={event.t} after t={prev_t}"
            )
        prev_t = event.t
        events.append(event)
    if not events:
        raise EmptyLog("log contains no events")
    return Session(
        events=tuple(events),
        resolution_r=header["r"],
        privacy_mode=header["privacy"],
        writer=header["writer"],
        session_id=header["session"],
    )


def serialize(session: Session) -> str:
    """Inverse of parse_log: header line plus one compact record per event."""
    out = [
        json.dumps(
            {
                "schema": SCHEMA,
                "session": session.session_id,
                "writer": session.writer,
                "r": session.resolution_r,
                "privacy": session.privacy_mode,
            },
            separators=(",", ":"),
        )
    ]
    for e in session.events:
        rec = {"t": e.t, "kind": e.kind}
        if e.payload is not None:
            rec["payload"] = e.payload
        rec["pos"] = e.pos
        if e.cbin is not None:
            rec["cbin"] = e.cbin
        out.append(json.dumps(rec, separators=(",", ":"), ensure_ascii=False))
    return "\n".join(out) + "\n"


# --- document replay -------------------------------------------------------

def reconstruct_text(session: Session) -> tuple[str, list[int]]:
    """Replay the edit stream and return (final text, producing event index
    per surviving character).

    Requires payloads, so privacy-mode sessions raise PrivacyModeActive.
    """
    if session.privacy_mode:
        raise PrivacyModeActive(
            "cannot reconstruct text from a privacy-mode session; "
            "use the complexity-bin tags instead"
        )
    chars: list[str] = []
    origin: list[int] = []
    for idx, e in enumerate(session.events):
        n = len(chars)
        if e.kind in ("insert", "enter"):
            if e.pos > n:
                raise PositionOutOfRange(
                    f"event {idx}: insert at pos {e.pos} in document of length {n}"
                )
            ch = e.payload if e.kind == "insert" else "\n"
            if e.pos == n:
                chars.append(ch)
                origin.append(idx)
            else:
                chars.insert(e.pos, ch)
                origin.insert(e.pos, idx)
        elif e.kind in ("backspace", "delete"):
            if e.pos >= n:
                raise PositionOutOfRange(
                    f"event {idx}: {e.kind} at pos {e.pos} in document of length {n}"
                )
            del chars[e.pos]
            del origin[e.pos]
        elif e.kind == "cursor_move":
            if e.pos > n:
                raise PositionOutOfRange(
                    f"event {idx}: cursor_move to pos {e.pos} in document of length {n}"
                )
        else:  # unreachable after parse validation
            raise PositionOutOfRange(f"event {idx}: unknown kind {e.kind!r}")
    return "".join(chars), origin


def validate_positions(session: Session) -> None:
    """Length-only replay that checks every pos against the live document
    length; works in privacy mode (no payloads needed)."""
    n = 0
    for idx, e in enumerate(session.events):
        if e.kind in ("insert", "enter"):
            if e.pos > n:
                raise PositionOutOfRange(
                    f"event {idx}: insert at pos {e.pos} in document of length {n}"
                )
            n += 1
        elif e.kind in ("backspace", "delete"):
            if e.pos >= n:
                raise PositionOutOfRange(
                    f"event {idx}: {e.kind} at pos {e.pos} in document of length {n}"
                )
            n -= 1
        elif e.kind == "cursor_move":
            if e.pos > n:
                raise PositionOutOfRange(
                    f"event {idx}: cursor_move to pos {e.pos} in document of length {n}"
                )


def events_array(session: Session) -> tuple[np.ndarray, np.ndarray]:
    """(timestamps, kind codes) as numpy arrays; kind code is the index into
    EVENT_KINDS. Convenience for vectorized scans."""
    t = session.times()
    codes = np.fromiter(
        (EVENT_KINDS.index(e.kind) for e in session.events),
        dtype=np.int8,
        count=len(session.events),
    )
    return t, codes
