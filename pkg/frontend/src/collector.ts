/**
 * Consent-gated keystroke timing collector.
 *
 * The collector buffers edit events with monotonic millisecond timestamps
 * while (and only while) the writer has opted in and collection is active.
 * In privacy mode character payloads are used transiently to score the
 * word being typed against the bundled unigram table, then discarded: the
 * buffer never holds character identities, and exports carry only timing,
 * positions, and per-word octile complexity bins.
 *
 * Everything here runs off the input path: capture() is a handful of array
 * operations, and the live CLC estimate is recomputed at most once per
 * second when read.
 */

import { EventKind, KeystrokeEvent, serializeSession } from "./events.js";
import { N_MIN, RollingClc, WINDOW_PAIRS } from "./rolling_clc.js";
import { proxySurprisalBits } from "./unigram_table.js";

export type CollectorStatus = "inactive" | "collecting" | "paused";

export interface CollectorState {
  status: CollectorStatus;
  privacyMode: boolean;
  bufferedEvents: number;
  liveClc: number | "insufficient data";
  pairCount: number;
}

export interface CollectorOptions {
  privacyMode?: boolean;
  writer?: string;
  session?: string;
  resolutionMs?: number;
  now?: () => number; // injectable clock (ms); defaults to Date.now
}

export class ExportWhileEmptyError extends Error {
  constructor() {
    super("nothing to export: the event buffer is empty");
  }
}

interface WordRecord {
  startEvent: number; // buffer index of the word's first character event
  startOffset: number; // char offset in the live document
  bits: number; // proxy surprisal, bits
  valid: boolean; // false once a later edit touched this word's region
}

const SEPARATOR = /[\s.,;:!?"'()\[\]{}<>\/\\-]/;

function isSeparator(ch: string): boolean {
  return SEPARATOR.test(ch);
}

/** Rank-based octile bins, ties sharing the bin of their lowest rank;
 * mirrors the analyzer's binning exactly. */
export function octileBins(values: readonly number[], nBins = 8): number[] {
  const n = values.length;
  const order = values.map((_, i) => i).sort((a, b) => values[a] - values[b]);
  const bins = new Array<number>(n);
  order.forEach((idx, pos) => {
    bins[idx] = Math.floor((pos * nBins) / n);
  });
  for (let p = 1; p < n; p++) {
    if (values[order[p]] === values[order[p - 1]]) {
      bins[order[p]] = bins[order[p - 1]];
    }
  }
  return bins;
}

export class Collector {
  private status_: CollectorStatus = "inactive";
  private optedIn = false; // never pre-checked: opting in is an explicit act
  private readonly privacyMode: boolean;
  private readonly writer: string;
  private readonly session: string;
  private readonly resolutionMs: number;
  private readonly now: () => number;

  private events: KeystrokeEvent[] = [];
  private t0: number | null = null;
  private lastT = 0;

  // word tracking for pairing and privacy bins
  private words: WordRecord[] = [];
  private currentChars: string[] = [];
  private currentStartEvent = -1;
  private currentStartOffset = -1;
  private liveEnd = 0; // length of the live document
  private rolling = new RollingClc(WINDOW_PAIRS, N_MIN);

  // throttled live readout
  private cachedClc: number | null = null;
  private lastClcComputeMs = -Infinity;

  constructor(opts: CollectorOptions = {}) {
    this.privacyMode = opts.privacyMode ?? true;
    this.writer = opts.writer ?? "";
    this.session = opts.session ?? "";
    this.resolutionMs = opts.resolutionMs ?? 5;
    this.now = opts.now ?? (() => Date.now());
  }

  // --- consent controls ------------------------------------------------

  get status(): CollectorStatus {
    return this.status_;
  }

  get isOptedIn(): boolean {
    return this.optedIn;
  }

  optIn(): void {
    this.optedIn = true;
    this.status_ = "collecting";
  }

  pause(): void {
    if (this.status_ === "collecting") this.status_ = "paused";
  }

  resume(): void {
    if (this.status_ === "paused" && this.optedIn) this.status_ = "collecting";
  }

  /** Irrecoverably clears every buffer; the next event restarts the clock. */
  deleteAll(): void {
    this.events = [];
    this.t0 = null;
    this.lastT = 0;
    this.words = [];
    this.currentChars = [];
    this.currentStartEvent = -1;
    this.currentStartOffset = -1;
    this.liveEnd = 0;
    this.rolling.clear();
    this.cachedClc = null;
    this.lastClcComputeMs = -Infinity;
  }

  // --- capture ------------------------------------------------------------

  /**
   * Record one edit event. Ignored entirely unless status is "collecting".
   * `timeMs` overrides the wall clock (replay harnesses); payloads are
   * required for inserts and never stored in privacy mode.
   */
  capture(kind: EventKind, pos: number, payload?: string, timeMs?: number): void {
    if (this.status_ !== "collecting") return;
    const wall = timeMs ?? this.now();
    if (this.t0 === null) this.t0 = wall;
    const t = Math.max(Math.round(wall - this.t0), this.lastT);
    this.lastT = t;

    const index = this.events.length;
    const event: KeystrokeEvent = { t, kind, pos };
    if (kind === "insert" && payload !== undefined && !this.privacyMode) {
      event.payload = payload;
    }
    this.events.push(event);
    this.trackWord(kind, pos, payload, index);
  }

  private trackWord(kind: EventKind, pos: number, payload: string | undefined, index: number): void {
    const tailStart = this.liveEnd - this.currentChars.length;
    if (kind === "insert" || kind === "enter") {
      const ch = kind === "enter" ? "\n" : payload ?? "";
      if (pos !== this.liveEnd) {
        this.invalidateFrom(pos);
      }
      this.liveEnd += 1;
      if (pos !== this.liveEnd - 1) return; // non-append edit: tracking flushed above
      if (isSeparator(ch) || ch === "") {
        this.completeCurrentWord();
      } else if (this.currentChars.length === 0) {
        this.currentChars.push(ch);
        this.currentStartEvent = index;
        this.currentStartOffset = this.liveEnd - 1;
      } else {
        this.currentChars.push(ch);
      }
      return;
    }
    if (kind === "backspace" || kind === "delete") {
      this.liveEnd = Math.max(0, this.liveEnd - 1);
      if (pos >= tailStart && this.currentChars.length > 0) {
        this.currentChars.pop();
        if (this.currentChars.length === 0) this.currentStartEvent = -1;
      } else {
        this.invalidateFrom(pos);
      }
    }
    // cursor_move: no document change, breaks nothing here
  }

  private invalidateFrom(offset: number): void {
    this.completeCurrentWord();
    for (const w of this.words) {
      if (w.startOffset >= offset) w.valid = false;
    }
  }

  private completeCurrentWord(): void {
    if (this.currentChars.length === 0) return;
    const word = this.currentChars.join("").toLowerCase();
    const bits = proxySurprisalBits(word);
    const startEvent = this.currentStartEvent;
    this.words.push({
      startEvent,
      startOffset: this.currentStartOffset,
      bits,
      valid: true,
    });
    if (this.words.length > 1 && startEvent > 0) {
      const pause = this.events[startEvent].t - this.events[startEvent - 1].t;
      this.rolling.push(pause, bits);
    }
    this.currentChars = [];
    this.currentStartEvent = -1;
    this.currentStartOffset = -1;
  }

  // --- live estimate ---------------------------------------------------------

  /** Rolling CLC over the last 200 pairs, recomputed at most once per
   * second; null (shown as "insufficient data") below 100 pairs. */
  liveClc(): number | null {
    const nowMs = this.now();
    if (nowMs - this.lastClcComputeMs >= 1000) {
      this.cachedClc = this.rolling.value();
      this.lastClcComputeMs = nowMs;
    }
    return this.cachedClc;
  }

  get pairCount(): number {
    return this.rolling.pairCount;
  }

  get bufferedEvents(): number {
    return this.events.length;
  }

  state(): CollectorState {
    const rho = this.liveClc();
    return {
      status: this.status_,
      privacyMode: this.privacyMode,
      bufferedEvents: this.events.length,
      liveClc: rho === null ? "insufficient data" : Math.round(rho * 100) / 100,
      pairCount: this.rolling.pairCount,
    };
  }

  // --- export -------------------------------------------------------------------

  /**
   * The cogsig-v1 JSONL export. Privacy mode attaches within-document
   * octile bins to word-start events; intervals leave quantized at the
   * configured resolution either way.
   */
  exportJsonl(): string {
    if (this.events.length === 0) throw new ExportWhileEmptyError();
    this.completeCurrentWord();
    let events = this.events;
    if (this.privacyMode) {
      const valid = this.words.filter((w) => w.valid && w.startEvent >= 0);
      const bins = octileBins(valid.map((w) => w.bits));
      const binAt = new Map<number, number>();
      valid.forEach((w, i) => binAt.set(w.startEvent, bins[i]));
      events = this.events.map((e, i) =>
        binAt.has(i) ? { ...e, cbin: binAt.get(i) } : e,
      );
    }
    return serializeSession(events, {
      session: this.session,
      writer: this.writer,
      r: this.resolutionMs,
      privacy: this.privacyMode,
    });
  }
}
