/**
 * cogsig-v1 wire format: the bit-exact JSONL contract shared with the
 * analyzer. One JSON record per line; header first, then events ordered by
 * monotonically non-decreasing integer millisecond timestamps.
 */

export type EventKind = "insert" | "backspace" | "delete" | "cursor_move" | "enter";

export interface KeystrokeEvent {
  t: number; // ms from session start, integer, non-decreasing
  kind: EventKind;
  pos: number;
  payload?: string; // single char; only on insert outside privacy mode
  cbin?: number; // 0-7 complexity bin; only on privacy-mode word starts
}

export interface SessionHeader {
  schema: "cogsig-v1";
  session: string;
  writer: string;
  r: number;
  privacy: boolean;
}

export const SCHEMA = "cogsig-v1";

/** Floor t to a multiple of r (the privacy quantizer). */
export function quantize(t: number, r: number): number {
  if (r < 1) throw new Error(`resolution must be >= 1, got ${r}`);
  return Math.floor(t / r) * r;
}

/**
 * Serialize events with all inter-key intervals quantized at resolution r.
 * Timestamps are rebuilt from the cumulative sum of quantized intervals so
 * every derived IKI in the export is an exact multiple of r.
 */
export function serializeSession(
  events: readonly KeystrokeEvent[],
  header: Omit<SessionHeader, "schema">,
): string {
  const lines: string[] = [
    JSON.stringify({
      schema: SCHEMA,
      session: header.session,
      writer: header.writer,
      r: header.r,
      privacy: header.privacy,
    }),
  ];
  let prevRaw = events.length ? events[0].t : 0;
  let prevOut = events.length ? events[0].t : 0;
  events.forEach((e, i) => {
    let t: number;
    if (i === 0) {
      t = e.t;
    } else {
      t = prevOut + quantize(e.t - prevRaw, header.r);
      prevRaw = e.t;
      prevOut = t;
    }
    const record: Record<string, unknown> = { t, kind: e.kind };
    if (e.payload !== undefined && !header.privacy) record.payload = e.payload;
    record.pos = e.pos;
    if (e.cbin !== undefined && header.privacy) record.cbin = e.cbin;
    lines.push(JSON.stringify(record));
  });
  return lines.join("\n") + "\n";
}
