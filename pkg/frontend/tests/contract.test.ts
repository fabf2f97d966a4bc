/**
 * Cross-component contract tests: everything the collector exports must be
 * consumed by the analyzer CLI through the cogsig-v1 file format alone.
 * These tests spawn the installed `cogsig` executable.
 */

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { beforeAll, describe, expect, it } from "vitest";

import { Collector } from "../src/collector.js";
import { KeystrokeEvent } from "../src/events.js";

const WORDS = 800;
const SEED = 4711;

let dir: string;
let replayEvents: KeystrokeEvent[] = [];

function cli(args: string[], cwd: string): string {
  return execFileSync("cogsig", args, { cwd, encoding: "utf-8" });
}

function parseJsonl(text: string): { header: any; events: any[] } {
  const lines = text.trim().split("\n").map((l) => JSON.parse(l));
  return lines[0].schema ? { header: lines[0], events: lines.slice(1) } : { header: null, events: lines };
}

beforeAll(() => {
  dir = fs.mkdtempSync(path.join(os.tmpdir(), "cogsig-contract-"));
  cli(
    ["synth", "--kind", "composition", "--seed", String(SEED), "--words", String(WORDS),
     "--out", path.join(dir, "stream")],
    dir,
  );
  const raw = fs.readFileSync(path.join(dir, "stream.jsonl"), "utf-8");
  replayEvents = parseJsonl(raw).events as KeystrokeEvent[];
  expect(replayEvents.length).toBeGreaterThan(1000);
});

function replay(collector: Collector, onPair?: (pairCount: number) => void): void {
  let seen = 0;
  for (const e of replayEvents) {
    collector.capture(e.kind, e.pos, e.payload, e.t);
    if (onPair && collector.pairCount > seen) {
      seen = collector.pairCount;
      onPair(seen);
    }
  }
}

describe("export/ingest round trip", () => {
  it("a captured privacy session parses and analyzes end to end", () => {
    const clock = { t: 0 };
    const collector = new Collector({
      privacyMode: true,
      writer: "contract-w",
      session: "contract-s",
      now: () => clock.t,
    });
    collector.optIn();
    replay(collector);
    const exported = collector.exportJsonl();
    const exportPath = path.join(dir, "captured.jsonl");
    fs.writeFileSync(exportPath, exported, "utf-8");

    // zero-error parse through the primary's strict ingest
    const normalized = cli(["ingest", exportPath], dir);
    expect(normalized.startsWith('{"schema":"cogsig-v1"')).toBe(true);

    // full analysis through the primary pipeline
    cli(["analyze", exportPath, "--out", path.join(dir, "captured.report.json")], dir);
    const report = JSON.parse(fs.readFileSync(path.join(dir, "captured.report.json"), "utf-8"));
    expect(report.privacy_mode).toBe(true);
    expect(report.word_count).toBe(WORDS);
    expect(report.clc.n).toBeGreaterThanOrEqual(WORDS - 2);
    expect(report.clc.verdict).toBe("composition");
  });

  it("privacy exports never leak character identities", () => {
    const collector = new Collector({ privacyMode: true, now: () => 0 });
    collector.optIn();
    replay(collector);
    const exported = collector.exportJsonl();
    expect(exported.includes("payload")).toBe(false);
  });
});

describe("live CLC fidelity", () => {
  it("tracks the offline analyzer within 0.05 at every 200-pair checkpoint", () => {
    const clock = { t: 0 };
    const collector = new Collector({
      privacyMode: true,
      writer: "fidelity-w",
      session: "fidelity-s",
      now: () => clock.t,
    });
    collector.optIn();

    const checkpoints: Array<{ k: number; live: number }> = [];
    replay(collector, (pairCount) => {
      if (pairCount % 200 === 0) {
        clock.t += 2000; // past the 1 Hz refresh gate
        const live = collector.liveClc();
        expect(live).not.toBeNull();
        checkpoints.push({ k: pairCount, live: live as number });
      }
    });
    expect(checkpoints.length).toBeGreaterThanOrEqual(3);

    const exported = collector.exportJsonl();
    const { header, events } = parseJsonl(exported);
    expect(header.privacy).toBe(true);
    const taggedIdx = events
      .map((e, i) => ("cbin" in e ? i : -1))
      .filter((i) => i >= 0);

    for (const { k, live } of checkpoints) {
      // events spanning exactly the window's 200 pairs: from the start event
      // of pair k-199's predecessor word through the start event of pair k
      const startEvent = taggedIdx[k - 200];
      const endEvent = taggedIdx[k];
      const slice = events.slice(startEvent, endEvent + 1);
      const t0 = slice[0].t;
      const lines = [
        JSON.stringify({ schema: "cogsig-v1", session: `w${k}`, writer: "fidelity-w",
                         r: header.r, privacy: true }),
        ...slice.map((e) => JSON.stringify({ ...e, t: e.t - t0 })),
      ];
      const winPath = path.join(dir, `window-${k}.jsonl`);
      fs.writeFileSync(winPath, lines.join("\n") + "\n", "utf-8");
      cli(["analyze", winPath, "--out", path.join(dir, `window-${k}.report.json`)], dir);
      const report = JSON.parse(
        fs.readFileSync(path.join(dir, `window-${k}.report.json`), "utf-8"),
      );
      expect(report.clc.n).toBe(200);
      expect(Math.abs(live - report.clc.rho)).toBeLessThanOrEqual(0.05);
    }
  });

  it("pausing freezes the live value", () => {
    const clock = { t: 0 };
    const collector = new Collector({ privacyMode: true, now: () => clock.t });
    collector.optIn();
    replay(collector);
    clock.t += 2000;
    const before = collector.liveClc();
    collector.pause();
    for (let i = 0; i < 50; i++) {
      collector.capture("insert", 0, "x", 10_000_000 + i * 100);
    }
    clock.t += 2000;
    expect(collector.liveClc()).toBe(before);
  });
});
