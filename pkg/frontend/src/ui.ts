/**
 * DOM wiring for the writing surface: translates textarea edits into
 * collector events and keeps the transparency surfaces (status indicator,
 * detail panel) current. All analysis stays inside collector.ts; this file
 * is deliberately thin.
 */

import { Collector } from "./collector.js";
import { ExportWhileEmptyError } from "./collector.js";

export function wireUp(doc: Document): Collector {
  const surface = doc.getElementById("surface") as HTMLTextAreaElement;
  const optIn = doc.getElementById("opt-in") as HTMLInputElement;
  const pauseBtn = doc.getElementById("pause") as HTMLButtonElement;
  const deleteBtn = doc.getElementById("delete-all") as HTMLButtonElement;
  const exportBtn = doc.getElementById("export") as HTMLButtonElement;
  const indicator = doc.getElementById("indicator") as HTMLSpanElement;
  const panel = doc.getElementById("panel") as HTMLElement;
  const privacyBox = doc.getElementById("privacy-mode") as HTMLInputElement;

  // opt-in starts unchecked, always: consent is never the default
  optIn.checked = false;
  privacyBox.checked = true;

  let collector = new Collector({
    privacyMode: privacyBox.checked,
    writer: "local-writer",
    session: `session-${Date.now()}`,
  });

  let lastCaret = 0;

  surface.addEventListener("beforeinput", (ev: InputEvent) => {
    const pos = surface.selectionStart ?? 0;
    const end = surface.selectionEnd ?? pos;
    // range deletions / replacements erase right-to-left first
    const erase = (from: number, to: number) => {
      for (let p = to - 1; p >= from; p--) collector.capture("backspace", p);
    };
    switch (ev.inputType) {
      case "insertText":
      case "insertFromPaste":
      case "insertCompositionText": {
        if (end > pos) erase(pos, end);
        const text = ev.data ?? "";
        for (let i = 0; i < text.length; i++) {
          collector.capture("insert", pos + i, text[i]);
        }
        break;
      }
      case "insertLineBreak":
        if (end > pos) erase(pos, end);
        collector.capture("enter", pos);
        break;
      case "deleteContentBackward":
        if (end > pos) erase(pos, end);
        else if (pos > 0) collector.capture("backspace", pos - 1);
        break;
      case "deleteContentForward":
        if (end > pos) erase(pos, end);
        else collector.capture("delete", pos);
        break;
      default:
        break;
    }
    lastCaret = pos;
  });

  surface.addEventListener("keyup", () => {
    const caret = surface.selectionStart ?? 0;
    if (caret !== lastCaret) {
      collector.capture("cursor_move", caret);
      lastCaret = caret;
    }
  });

  optIn.addEventListener("change", () => {
    if (optIn.checked) collector.optIn();
    else collector.pause();
    refresh();
  });

  pauseBtn.addEventListener("click", () => {
    if (collector.status === "collecting") collector.pause();
    else collector.resume();
    refresh();
  });

  deleteBtn.addEventListener("click", () => {
    collector.deleteAll();
    refresh();
  });

  exportBtn.addEventListener("click", () => {
    let jsonl: string;
    try {
      jsonl = collector.exportJsonl();
    } catch (err) {
      if (err instanceof ExportWhileEmptyError) {
        panel.textContent = "Nothing to export: no timing data is stored.";
        return;
      }
      throw err;
    }
    const blob = new Blob([jsonl], { type: "application/jsonl" });
    const a = doc.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "session.cogsig.jsonl";
    a.click();
    URL.revokeObjectURL(a.href);
  });

  privacyBox.addEventListener("change", () => {
    // switching modes starts a fresh session so no mixed-mode buffer exists
    collector.deleteAll();
    collector = new Collector({
      privacyMode: privacyBox.checked,
      writer: "local-writer",
      session: `session-${Date.now()}`,
    });
    if (optIn.checked) collector.optIn();
    refresh();
  });

  function refresh(): void {
    const state = collector.state();
    indicator.className = `indicator ${state.status}`;
    indicator.title = `timing collection: ${state.status}`;
    pauseBtn.textContent = state.status === "paused" ? "Resume" : "Pause";
    const rho =
      typeof state.liveClc === "number" ? state.liveClc.toFixed(2) : state.liveClc;
    panel.innerHTML = [
      `<dt>status</dt><dd>${state.status}</dd>`,
      `<dt>privacy mode</dt><dd>${state.privacyMode ? "on (no characters stored)" : "off"}</dd>`,
      `<dt>buffered events</dt><dd>${state.bufferedEvents}</dd>`,
      `<dt>word pairs</dt><dd>${state.pairCount}</dd>`,
      `<dt>live CLC</dt><dd>${rho}</dd>`,
      `<dt>retention</dt><dd>browser memory only; nothing is transmitted</dd>`,
    ].join("");
  }

  setInterval(refresh, 1000);
  refresh();
  return collector;
}

if (typeof document !== "undefined" && document.getElementById("surface")) {
  wireUp(document);
}
