#!/usr/bin/env python3
"""Regenerate the bundled data files deterministically.

* ``reference_corpus.txt``  - seeded pseudo-prose the default n-gram model
  is trained on.
* ``population_norms.json`` - per-session statistics of a genuine
  composition population, the resampling pool for consistency-check
  acceptance intervals.

Run from the repo root after changing the synthesizer or its calibration
constants:  python scripts/build_data.py
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parent.parent / "src"
sys.path.insert(0, str(SRC))

DATA = SRC / "cogsig" / "data"

CORPUS_SEED = 3141592653
CORPUS_WORDS = 40_000
NORMS_SEED = 271828182
NORMS_SESSIONS = 200
NORMS_WORDS = 1500


def build_corpus() -> None:
    from cogsig.synth import generate_text, make_rng

    text = generate_text(make_rng(CORPUS_SEED), CORPUS_WORDS)
    # wrap lines for a civilised plain-text file
    words = text.split(" ")
    lines, line = [], []
    width = 0
    for w in words:
        if width + len(w) + 1 > 78 and line:
            lines.append(" ".join(line))
            line, width = [], 0
        line.append(w)
        width += len(w) + 1
    if line:
        lines.append(" ".join(line))
    (DATA / "reference_corpus.txt").write_text("\n".join(lines) + "\n", "utf-8")
    print(f"reference_corpus.txt: {CORPUS_WORDS} words")


def build_norms() -> None:
    from cogsig.pipeline import analyze_session, burst_summary
    from cogsig.synth import synth_population
    from cogsig.verify import round_clc

    clc, rates, burst_sds = [], [], []
    for session, _truth in synth_population(
        "composition", NORMS_SESSIONS, seed=NORMS_SEED, words=NORMS_WORDS
    ):
        a = analyze_session(session, r=5, with_spectrum=False)
        clc.append(round_clc(a.clc_report.rho))
        rates.append(a.revision.revision_episodes / max(a.word_count, 1))
        burst_sds.append(burst_summary(a.bursts)["sd_len_chars"])
    out = {
        "clc": clc,
        "revision_rate": rates,
        "burst_len_sd": burst_sds,
        "source": f"synth_composition n={NORMS_SESSIONS} words={NORMS_WORDS} seed={NORMS_SEED}",
    }
    (DATA / "population_norms.json").write_text(json.dumps(out, indent=1), "utf-8")
    print(f"population_norms.json: {NORMS_SESSIONS} sessions")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--corpus-only", action="store_true")
    args = parser.parse_args()
    build_corpus()
    if not args.corpus_only:
        build_norms()


if __name__ == "__main__":
    main()
