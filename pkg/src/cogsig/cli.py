"""cogsig command line: ingest, analyze, synth, verify, consistency, sweep.

Errors leave on stderr as one JSON object (stable ``error`` code plus a
message) with a nonzero exit, so scripted callers and the collector UI
share a single error contract.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import clc as clc_mod
from . import segmentation
from .complexity import DEFAULT_ALPHA, DEFAULT_ORDER, default_model, train_ngram
from .errors import CogsigError, InvalidConfig
from .events import DEFAULT_RESOLUTION_MS, parse_log, serialize, validate_positions
from .pipeline import analyze_session, report_dict
from .synth import ATTACKS, SynthConfig, synth_composition, synth_forgery, synth_transcription
from .sweep import sweep as run_sweep, to_csv
from .verify import (
    BaselineProfile,
    EvidenceRecord,
    PopulationNorms,
    build_evidence,
    canonical_bytes,
    commit,
    consistency_check,
    default_population_norms,
)


def _fail(exc: CogsigError) -> None:
    sys.stderr.write(json.dumps(exc.to_json()) + "\n")
    sys.exit(1)


def cogsig_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except CogsigError as exc:
            _fail(exc)

    return wrapper


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, "utf-8")
        click.echo(out)
    else:
        click.echo(text, nl=not text.endswith("\n"))


@click.group()
@click.version_option(package_name="cogsig")
def main() -> None:
    """Keystroke-timing analysis: verify composition from inter-key intervals."""


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="output path (default stdout)")
@cogsig_errors
def ingest(log: str, out: str | None) -> None:
    """Validate and normalize a cogsig-v1 JSONL session log."""
    session = parse_log(Path(log).read_bytes())
    validate_positions(session)
    _write_or_print(serialize(session), out)


def _load_model(corpus: str | None, order: int, alpha: float):
    if corpus is None:
        return default_model(order=order, alpha=alpha)
    return train_ngram(Path(corpus).read_text("utf-8"), order=order, alpha=alpha)


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False),
              help="reference corpus for the complexity model (default: bundled)")
@click.option("--order", default=DEFAULT_ORDER, show_default=True, help="n-gram context length")
@click.option("--alpha", default=DEFAULT_ALPHA, show_default=True, help="additive smoothing")
@click.option("--r", "resolution", default=DEFAULT_RESOLUTION_MS, show_default=True,
              help="quantization resolution in ms")
@click.option("--planning-ms", default=segmentation.PLANNING_THRESHOLD_MS, show_default=True)
@click.option("--burst-break-ms", default=float(segmentation.BURST_BREAK_MS), show_default=True)
@click.option("--tau", default=clc_mod.DEFAULT_TAU, show_default=True, help="verdict threshold")
@click.option("--out", type=click.Path(dir_okay=False), help="report path (default stdout)")
@click.option("--figures-dir", type=click.Path(file_okay=False),
              help="also render the session timeline figure here")
@cogsig_errors
def analyze(log, corpus, order, alpha, resolution, planning_ms, burst_break_ms, tau,
            out, figures_dir) -> None:
    """Full analysis of one session log: segments, CLC, verdict, entropy."""
    session = parse_log(Path(log).read_bytes())
    model = None if session.privacy_mode else _load_model(corpus, order, alpha)
    analysis = analyze_session(
        session,
        model=model,
        r=resolution,
        planning_threshold_ms=planning_ms,
        burst_break_ms=burst_break_ms,
        tau=tau,
    )
    report = report_dict(analysis)
    if figures_dir:
        from .report import session_timeline_figure

        os.makedirs(figures_dir, exist_ok=True)
        name = (session.session_id or Path(log).stem) + ".timeline.png"
        report["figures"] = [str(session_timeline_figure(analysis, Path(figures_dir) / name))]
    _write_or_print(json.dumps(report, indent=2), out)


@main.command()
@click.option("--kind", required=True,
              help="composition | transcription | forgery:<attack>  "
                   f"(attacks: {', '.join(ATTACKS[1:])})")
@click.option("--words", default=1500, show_default=True)
@click.option("--seed", required=True, type=int)
@click.option("--writer", default="writer-0", show_default=True)
@click.option("--session-id", default=None, help="default: derived from kind and seed")
@click.option("--motor-median", default=140.0, show_default=True, help="within-word IKI median (ms)")
@click.option("--out", "out_prefix", default=None,
              help="output prefix (default: cogsig-<kind>-<seed>)")
@cogsig_errors
def synth(kind, words, seed, writer, session_id, motor_median, out_prefix) -> None:
    """Generate a synthetic session (JSONL) plus ground-truth labels."""
    attack = "none"
    base = kind
    if kind.startswith("forgery:"):
        base, attack = "forgery", kind.split(":", 1)[1]
    if base not in ("composition", "transcription", "forgery"):
        raise InvalidConfig(f"unknown kind {kind!r}")
    cfg = SynthConfig(
        seed=seed,
        words=words,
        attack=attack,
        writer=writer,
        session_id=session_id or f"{base}-{seed}",
        motor_median_ms=motor_median,
    )
    if base == "composition":
        session, truth = synth_composition(cfg)
    elif base == "transcription":
        session, truth = synth_transcription(cfg)
    else:
        session, truth = synth_forgery(cfg)
    prefix = out_prefix or f"cogsig-{base}-{seed}"
    log_path = Path(prefix + ".jsonl")
    labels_path = Path(prefix + ".labels.json")
    log_path.write_text(serialize(session), "utf-8")
    labels_path.write_text(json.dumps(truth.to_dict(), indent=1), "utf-8")
    click.echo(str(log_path))
    click.echo(str(labels_path))


@main.command()
@click.argument("report", type=click.Path(exists=True, dir_okay=False))
@click.option("--salt-hex", default=None, help="32 hex chars; default: fresh random salt")
@click.option("--created-at", default=None, help="ISO timestamp to embed (default: now)")
@click.option("--out", type=click.Path(dir_okay=False), help="default: <report>.evr.json")
@cogsig_errors
def verify(report, salt_hex, created_at, out) -> None:
    """Build the evidence record for an analyze report; print its commitment."""
    rep = json.loads(Path(report).read_text("utf-8"))
    salt = bytes.fromhex(salt_hex) if salt_hex else os.urandom(16)
    clc_report = clc_mod.ClcReport(
        rho=rep["clc"]["rho"],
        n=rep["clc"]["n"],
        verdict=rep["clc"]["verdict"],
        threshold_used=rep["clc"]["threshold_used"],
        power_at_n=rep["clc"]["power_at_n"],
    )
    aggregates = {
        "writer": rep["writer"],
        "session": rep["session"],
        "word_count": rep["word_count"],
        "iki_histogram": rep["iki_histogram"],
        "phase_summary": rep["phase_summary"],
        "revision_summary": rep["revision_summary"],
        "burst_summary": rep["burst_summary"],
    }
    record = build_evidence(clc_report, aggregates, salt, created_at=created_at)
    out = out or (str(Path(report).with_suffix("")) + ".evr.json")
    Path(out).write_bytes(canonical_bytes(record.to_dict()))
    click.echo(out)
    click.echo(commit(record))


@main.command()
@click.argument("evr", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--baseline", type=click.Path(exists=True, dir_okay=False),
              help="enrolled BaselineProfile JSON (optional)")
@click.option("--norms", type=click.Path(exists=True, dir_okay=False),
              help="population norms JSON (default: bundled synthetic norms)")
@cogsig_errors
def consistency(evr, baseline, norms) -> None:
    """Multi-session consistency check over evidence records."""
    records = [EvidenceRecord.from_dict(json.loads(Path(p).read_text("utf-8"))) for p in evr]
    norms_obj = (
        PopulationNorms.from_dict(json.loads(Path(norms).read_text("utf-8")))
        if norms
        else default_population_norms()
    )
    baseline_obj = (
        BaselineProfile.from_dict(json.loads(Path(baseline).read_text("utf-8")))
        if baseline
        else None
    )
    result = consistency_check(records, norms_obj, baseline_obj)
    click.echo(json.dumps(
        {"flag": result.flag, "n_records": result.n_records, "statistics": result.statistics},
        indent=2,
    ))


@main.command()
@click.option("--r", "r_list", default="1,5,10,20,50", show_default=True,
              help="comma-separated resolutions (ms), ascending")
@click.option("--sessions", default=160, show_default=True,
              help="total sessions (half composition, half transcription)")
@click.option("--words", default=1100, show_default=True)
@click.option("--writers", default=16, show_default=True, help="writers per class")
@click.option("--seed", required=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False), help="CSV path (default stdout)")
@click.option("--figures-dir", type=click.Path(file_okay=False),
              help="also render the tradeoff curve here")
@cogsig_errors
def sweep(r_list, sessions, words, writers, seed, out, figures_dir) -> None:
    """Privacy-utility sweep on a synthesized mixed population."""
    from .synth import synth_population

    try:
        r_values = [int(x) for x in r_list.split(",") if x.strip()]
    except ValueError:
        raise InvalidConfig(f"bad resolution list {r_list!r}") from None
    half = sessions // 2
    population = [
        (s, "composition")
        for s, _ in synth_population("composition", half, seed=seed, words=words,
                                     n_writers=writers, motor_offsets=True)
    ] + [
        (s, "transcription")
        for s, _ in synth_population("transcription", half, seed=seed + 1, words=words,
                                     n_writers=writers, motor_offsets=True)
    ]
    rows = run_sweep(r_values, population)
    if figures_dir:
        from .report import sweep_figure

        os.makedirs(figures_dir, exist_ok=True)
        sweep_figure(rows, Path(figures_dir) / f"sweep-{seed}.png")
    _write_or_print(to_csv(rows), out)


if __name__ == "__main__":
    main()
