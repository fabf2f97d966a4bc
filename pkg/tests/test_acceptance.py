"""Acceptance gate: every criterion as one test with a printed PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see per-criterion
verdicts. The heavy corpus fixtures are session-scoped and shared.
"""

import copy
import math
import time

import numpy as np
import pytest

from cogsig.clc import ClcReport, classify, power, spearman
from cogsig.complexity import default_model
from cogsig.entropy_spectral import (
    IkiHistogram,
    iki_entropy,
    spectral_slope,
    synthesize_power_law,
)
from cogsig.events import quantize
from cogsig.pipeline import analyze_session
from cogsig.segmentation import PLANNING, segment_phases
from cogsig.synth import SynthConfig, child_seed, synth_forgery, synth_population
from cogsig.sweep import sweep
from cogsig.verify import (
    EvidenceRecord,
    build_evidence,
    canonical_bytes,
    commit,
    consistency_check,
    default_population_norms,
    evidence_aggregates,
    verify_commitment,
)

MODEL = default_model()

CORPUS_SEED_COMP = 20260811
CORPUS_SEED_TRANS = 20260812
CORPUS_WORDS = 1500
CORPUS_N = 200

SWEEP_SEED_COMP = 901
SWEEP_SEED_TRANS = 902
SWEEP_WORDS = 1100
SWEEP_N = 80


def report(name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{name}: {detail}"


# --- shared corpora ---------------------------------------------------------

@pytest.fixture(scope="session")
def corpus400():
    """200 composition + 200 transcription sessions, 1500 words, fixed seed,
    analyzed at r=5. Writers repeat every 40, giving 5 sessions per writer."""
    t0 = time.perf_counter()
    comp = synth_population("composition", CORPUS_N, seed=CORPUS_SEED_COMP,
                            words=CORPUS_WORDS, n_writers=40, model=MODEL)
    trans = synth_population("transcription", CORPUS_N, seed=CORPUS_SEED_TRANS,
                             words=CORPUS_WORDS, n_writers=40, model=MODEL)
    analyses_comp = [analyze_session(s, model=MODEL, r=5, with_spectrum=False)
                     for s, _ in comp]
    analyses_trans = [analyze_session(s, model=MODEL, r=5, with_spectrum=False)
                      for s, _ in trans]
    elapsed = time.perf_counter() - t0
    return {
        "comp": comp,
        "trans": trans,
        "a_comp": analyses_comp,
        "a_trans": analyses_trans,
        "elapsed": elapsed,
    }


@pytest.fixture(scope="session")
def rehearsed125():
    """25 writers x 5 rehearsed-forgery sessions each."""
    out = []
    for w in range(25):
        records = []
        for j in range(5):
            cfg = SynthConfig(seed=child_seed(90_000 + w, j), words=CORPUS_WORDS,
                              attack="rehearsed_profile", writer=f"rw{w}",
                              session_id=f"rw{w}-{j}")
            s, _ = synth_forgery(cfg, model=MODEL)
            a = analyze_session(s, model=MODEL, r=5, with_spectrum=False)
            records.append(
                build_evidence(a.clc_report, evidence_aggregates(a),
                               salt=bytes(16), created_at="t")
            )
        out.append(records)
    return out


# --- criteria ------------------------------------------------------------------

def test_quantization_exactness():
    t0 = time.perf_counter()
    ok = quantize(123, 5) == 120 and quantize(4, 5) == 0
    rng = np.random.default_rng(1)
    xs = rng.integers(0, 10**7, size=1_000_000)
    rs = rng.integers(1, 200, size=1_000_000)
    q = (xs // rs) * rs  # reference formula
    qq = np.array([quantize(int(x), int(r)) for x, r in zip(xs[:200], rs[:200])])
    ok = ok and np.array_equal(qq, q[:200])
    # vectorized idempotence + bounds on the full million, exact
    qv = quantize(xs, 13)
    ok = ok and np.array_equal(quantize(qv, 13), qv)
    ok = ok and bool(((xs - qv >= 0) & (xs - qv < 13)).all())
    elapsed = time.perf_counter() - t0
    report("quantization-exactness", ok and elapsed < 1.0,
           f"floor formula exact, idempotent over 1e6 inputs in {elapsed:.2f}s")


def test_table2_class_separation(corpus400):
    rc = np.array([a.clc_report.rho for a in corpus400["a_comp"]])
    rt = np.array([a.clc_report.rho for a in corpus400["a_trans"]])
    cm, cs = rc.mean(), rc.std(ddof=1)
    tm, ts = rt.mean(), rt.std(ddof=1)
    ok = (0.35 <= cm <= 0.55 and 0.02 <= tm <= 0.12
          and abs(cs - 0.12) <= 0.04 and abs(ts - 0.08) <= 0.04
          and corpus400["elapsed"] < 120.0)
    report("table2-class-separation", ok,
           f"comp {cm:.3f}±{cs:.3f}, trans {tm:.3f}±{ts:.3f}, "
           f"built+analyzed in {corpus400['elapsed']:.0f}s")


def test_discrimination_accuracy(corpus400):
    correct = sum(a.clc_report.verdict == "composition" for a in corpus400["a_comp"])
    correct += sum(a.clc_report.verdict == "transcription" for a in corpus400["a_trans"])
    acc = correct / (2 * CORPUS_N)
    # Monte Carlo oracle for the Gaussian population model's accuracy at tau
    rng = np.random.default_rng(2)
    comp_rho = rng.normal(0.45, 0.12, size=1_000_000)
    trans_rho = rng.normal(0.07, 0.08, size=1_000_000)
    bayes = 0.5 * ((comp_rho >= 0.22).mean() + (trans_rho < 0.22).mean())
    ok = acc >= 0.90 and abs(acc - bayes) <= 0.02
    report("discrimination-accuracy", ok,
           f"corpus {acc:.3f} vs Gaussian-model oracle {bayes:.3f} at tau=0.22")


def test_power_claim():
    p = power(1500, 0.35, 0.12, 0.05)
    # Monte Carlo oracle: bivariate-normal copula at Spearman rho1, same
    # one-sided Fisher-z test, 10,000 trials, vectorized ranks
    n, trials = 1500, 10_000
    rng = np.random.default_rng(3)
    r_pearson = 2 * math.sin(math.pi * 0.35 / 6)
    z_crit = 1.6448536269514722  # Phi^-1(0.95)
    rejected = 0
    chunk = 500
    for start in range(0, trials, chunk):
        m = min(chunk, trials - start)
        x = rng.standard_normal((m, n))
        y = r_pearson * x + math.sqrt(1 - r_pearson**2) * rng.standard_normal((m, n))
        rx = np.argsort(np.argsort(x, axis=1), axis=1).astype(np.float64)
        ry = np.argsort(np.argsort(y, axis=1), axis=1).astype(np.float64)
        rx -= rx.mean(axis=1, keepdims=True)
        ry -= ry.mean(axis=1, keepdims=True)
        rho = (rx * ry).sum(axis=1) / np.sqrt((rx**2).sum(axis=1) * (ry**2).sum(axis=1))
        stat = (np.arctanh(rho) - math.atanh(0.12)) * math.sqrt(n - 3)
        rejected += int((stat > z_crit).sum())
    mc = rejected / trials
    ok = p > 0.99 and abs(p - mc) <= 0.005
    report("power-claim", ok, f"fisher-z {p:.6f}, monte-carlo {mc:.4f}")


def test_quantization_robustness(corpus400):
    def planning_set(session, r):
        segs = segment_phases(session) if r == 1 else None
        # compare on the quantized views
        from cogsig.events import quantize_session

        segs = segment_phases(quantize_session(session, r))
        return {(s.start_event, s.end_event) for s in segs if s.phase == PLANNING}

    same_verdict = 0
    same_planning = 0
    total = 0
    for sessions, analyses in ((corpus400["comp"], corpus400["a_comp"]),
                               (corpus400["trans"], corpus400["a_trans"])):
        for (session, _), a5 in zip(sessions, analyses):
            a1 = analyze_session(session, model=MODEL, r=1, with_spectrum=False)
            same_verdict += a1.clc_report.verdict == a5.clc_report.verdict
            same_planning += planning_set(session, 1) == planning_set(session, 5)
            total += 1
    ok = same_verdict / total >= 0.99 and same_planning / total >= 0.995
    report("quantization-robustness", ok,
           f"verdicts match {same_verdict}/{total}, planning identical {same_planning}/{total}")


def test_entropy_anchors():
    h16 = iki_entropy(
        IkiHistogram(bin_width_ms=5, counts={i: 2**20 for i in range(16)}, total=16 * 2**20)
    )
    plugin = iki_entropy(
        IkiHistogram(bin_width_ms=5, counts={i: 1 for i in range(16)}, total=16),
        bias_correction=False,
    )
    h_mix = iki_entropy(IkiHistogram(bin_width_ms=5, counts={0: 8, 1: 8, 2: 16}, total=32))
    oracle = -(0.25 * math.log2(0.25) * 2 + 0.5 * math.log2(0.5)) + 2 / (64 * math.log(2))
    ok = plugin == 4.0 and abs(h16 - 4.0) < 1e-3 and abs(h_mix - oracle) < 1e-3
    report("entropy-anchors", ok,
           f"uniform16 plug-in {plugin} (exact), corrected {h16:.6f}, "
           f"mixed {h_mix:.6f} vs oracle {oracle:.6f}")


def test_spectral_slopes():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    pink = spectral_slope(synthesize_power_law(4096, 1.0, rng))
    white = spectral_slope(rng.standard_normal(4096))
    elapsed = time.perf_counter() - t0
    ok = abs(pink + 1.0) <= 0.2 and abs(white) <= 0.15 and elapsed < 5.0
    report("spectral-slopes", ok,
           f"1/f slope {pink:.3f}, white {white:.3f}, {elapsed:.2f}s")


def test_privacy_sweep_shape():
    population = [
        (s, "composition")
        for s, _ in synth_population("composition", SWEEP_N, seed=SWEEP_SEED_COMP,
                                     words=SWEEP_WORDS, n_writers=16,
                                     motor_offsets=True, model=MODEL)
    ] + [
        (s, "transcription")
        for s, _ in synth_population("transcription", SWEEP_N, seed=SWEEP_SEED_TRANS,
                                     words=SWEEP_WORDS, n_writers=16,
                                     motor_offsets=True, model=MODEL)
    ]
    rows = sweep([1, 5, 10, 20, 50], population, model=MODEL)
    acc = [r.accuracy for r in rows]
    pooled = [r.pooled_entropy_bits for r in rows]
    monotone_acc = all(a >= b for a, b in zip(acc, acc[1:]))
    strictly_dec = all(a > b for a, b in zip(pooled, pooled[1:]))
    gap = acc[1] - acc[-1]
    ok = monotone_acc and strictly_dec and gap >= 0.15
    report("privacy-sweep-shape", ok,
           f"acc {['%.3f' % a for a in acc]}, entropy {['%.2f' % p for p in pooled]}, "
           f"gap(5-50) {gap*100:.1f} pts")


def test_adversarial_suite(corpus400, rehearsed125):
    # tier 1: naive slowdown classified transcription
    naive = 0
    for i in range(100):
        cfg = SynthConfig(seed=child_seed(70_000, i), words=CORPUS_WORDS,
                          attack="naive_slowdown")
        s, _ = synth_forgery(cfg, model=MODEL)
        a = analyze_session(s, model=MODEL, r=5, with_spectrum=False)
        naive += a.clc_report.verdict == "transcription"
    tier1 = naive / 100

    # tier 2: pause map raises CLC above the transcription range
    pm = []
    for i in range(60):
        cfg = SynthConfig(seed=child_seed(71_000, i), words=CORPUS_WORDS,
                          attack="pause_map")
        s, _ = synth_forgery(cfg, model=MODEL)
        pm.append(analyze_session(s, model=MODEL, r=5, with_spectrum=False).clc_report.rho)
    pm_mean = float(np.mean(pm))
    evaded = float(np.mean([r >= 0.22 for r in pm]))

    # tier 3: rehearsed profiles flagged by the consistency check
    norms = default_population_norms()
    by_writer = {}
    for a in corpus400["a_comp"]:
        rec = build_evidence(a.clc_report, evidence_aggregates(a),
                             salt=bytes(16), created_at="t")
        by_writer.setdefault(rec.writer, []).append(rec)
    genuine_profiles = [recs for recs in by_writer.values() if len(recs) == 5]
    fpr = float(np.mean([consistency_check(p, norms).flag for p in genuine_profiles]))
    detection = {}
    for m in (2, 3, 5):
        detection[m] = float(np.mean(
            [consistency_check(recs[:m], norms).flag for recs in rehearsed125]
        ))
    monotone = detection[2] <= detection[3] <= detection[5]
    ok = (tier1 >= 0.95 and pm_mean > 0.12 and detection[5] >= 0.80
          and fpr <= 0.05 and monotone)
    report("adversarial-suite", ok,
           f"slowdown->transcription {tier1:.2f}, pause-map rho {pm_mean:.2f} "
           f"(evasion rate {evaded:.2f}), rehearsed flagged m=2/3/5 "
           f"{detection[2]:.2f}/{detection[3]:.2f}/{detection[5]:.2f}, FPR {fpr:.3f} "
           f"on {len(genuine_profiles)} genuine profiles")


def test_evidence_integrity(corpus400):
    a = corpus400["a_comp"][0]
    rec = build_evidence(a.clc_report, evidence_aggregates(a), salt=bytes(range(16)),
                         created_at="2026-01-01T00:00:00+00:00")
    digest = commit(rec)
    ok = verify_commitment(rec, digest)
    ok = ok and canonical_bytes(rec.to_dict()) == canonical_bytes(rec.to_dict())
    d = rec.to_dict()
    shuffled = {k: d[k] for k in reversed(list(d))}
    ok = ok and canonical_bytes(shuffled) == canonical_bytes(d)

    flat = []

    def walk(node, path):
        if isinstance(node, dict):
            for k, v in node.items():
                walk(v, path + [k])
        else:
            flat.append((path, node))

    walk(d, [])
    rng = np.random.default_rng(5)
    failures = 0
    for _ in range(10_000):
        path, value = flat[rng.integers(0, len(flat))]
        mutated = copy.deepcopy(d)
        target = mutated
        for key in path[:-1]:
            target = target[key]
        if isinstance(value, bool):
            target[path[-1]] = not value
        elif isinstance(value, int):
            target[path[-1]] = value + int(rng.integers(1, 1000))
        elif isinstance(value, float):
            target[path[-1]] = value + float(rng.integers(1, 100)) / 100.0
        else:
            target[path[-1]] = str(value) + "x"
        failures += not verify_commitment(EvidenceRecord.from_dict(mutated), digest)
    ok = ok and failures == 10_000
    report("evidence-integrity", ok,
           f"round-trip + key-order stable, {failures}/10000 mutations rejected")


def test_primary_standalone():
    # the primary package must not reach into any frontend component
    import pathlib

    import cogsig

    pkg_dir = pathlib.Path(cogsig.__file__).parent
    refs = [
        p for p in pkg_dir.rglob("*.py")
        if "frontend" in p.read_text("utf-8")
    ]
    # and a full pipeline round trip works in isolation
    from cogsig.events import parse_log, serialize
    from cogsig.synth import synth_composition

    s, _ = synth_composition(SynthConfig(seed=31337, words=200), model=MODEL)
    a = analyze_session(parse_log(serialize(s)), model=MODEL, r=5)
    ok = not refs and a.clc_report.n > 0
    report("primary-standalone", ok,
           f"no frontend references in {pkg_dir.name}/, end-to-end verdict "
           f"{a.clc_report.verdict}")
