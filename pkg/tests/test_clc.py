import math
import warnings

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from cogsig.clc import (
    COMPOSITION_MEAN,
    COMPOSITION_SD,
    DEFAULT_N_MIN,
    DEFAULT_TAU,
    EQUAL_LIKELIHOOD_TAU,
    TRANSCRIPTION_MEAN,
    TRANSCRIPTION_SD,
    LatencyComplexityPairs,
    classify,
    compute_clc,
    pair_latency_complexity,
    power,
    spearman,
)
from cogsig.complexity import profile_document, train_ngram
from cogsig.errors import AlignmentFailure, InvalidParameters, TooFewPairs
from cogsig.events import KeystrokeEvent, Session


def pairs_of(xs, ys):
    return LatencyComplexityPairs(
        pauses_ms=np.asarray(xs, dtype=np.int64),
        complexity=np.asarray(ys, dtype=np.float64),
    )


# --- brute-force oracle -------------------------------------------------------

def oracle_spearman(x, y):
    """O(n^2) rank correlation: average ranks by pairwise comparison, then
    Pearson on the ranks. Kept deliberately naive."""
    def ranks(a):
        out = []
        for i in range(len(a)):
            less = sum(1 for b in a if b < a[i])
            equal = sum(1 for b in a if b == a[i])
            out.append(less + (equal + 1) / 2.0)
        return out

    rx, ry = ranks(list(x)), ranks(list(y))
    mx = sum(rx) / len(rx)
    my = sum(ry) / len(ry)
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    if dx == 0 or dy == 0:
        return 0.0
    return num / (dx * dy)


def test_monotone_pairs_extremes():
    assert compute_clc(pairs_of([1, 2, 3, 4], [10, 20, 30, 40])) == pytest.approx(1.0)
    assert compute_clc(pairs_of([4, 3, 2, 1], [10, 20, 30, 40])) == pytest.approx(-1.0)


def test_five_pair_example_against_oracle():
    # Oracle-computed Spearman for {(1,2),(2,1),(3,4),(4,3),(5,5)} is 0.8
    # (the concordance count 8C/2D of these pairs gives Kendall tau = 0.6,
    # a different statistic; this module is Spearman throughout).
    xs, ys = [1, 2, 3, 4, 5], [2, 1, 4, 3, 5]
    expected = oracle_spearman(xs, ys)
    assert expected == pytest.approx(0.8)
    assert compute_clc(pairs_of(xs, ys)) == pytest.approx(expected)


def test_too_few_pairs():
    with pytest.raises(TooFewPairs):
        compute_clc(pairs_of([1], [1]))


@given(
    st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8)), min_size=2, max_size=12),
)
@settings(max_examples=300)
def test_spearman_matches_oracle_with_ties(pts):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    ours = spearman(np.asarray(xs, float), np.asarray(ys, float))
    assert ours == pytest.approx(oracle_spearman(xs, ys), abs=1e-12)


@given(
    st.lists(st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6)), min_size=3, max_size=40),
)
@settings(max_examples=100)
def test_spearman_matches_scipy(pts):
    xs = np.asarray([p[0] for p in pts])
    ys = np.asarray([p[1] for p in pts])
    ours = spearman(xs, ys)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # scipy warns on constant inputs
        ref = scipy.stats.spearmanr(xs, ys).statistic
    if math.isnan(ref):
        assert ours == 0.0  # constant coordinate convention
    else:
        assert ours == pytest.approx(ref, abs=1e-9)


@given(
    st.lists(st.tuples(st.integers(0, 5000), st.floats(0, 16)), min_size=5, max_size=60),
    st.sampled_from([1, 2, 5, 10]),
)
@settings(max_examples=100)
def test_invariance_under_monotone_transform_and_rank_preserving_quantization(pts, r):
    xs = np.asarray([p[0] for p in pts], dtype=np.float64)
    ys = np.asarray([p[1] for p in pts])
    base = spearman(xs, ys)
    # strictly monotone transforms leave rho unchanged
    assert spearman(np.exp(xs / 5000.0), ys) == pytest.approx(base, abs=1e-9)
    assert spearman(xs * 3.0 + 17.0, ys) == pytest.approx(base, abs=1e-9)
    # quantization too, whenever it preserves the pause rank order
    q = (xs.astype(np.int64) // r) * r
    ranks_preserved = np.array_equal(np.argsort(np.argsort(xs)), np.argsort(np.argsort(q))) and \
        len(np.unique(q)) == len(np.unique(xs))
    if ranks_preserved:
        assert spearman(q.astype(float), ys) == pytest.approx(base, abs=1e-9)


# --- pairing -------------------------------------------------------------------

def _typed_session(text, pauses):
    """Type text char by char; pauses[i] is the IKI before word i's first char."""
    from cogsig.complexity import tokenize

    starts = {t.start: i for i, t in enumerate(tokenize(text))}
    events = []
    t = 0
    for c, ch in enumerate(text):
        iki = 120
        if c in starts and starts[c] > 0:
            iki = pauses[starts[c]]
        if c > 0:
            t += iki
        events.append(KeystrokeEvent(t=t, kind="insert", pos=c, payload=ch))
    return Session(tuple(events))


def test_two_word_document_one_pair():
    model = train_ngram("alpha beta alpha beta", order=1, alpha=0.5)
    text = "alpha beta"
    session = _typed_session(text, [0, 700])
    prof = profile_document(model, text)
    pairs = pair_latency_complexity(session, prof)
    assert pairs.n == 1
    assert pairs.pauses_ms.tolist() == [700]


def test_constructed_monotone_alignment():
    corpus = " ".join(f"w{i}" for i in range(12)) * 3
    model = train_ngram(corpus, order=1, alpha=0.1)
    text = " ".join(f"w{i}" for i in range(12))
    prof = profile_document(model, text)
    pauses = [0] + [int(100 * s) for s in prof.surprisal_bits[1:]]
    session = _typed_session(text, pauses)
    pairs = pair_latency_complexity(session, prof)
    rho = compute_clc(pairs)
    assert rho > 0.99


def test_privacy_mode_pairs_use_cbins():
    events = []
    t = 0
    for i, (iki, cbin) in enumerate([(0, 3), (500, 5), (200, 1), (900, 7)]):
        t += iki
        events.append(KeystrokeEvent(t=t, kind="insert", pos=i, cbin=cbin))
    session = Session(tuple(events), privacy_mode=True)
    pairs = pair_latency_complexity(session)
    assert pairs.n == 3
    assert pairs.pauses_ms.tolist() == [500, 200, 900]
    assert pairs.complexity.tolist() == [5.0, 1.0, 7.0]


def test_alignment_failure_on_mismatched_profile():
    model = train_ngram("a b c d", order=1, alpha=0.1)
    session = _typed_session("a b", [0, 300])
    wrong = profile_document(model, "c d a")
    with pytest.raises(AlignmentFailure):
        pair_latency_complexity(session, wrong)


# --- classify -------------------------------------------------------------------

def test_classify_examples():
    assert classify(0.45, 1500) == "composition"
    assert classify(0.07, 1500) == "transcription"
    assert classify(0.45, 50) == "inconclusive"


def test_classify_boundaries():
    assert classify(DEFAULT_TAU, DEFAULT_N_MIN) == "composition"
    assert classify(DEFAULT_TAU - 1e-9, DEFAULT_N_MIN) == "transcription"
    assert classify(0.9, DEFAULT_N_MIN - 1) == "inconclusive"


def test_equal_likelihood_threshold_rederived():
    comp = scipy.stats.norm(COMPOSITION_MEAN, COMPOSITION_SD)
    trans = scipy.stats.norm(TRANSCRIPTION_MEAN, TRANSCRIPTION_SD)
    root = brentq(lambda x: comp.logpdf(x) - trans.logpdf(x), 0.1, 0.4, xtol=1e-9)
    assert root == pytest.approx(EQUAL_LIKELIHOOD_TAU, abs=1e-5)
    # the shipped default is the spec value; the derived optimum sits nearby
    assert abs(root - DEFAULT_TAU) < 0.02


# --- power -----------------------------------------------------------------------

def test_power_at_stated_operating_point():
    assert power(1500, 0.35, 0.12, 0.05) > 0.99


def test_power_at_null_equals_alpha():
    for alpha in (0.01, 0.05, 0.2):
        for n in (10, 100, 1500):
            assert power(n, 0.3, 0.3, alpha) == pytest.approx(alpha, abs=1e-12)


def test_power_small_n_is_weak():
    p = power(10, 0.35, 0.12, 0.05)
    assert 0.05 < p < 0.5


def test_power_invalid_parameters():
    with pytest.raises(InvalidParameters):
        power(3, 0.3, 0.1, 0.05)
    with pytest.raises(InvalidParameters):
        power(100, 0.1, 0.3, 0.05)  # rho1 < rho0
    with pytest.raises(InvalidParameters):
        power(100, 0.3, 0.1, 1.5)


@given(
    st.integers(5, 4000),
    st.integers(5, 4000),
    st.floats(0.01, 0.6),
    st.floats(0.0, 0.3),
)
@settings(max_examples=200)
def test_power_monotone_in_n_and_separation(n1, n2, delta, rho0):
    rho1 = rho0 + delta
    lo_n, hi_n = sorted((n1, n2))
    assert power(hi_n, rho1, rho0) >= power(lo_n, rho1, rho0) - 1e-12
    assert power(lo_n, rho1, rho0) >= power(lo_n, rho0 + delta / 2, rho0) - 1e-12


def test_power_monte_carlo_cross_check_small():
    # bivariate-normal copula at the target Spearman; same one-sided test
    n, rho1, rho0, alpha = 400, 0.35, 0.12, 0.05
    trials = 2000
    rng = np.random.default_rng(11)
    r_pearson = 2 * math.sin(math.pi * rho1 / 6)
    z_crit = scipy.stats.norm.ppf(1 - alpha)
    cov = [[1, r_pearson], [r_pearson, 1]]
    rejected = 0
    for _ in range(trials):
        xy = rng.multivariate_normal([0, 0], cov, size=n)
        rho_hat = spearman(xy[:, 0], xy[:, 1])
        stat = (math.atanh(rho_hat) - math.atanh(rho0)) * math.sqrt(n - 3)
        rejected += stat > z_crit
    mc = rejected / trials
    assert mc == pytest.approx(power(n, rho1, rho0, alpha), abs=0.03)
