"""Deterministic session synthesizer: genuine composition, mechanical
transcription, and three graded timing-forgery attacks.

All randomness flows through a single PCG64 stream seeded from the config,
and every distribution is sampled by explicit inverse-transform from
``rng.random()`` uniforms, so a config (seed included) maps to a
byte-identical serialized session.

Timing model
------------
Within-word intervals are log-logistic around ``motor_median_ms``. The
interval before a word's first character adds, in composition mode, a
cognitive term proportional to the word's surprisal (the coupling the
analyzer is built to detect) and, in every mode, a small perceptual term
proportional to word length: long rare words slow even a transcriber down,
which is what keeps transcription CLC weakly positive instead of zero.
Planning pauses (log-normal over 1-5 s) replace the pre-word interval at
sentence starts; revision episodes type a few wrong characters, pause,
erase them, and continue.

Attack tiers:

* ``naive_slowdown``  - transcription with the motor component inflated;
  scaling the noise floor only *dilutes* rank correlation, so CLC collapses
  toward zero.
* ``pause_map``       - transcription plus deliberate pauses at the
  top-decile surprisal words: the rehearsed pause map. Raises CLC well above
  the transcription range (single-session evasion).
* ``rehearsed_profile`` - pause_map with near-constant pause durations and
  suppressed revision activity: the performance artifacts that multi-session
  consistency checks are designed to flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np
from scipy.special import ndtri

from .complexity import NgramModel, default_model, profile_document
from .errors import InvalidConfig
from .events import KeystrokeEvent, Session

ATTACKS = ("none", "naive_slowdown", "pause_map", "rehearsed_profile")

# Session-gain medians/spreads are calibrated (scripts/calibrate_synth.py)
# so the population CLC of composition lands at mean 0.45 / SD 0.12 and of
# transcription at mean 0.07 / SD 0.08, measured through the default
# analysis pipeline at r=5.
BASE_MOTOR_MEDIAN_MS = 140.0
DEFAULT_CLC_GAIN = 2.4
DEFAULT_GAIN_SPREAD = 0.56
DEFAULT_LENGTH_GAIN = 0.075
DEFAULT_LENGTH_SPREAD = 0.50
DEFAULT_SLOW_READER_RATE = 0.34
DEFAULT_SLOW_LENGTH_GAIN = 1.1
DEFAULT_SLOW_LENGTH_SPREAD = 0.12


@dataclass(frozen=True)
class SynthConfig:
    seed: int
    words: int = 1500
    motor_median_ms: float = 140.0
    motor_shape: float = 12.0
    clc_gain: float = DEFAULT_CLC_GAIN  # ms per bit of surprisal (session median)
    planning_rate: float = 0.7
    revision_rate: float = 0.15
    attack: str = "none"
    gain_spread: float = DEFAULT_GAIN_SPREAD  # lognormal sigma of the session gain
    cog_noise: float = 0.25  # lognormal sigma of per-word coupling noise
    length_gain: float = DEFAULT_LENGTH_GAIN  # ms per character (perceptual channel)
    length_spread: float = DEFAULT_LENGTH_SPREAD
    # transcribers split into fluent touch-typists and word-by-word readers,
    # whose perceptual coupling is an order of magnitude stronger
    slow_reader_rate: float = DEFAULT_SLOW_READER_RATE
    slow_length_gain: float = DEFAULT_SLOW_LENGTH_GAIN
    slow_length_spread: float = DEFAULT_SLOW_LENGTH_SPREAD
    # composers pause at word boundaries (lexical retrieval); transcribers
    # copy straight through them, which keeps their signal tightly bounded
    wordgap_factor: float = 1.52
    transcribe_wordgap_factor: float = 1.15
    # the space-plus-first-key boundary action is a practiced motor program,
    # much tighter than within-word typing; the word-level cognitive
    # modulation rides on it at the tens-of-ms scale, in the crossover band
    # that 5 ms quantization preserves and 50 ms quantization erases
    boundary_shape: float = 40.0
    typo_rate: float = 0.01  # per word
    slowdown_factor: float = 2.5
    writer: str = "writer-0"
    session_id: str = "session-0"

    def validate(self) -> None:
        if self.words < 1:
            raise InvalidConfig(f"words must be >= 1, got {self.words}")
        if self.motor_median_ms <= 0:
            raise InvalidConfig(f"motor_median_ms must be > 0, got {self.motor_median_ms}")
        if self.motor_shape <= 0:
            raise InvalidConfig(f"motor_shape must be > 0, got {self.motor_shape}")
        if self.clc_gain < 0:
            raise InvalidConfig(f"clc_gain must be >= 0, got {self.clc_gain}")
        if self.attack not in ATTACKS:
            raise InvalidConfig(f"unknown attack {self.attack!r}")


@dataclass(frozen=True)
class GroundTruth:
    kind: str  # composition | transcription | forgery
    attack: str
    planning_events: tuple[int, ...]  # events whose preceding IKI is a planning pause
    revising_spans: tuple[tuple[int, int], ...]
    session_gain_ms_per_bit: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "attack": self.attack,
            "planning_events": list(self.planning_events),
            "revising_spans": [list(s) for s in self.revising_spans],
            "session_gain_ms_per_bit": self.session_gain_ms_per_bit,
        }


# --- seeded primitives -----------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _loglogistic(rng: np.random.Generator, median: float, shape: float) -> float:
    u = rng.random()
    return median * (u / (1.0 - u)) ** (1.0 / shape)


def _lognormal_range(rng: np.random.Generator, lo: float, hi: float) -> float:
    # ~95% of the mass inside [lo, hi]
    mu = 0.5 * (math.log(lo) + math.log(hi))
    sigma = 0.5 * (math.log(hi) - mu)
    return math.exp(mu + sigma * ndtri(rng.random()))


def _lognormal_factor(rng: np.random.Generator, sigma: float) -> float:
    return math.exp(sigma * ndtri(rng.random())) if sigma > 0 else 1.0


def _randint(rng: np.random.Generator, lo: int, hi: int) -> int:
    return lo + int(rng.random() * (hi - lo + 1))


def _weighted_index(rng: np.random.Generator, cum_weights: np.ndarray) -> int:
    u = rng.random() * cum_weights[-1]
    return int(np.searchsorted(cum_weights, u, side="right"))


# --- text generation -------------------------------------------------------

_WORDLIST: list[str] | None = None
_CUMW: np.ndarray | None = None


def _vocabulary() -> tuple[list[str], np.ndarray]:
    global _WORDLIST, _CUMW
    if _WORDLIST is None:
        text = resources.files("cogsig.data").joinpath("wordlist.txt").read_text("utf-8")
        _WORDLIST = [w for w in text.split() if w]
        ranks = np.arange(len(_WORDLIST), dtype=np.float64)
        _CUMW = np.cumsum(1.0 / (ranks + 2.7) ** 1.05)
    return _WORDLIST, _CUMW


def generate_text(rng: np.random.Generator, n_words: int) -> str:
    """Zipf-weighted pseudo-prose: sentences of 6-16 words, period-separated.

    Word frequency falls with list rank and rank correlates with length, so
    rare words are also the long ones, as in natural text.
    """
    vocab, cumw = _vocabulary()
    sentences = []
    produced = 0
    while produced < n_words:
        n = min(_randint(rng, 6, 16), n_words - produced)
        picks = [vocab[_weighted_index(rng, cumw)] for _ in range(n)]
        picks[0] = picks[0].capitalize()
        sentences.append(" ".join(picks) + ".")
        produced += n
    return " ".join(sentences)


def sentence_start_flags(text: str, char_starts: tuple[int, ...]) -> list[bool]:
    """True for words that open a sentence (document start or a word whose
    preceding non-space character ends a sentence)."""
    flags = []
    for start in char_starts:
        i = start - 1
        while i >= 0 and text[i].isspace():
            i -= 1
        flags.append(i < 0 or text[i] in ".!?")
    return flags


# --- the typing engine -----------------------------------------------------

_WRONG_CHARS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class _Mode:
    planning: bool
    g_cog: float  # ms per bit, this session
    g_len: float  # ms per char, this session
    motor_median: float
    typo_rate: float
    revision_rate: float
    wordgap_factor: float
    deliberate: dict[int, str] = field(default_factory=dict)  # word index -> pause style


def _deliberate_pause(rng: np.random.Generator, style: str) -> float:
    if style == "rehearsed":
        return 1300.0 + 200.0 * rng.random()  # near-constant: the tell
    return _lognormal_range(rng, 800.0, 3000.0)


def _type_session(
    cfg: SynthConfig,
    text: str,
    model: NgramModel,
    mode: _Mode,
    kind: str,
    rng: np.random.Generator,
) -> tuple[Session, GroundTruth]:
    profile = profile_document(model, text)
    starts = sentence_start_flags(text, profile.char_starts)
    word_at_start = {c: i for i, c in enumerate(profile.char_starts)}

    shape = cfg.motor_shape
    events: list[KeystrokeEvent] = []
    planning_events: list[int] = []
    revising_spans: list[tuple[int, int]] = []
    t = 0.0
    doc_len = 0

    def emit(kind_: str, payload: str | None, iki: float) -> None:
        nonlocal t, doc_len
        t += max(1.0, iki) if events else 0.0
        if kind_ == "insert":
            events.append(KeystrokeEvent(t=int(t), kind="insert", pos=doc_len, payload=payload))
            doc_len += 1
        else:  # backspace
            doc_len -= 1
            events.append(KeystrokeEvent(t=int(t), kind="backspace", pos=doc_len))

    # plan typos: word index -> char offset within the word (never the first)
    words = profile.words
    typo_at: dict[int, int] = {}
    revise_before: set[int] = set()
    sentence_idx = -1
    for wi, is_start in enumerate(starts):
        if is_start:
            sentence_idx += 1
            # pick one mid-sentence word boundary for a possible revision
            if mode.revision_rate > 0 and rng.random() < mode.revision_rate and wi + 2 < len(words):
                revise_before.add(wi + 1 + _randint(rng, 0, 1))
        if mode.typo_rate > 0 and len(words[wi]) >= 2 and rng.random() < mode.typo_rate:
            typo_at[wi] = _randint(rng, 1, len(words[wi]) - 1)

    current_word = -1
    char_in_word = -1
    for c, ch in enumerate(text):
        if c in word_at_start:
            current_word = word_at_start[c]
            char_in_word = 0
            wi = current_word
            if wi in revise_before and events:
                # wrong start typed, noticed, erased
                n_bad = _randint(rng, 2, 6)
                first_bad = len(events)
                for _ in range(n_bad):
                    bad = _WRONG_CHARS[_randint(rng, 0, 25)]
                    emit("insert", bad, _loglogistic(rng, mode.motor_median, shape))
                emit("backspace", None, _lognormal_range(rng, 300.0, 900.0))
                for _ in range(n_bad - 1):
                    emit("backspace", None, _loglogistic(rng, mode.motor_median * 0.75, shape))
                revising_spans.append((first_bad, len(events) - 1))
            if starts[wi] and mode.planning and rng.random() < cfg.planning_rate and events:
                iki = _lognormal_range(rng, 1000.0, 5000.0)
                planning_events.append(len(events))
            elif wi in mode.deliberate and events:
                iki = _deliberate_pause(rng, mode.deliberate[wi])
            else:
                iki = _loglogistic(rng, mode.motor_median * mode.wordgap_factor, cfg.boundary_shape)
                iki += mode.g_cog * profile.surprisal_bits[wi] * _lognormal_factor(rng, cfg.cog_noise)
                iki += mode.g_len * len(words[wi])
            emit("insert", ch, iki)
            continue
        if current_word >= 0:
            char_in_word += 1
            if typo_at.get(current_word) == char_in_word:
                wrong = _WRONG_CHARS[_randint(rng, 0, 25)]
                if wrong == ch:
                    wrong = "q" if ch != "q" else "z"
                first_bad = len(events)
                emit("insert", wrong, _loglogistic(rng, mode.motor_median, shape))
                emit("backspace", None, _lognormal_range(rng, 200.0, 600.0))
                revising_spans.append((first_bad, len(events) - 1))
        emit("insert", ch, _loglogistic(rng, mode.motor_median, shape))

    session = Session(
        events=tuple(events),
        resolution_r=1,  # raw timestamps; quantization happens downstream
        privacy_mode=False,
        writer=cfg.writer,
        session_id=cfg.session_id,
    )
    truth = GroundTruth(
        kind=kind,
        attack=cfg.attack if kind == "forgery" else "none",
        planning_events=tuple(planning_events),
        revising_spans=tuple(revising_spans),
        session_gain_ms_per_bit=mode.g_cog,
    )
    return session, truth


def _prepare(cfg: SynthConfig, text: str | None, model: NgramModel | None):
    cfg.validate()
    rng = make_rng(cfg.seed)
    if text is None:
        text = generate_text(rng, cfg.words)
    if model is None:
        model = default_model()
    return rng, text, model


def _tempo(cfg: SynthConfig) -> float:
    # pause magnitudes scale with the writer's overall tempo, so per-writer
    # motor offsets shift the whole timing profile rather than just its noise
    return cfg.motor_median_ms / BASE_MOTOR_MEDIAN_MS


def _draw_length_gain(rng: np.random.Generator, cfg: SynthConfig, transcribing: bool) -> float:
    if transcribing and rng.random() < cfg.slow_reader_rate:
        return cfg.slow_length_gain * _tempo(cfg) * _lognormal_factor(rng, cfg.slow_length_spread)
    return cfg.length_gain * _tempo(cfg) * _lognormal_factor(rng, cfg.length_spread)


def synth_composition(
    cfg: SynthConfig, text: str | None = None, model: NgramModel | None = None
) -> tuple[Session, GroundTruth]:
    """Three-phase generator: planning pauses at sentence starts, surprisal-
    coupled pre-word pauses, revision episodes."""
    rng, text, model = _prepare(cfg, text, model)
    if cfg.clc_gain < 0:
        raise InvalidConfig("composition requires clc_gain >= 0")
    mode = _Mode(
        planning=True,
        g_cog=cfg.clc_gain * _tempo(cfg) * _lognormal_factor(rng, cfg.gain_spread),
        g_len=_draw_length_gain(rng, cfg, transcribing=False),
        motor_median=cfg.motor_median_ms,
        typo_rate=cfg.typo_rate,
        revision_rate=cfg.revision_rate,
        wordgap_factor=cfg.wordgap_factor,
    )
    return _type_session(cfg, text, model, mode, "composition", rng)


def synth_transcription(
    cfg: SynthConfig, text: str | None = None, model: NgramModel | None = None
) -> tuple[Session, GroundTruth]:
    """Stationary motor signal: no planning pauses, no cognitive coupling,
    rare typo fixes only. The weak perceptual length channel remains."""
    rng, text, model = _prepare(cfg, text, model)
    mode = _Mode(
        planning=False,
        g_cog=0.0,
        g_len=_draw_length_gain(rng, cfg, transcribing=True),
        motor_median=cfg.motor_median_ms,
        typo_rate=cfg.typo_rate,
        revision_rate=0.0,
        wordgap_factor=cfg.transcribe_wordgap_factor,
    )
    return _type_session(cfg, text, model, mode, "transcription", rng)


def synth_forgery(
    cfg: SynthConfig, text: str | None = None, model: NgramModel | None = None
) -> tuple[Session, GroundTruth]:
    """Adversarial tiers; see the module docstring."""
    cfg.validate()
    if cfg.attack == "none":
        raise InvalidConfig("synth_forgery requires attack != 'none'")
    rng, text, model = _prepare(cfg, text, model)

    if cfg.attack == "naive_slowdown":
        mode = _Mode(
            planning=False,
            g_cog=0.0,
            g_len=_draw_length_gain(rng, cfg, transcribing=True),
            motor_median=cfg.motor_median_ms * cfg.slowdown_factor,
            typo_rate=cfg.typo_rate,
            revision_rate=0.0,
            wordgap_factor=cfg.transcribe_wordgap_factor,
        )
    else:
        profile = profile_document(model, text)
        decile = np.quantile(profile.surprisal_bits, 0.9)
        style = "rehearsed" if cfg.attack == "rehearsed_profile" else "map"
        deliberate = {
            wi: style
            for wi, s in enumerate(profile.surprisal_bits)
            if s >= decile and wi > 0
        }
        mode = _Mode(
            planning=False,
            g_cog=0.0,
            g_len=_draw_length_gain(rng, cfg, transcribing=True),
            motor_median=cfg.motor_median_ms,
            typo_rate=0.0 if cfg.attack == "rehearsed_profile" else cfg.typo_rate,
            revision_rate=0.0,
            wordgap_factor=cfg.transcribe_wordgap_factor,
            deliberate=deliberate,
        )
    return _type_session(cfg, text, model, mode, "forgery", rng)


def synth_session(
    cfg: SynthConfig, text: str | None = None, model: NgramModel | None = None
) -> tuple[Session, GroundTruth]:
    """Dispatch on cfg.attack: 'none' means genuine composition."""
    if cfg.attack == "none":
        return synth_composition(cfg, text, model)
    return synth_forgery(cfg, text, model)


# --- population builders ---------------------------------------------------

def child_seed(base_seed: int, index: int) -> int:
    return (base_seed * 1_000_003 + index * 7_919 + 12_289) % (2**63)


def writer_motor_median(base_seed: int, writer_index: int, base_ms: float = 140.0,
                        spread: float = 0.12) -> float:
    """Stable per-writer motor offset: the identity signal the privacy sweep
    is supposed to erode."""
    rng = make_rng(child_seed(base_seed ^ 0x5EED, writer_index))
    return base_ms * _lognormal_factor(rng, spread)


def synth_population(
    kind: str,
    n_sessions: int,
    seed: int,
    words: int = 1500,
    n_writers: int | None = None,
    motor_offsets: bool = False,
    model: NgramModel | None = None,
    **overrides,
) -> list[tuple[Session, GroundTruth]]:
    """n_sessions independent sessions of one kind ('composition',
    'transcription', or an attack name), round-robin across writers."""
    if model is None:
        model = default_model()
    n_writers = n_writers or n_sessions
    out = []
    for i in range(n_sessions):
        w = i % n_writers
        median = (
            writer_motor_median(seed, w, overrides.get("motor_median_ms", 140.0))
            if motor_offsets
            else overrides.get("motor_median_ms", 140.0)
        )
        params = dict(overrides)
        params["motor_median_ms"] = median
        cfg = SynthConfig(
            seed=child_seed(seed, i),
            words=words,
            writer=f"writer-{w}",
            session_id=f"{kind}-{i}",
            attack=kind if kind in ATTACKS[1:] else "none",
            **params,
        )
        if kind == "composition":
            out.append(synth_composition(cfg, model=model))
        elif kind == "transcription":
            out.append(synth_transcription(cfg, model=model))
        elif kind in ATTACKS[1:]:
            out.append(synth_forgery(cfg, model=model))
        else:
            raise InvalidConfig(f"unknown population kind {kind!r}")
    return out


def iki_span_orders(ikis: np.ndarray, q: float = 0.005) -> float:
    """Orders of magnitude between the q and 1-q interval quantiles; the
    non-stationarity yardstick for composition vs transcription."""
    lo = max(float(np.quantile(ikis, q)), 1.0)
    hi = max(float(np.quantile(ikis, 1.0 - q)), 1.0)
    return math.log10(hi / lo)
