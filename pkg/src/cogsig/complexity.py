"""Per-word content complexity as n-gram surprisal.

A word's complexity is -log2 P(word | previous k words) under an add-alpha
smoothed n-gram model trained on a reference corpus. Smoothing keeps every
surprisal finite, including for out-of-vocabulary words. Documents are also
binned into 8 within-document octile levels, which is the coarse complexity
channel used by privacy-mode sessions.
"""

from __future__ import annotations

import math
import re
import string
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import EmptyCorpus, EmptyDocument

# Context length 1 (a bigram model): the smallest order that captures
# context, and the largest whose contexts stay densely observed on a
# bounded reference corpus. Sparse higher-order contexts collapse most
# surprisal values onto the unseen-context constant, which starves the
# pause-complexity correlation of rank variation.
DEFAULT_ORDER = 1
DEFAULT_ALPHA = 0.1
N_COMPLEXITY_BINS = 8

_TOKEN_RE = re.compile(r"\S+")
_PUNCT = string.punctuation


@dataclass(frozen=True)
class Token:
    word: str
    start: int  # char offset of the first kept character in the source text


def tokenize(text: str) -> list[Token]:
    """Whitespace tokens, stripped of surrounding punctuation and lowercased.

    Tokens that are pure punctuation are dropped. ``start`` points at the
    first character that survives the strip, so it can be mapped back onto
    keystroke events.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        raw = m.group()
        stripped = raw.strip(_PUNCT)
        if not stripped:
            continue
        lead = len(raw) - len(raw.lstrip(_PUNCT))
        tokens.append(Token(word=stripped.lower(), start=m.start() + lead))
    return tokens


@dataclass(frozen=True)
class NgramModel:
    """Add-alpha smoothed conditional word model with context length ``order``."""

    order: int
    alpha: float
    vocab: frozenset
    counts: dict  # context tuple -> Counter of next word
    context_totals: dict  # context tuple -> int

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def prob(self, word: str, context: tuple) -> float:
        context = tuple(context)[-self.order:] if context else ()
        if len(context) != self.order:
            context = None  # short context is treated as unseen
        total = self.context_totals.get(context, 0)
        count = self.counts[context][word] if total else 0
        return (count + self.alpha) / (total + self.alpha * self.vocab_size)


def train_ngram(corpus: str, order: int = DEFAULT_ORDER, alpha: float = DEFAULT_ALPHA) -> NgramModel:
    """Count (context, word) occurrences over the tokenized corpus.

    ``order`` is the context length (1-3); alpha > 0 is the smoothing mass
    added to every vocabulary word in every context.
    """
    if order not in (1, 2, 3):
        raise ValueError(f"order must be 1, 2 or 3, got {order}")
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    words = [t.word for t in tokenize(corpus)]
    if not words:
        raise EmptyCorpus("corpus contains no words after tokenization")
    counts: dict[tuple, Counter] = {}
    totals: dict[tuple, int] = {}
    for i in range(order, len(words)):
        ctx = tuple(words[i - order:i])
        if ctx not in counts:
            counts[ctx] = Counter()
        counts[ctx][words[i]] += 1
        totals[ctx] = totals.get(ctx, 0) + 1
    return NgramModel(
        order=order,
        alpha=float(alpha),
        vocab=frozenset(words),
        counts=counts,
        context_totals=totals,
    )


def surprisal(model: NgramModel, word: str, context: tuple = ()) -> float:
    """-log2 P(word | context) in bits; always finite thanks to smoothing."""
    return -math.log2(model.prob(word, context))


@dataclass(frozen=True)
class ComplexityProfile:
    """Per-word surprisal aligned to character offsets of the source text."""

    words: tuple[str, ...]
    char_starts: tuple[int, ...]
    surprisal_bits: np.ndarray
    bins: np.ndarray  # octile level 0-7 per word

    @property
    def per_word(self) -> list[tuple[int, float]]:
        return list(enumerate(self.surprisal_bits.tolist()))

    def __len__(self) -> int:
        return len(self.words)


def octile_bins(values: np.ndarray, n_bins: int = N_COMPLEXITY_BINS) -> np.ndarray:
    """Rank-based within-document bins; equal values always share a bin
    (ties take the bin of their lowest-ranked occurrence)."""
    n = len(values)
    order = np.argsort(values, kind="stable")
    bins = np.empty(n, dtype=np.int64)
    bins[order] = np.arange(n) * n_bins // n
    # collapse ties onto the bin of the smallest rank for that value
    sorted_vals = values[order]
    sorted_bins = bins[order]
    for i in range(1, n):
        if sorted_vals[i] == sorted_vals[i - 1]:
            sorted_bins[i] = sorted_bins[i - 1]
    bins[order] = sorted_bins
    return bins


def profile_document(model: NgramModel, text: str) -> ComplexityProfile:
    """Surprisal of every word given its preceding ``model.order`` words,
    plus within-document octile bins."""
    tokens = tokenize(text)
    if not tokens:
        raise EmptyDocument("document contains no words after tokenization")
    words = [t.word for t in tokens]
    bits = np.empty(len(words))
    for i, w in enumerate(words):
        ctx = tuple(words[max(0, i - model.order):i])
        bits[i] = surprisal(model, w, ctx)
    return ComplexityProfile(
        words=tuple(words),
        char_starts=tuple(t.start for t in tokens),
        surprisal_bits=bits,
        bins=octile_bins(bits),
    )


@lru_cache(maxsize=4)
def _load_default_model(order: int, alpha: float) -> NgramModel:
    corpus = resources.files("cogsig.data").joinpath("reference_corpus.txt").read_text("utf-8")
    return train_ngram(corpus, order=order, alpha=alpha)


def default_model(order: int = DEFAULT_ORDER, alpha: float = DEFAULT_ALPHA) -> NgramModel:
    """Model trained on the bundled reference corpus (cached)."""
    return _load_default_model(order, alpha)
