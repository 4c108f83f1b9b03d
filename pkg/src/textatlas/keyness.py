"""Log-likelihood keyness of words against a reference frequency model."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document

DEFAULT_FLOOR_PER_MILLION = 0.01
DEFAULT_TOP_K = 100
DEFAULT_MIN_TOKEN_LENGTH = 2

MILLION = 1_000_000.0


@dataclass
class FrequencyModel:
    """Per-language reference word frequencies, per million tokens."""

    language: str
    entries: dict[str, float]
    corpus_size: int
    floor_freq: float

    def rate(self, word: str) -> float:
        """Per-million frequency, floored for unseen words."""
        return self.entries.get(word, self.floor_freq)


@dataclass
class KeywordVector:
    doc_id: str
    entries: dict[str, float] = field(default_factory=dict)

    def ranked(self) -> list[tuple[str, float]]:
        return sorted(self.entries.items(), key=lambda kv: (-kv[1], kv[0]))


def load_frequency_model(
    path: str | Path,
    language: str,
    corpus_size: int = 1_000_000,
    floor_freq: float = DEFAULT_FLOOR_PER_MILLION,
) -> FrequencyModel:
    """Load a TSV of word<TAB>per-million-frequency rows."""
    entries: dict[str, float] = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            word, raw = line.split("\t")
            freq = float(raw)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad frequency row: {line!r}") from exc
        if freq <= 0:
            raise ValueError(f"{path}:{lineno}: non-positive frequency for {word!r}")
        if word in entries:
            raise ValueError(f"{path}:{lineno}: duplicate word {word!r}")
        entries[word] = freq
    if not entries:
        raise ValueError(f"{path}: empty frequency model")
    # The floor must not exceed the smallest attested frequency.
    floor = min(floor_freq, min(entries.values()))
    return FrequencyModel(language, entries, corpus_size, floor)


def load_stop_list(path: str | Path) -> frozenset[str]:
    words = Path(path).read_text(encoding="utf-8").split()
    return frozenset(w.lower() for w in words)


def g2(observed: list[float], expected: list[float]) -> float:
    """Log-likelihood ratio statistic 2*sum(O*ln(O/E)), with 0*ln0 := 0."""
    total = 0.0
    for o, e in zip(observed, expected):
        if o > 0:
            total += o * math.log(o / e)
    return 2.0 * total


def g2_contingency(a: float, b: float, c: float, d: float) -> float:
    """G-squared over the 2x2 table [[a, b], [c, d]] with margin expectations."""
    n = a + b + c + d
    if n <= 0:
        return 0.0
    expected = [
        (a + b) * (a + c) / n,
        (a + b) * (b + d) / n,
        (c + d) * (a + c) / n,
        (c + d) * (b + d) / n,
    ]
    return g2([a, b, c, d], expected)


def keyness(
    word: str,
    observed_count: int,
    doc_token_count: int,
    model: FrequencyModel,
) -> float:
    """Over-representation keyness of a word in a document.

    G-squared of the 2x2 contingency (word vs other words, document vs
    reference corpus), clamped to 0 when the word is not over-represented.
    """
    if doc_token_count < 1:
        raise ValueError("doc_token_count must be >= 1")
    if observed_count < 0:
        raise ValueError("observed_count must be >= 0")
    if observed_count == 0:
        return 0.0
    rate = model.rate(word)
    observed_rate = observed_count / doc_token_count * MILLION
    if observed_rate <= rate:
        return 0.0
    ref_count = rate / MILLION * model.corpus_size
    value = g2_contingency(
        observed_count,
        ref_count,
        doc_token_count - observed_count,
        model.corpus_size - ref_count,
    )
    return max(0.0, value)


def extract_keywords(
    doc: Document,
    model: FrequencyModel,
    stop_list: frozenset[str] = frozenset(),
    k: int = DEFAULT_TOP_K,
    min_token_length: int = DEFAULT_MIN_TOKEN_LENGTH,
) -> KeywordVector:
    """Rank a document's over-represented words by keyness, top k kept."""
    if model.language != doc.language:
        raise ValueError(
            f"model language {model.language!r} does not match "
            f"document language {doc.language!r}"
        )
    counts = Counter(
        t.lowercase
        for t in doc.tokens
        if len(t.lowercase) >= min_token_length and t.lowercase not in stop_list
    )
    n = len(doc.tokens)
    if n == 0:
        return KeywordVector(doc.id)
    scored = {}
    for word, count in counts.items():
        score = keyness(word, count, n, model)
        if score > 0:
            scored[word] = score
    top = sorted(scored.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return KeywordVector(doc.id, dict(top))
