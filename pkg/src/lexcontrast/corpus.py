"""Corpus ingestion: vocabulary building, frequency subsampling, windowed co-occurrence counts.

The corpus format is plain UTF-8 text, one document per line, whitespace
tokenized. Document boundaries are never crossed when windowing.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from . import tsvio

TokenLines = Iterable[Sequence[str]]


class CorpusError(ValueError):
    """Raised for malformed corpus-side inputs (vocab/count files, bad ids)."""


@dataclass(frozen=True)
class Vocabulary:
    """Word <-> dense-id mapping with corpus frequencies.

    Ids are 0..n-1, assigned by descending frequency with lexicographic
    tie-breaking; every count is >= the min_count used at build time.
    """

    words: tuple[str, ...]
    counts: np.ndarray  # int64, aligned with words
    total_tokens: int
    word_ids: dict[str, int]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.word_ids

    def id_of(self, word: str) -> int:
        return self.word_ids[word]

    def word_of(self, word_id: int) -> str:
        return self.words[word_id]

    def count_of(self, word_id: int) -> int:
        return int(self.counts[word_id])

    def relative_frequencies(self) -> np.ndarray:
        """count(w) / total retained tokens, per id."""
        if self.total_tokens == 0:
            return np.zeros(0)
        return self.counts / float(self.total_tokens)

    @classmethod
    def from_counts(cls, counts: Counter | dict[str, int], min_count: int = 1) -> "Vocabulary":
        if min_count < 1:
            raise CorpusError(f"min_count must be >= 1, got {min_count}")
        kept = [(w, int(c)) for w, c in counts.items() if c >= min_count]
        kept.sort(key=lambda item: (-item[1], item[0]))
        words = tuple(w for w, _ in kept)
        arr = np.array([c for _, c in kept], dtype=np.int64)
        return cls(
            words=words,
            counts=arr,
            total_tokens=int(arr.sum()) if len(arr) else 0,
            word_ids={w: i for i, w in enumerate(words)},
        )


def read_corpus(path, lowercase: bool = True) -> list[list[str]]:
    """Load a one-document-per-line corpus file into token lists."""
    lines = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if lowercase:
                tokens = [t.lower() for t in tokens]
            lines.append(tokens)
    return lines


def build_vocabulary(lines: TokenLines, min_count: int) -> Vocabulary:
    """Count all token types and keep those with frequency >= min_count."""
    counter: Counter = Counter()
    for line in lines:
        counter.update(line)
    return Vocabulary.from_counts(counter, min_count)


def encode_lines(lines: TokenLines, vocab: Vocabulary) -> list[np.ndarray]:
    """Map token lines to id arrays, dropping out-of-vocabulary tokens."""
    ids = vocab.word_ids
    return [
        np.array([ids[t] for t in line if t in ids], dtype=np.int64)
        for line in lines
    ]


@dataclass(frozen=True)
class SubsampleConfig:
    threshold: float = 1e-5  # relative-frequency threshold t; math.inf disables
    seed: int = 0

    def __post_init__(self):
        if not self.threshold > 0:
            raise CorpusError(f"subsample threshold must be > 0, got {self.threshold}")


def discard_probabilities(vocab: Vocabulary, threshold: float) -> np.ndarray:
    """Per-id discard probability max(0, 1 - sqrt(t / f(w)))."""
    freqs = vocab.relative_frequencies()
    probs = np.zeros(len(vocab))
    if math.isinf(threshold):
        return probs
    nz = freqs > 0
    probs[nz] = 1.0 - np.sqrt(threshold / freqs[nz])
    return np.clip(probs, 0.0, 1.0)


def subsample_ids(
    id_lines: Sequence[np.ndarray],
    discard: np.ndarray,
    rng: np.random.Generator,
) -> list[np.ndarray]:
    """Drop each occurrence independently with its word's discard probability.

    One uniform draw is consumed per token, so the output is a pure function
    of (input, discard table, generator state).
    """
    out = []
    for ids in id_lines:
        if len(ids) == 0:
            out.append(ids)
            continue
        keep = rng.random(len(ids)) >= discard[ids]
        out.append(ids[keep])
    return out


def subsample(lines: TokenLines, vocab: Vocabulary, cfg: SubsampleConfig) -> list[list[str]]:
    """Subsample a token stream; OOV tokens are dropped before any draw."""
    id_lines = encode_lines(lines, vocab)
    discard = discard_probabilities(vocab, cfg.threshold)
    rng = np.random.default_rng(cfg.seed)
    kept = subsample_ids(id_lines, discard, rng)
    return [[vocab.words[i] for i in ids] for ids in kept]


@dataclass(frozen=True)
class CooccurrenceCounts:
    """Sparse (target, feature) -> count table from symmetric windowing.

    Rows are sorted by (target, feature); all stored counts are positive.
    With a fixed window the table is exactly symmetric: count(w, f) == count(f, w).
    """

    n_words: int
    window: int
    targets: np.ndarray  # int64
    features: np.ndarray  # int64
    counts: np.ndarray  # int64

    def __len__(self) -> int:
        return len(self.counts)

    def total(self) -> int:
        return int(self.counts.sum()) if len(self.counts) else 0

    def to_dict(self) -> dict[tuple[int, int], int]:
        return {
            (int(t), int(f)): int(c)
            for t, f, c in zip(self.targets, self.features, self.counts)
        }

    def to_csr(self) -> sparse.csr_matrix:
        m = sparse.coo_matrix(
            (self.counts.astype(np.float64), (self.targets, self.features)),
            shape=(self.n_words, self.n_words),
        )
        return m.tocsr()


def _aggregate_pairs(
    targets: np.ndarray, features: np.ndarray, n_words: int, weights: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if len(targets) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy()
    keys = targets.astype(np.int64) * n_words + features.astype(np.int64)
    uniq, inverse = np.unique(keys, return_inverse=True)
    sums = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(sums, inverse, weights if weights is not None else np.ones(len(keys), dtype=np.int64))
    return uniq // n_words, uniq % n_words, sums


def count_cooccurrences(
    lines: TokenLines,
    vocab: Vocabulary,
    window: int,
    dynamic_window: bool = False,
    seed: int = 0,
) -> CooccurrenceCounts:
    """Count symmetric windowed co-occurrences over in-vocabulary tokens.

    OOV tokens are removed before windowing, so windows close over the gaps
    they leave. With dynamic_window=True, each target position draws an
    effective window size uniformly from 1..window (word2vec-style); the
    default is the fixed window.
    """
    if window < 1:
        raise CorpusError(f"window must be >= 1, got {window}")
    id_lines = encode_lines(lines, vocab)
    if not id_lines or len(vocab) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return CooccurrenceCounts(len(vocab), window, empty, empty.copy(), empty.copy())

    tok = np.concatenate([ids for ids in id_lines]) if id_lines else np.zeros(0, dtype=np.int64)
    line_id = (
        np.concatenate([np.full(len(ids), i, dtype=np.int64) for i, ids in enumerate(id_lines)])
        if id_lines
        else np.zeros(0, dtype=np.int64)
    )
    if len(tok) < 2:
        empty = np.zeros(0, dtype=np.int64)
        return CooccurrenceCounts(len(vocab), window, empty, empty.copy(), empty.copy())

    if dynamic_window:
        rng = np.random.default_rng(seed)
        eff = rng.integers(1, window + 1, size=len(tok))
    else:
        eff = None

    target_chunks = []
    feature_chunks = []
    for off in range(1, window + 1):
        if off >= len(tok):
            break
        same_line = line_id[:-off] == line_id[off:]
        left = tok[:-off]
        right = tok[off:]
        # center on the left token: context is `off` to the right
        mask = same_line if eff is None else same_line & (eff[:-off] >= off)
        target_chunks.append(left[mask])
        feature_chunks.append(right[mask])
        # center on the right token: context is `off` to the left
        mask = same_line if eff is None else same_line & (eff[off:] >= off)
        target_chunks.append(right[mask])
        feature_chunks.append(left[mask])

    targets = np.concatenate(target_chunks) if target_chunks else np.zeros(0, dtype=np.int64)
    features = np.concatenate(feature_chunks) if feature_chunks else np.zeros(0, dtype=np.int64)
    t, f, c = _aggregate_pairs(targets, features, len(vocab))
    return CooccurrenceCounts(len(vocab), window, t, f, c)


def merge_counts(parts: Sequence[CooccurrenceCounts]) -> CooccurrenceCounts:
    """Sum partial count tables; the result is independent of merge order."""
    if not parts:
        raise CorpusError("nothing to merge")
    n_words = parts[0].n_words
    window = parts[0].window
    for p in parts[1:]:
        if p.n_words != n_words or p.window != window:
            raise CorpusError("cannot merge counts built against different vocab/window")
    targets = np.concatenate([p.targets for p in parts])
    features = np.concatenate([p.features for p in parts])
    counts = np.concatenate([p.counts for p in parts])
    if len(targets) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return CooccurrenceCounts(n_words, window, empty, empty.copy(), empty.copy())
    t, f, c = _aggregate_pairs(targets, features, n_words, weights=counts)
    return CooccurrenceCounts(n_words, window, t, f, c)


def write_vocabulary(path, vocab: Vocabulary, meta: dict[str, str] | None = None) -> None:
    rows = ((vocab.words[i], i, int(vocab.counts[i])) for i in range(len(vocab)))
    tsvio.write_rows(path, rows, meta)


def read_vocabulary(path) -> Vocabulary:
    entries: list[tuple[str, int, int]] = []
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 3:
            raise CorpusError(f"{path}:{lineno}: expected word<TAB>id<TAB>count")
        word, wid, count = fields[0], int(fields[1]), int(fields[2])
        entries.append((word, wid, count))
    entries.sort(key=lambda e: e[1])
    for expected, (_, wid, _) in enumerate(entries):
        if wid != expected:
            raise CorpusError(f"{path}: ids are not dense 0..n-1")
    words = tuple(w for w, _, _ in entries)
    if len(set(words)) != len(words):
        raise CorpusError(f"{path}: duplicate surface forms")
    counts = np.array([c for _, _, c in entries], dtype=np.int64)
    return Vocabulary(
        words=words,
        counts=counts,
        total_tokens=int(counts.sum()) if len(counts) else 0,
        word_ids={w: i for i, w in enumerate(words)},
    )


def write_counts(path, counts: CooccurrenceCounts, meta: dict[str, str] | None = None) -> None:
    full_meta = {"n_words": str(counts.n_words), "window": str(counts.window)}
    if meta:
        full_meta.update(meta)
    rows = zip(counts.targets, counts.features, counts.counts)
    tsvio.write_rows(path, rows, full_meta)


def read_counts(path) -> CooccurrenceCounts:
    meta = tsvio.read_meta(path)
    try:
        n_words = int(meta["n_words"])
        window = int(meta["window"])
    except KeyError as exc:
        raise CorpusError(f"{path}: missing {exc.args[0]} header") from None
    t, f, c = [], [], []
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 3:
            raise CorpusError(f"{path}:{lineno}: expected target<TAB>feature<TAB>count")
        t.append(int(fields[0]))
        f.append(int(fields[1]))
        c.append(int(fields[2]))
    targets = np.array(t, dtype=np.int64)
    features = np.array(f, dtype=np.int64)
    values = np.array(c, dtype=np.int64)
    if len(values) and (values <= 0).any():
        raise CorpusError(f"{path}: stored counts must be positive")
    if len(targets) and (targets.max() >= n_words or features.max() >= n_words):
        raise CorpusError(f"{path}: id out of range for n_words={n_words}")
    order = np.lexsort((features, targets))
    return CooccurrenceCounts(
        n_words, window, targets[order], features[order], values[order]
    )
