"""Ranking and correlation metrics over scored word pairs.

Average precision and AUC grade how well cosine scores separate synonym
pairs from antonym pairs; Spearman's rho grades agreement with graded
similarity ratings; the median report summarizes the score distribution per
relation label. Pairs with an unrepresented word are excluded from every
metric but counted against coverage.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import stats

from . import tsvio
from .corpus import Vocabulary
from .vectors import DenseEmbeddings
from .weighting import WeightedMatrix, cosine

LABELS = ("SYN", "ANT")
WORD_CLASSES = ("ADJ", "NOUN", "VERB")


class EvalError(ValueError):
    pass


class RelationPair(NamedTuple):
    word1: str
    word2: str
    label: str  # SYN | ANT
    word_class: str  # ADJ | NOUN | VERB


class SimilarityPair(NamedTuple):
    word1: str
    word2: str
    rating: float


@dataclass(frozen=True)
class RelationPairSet:
    pairs: tuple[RelationPair, ...]

    def __post_init__(self):
        seen: set[tuple[str, str, str]] = set()
        for p in self.pairs:
            if p.label not in LABELS:
                raise EvalError(f"bad label {p.label!r}; expected SYN or ANT")
            if p.word_class not in WORD_CLASSES:
                raise EvalError(f"bad word class {p.word_class!r}")
            key = (min(p.word1, p.word2), max(p.word1, p.word2), p.word_class)
            if key in seen:
                raise EvalError(f"duplicate pair {p.word1}/{p.word2} in class {p.word_class}")
            seen.add(key)

    def by_class(self) -> dict[str, list[RelationPair]]:
        grouped: dict[str, list[RelationPair]] = {}
        for p in self.pairs:
            grouped.setdefault(p.word_class, []).append(p)
        return grouped


@dataclass(frozen=True)
class SimilarityPairSet:
    pairs: tuple[SimilarityPair, ...]

    def __post_init__(self):
        seen: set[tuple[str, str]] = set()
        for p in self.pairs:
            if not np.isfinite(p.rating):
                raise EvalError(f"non-finite rating for {p.word1}/{p.word2}")
            key = (min(p.word1, p.word2), max(p.word1, p.word2))
            if key in seen:
                raise EvalError(f"duplicate pair {p.word1}/{p.word2}")
            seen.add(key)


class SparseRowTable:
    """Adapter giving a WeightedMatrix the word -> vector lookup the scorers use."""

    def __init__(self, weights: WeightedMatrix, vocab: Vocabulary):
        if weights.shape[0] != len(vocab):
            raise EvalError("weighted matrix and vocabulary disagree on word count")
        self.weights = weights
        self.vocab = vocab

    def get(self, word: str):
        wid = self.vocab.word_ids.get(word)
        return None if wid is None else self.weights.row(wid)


def score_pairs(vectors, pairs: Iterable) -> list[tuple]:
    """Cosine per pair; None marks a pair with an unrepresented word.

    `vectors` is anything with .get(word) -> vector-or-None, i.e. dense
    embeddings or a SparseRowTable over a weighted matrix.
    """
    scored = []
    for pair in pairs:
        v1 = vectors.get(pair.word1)
        v2 = vectors.get(pair.word2)
        if v1 is None or v2 is None:
            scored.append((pair, None))
        else:
            scored.append((pair, cosine(v1, v2)))
    return scored


def average_precision(ranked: Sequence[str], relevant: str) -> float:
    """Mean of precision@k over the positions of relevant items.

    `ranked` is the label sequence already ordered by descending score.
    """
    total_relevant = sum(1 for lab in ranked if lab == relevant)
    if total_relevant == 0:
        raise EvalError(f"average precision undefined: no {relevant!r} items present")
    hits = 0
    precision_sum = 0.0
    for k, lab in enumerate(ranked, start=1):
        if lab == relevant:
            hits += 1
            precision_sum += hits / k
    return precision_sum / total_relevant


def _average_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing the average of their positions."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def auc(scores: Sequence[float], positive: Sequence[bool]) -> float:
    """P(random positive outranks random negative), ties counting half."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    if len(scores) != len(positive):
        raise EvalError("scores and labels differ in length")
    n_pos = int(positive.sum())
    n_neg = len(positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise EvalError("AUC needs both a positive and a negative example")
    ranks = _average_ranks(scores)
    u = float(ranks[positive].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def spearman(pred: Sequence[float], gold: Sequence[float]) -> float:
    """Pearson correlation of average-tied ranks."""
    pred = np.asarray(pred, dtype=np.float64)
    gold = np.asarray(gold, dtype=np.float64)
    if len(pred) != len(gold):
        raise EvalError("prediction and gold lists differ in length")
    if len(pred) < 2:
        raise EvalError("rank correlation needs at least two pairs")
    rp = _average_ranks(pred)
    rg = _average_ranks(gold)
    dp = rp - rp.mean()
    dg = rg - rg.mean()
    denom = np.sqrt((dp @ dp) * (dg @ dg))
    if denom == 0.0:
        raise EvalError("rank correlation undefined: constant ranking")
    return float((dp @ dg) / denom)


def chi_square_independence(table) -> tuple[float, float]:
    """Plain chi-square test (no continuity correction) on a 2x2 count table.

    Helper for judging whether two evaluation outcomes differ beyond chance;
    returns (statistic, p_value).
    """
    obs = np.asarray(table, dtype=np.float64)
    if obs.shape != (2, 2):
        raise EvalError("expected a 2x2 table")
    if (obs < 0).any():
        raise EvalError("counts must be non-negative")
    total = obs.sum()
    if total == 0:
        raise EvalError("empty table")
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / total
    if (expected == 0).any():
        raise EvalError("degenerate margins")
    statistic = float(((obs - expected) ** 2 / expected).sum())
    return statistic, float(stats.chi2.sf(statistic, df=1))


# --- report assembly


@dataclass
class ClassMetrics:
    n_total: int
    n_scored: int
    oov: list[tuple[str, str]] = field(default_factory=list)
    ap_syn: float | None = None
    ap_ant: float | None = None
    auc: float | None = None
    median_syn: float | None = None
    median_ant: float | None = None

    @property
    def coverage(self) -> float:
        return self.n_scored / self.n_total if self.n_total else 0.0


@dataclass
class MetricReport:
    classes: dict[str, ClassMetrics] = field(default_factory=dict)
    spearman: float | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"classes": {}}
        for name, cm in sorted(self.classes.items()):
            entry = {
                "n_total": cm.n_total,
                "n_scored": cm.n_scored,
                "coverage": cm.coverage,
                "oov": [list(p) for p in cm.oov],
            }
            for key in ("ap_syn", "ap_ant", "auc", "median_syn", "median_ant"):
                value = getattr(cm, key)
                if value is not None:
                    entry[key] = value
            out["classes"][name] = entry
        if self.spearman is not None:
            out["spearman"] = self.spearman
        return out


def _scored_by_class(vectors, pair_set: RelationPairSet):
    """Score each class's pairs and split scored from missing."""
    result = {}
    for word_class, pairs in pair_set.by_class().items():
        scored = score_pairs(vectors, pairs)
        present = [(p, s) for p, s in scored if s is not None]
        missing = [(p.word1, p.word2) for p, s in scored if s is None]
        result[word_class] = (pairs, present, missing)
    return result


def _ranked_labels(present) -> list[str]:
    ordered = sorted(present, key=lambda ps: (-ps[1], ps[0].word1, ps[0].word2))
    return [p.label for p, _ in ordered]


def eval_ap(vectors, pair_set: RelationPairSet) -> MetricReport:
    """Average precision per word class, ranking by descending cosine.

    Ties are broken by ascending (word1, word2) so results are
    order-independent. A label absent from a class leaves that AP unset.
    """
    report = MetricReport()
    for word_class, (pairs, present, missing) in sorted(_scored_by_class(vectors, pair_set).items()):
        if not present:
            warnings.warn(f"class {word_class}: no scorable pairs, omitted")
            continue
        cm = ClassMetrics(n_total=len(pairs), n_scored=len(present), oov=missing)
        ranked = _ranked_labels(present)
        for label, attr in (("SYN", "ap_syn"), ("ANT", "ap_ant")):
            if label in ranked:
                setattr(cm, attr, average_precision(ranked, label))
            else:
                warnings.warn(f"class {word_class}: no {label} pairs, AP_{label} unset")
        report.classes[word_class] = cm
    return report


def eval_auc(vectors, pair_set: RelationPairSet) -> MetricReport:
    """Per-class AUC for separating synonym pairs from antonym pairs.

    The single number serves both orientations: it is the probability that a
    synonym pair gets the higher cosine, which equals antonym detection with
    negated scores.
    """
    report = MetricReport()
    for word_class, (pairs, present, missing) in sorted(_scored_by_class(vectors, pair_set).items()):
        if not present:
            warnings.warn(f"class {word_class}: no scorable pairs, omitted")
            continue
        cm = ClassMetrics(n_total=len(pairs), n_scored=len(present), oov=missing)
        labels = [p.label for p, _ in present]
        if "SYN" in labels and "ANT" in labels:
            cm.auc = auc([s for _, s in present], [p.label == "SYN" for p, _ in present])
        else:
            warnings.warn(f"class {word_class}: single-label class, AUC unset")
        report.classes[word_class] = cm
    return report


def median_report(vectors, pair_set: RelationPairSet) -> MetricReport:
    """Median cosine per (word class, label) cell; empty cells stay blank."""
    report = MetricReport()
    for word_class, (pairs, present, missing) in sorted(_scored_by_class(vectors, pair_set).items()):
        cm = ClassMetrics(n_total=len(pairs), n_scored=len(present), oov=missing)
        for label, attr in (("SYN", "median_syn"), ("ANT", "median_ant")):
            values = [s for p, s in present if p.label == label]
            if values:
                setattr(cm, attr, float(np.median(values)))
            else:
                warnings.warn(f"class {word_class}: no scored {label} pairs, median blank")
        report.classes[word_class] = cm
    return report


def eval_spearman(vectors, pair_set: SimilarityPairSet) -> tuple[MetricReport, int, int]:
    """Spearman's rho between cosine scores and gold ratings.

    Returns (report, n_scored, n_total); unrepresented pairs are excluded.
    """
    scored = score_pairs(vectors, pair_set.pairs)
    present = [(p, s) for p, s in scored if s is not None]
    if len(present) < 2:
        raise EvalError("need at least two scorable pairs for rank correlation")
    rho = spearman([s for _, s in present], [p.rating for p, _ in present])
    report = MetricReport(spearman=rho)
    return report, len(present), len(scored)


# --- dataset files


def load_relation_pairs(path) -> RelationPairSet:
    """Read `word1<TAB>word2<TAB>SYN|ANT<TAB>ADJ|NOUN|VERB` rows."""
    pairs = []
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 4:
            raise EvalError(f"{path}:{lineno}: expected word1, word2, label, word class")
        pairs.append(RelationPair(fields[0], fields[1], fields[2], fields[3]))
    try:
        return RelationPairSet(tuple(pairs))
    except EvalError as exc:
        raise EvalError(f"{path}: {exc}") from None


def load_similarity_pairs(path) -> SimilarityPairSet:
    """Read `word1<TAB>word2<TAB>rating` rows."""
    pairs = []
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 3:
            raise EvalError(f"{path}:{lineno}: expected word1, word2, rating")
        try:
            rating = float(fields[2])
        except ValueError:
            raise EvalError(f"{path}:{lineno}: bad rating {fields[2]!r}") from None
        pairs.append(SimilarityPair(fields[0], fields[1], rating))
    try:
        return SimilarityPairSet(tuple(pairs))
    except EvalError as exc:
        raise EvalError(f"{path}: {exc}") from None
