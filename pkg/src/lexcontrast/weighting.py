"""Association weighting: LMI scores and their lexical-contrast transform.

The contrast transform rescores each stored (word, feature) cell as the
average cosine between the word and its feature-sharing synonyms minus the
average cosine on the antonym side (each antonym paired with its own
feature-sharing synonyms). Salient same-side features keep high positive
weights, opposite-side features go negative, and features shared by both
sides land near zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy import sparse

from . import tsvio
from .corpus import CooccurrenceCounts, Vocabulary
from .lexicon import ContrastLexicon

SCHEME_LMI = "LMI"
SCHEME_SA = "SA"


class WeightingError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedMatrix:
    """Sparse word-by-feature weights under one scheme (LMI or SA)."""

    scheme: str
    matrix: sparse.csr_matrix  # shape (n_words, n_features)

    def __post_init__(self):
        self.matrix.sort_indices()

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def __len__(self) -> int:
        return int(self.matrix.nnz)

    def triples(self) -> Iterator[tuple[int, int, float]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        for i in order:
            yield int(coo.row[i]), int(coo.col[i]), float(coo.data[i])

    def row(self, word_id: int) -> sparse.csr_matrix:
        return self.matrix.getrow(word_id)

    def has_row(self, word_id: int) -> bool:
        indptr = self.matrix.indptr
        return indptr[word_id] < indptr[word_id + 1]

    def validate(self) -> None:
        """Check the value invariants of a pure-scheme matrix.

        LMI weights are strictly positive; contrast weights are differences
        of two cosine means and therefore lie in [-1, 1]. A matrix holding
        LMI passthrough rows (the fallback for words without lexicon
        entries) mixes schemes and is not expected to satisfy this check.
        """
        data = self.matrix.data
        if self.scheme == SCHEME_LMI:
            if len(data) and not (data > 0).all():
                raise WeightingError("LMI matrix must store strictly positive weights")
        elif self.scheme == SCHEME_SA:
            if len(data) and not ((data >= -1 - 1e-12) & (data <= 1 + 1e-12)).all():
                raise WeightingError("contrast weights must lie in [-1, 1]")
        else:
            raise WeightingError(f"unknown scheme {self.scheme!r}")


def compute_lmi(counts: CooccurrenceCounts, vocab: Vocabulary | None = None) -> WeightedMatrix:
    """Score each co-occurrence cell with local mutual information.

    LMI(w, f) = #(w,f) * log2(#(w,f) * N / (marg(w) * marg(f))) with N the
    total pair count and marginals taken over the pair table itself.
    Cells with LMI <= 0 are dropped.
    """
    if vocab is not None and counts.n_words != len(vocab):
        raise WeightingError("counts were built against a different vocabulary")
    n = counts.n_words
    if len(counts) == 0:
        return WeightedMatrix(SCHEME_LMI, sparse.csr_matrix((n, n)))
    t = counts.targets
    f = counts.features
    c = counts.counts.astype(np.float64)
    total = c.sum()
    row_marg = np.zeros(n)
    col_marg = np.zeros(n)
    np.add.at(row_marg, t, c)
    np.add.at(col_marg, f, c)
    values = c * np.log2(c * total / (row_marg[t] * col_marg[f]))
    keep = values > 0
    matrix = sparse.coo_matrix((values[keep], (t[keep], f[keep])), shape=(n, n)).tocsr()
    return WeightedMatrix(SCHEME_LMI, matrix)


def cosine(u, v) -> float:
    """Cosine similarity for dense arrays or sparse rows; 0 if a norm is 0."""
    if sparse.issparse(u) or sparse.issparse(v):
        dot = (u @ v.T).todense()[0, 0] if sparse.issparse(v) else float(u @ v)
        nu = np.sqrt(u.multiply(u).sum())
        nv = np.sqrt(v.multiply(v).sum()) if sparse.issparse(v) else np.linalg.norm(v)
    else:
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        dot = float(u @ v)
        nu = np.linalg.norm(u)
        nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(dot / (nu * nv))


@dataclass(frozen=True)
class FeatureOccurrenceIndex:
    """Inverse map: feature id -> set of word ids with a positive stored weight."""

    index: dict[int, frozenset[int]]

    def words_for(self, feature_id: int) -> frozenset[int]:
        return self.index.get(feature_id, frozenset())

    def __len__(self) -> int:
        return len(self.index)


def build_feature_index(lmi: WeightedMatrix) -> FeatureOccurrenceIndex:
    """Invert a positively-weighted matrix by column."""
    if lmi.scheme != SCHEME_LMI:
        raise WeightingError(f"feature index expects an LMI matrix, got {lmi.scheme}")
    coo = lmi.matrix.tocoo()
    buckets: dict[int, set[int]] = {}
    for w, f in zip(coo.row, coo.col):
        buckets.setdefault(int(f), set()).add(int(w))
    return FeatureOccurrenceIndex({f: frozenset(ws) for f, ws in buckets.items()})


class RowCosineCache:
    """Memoized cosine between sparse matrix rows, keyed per unordered pair.

    Filling is idempotent, so concurrent per-row workers sharing one cache
    would at worst recompute a value, never corrupt it.
    """

    def __init__(self, matrix: sparse.csr_matrix):
        matrix.sort_indices()
        self._indptr = matrix.indptr
        self._indices = matrix.indices
        self._data = matrix.data
        sq = matrix.multiply(matrix)
        self._norms = np.sqrt(np.asarray(sq.sum(axis=1)).ravel())
        self._cache: dict[tuple[int, int], float] = {}

    def _row_dot(self, a: int, b: int) -> float:
        sa, ea = self._indptr[a], self._indptr[a + 1]
        sb, eb = self._indptr[b], self._indptr[b + 1]
        _, ia, ib = np.intersect1d(
            self._indices[sa:ea], self._indices[sb:eb],
            assume_unique=True, return_indices=True,
        )
        if len(ia) == 0:
            return 0.0
        return float(self._data[sa:ea][ia] @ self._data[sb:eb][ib])

    def __call__(self, a: int, b: int) -> float:
        key = (a, b) if a <= b else (b, a)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        na, nb = self._norms[a], self._norms[b]
        value = 0.0 if na == 0.0 or nb == 0.0 else self._row_dot(a, b) / (na * nb)
        self._cache[key] = value
        return value


def _lexicon_ids(lex: ContrastLexicon, vocab: Vocabulary):
    """Resolve lexicon words to vocabulary ids, dropping out-of-vocabulary ones."""
    syn: dict[int, list[int]] = {}
    ant_pairs: dict[int, list[tuple[int, int]]] = {}
    ids = vocab.word_ids
    for word in lex.words():
        wid = ids.get(word)
        if wid is None:
            continue
        syn[wid] = sorted(ids[u] for u in lex.synonyms(word) if u in ids)
        pairs: list[tuple[int, int]] = []
        for opp in sorted(lex.enriched_antonyms(word)):
            oid = ids.get(opp)
            if oid is None:
                continue
            for v in sorted(lex.synonyms(opp)):
                vid = ids.get(v)
                if vid is not None:
                    pairs.append((oid, vid))
        ant_pairs[wid] = pairs
    return syn, ant_pairs


def compute_weight_sa(
    lmi: WeightedMatrix,
    idx: FeatureOccurrenceIndex,
    lex: ContrastLexicon,
    vocab: Vocabulary,
    ant_mean: str = "pooled",
    fallback_lmi: bool = False,
) -> WeightedMatrix:
    """Transform LMI weights into lexical-contrast weights.

    For each stored cell (w, f): the synonym term averages cosine(w, u) over
    synonyms u of w that hold feature f; the antonym term averages
    cosine(w', v) over enriched antonyms w' of w paired with their own
    feature-holding synonyms v. The cell weight is synonym term minus antonym
    term; an empty side contributes 0. Words with no lexicon entries yield no
    row (or keep their LMI row when fallback_lmi is set). All cosines are
    taken between original LMI rows, so the transform is order-independent.

    ant_mean selects the antonym-term normalizer: "pooled" divides the double
    sum by the total pair count; "per-antonym" averages per-antonym means over
    the antonyms that contribute at least one pair.
    """
    if lmi.scheme != SCHEME_LMI:
        raise WeightingError(f"contrast transform expects an LMI matrix, got {lmi.scheme}")
    if ant_mean not in ("pooled", "per-antonym"):
        raise WeightingError(f"ant_mean must be 'pooled' or 'per-antonym', got {ant_mean!r}")
    if lex.ant and not lex.ant_enriched:
        raise WeightingError("lexicon has antonyms but no enriched sets; run enrich_antonyms first")

    n_words, n_features = lmi.shape
    matrix = lmi.matrix
    matrix.sort_indices()
    indptr, indices, data = matrix.indptr, matrix.indices, matrix.data
    row_cos = RowCosineCache(matrix)
    syn_ids, ant_pair_ids = _lexicon_ids(lex, vocab)

    out_rows: list[int] = []
    out_cols: list[int] = []
    out_vals: list[float] = []
    for w in range(n_words):
        start, end = indptr[w], indptr[w + 1]
        if start == end:
            continue
        if w not in syn_ids:  # word carries no lexicon entry at all
            if fallback_lmi:
                out_rows.extend([w] * (end - start))
                out_cols.extend(int(f) for f in indices[start:end])
                out_vals.extend(float(x) for x in data[start:end])
            continue
        synonyms = syn_ids.get(w, [])
        ant_pairs = ant_pair_ids.get(w, [])
        for f in indices[start:end]:
            holders = idx.words_for(int(f))
            syn_cos = [row_cos(w, u) for u in synonyms if u in holders]
            term_syn = sum(syn_cos) / len(syn_cos) if syn_cos else 0.0
            if ant_mean == "pooled":
                ant_cos = [row_cos(a, v) for a, v in ant_pairs if v in holders]
                term_ant = sum(ant_cos) / len(ant_cos) if ant_cos else 0.0
            else:
                per_ant: dict[int, list[float]] = {}
                for a, v in ant_pairs:
                    if v in holders:
                        per_ant.setdefault(a, []).append(row_cos(a, v))
                if per_ant:
                    means = [sum(vals) / len(vals) for vals in per_ant.values()]
                    term_ant = sum(means) / len(means)
                else:
                    term_ant = 0.0
            value = term_syn - term_ant
            if value != 0.0:
                out_rows.append(w)
                out_cols.append(int(f))
                out_vals.append(value)

    result = sparse.coo_matrix(
        (out_vals, (out_rows, out_cols)), shape=(n_words, n_features)
    ).tocsr()
    return WeightedMatrix(SCHEME_SA, result)


def write_weighted(path, wm: WeightedMatrix, meta: dict[str, str] | None = None) -> None:
    full_meta = {"scheme": wm.scheme, "n_words": str(wm.shape[0]), "n_features": str(wm.shape[1])}
    if meta:
        full_meta.update(meta)
    rows = ((t, f, repr(v)) for t, f, v in wm.triples())
    tsvio.write_rows(path, rows, full_meta)


def read_weighted(path) -> WeightedMatrix:
    meta = tsvio.read_meta(path)
    try:
        scheme = meta["scheme"]
        n_words = int(meta["n_words"])
        n_features = int(meta["n_features"])
    except KeyError as exc:
        raise WeightingError(f"{path}: missing {exc.args[0]} header") from None
    rows, cols, vals = [], [], []
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 3:
            raise WeightingError(f"{path}:{lineno}: expected target<TAB>feature<TAB>weight")
        rows.append(int(fields[0]))
        cols.append(int(fields[1]))
        vals.append(float(fields[2]))
    matrix = sparse.coo_matrix(
        (vals, (rows, cols)), shape=(n_words, n_features)
    ).tocsr()
    return WeightedMatrix(scheme, matrix)
