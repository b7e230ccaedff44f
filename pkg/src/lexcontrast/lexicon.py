"""Synonym/antonym lexicon loading and antonym enrichment.

File format: TSV `word1<TAB>REL<TAB>word2` with REL in {SYN, ANT}; lines
starting with `#` are comments. Relations are symmetrized on load and
self-pairs are dropped. A pair recorded as both synonym and antonym is
treated as an antonym pair only (the contrast signal is scarcer, so it wins).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import tsvio

_RELATIONS = ("SYN", "ANT")


class LexiconError(ValueError):
    """Malformed lexicon input."""


@dataclass(frozen=True)
class ContrastLexicon:
    """Per-word synonym sets S(w), antonym sets A(w), and enriched antonyms.

    The enriched set of w collects every direct antonym together with that
    antonym's synonyms, then removes w itself and w's own synonyms. It is
    intentionally not re-symmetrized; it is consumed per target word.
    """

    syn: dict[str, frozenset[str]]
    ant: dict[str, frozenset[str]]
    ant_enriched: dict[str, frozenset[str]] = field(default_factory=dict)

    def synonyms(self, word: str) -> frozenset[str]:
        return self.syn.get(word, frozenset())

    def antonyms(self, word: str) -> frozenset[str]:
        return self.ant.get(word, frozenset())

    def enriched_antonyms(self, word: str) -> frozenset[str]:
        return self.ant_enriched.get(word, frozenset())

    def words(self) -> set[str]:
        return set(self.syn) | set(self.ant)

    def has_entries(self, word: str) -> bool:
        return bool(self.syn.get(word)) or bool(self.ant.get(word))

    @classmethod
    def from_pairs(
        cls,
        syn_pairs: list[tuple[str, str]] | set[tuple[str, str]],
        ant_pairs: list[tuple[str, str]] | set[tuple[str, str]],
    ) -> "ContrastLexicon":
        """Build from unordered pair lists; symmetrizes and resolves conflicts."""
        syn_set = {frozenset(p) for p in syn_pairs if p[0] != p[1]}
        ant_set = {frozenset(p) for p in ant_pairs if p[0] != p[1]}
        syn_set -= ant_set  # antonym reading wins on conflict
        syn: dict[str, set[str]] = {}
        ant: dict[str, set[str]] = {}
        for pair in syn_set:
            a, b = tuple(pair)
            syn.setdefault(a, set()).add(b)
            syn.setdefault(b, set()).add(a)
        for pair in ant_set:
            a, b = tuple(pair)
            ant.setdefault(a, set()).add(b)
            ant.setdefault(b, set()).add(a)
        return cls(
            syn={w: frozenset(s) for w, s in syn.items()},
            ant={w: frozenset(s) for w, s in ant.items()},
        )


def load_lexicon(path) -> ContrastLexicon:
    """Parse a relation TSV into a symmetrized, conflict-resolved lexicon."""
    syn_pairs: set[tuple[str, str]] = set()
    ant_pairs: set[tuple[str, str]] = set()
    for lineno, fields in tsvio.iter_rows(path):
        if len(fields) != 3:
            raise LexiconError(f"{path}:{lineno}: expected word1<TAB>REL<TAB>word2")
        w1, rel, w2 = fields
        if rel not in _RELATIONS:
            raise LexiconError(f"{path}:{lineno}: unknown relation tag {rel!r}")
        if not w1 or not w2:
            raise LexiconError(f"{path}:{lineno}: empty word field")
        if rel == "SYN":
            syn_pairs.add((w1, w2))
        else:
            ant_pairs.add((w1, w2))
    return ContrastLexicon.from_pairs(syn_pairs, ant_pairs)


def enrich_antonyms(lex: ContrastLexicon) -> ContrastLexicon:
    """Extend each antonym set with the synonyms of every direct antonym.

    A*(w) = union over w' in A(w) of ({w'} | S(w')), minus {w}, minus S(w).
    """
    enriched: dict[str, frozenset[str]] = {}
    for word, ants in lex.ant.items():
        pool: set[str] = set()
        for opposite in ants:
            pool.add(opposite)
            pool |= lex.synonyms(opposite)
        pool.discard(word)
        pool -= lex.synonyms(word)
        enriched[word] = frozenset(pool)
    return ContrastLexicon(syn=lex.syn, ant=lex.ant, ant_enriched=enriched)


def write_lexicon(path, lex: ContrastLexicon, meta: dict[str, str] | None = None) -> None:
    """Emit each unordered pair once, synonyms first, sorted for determinism."""
    seen: set[frozenset[str]] = set()
    rows = []
    for rel, mapping in (("SYN", lex.syn), ("ANT", lex.ant)):
        for w in sorted(mapping):
            for other in sorted(mapping[w]):
                key = frozenset((w, other))
                if key in seen:
                    continue
                seen.add(key)
                rows.append((w, rel, other))
    tsvio.write_rows(path, rows, meta)
