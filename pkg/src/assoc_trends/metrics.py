"""Mutual information and relative frequency per (word, year).

MI follows the Church-Hanks construction in log base 2: the joint
probability of the word co-occurring with the pooled target terms over
the product of the marginals. All probabilities are corpus-aggregate
ratios over the year's full token streams, so every score is scale-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cooccur import CooccurrenceTable


@dataclass(frozen=True)
class AssociationScore:
    word: str
    year: int
    mi: float
    rel_freq: float


def word_probability(word: str, table: CooccurrenceTable) -> float:
    """Chance that a token drawn from the year's corpus equals ``word``."""
    if table.total_corpus_tokens == 0:
        raise ValueError("empty corpus: no tokens in year")
    return table.corpus_counts.get(word, 0) / table.total_corpus_tokens


def target_probability(table: CooccurrenceTable) -> float:
    """Chance that a random corpus position starts a target occurrence."""
    if table.total_corpus_tokens == 0:
        raise ValueError("empty corpus: no tokens in year")
    return table.target_occurrences / table.total_corpus_tokens


def mutual_information(word: str, table: CooccurrenceTable) -> float:
    """log2(P_joint / (P_word * P_target)) in bits."""
    count = table.counts.get(word, 0)
    if count < 1:
        raise ValueError(f"word never co-occurs with the target: {word!r}")
    if table.total_corpus_tokens == 0 or table.target_occurrences == 0:
        raise ValueError("empty corpus: cannot compute mutual information")
    p_joint = count / table.total_corpus_tokens
    p_word = word_probability(word, table)
    p_target = target_probability(table)
    return math.log2(p_joint / (p_word * p_target))


def relative_frequency(word: str, table: CooccurrenceTable) -> float:
    """The word's share of all co-occurrence counts in the year."""
    if table.total_cooccurrence_tokens == 0:
        raise ValueError("empty co-occurrence table")
    return table.counts.get(word, 0) / table.total_cooccurrence_tokens


def rank_by_mi(
    table: CooccurrenceTable, min_rel_freq: float = 0.001, k: int | None = None
) -> list[AssociationScore]:
    """Top-k words by MI among those with rel_freq >= min_rel_freq.

    Ties break lexicographically; k=None returns all surviving words.
    """
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    scores = []
    for word, count in table.counts.items():
        rel_freq = count / table.total_cooccurrence_tokens
        if rel_freq >= min_rel_freq:
            scores.append(
                AssociationScore(
                    word=word,
                    year=table.year,
                    mi=mutual_information(word, table),
                    rel_freq=rel_freq,
                )
            )
    scores.sort(key=lambda s: (-s.mi, s.word))
    return scores if k is None else scores[:k]
