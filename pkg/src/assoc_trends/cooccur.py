"""Target-term matching and windowed co-occurrence counting.

Occurrences of all configured terms are pooled into one table per year:
a window token increments the table once per appearance (multiset
semantics; ``distinct_window=True`` counts each distinct token once per
window). A matched term's own tokens are excluded from its own window,
but tokens belonging to a different nearby occurrence count as ordinary
co-occurring words.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InvariantError
from .normalize import TokenStream


@dataclass(frozen=True)
class TargetTerm:
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens or any(not t for t in self.tokens):
            raise ValueError("target term needs at least one non-empty token")
        if any(t != t.lower() for t in self.tokens):
            raise ValueError("target term tokens must be lowercase")

    @classmethod
    def parse(cls, text: str) -> "TargetTerm":
        return cls(tuple(text.lower().split()))

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class Occurrence:
    doc_id: str
    start_idx: int
    end_idx: int


@dataclass
class CooccurrenceTable:
    year: int
    window_size: int
    counts: Counter = field(default_factory=Counter)
    corpus_counts: Counter = field(default_factory=Counter)
    total_corpus_tokens: int = 0
    target_occurrences: int = 0
    total_cooccurrence_tokens: int = 0

    def check(self) -> None:
        if self.total_cooccurrence_tokens != sum(self.counts.values()):
            raise InvariantError("co-occurrence total out of sync with counts")
        if any(c < 1 for c in self.counts.values()):
            raise InvariantError("zero entry in co-occurrence counts")
        bound = 2 * self.window_size * self.target_occurrences
        if self.total_cooccurrence_tokens > bound:
            raise InvariantError("co-occurrence total exceeds window capacity")

    def to_dict(self) -> dict:
        return {
            "year": self.year,
            "window_size": self.window_size,
            "total_corpus_tokens": self.total_corpus_tokens,
            "target_occurrences": self.target_occurrences,
            "total_cooccurrence_tokens": self.total_cooccurrence_tokens,
            "counts": dict(sorted(self.counts.items())),
            "corpus_counts": dict(sorted(self.corpus_counts.items())),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CooccurrenceTable":
        table = cls(
            year=data["year"],
            window_size=data["window_size"],
            counts=Counter(data["counts"]),
            corpus_counts=Counter(data["corpus_counts"]),
            total_corpus_tokens=data["total_corpus_tokens"],
            target_occurrences=data["target_occurrences"],
            total_cooccurrence_tokens=data["total_cooccurrence_tokens"],
        )
        table.check()
        return table


def _match_index(terms: list[TargetTerm]) -> dict[str, list[tuple[str, ...]]]:
    """First-token index; candidates per slot sorted longest-first."""
    index: dict[str, list[tuple[str, ...]]] = {}
    for term in terms:
        index.setdefault(term.tokens[0], []).append(term.tokens)
    for candidates in index.values():
        candidates.sort(key=len, reverse=True)
    return index


def find_occurrences(stream: TokenStream, terms: list[TargetTerm]) -> list[Occurrence]:
    """All non-overlapping matches of any term, left to right, longest first on ties."""
    index = _match_index(terms)
    tokens = stream.tokens
    n = len(tokens)
    out = []
    i = 0
    while i < n:
        candidates = index.get(tokens[i])
        if candidates:
            for cand in candidates:
                end = i + len(cand)
                if end <= n and tokens[i:end] == cand:
                    out.append(Occurrence(stream.doc_id, i, end - 1))
                    i = end
                    break
            else:
                i += 1
        else:
            i += 1
    return out


def count_term(tokens, term: TargetTerm) -> int:
    """Non-overlapping mention count of a single term in a token sequence."""
    seq = term.tokens
    length = len(seq)
    count = 0
    i = 0
    n = len(tokens)
    while i <= n - length:
        if tuple(tokens[i : i + length]) == seq:
            count += 1
            i += length
        else:
            i += 1
    return count


def extract_window(stream: TokenStream, occ: Occurrence, window_size: int) -> list[str]:
    """Up to window_size tokens on each side of the occurrence, clipped at edges."""
    if window_size < 1:
        raise ValueError("window_size must be >= 1")
    tokens = stream.tokens
    left = tokens[max(0, occ.start_idx - window_size) : occ.start_idx]
    right = tokens[occ.end_idx + 1 : occ.end_idx + 1 + window_size]
    return list(left) + list(right)


def add_stream(
    table: CooccurrenceTable,
    stream: TokenStream,
    terms: list[TargetTerm],
    distinct_window: bool = False,
) -> None:
    """Fold one token stream into a table (corpus totals plus window counts)."""
    table.total_corpus_tokens += len(stream.tokens)
    table.corpus_counts.update(stream.tokens)
    for occ in find_occurrences(stream, terms):
        window = extract_window(stream, occ, table.window_size)
        if distinct_window:
            window = sorted(set(window))
        table.counts.update(window)
        table.total_cooccurrence_tokens += len(window)
        table.target_occurrences += 1


def accumulate(
    streams: list[TokenStream],
    terms: list[TargetTerm],
    window_size: int,
    distinct_window: bool = False,
) -> dict[int, CooccurrenceTable]:
    """Per-year co-occurrence tables over a batch of token streams."""
    tables: dict[int, CooccurrenceTable] = {}
    for stream in streams:
        table = tables.get(stream.year)
        if table is None:
            table = CooccurrenceTable(year=stream.year, window_size=window_size)
            tables[stream.year] = table
        add_stream(table, stream, terms, distinct_window=distinct_window)
    for table in tables.values():
        table.check()
    return tables


def merge(tables: list[CooccurrenceTable]) -> CooccurrenceTable:
    """Pointwise-add tables from the same year and window size."""
    if not tables:
        raise ValueError("nothing to merge")
    first = tables[0]
    merged = CooccurrenceTable(year=first.year, window_size=first.window_size)
    for table in tables:
        if table.year != first.year or table.window_size != first.window_size:
            raise ValueError("cannot merge tables across years or window sizes")
        merged.counts.update(table.counts)
        merged.corpus_counts.update(table.corpus_counts)
        merged.total_corpus_tokens += table.total_corpus_tokens
        merged.target_occurrences += table.target_occurrences
        merged.total_cooccurrence_tokens += table.total_cooccurrence_tokens
    merged.check()
    return merged
