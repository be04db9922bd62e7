"""Corpus ingestion: load, validate, filter, deduplicate, summarize.

Input is newline-delimited JSON with keys id/year/source/rank/text
(rank and source optional), or a directory tree ``<year>/<id>.txt``.
Malformed records become per-line diagnostics and are skipped; they never
abort a load.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path

from . import cooccur, normalize
from .errors import InputError


@dataclass(frozen=True)
class Document:
    id: str
    year: int
    source: str = ""
    editorial_rank: int | None = None
    text: str = ""

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        if not isinstance(self.year, int) or isinstance(self.year, bool) or self.year <= 0:
            raise ValueError(f"document year must be a positive integer, got {self.year!r}")
        if self.editorial_rank is not None and not (1 <= self.editorial_rank <= 5):
            raise ValueError(f"editorial_rank must be in [1, 5], got {self.editorial_rank!r}")


@dataclass(frozen=True)
class CorpusSlice:
    year: int
    documents: tuple[Document, ...]

    def __post_init__(self):
        ids = set()
        for doc in self.documents:
            if doc.year != self.year:
                raise ValueError(f"document {doc.id} year {doc.year} != slice year {self.year}")
            if doc.id in ids:
                raise ValueError(f"duplicate id in slice: {doc.id}")
            ids.add(doc.id)


@dataclass(frozen=True)
class SliceStats:
    year: int
    num_documents: int
    avg_word_count: float
    avg_word_count_no_stop: float
    num_tokens: int
    num_sources: int
    term_mentions: dict[str, int] = field(default_factory=dict)


def _record_to_document(record: dict) -> Document:
    for key in ("id", "year", "text"):
        if key not in record:
            raise ValueError(f"missing required key {key!r}")
    if not isinstance(record["id"], str):
        raise ValueError("id must be a string")
    if not isinstance(record["text"], str):
        raise ValueError("text must be a string")
    source = record.get("source", "")
    if source is None:
        source = ""
    if not isinstance(source, str):
        raise ValueError("source must be a string")
    rank = record.get("rank")
    if rank is not None and (not isinstance(rank, int) or isinstance(rank, bool)):
        raise ValueError("rank must be an integer or null")
    return Document(
        id=record["id"],
        year=record["year"],
        source=source,
        editorial_rank=rank,
        text=record["text"],
    )


def _load_jsonl(path: Path) -> tuple[list[Document], list[str]]:
    docs: list[Document] = []
    diagnostics: list[str] = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                if not isinstance(record, dict):
                    raise ValueError("line is not a JSON object")
                docs.append(_record_to_document(record))
            except (json.JSONDecodeError, ValueError) as exc:
                diagnostics.append(f"{path}:{lineno}: {exc}")
    return docs, diagnostics


def _load_plain_dir(path: Path) -> tuple[list[Document], list[str]]:
    docs: list[Document] = []
    diagnostics: list[str] = []
    for year_dir in sorted(p for p in path.iterdir() if p.is_dir()):
        try:
            year = int(year_dir.name)
        except ValueError:
            diagnostics.append(f"{year_dir}:0: directory name is not a year")
            continue
        for txt in sorted(year_dir.glob("*.txt")):
            try:
                docs.append(
                    Document(id=txt.stem, year=year, text=txt.read_text(encoding="utf-8"))
                )
            except (OSError, ValueError) as exc:
                diagnostics.append(f"{txt}:0: {exc}")
    return docs, diagnostics


def load_documents(path: str | Path, format: str = "jsonl") -> tuple[list[Document], list[str]]:
    """Load documents in file order; returns (documents, per-line diagnostics)."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"input path does not exist: {path}")
    if format == "jsonl":
        return _load_jsonl(path)
    if format == "plain-dir":
        if not path.is_dir():
            raise InputError(f"plain-dir input must be a directory: {path}")
        return _load_plain_dir(path)
    raise ValueError(f"unknown format: {format}")


def deduplicate(docs: list[Document]) -> list[Document]:
    """Keep the first occurrence of each id, preserving input order."""
    seen = set()
    out = []
    for doc in docs:
        if doc.id not in seen:
            seen.add(doc.id)
            out.append(doc)
    return out


def select_documents(
    docs: list[Document],
    years: set[int],
    required_terms: list[cooccur.TargetTerm],
    max_rank: int | None = None,
    stoplist: normalize.StopList | None = None,
    keep_hyphens: bool = True,
) -> list[Document]:
    """Filter by year, editorial rank, and presence of at least one required term.

    Documents without an editorial rank pass only when no max_rank is
    configured (the abstracts corpus carries no ranks).
    """
    if stoplist is None:
        stoplist = normalize.english_stoplist()
    out = []
    for doc in docs:
        if doc.year not in years:
            continue
        if max_rank is not None and (doc.editorial_rank is None or doc.editorial_rank > max_rank):
            continue
        if required_terms:
            stream = normalize.build_token_stream(doc, stoplist, keep_hyphens=keep_hyphens)
            if not cooccur.find_occurrences(stream, required_terms):
                continue
        out.append(doc)
    return out


def slice_stats(
    corpus_slice: CorpusSlice,
    terms: list[cooccur.TargetTerm],
    stoplist: normalize.StopList | None = None,
    keep_hyphens: bool = True,
) -> SliceStats:
    """Per-year corpus summary: document count, mean lengths, vocabulary, sources, mentions."""
    if stoplist is None:
        stoplist = normalize.english_stoplist()
    word_counts = []
    stopped_counts = []
    vocab: set[str] = set()
    sources: set[str] = set()
    mentions = {term.text: 0 for term in terms}
    for doc in corpus_slice.documents:
        tokens = normalize.tokenize(normalize.normalize_text(doc.text, keep_hyphens=keep_hyphens))
        stopped = normalize.remove_stopwords(tokens, stoplist)
        word_counts.append(len(tokens))
        stopped_counts.append(len(stopped))
        vocab.update(stopped)
        if doc.source:
            sources.add(doc.source)
        for term in terms:
            mentions[term.text] += cooccur.count_term(stopped, term)
    return SliceStats(
        year=corpus_slice.year,
        num_documents=len(corpus_slice.documents),
        avg_word_count=statistics.mean(word_counts) if word_counts else 0.0,
        avg_word_count_no_stop=statistics.mean(stopped_counts) if stopped_counts else 0.0,
        num_tokens=len(vocab),
        num_sources=len(sources),
        term_mentions=mentions,
    )
