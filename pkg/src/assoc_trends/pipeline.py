"""End-to-end orchestration: ingest -> normalize -> accumulate -> metrics -> trends.

Documents are processed in fixed-size chunks; with ``threads > 1`` the
chunks go through a process pool and the per-chunk tables are merged in
chunk order, so results are byte-identical for any worker count.
"""

from __future__ import annotations

import hashlib
import multiprocessing
from collections import Counter
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

from . import __version__
from .config import AnalysisConfig
from .cooccur import (
    CooccurrenceTable,
    TargetTerm,
    add_stream,
    count_term,
    find_occurrences,
    merge,
)
from .corpus import Document, SliceStats, deduplicate, load_documents
from .errors import ConfigError, InputError
from .metrics import AssociationScore, rank_by_mi
from .normalize import (
    StopList,
    TokenStream,
    english_stoplist,
    load_stoplist,
    normalize_text,
    remove_stopwords,
    tokenize,
)
from .trends import RankTrajectory, bin_trajectories, build_trajectories, select_vocabulary

CHUNK_SIZE = 256


@dataclass
class AnalysisResult:
    config: AnalysisConfig
    stats: dict[int, SliceStats]
    tables: dict[int, CooccurrenceTable]
    top_frequency: dict[int, list[tuple[str, int]]]
    persistent_words: set[str]
    mi: dict[int, list[AssociationScore]]
    trajectories: list[RankTrajectory]
    bins: dict[str, list[str]]
    provenance: dict
    diagnostics: list[str] = field(default_factory=list)


@dataclass
class _ChunkResult:
    tables: dict[int, CooccurrenceTable] = field(default_factory=dict)
    kept: Counter = field(default_factory=Counter)
    word_count: Counter = field(default_factory=Counter)
    word_count_no_stop: Counter = field(default_factory=Counter)
    sources: dict[int, set] = field(default_factory=dict)
    mentions: dict[int, Counter] = field(default_factory=dict)


def resolve_stoplist(cfg: AnalysisConfig) -> StopList:
    stoplist = load_stoplist(cfg.stoplist_path) if cfg.stoplist_path else english_stoplist()
    blocked = [
        token
        for term_text in cfg.terms
        for token in term_text.lower().split()
        if token in stoplist.entries
    ]
    if blocked:
        raise ConfigError(f"stop list would delete target-term tokens: {sorted(set(blocked))}")
    return stoplist


def _process_chunk(
    docs: list[Document],
    terms: list[TargetTerm],
    stop_entries: frozenset,
    window_size: int,
    keep_hyphens: bool,
    distinct_window: bool,
) -> _ChunkResult:
    stoplist = StopList("active", stop_entries)
    result = _ChunkResult()
    for doc in docs:
        tokens = tokenize(normalize_text(doc.text, keep_hyphens=keep_hyphens))
        stopped = remove_stopwords(tokens, stoplist)
        stream = TokenStream(doc.id, doc.year, tuple(stopped))
        if not find_occurrences(stream, terms):
            continue
        table = result.tables.get(doc.year)
        if table is None:
            table = CooccurrenceTable(year=doc.year, window_size=window_size)
            result.tables[doc.year] = table
            result.sources[doc.year] = set()
            result.mentions[doc.year] = Counter()
        add_stream(table, stream, terms, distinct_window=distinct_window)
        result.kept[doc.year] += 1
        result.word_count[doc.year] += len(tokens)
        result.word_count_no_stop[doc.year] += len(stopped)
        if doc.source:
            result.sources[doc.year].add(doc.source)
        for term in terms:
            result.mentions[doc.year][term.text] += count_term(stopped, term)
    return result


def _chunks(items: list, size: int):
    for i in range(0, len(items), size):
        yield items[i : i + size]


def ingest(cfg: AnalysisConfig) -> tuple[dict[int, list[Document]], list[str]]:
    """Load, deduplicate, and rank/year-filter the configured inputs."""
    missing = [year for year in cfg.years if year not in cfg.inputs]
    if missing:
        raise ConfigError(f"no input path configured for years: {missing}")
    docs_by_path: dict[str, list[Document]] = {}
    diagnostics: list[str] = []
    for path in dict.fromkeys(cfg.inputs.values()):
        fmt = "plain-dir" if Path(path).is_dir() else "jsonl"
        docs, diags = load_documents(path, format=fmt)
        docs_by_path[path] = deduplicate(docs)
        diagnostics.extend(diags)
    docs_by_year: dict[int, list[Document]] = {}
    for year in cfg.years:
        candidates = [d for d in docs_by_path[cfg.inputs[year]] if d.year == year]
        if cfg.max_editorial_rank is not None:
            candidates = [
                d
                for d in candidates
                if d.editorial_rank is not None and d.editorial_rank <= cfg.max_editorial_rank
            ]
        docs_by_year[year] = candidates
    return docs_by_year, diagnostics


def process_corpora(
    cfg: AnalysisConfig,
) -> tuple[dict[int, SliceStats], dict[int, CooccurrenceTable], list[str]]:
    """Token streams, term filtering, stats, and co-occurrence tables per year."""
    stoplist = resolve_stoplist(cfg)
    terms = [TargetTerm.parse(t) for t in cfg.terms]
    docs_by_year, diagnostics = ingest(cfg)
    all_docs = [doc for year in cfg.years for doc in docs_by_year[year]]
    worker = partial(
        _process_chunk,
        terms=terms,
        stop_entries=stoplist.entries,
        window_size=cfg.window_size,
        keep_hyphens=cfg.keep_hyphens,
        distinct_window=cfg.distinct_window,
    )
    chunks = list(_chunks(all_docs, CHUNK_SIZE))
    if cfg.threads > 1 and len(chunks) > 1:
        with multiprocessing.Pool(cfg.threads) as pool:
            chunk_results = pool.map(worker, chunks)
    else:
        chunk_results = [worker(chunk) for chunk in chunks]

    stats: dict[int, SliceStats] = {}
    tables: dict[int, CooccurrenceTable] = {}
    term_texts = [TargetTerm.parse(t).text for t in cfg.terms]
    for year in cfg.years:
        parts = [r for r in chunk_results if year in r.tables]
        if parts:
            tables[year] = merge([r.tables[year] for r in parts])
        else:
            tables[year] = CooccurrenceTable(year=year, window_size=cfg.window_size)
        kept = sum(r.kept[year] for r in parts)
        words = sum(r.word_count[year] for r in parts)
        words_no_stop = sum(r.word_count_no_stop[year] for r in parts)
        sources = set().union(*(r.sources[year] for r in parts)) if parts else set()
        mentions = Counter()
        for r in parts:
            mentions.update(r.mentions[year])
        stats[year] = SliceStats(
            year=year,
            num_documents=kept,
            avg_word_count=words / kept if kept else 0.0,
            avg_word_count_no_stop=words_no_stop / kept if kept else 0.0,
            num_tokens=len(tables[year].corpus_counts),
            num_sources=len(sources),
            term_mentions={t: mentions.get(t, 0) for t in term_texts},
        )
    return stats, tables, diagnostics


def top_frequency_report(table: CooccurrenceTable, k: int = 15) -> list[tuple[str, int]]:
    """First k (word, count) pairs by (count desc, word asc)."""
    ordered = sorted(table.counts.items(), key=lambda item: (-item[1], item[0]))
    return ordered[:k]


def persistent_words(top_frequency: dict[int, list[tuple[str, int]]]) -> set[str]:
    """Words present in every year's top-frequency list."""
    word_sets = [{word for word, _ in rows} for rows in top_frequency.values()]
    return set.intersection(*word_sets) if word_sets else set()


def compute_mi(
    cfg: AnalysisConfig, tables: dict[int, CooccurrenceTable]
) -> dict[int, list[AssociationScore]]:
    """All words above the relative-frequency threshold, ranked by MI, per year."""
    return {
        year: rank_by_mi(table, min_rel_freq=cfg.mi_min_rel_freq)
        if table.total_cooccurrence_tokens
        else []
        for year, table in tables.items()
    }


def compute_trends(
    cfg: AnalysisConfig, tables: dict[int, CooccurrenceTable]
) -> tuple[list[RankTrajectory], dict[str, list[str]]]:
    """Trajectories and sigma bins for the top-percent vocabulary."""
    vocab = select_vocabulary(tables, top_percent=cfg.top_percent)
    trajectories = build_trajectories(
        tables, list(cfg.years), vocab, bin_edges=cfg.sigma_bin_edges
    )
    bins = bin_trajectories(trajectories, bin_edges=cfg.sigma_bin_edges)
    return trajectories, bins


def input_digests(cfg: AnalysisConfig) -> dict[str, dict[str, str]]:
    digests = {}
    for year in cfg.years:
        path = Path(cfg.inputs[year])
        hasher = hashlib.sha256()
        if path.is_dir():
            for item in sorted(path.rglob("*")):
                if item.is_file():
                    hasher.update(item.name.encode())
                    hasher.update(item.read_bytes())
        else:
            try:
                hasher.update(path.read_bytes())
            except OSError as exc:
                raise InputError(str(exc)) from exc
        digests[str(year)] = {"path": str(path), "sha256": hasher.hexdigest()}
    return digests


def run_analysis(cfg: AnalysisConfig) -> AnalysisResult:
    """The whole pipeline; deterministic for a fixed config and inputs."""
    cfg.validate()
    stats, tables, diagnostics = process_corpora(cfg)
    top_freq = {
        year: top_frequency_report(tables[year], k=cfg.top_k_frequency) for year in cfg.years
    }
    mi = compute_mi(cfg, tables)
    trajectories, bins = compute_trends(cfg, tables)
    echo = cfg.echo()
    # runtime-only knobs must not leak into outputs: identical analyses run
    # with different worker counts or output dirs stay byte-identical
    for key in ("threads", "out_dir", "inputs"):
        echo.pop(key)
    provenance = {
        "tool": "assoc-trends",
        "version": __version__,
        "config": echo,
        "inputs": input_digests(cfg),
        "num_diagnostics": len(diagnostics),
    }
    return AnalysisResult(
        config=cfg,
        stats=stats,
        tables=tables,
        top_frequency=top_freq,
        persistent_words=persistent_words(top_freq),
        mi=mi,
        trajectories=trajectories,
        bins=bins,
        provenance=provenance,
        diagnostics=diagnostics,
    )
