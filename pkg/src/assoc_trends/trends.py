"""Normalized co-occurrence ranks, cross-year deviation, and trend labels.

A word's per-year rank (1 = most frequent) is divided by the year's
vocabulary size and rounded to the nearest 0.05, half away from zero.
Years where the word never co-occurs get a sentinel value of 1.0; with
this convention the population standard deviation over three years tops
out at sqrt(2)/3 ~= 0.4714 for a word that is absent once and top-ranked
twice.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

from .cooccur import CooccurrenceTable
from .errors import InvariantError

DEFAULT_BIN_EDGES = (0.0, 0.05, 0.1, 0.4, 0.4714)
ABSENT_RANK = 1.0

NO_SHIFT_BIN = "no_shift"
SUB_THRESHOLD_BIN = "sub_threshold"

EMERGING = "Emerging"
CONSISTENT = "Consistent"
INCREASING = "Increasing"
DECREASING = "Decreasing"

# Rounded ranks are multiples of 0.05, so attainable sigmas are a finite
# set; the top edge 0.4714 sits a hair under sqrt(2)/3 and needs slack.
_EDGE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class RankTrajectory:
    word: str
    ranks: dict[int, float]
    sigma: float
    trend: str
    bin: str


def frequency_ranks(table: CooccurrenceTable) -> dict[str, int]:
    """Ordinal ranks 1..n by (count desc, word asc)."""
    if not table.counts:
        raise ValueError(f"empty co-occurrence table for year {table.year}")
    ordered = sorted(table.counts.items(), key=lambda item: (-item[1], item[0]))
    return {word: rank for rank, (word, _) in enumerate(ordered, 1)}


def normalized_rank(rank: int, total: int) -> float:
    """rank/total rounded to the nearest 0.05, half away from zero."""
    if total <= 0:
        raise ValueError("total must be positive")
    if not 1 <= rank <= total:
        raise ValueError(f"rank {rank} outside 1..{total}")
    # Exact arithmetic keeps the .025 midpoints honest.
    return math.floor(Fraction(rank, total) * 20 + Fraction(1, 2)) / 20


def select_vocabulary(
    tables: dict[int, CooccurrenceTable], top_percent: float = 0.01
) -> set[str]:
    """Words whose unrounded normalized rank is within top_percent for >= 1 year."""
    if not 0 < top_percent <= 1:
        raise ValueError("top_percent must be in (0, 1]")
    vocab: set[str] = set()
    for table in tables.values():
        if not table.counts:
            continue
        ranks = frequency_ranks(table)
        total = len(ranks)
        for word, rank in ranks.items():
            if Fraction(rank, total) <= top_percent:
                vocab.add(word)
    return vocab


def validate_bin_edges(bin_edges) -> None:
    edges = list(bin_edges)
    if len(edges) < 2 or edges[0] != 0:
        raise ValueError("bin edges must start at 0 and name at least one interval")
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError("bin edges must be strictly increasing")


def sigma_bin(sigma: float, bin_edges=DEFAULT_BIN_EDGES) -> str:
    """First configured interval containing sigma; 0 and (0, first edge) are special-cased."""
    validate_bin_edges(bin_edges)
    edges = list(bin_edges)
    if sigma == 0:
        return NO_SHIFT_BIN
    if sigma < edges[1]:
        return SUB_THRESHOLD_BIN
    for i in range(1, len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        last = i == len(edges) - 2
        if last:
            if lo <= sigma <= hi + _EDGE_TOLERANCE:
                return f"[{lo:g},{hi:g}]"
        elif lo <= sigma < hi:
            return f"[{lo:g},{hi:g})"
    raise InvariantError(f"sigma {sigma} beyond configured bins {edges}")


def trajectory(
    word: str,
    tables: dict[int, CooccurrenceTable],
    years: list[int],
    bin_edges=DEFAULT_BIN_EDGES,
    _ranks_by_year: dict[int, dict[str, int]] | None = None,
) -> RankTrajectory:
    """Per-year rounded ranks, population sigma, trend label, and sigma bin."""
    if len(years) < 2 or any(b <= a for a, b in zip(years, years[1:])):
        raise ValueError("years must be sorted ascending with length >= 2")
    if _ranks_by_year is None:
        _ranks_by_year = {
            year: frequency_ranks(table)
            for year, table in tables.items()
            if table.counts
        }
    ranks: dict[int, float] = {}
    present: dict[int, bool] = {}
    for year in years:
        year_ranks = _ranks_by_year.get(year)
        if year_ranks and word in year_ranks:
            ranks[year] = normalized_rank(year_ranks[word], len(year_ranks))
            present[year] = True
        else:
            ranks[year] = ABSENT_RANK
            present[year] = False
    observed = [year for year in years if present[year]]
    if not observed:
        raise ValueError(f"word absent from every year: {word!r}")
    sigma = statistics.pstdev(ranks[year] for year in years)
    emerges = not present[years[0]] and all(present[year] for year in years[1:])
    if emerges and sigma > 0:
        trend = EMERGING
    elif sigma == 0:
        trend = CONSISTENT
    elif ranks[years[-1]] < ranks[observed[0]]:
        trend = INCREASING
    else:
        trend = DECREASING
    return RankTrajectory(
        word=word, ranks=ranks, sigma=sigma, trend=trend, bin=sigma_bin(sigma, bin_edges)
    )


def build_trajectories(
    tables: dict[int, CooccurrenceTable],
    years: list[int],
    words,
    bin_edges=DEFAULT_BIN_EDGES,
) -> list[RankTrajectory]:
    """Trajectories for a word set, sharing one rank computation per year."""
    ranks_by_year = {
        year: frequency_ranks(table) for year, table in tables.items() if table.counts
    }
    return [
        trajectory(word, tables, years, bin_edges, _ranks_by_year=ranks_by_year)
        for word in sorted(words)
    ]


def bin_labels(bin_edges=DEFAULT_BIN_EDGES) -> list[str]:
    """Canonical bin order: no shift, sub-threshold, then the edge intervals."""
    validate_bin_edges(bin_edges)
    edges = list(bin_edges)
    labels = [NO_SHIFT_BIN, SUB_THRESHOLD_BIN]
    for i in range(1, len(edges) - 1):
        lo, hi = edges[i], edges[i + 1]
        labels.append(f"[{lo:g},{hi:g}]" if i == len(edges) - 2 else f"[{lo:g},{hi:g})")
    return labels


def bin_trajectories(
    trajectories: list[RankTrajectory],
    bin_edges=DEFAULT_BIN_EDGES,
    per_bin_cap: int | None = None,
) -> dict[str, list[str]]:
    """Alphabetical word lists per sigma bin; every trajectory lands in exactly one."""
    bins: dict[str, list[str]] = {label: [] for label in bin_labels(bin_edges)}
    for traj in trajectories:
        bins[traj.bin].append(traj.word)
    for label in bins:
        bins[label].sort()
        if per_bin_cap is not None:
            bins[label] = bins[label][:per_bin_cap]
    return bins
