"""File emission and stage interchange.

Stage outputs are named ``<stage>_<year>.<ext>``. The JSON files double
as the machine interchange between subcommands, so they are always
written; CSV and markdown artifacts follow the configured formats. All
writers are deterministic: sorted keys, fixed float repr, ``\n`` line
endings.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict
from pathlib import Path

from .config import AnalysisConfig
from .cooccur import CooccurrenceTable
from .corpus import SliceStats
from .errors import InputError
from .metrics import AssociationScore
from .pipeline import AnalysisResult, persistent_words, top_frequency_report
from .trends import RankTrajectory, bin_labels


def _write_json(path: Path, payload) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _read_json(path: Path):
    if not path.exists():
        raise InputError(f"expected stage output missing: {path}")
    with path.open("r", encoding="utf-8") as handle:
        return json.load(handle)


def _float(value: float) -> str:
    return repr(float(value))


# --- stats stage ---------------------------------------------------------


def write_stats(out_dir: Path, stats: dict[int, SliceStats], formats) -> None:
    for year, s in stats.items():
        _write_json(out_dir / f"stats_{year}.json", asdict(s))
    if "csv" in formats:
        with (out_dir / "stats.csv").open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(
                [
                    "year",
                    "num_documents",
                    "avg_word_count",
                    "avg_word_count_no_stop",
                    "num_tokens",
                    "num_sources",
                ]
            )
            for year in sorted(stats):
                s = stats[year]
                writer.writerow(
                    [
                        year,
                        s.num_documents,
                        _float(s.avg_word_count),
                        _float(s.avg_word_count_no_stop),
                        s.num_tokens,
                        s.num_sources,
                    ]
                )


def read_stats(out_dir: Path, years) -> dict[int, SliceStats]:
    return {
        year: SliceStats(**_read_json(out_dir / f"stats_{year}.json")) for year in years
    }


# --- cooccur stage -------------------------------------------------------


def write_cooccur(out_dir: Path, tables: dict[int, CooccurrenceTable], formats) -> None:
    for year, table in tables.items():
        _write_json(out_dir / f"cooccur_{year}.json", table.to_dict())
        if "csv" in formats:
            rows = sorted(table.counts.items(), key=lambda item: (-item[1], item[0]))
            with (out_dir / f"cooccur_{year}.csv").open(
                "w", encoding="utf-8", newline=""
            ) as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["word", "count"])
                writer.writerows(rows)


def read_cooccur(out_dir: Path, years) -> dict[int, CooccurrenceTable]:
    return {
        year: CooccurrenceTable.from_dict(_read_json(out_dir / f"cooccur_{year}.json"))
        for year in years
    }


# --- mi stage ------------------------------------------------------------


def write_mi(out_dir: Path, mi: dict[int, list[AssociationScore]], formats) -> None:
    for year, scores in mi.items():
        _write_json(out_dir / f"mi_{year}.json", [asdict(s) for s in scores])
        if "csv" in formats:
            with (out_dir / f"mi_{year}.csv").open("w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(["year", "word", "mi", "rel_freq"])
                for s in scores:
                    writer.writerow([s.year, s.word, _float(s.mi), _float(s.rel_freq)])


def read_mi(out_dir: Path, years) -> dict[int, list[AssociationScore]]:
    return {
        year: [AssociationScore(**row) for row in _read_json(out_dir / f"mi_{year}.json")]
        for year in years
    }


# --- trends stage --------------------------------------------------------


def write_trends(
    out_dir: Path,
    trajectories: list[RankTrajectory],
    bins: dict[str, list[str]],
    years,
    formats,
) -> None:
    payload = {
        "years": list(years),
        "trajectories": [
            {
                "word": t.word,
                "ranks": {str(year): t.ranks[year] for year in years},
                "sigma": t.sigma,
                "trend": t.trend,
                "bin": t.bin,
            }
            for t in trajectories
        ],
        "bins": bins,
    }
    _write_json(out_dir / "trends.json", payload)
    if "csv" in formats:
        with (out_dir / "trends.csv").open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(
                ["word"] + [f"rank_{year}" for year in years] + ["sigma", "trend", "bin"]
            )
            for t in trajectories:
                writer.writerow(
                    [t.word]
                    + [_float(t.ranks[year]) for year in years]
                    + [_float(t.sigma), t.trend, t.bin]
                )


def read_trends(out_dir: Path) -> tuple[list[RankTrajectory], dict[str, list[str]], list[int]]:
    payload = _read_json(out_dir / "trends.json")
    years = payload["years"]
    trajectories = [
        RankTrajectory(
            word=row["word"],
            ranks={int(y): r for y, r in row["ranks"].items()},
            sigma=row["sigma"],
            trend=row["trend"],
            bin=row["bin"],
        )
        for row in payload["trajectories"]
    ]
    return trajectories, payload["bins"], years


# --- markdown report -----------------------------------------------------

_BIN_TITLES = {
    "no_shift": "No shift (sigma = 0)",
    "sub_threshold": "Sub-threshold (0 < sigma < first edge)",
}


def render_markdown(
    cfg: AnalysisConfig,
    stats: dict[int, SliceStats],
    top_frequency: dict[int, list[tuple[str, int]]],
    persistent: set[str],
    mi: dict[int, list[AssociationScore]],
    bins: dict[str, list[str]],
) -> str:
    years = list(cfg.years)
    lines = ["# Word association trends", ""]
    lines += [f"Target terms: {', '.join(cfg.terms)}. Window size: {cfg.window_size}.", ""]

    lines += ["## Corpus statistics", ""]
    lines += [
        "| Year | Num. of Documents | Avg. Word Count | Num. of Tokens | Num. of Sources |",
        "| --- | --- | --- | --- | --- |",
    ]
    for year in years:
        s = stats[year]
        lines.append(
            f"| {year} | {s.num_documents} | {s.avg_word_count:.1f} "
            f"| {s.num_tokens} | {s.num_sources} |"
        )
    lines.append("")

    lines += ["### Term mentions", ""]
    term_texts = list(cfg.terms)
    lines += [
        "| Year | " + " | ".join(term_texts) + " |",
        "| --- |" + " --- |" * len(term_texts),
    ]
    for year in years:
        mentions = stats[year].term_mentions
        lines.append(
            f"| {year} | " + " | ".join(str(mentions.get(t, 0)) for t in term_texts) + " |"
        )
    lines.append("")

    lines += [f"## Top {cfg.top_k_frequency} co-occurring words", ""]
    lines += ["Bold words appear in every year's list.", ""]
    lines += ["| Year | Words |", "| --- | --- |"]
    for year in years:
        rendered = ", ".join(
            f"**{word}**" if word in persistent else word for word, _ in top_frequency[year]
        )
        lines.append(f"| {year} | {rendered} |")
    lines.append("")

    lines += [f"## Strongest associations (top {cfg.top_k_mi} by MI)", ""]
    header = []
    for year in years:
        header += [f"Word ({year})", "MI", "Frq"]
    lines += ["| " + " | ".join(header) + " |", "|" + " --- |" * len(header)]
    top_mi = {year: mi[year][: cfg.top_k_mi] for year in years}
    depth = max((len(rows) for rows in top_mi.values()), default=0)
    for i in range(depth):
        cells = []
        for year in years:
            rows = top_mi[year]
            if i < len(rows):
                s = rows[i]
                cells += [s.word, f"{s.mi:.2f}", f"{s.rel_freq:.3f}"]
            else:
                cells += ["", "", ""]
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")

    lines += ["## Rank shift bins", ""]
    lines += ["| Rate of change | Words |", "| --- | --- |"]
    # bins may come back from JSON in sorted-key order; render canonically
    for label in bin_labels(cfg.sigma_bin_edges):
        title = _BIN_TITLES.get(label, f"sigma in {label}")
        lines.append(f"| {title} | {', '.join(bins.get(label, []))} |")
    lines.append("")
    return "\n".join(lines)


def write_report(
    out_dir: Path,
    cfg: AnalysisConfig,
    stats,
    top_frequency,
    persistent,
    mi,
    bins,
) -> None:
    text = render_markdown(cfg, stats, top_frequency, persistent, mi, bins)
    (out_dir / "report.md").write_text(text, encoding="utf-8", newline="\n")


# --- combined machine output ---------------------------------------------


def result_payload(result: AnalysisResult) -> dict:
    cfg = result.config
    return {
        "provenance": result.provenance,
        "stats": {str(year): asdict(result.stats[year]) for year in cfg.years},
        "top_frequency": {
            str(year): [[word, count] for word, count in result.top_frequency[year]]
            for year in cfg.years
        },
        "persistent_words": sorted(result.persistent_words),
        "mi": {
            str(year): [asdict(s) for s in result.mi[year][: cfg.top_k_mi]]
            for year in cfg.years
        },
        "trajectories": [
            {
                "word": t.word,
                "ranks": {str(year): t.ranks[year] for year in cfg.years},
                "sigma": t.sigma,
                "trend": t.trend,
                "bin": t.bin,
            }
            for t in result.trajectories
        ],
        "bins": result.bins,
    }


def write_all(result: AnalysisResult) -> Path:
    """Emit every stage artifact for a completed run; returns the output dir."""
    cfg = result.config
    out_dir = Path(cfg.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise InputError(f"output directory not writable: {out_dir} ({exc})") from exc
    formats = cfg.formats
    write_stats(out_dir, result.stats, formats)
    write_cooccur(out_dir, result.tables, formats)
    write_mi(out_dir, result.mi, formats)
    write_trends(out_dir, result.trajectories, result.bins, cfg.years, formats)
    if "markdown" in formats:
        write_report(
            out_dir,
            cfg,
            result.stats,
            result.top_frequency,
            result.persistent_words,
            result.mi,
            result.bins,
        )
    if "json" in formats:
        _write_json(out_dir / "result.json", result_payload(result))
    return out_dir
