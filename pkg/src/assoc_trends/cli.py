"""Command-line entry point.

Subcommands: stats, cooccur, mi, trends, report, all. The first two
ingest the corpora; mi/trends/report consume the JSON files an earlier
stage left in the output directory, so stages can be cached and rerun.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, pipeline, reports
from .config import build_config, parse_config_file
from .errors import ConfigError, InputError, InvariantError


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument(
        "--input",
        action="append",
        metavar="[YEAR=]PATH",
        help="input file; repeatable, '2011=corpus.jsonl' binds a year",
    )
    parser.add_argument("--window", type=int, help="co-occurrence window size")
    parser.add_argument("--years", help="comma-separated years, ascending")
    parser.add_argument("--terms", help="semicolon-separated target terms")
    parser.add_argument("--mi-min-freq", type=float, help="relative-frequency floor for MI")
    parser.add_argument("--top-percent", type=float, help="vocabulary cut for rank trends")
    parser.add_argument("--sigma-bins", help="comma-separated sigma bin edges")
    parser.add_argument("--max-rank", type=int, help="maximum editorial rank to keep")
    parser.add_argument("--stoplist", help="stop list file (one word per line)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", help="comma-separated subset of csv,json,markdown")
    parser.add_argument("--threads", type=int, help="worker processes")
    parser.add_argument(
        "--keep-hyphens",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="keep hyphens between letters (default: keep)",
    )
    parser.add_argument(
        "--distinct-window",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="count each distinct word once per window",
    )
    parser.add_argument("--top-k", type=int, help="rows in the frequency report")
    parser.add_argument("--top-k-mi", type=int, help="rows per year in the MI report")


_ARG_TO_KEY = {
    "window": "window_size",
    "years": "years",
    "terms": "terms",
    "mi_min_freq": "mi_min_rel_freq",
    "top_percent": "top_percent",
    "sigma_bins": "sigma_bin_edges",
    "max_rank": "max_editorial_rank",
    "stoplist": "stoplist_path",
    "out": "out_dir",
    "format": "formats",
    "threads": "threads",
    "keep_hyphens": "keep_hyphens",
    "distinct_window": "distinct_window",
    "top_k": "top_k_frequency",
    "top_k_mi": "top_k_mi",
}


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides: dict = {}
    for attr, key in _ARG_TO_KEY.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    if args.input:
        inputs = {}
        for entry in args.input:
            if "=" in entry:
                year, _, path = entry.partition("=")
                inputs[f"input.{year.strip()}"] = path.strip()
            else:
                inputs["input"] = entry
        overrides["inputs"] = inputs
    return overrides


def _load_config(args: argparse.Namespace):
    file_values = parse_config_file(args.config) if args.config else {}
    return build_config(file_values, _overrides_from_args(args))


def _report_diagnostics(diagnostics: list[str]) -> None:
    for line in diagnostics:
        print(line, file=sys.stderr)
    if diagnostics:
        print(f"{len(diagnostics)} malformed record(s) skipped", file=sys.stderr)


def _out_dir(cfg) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_all(args) -> int:
    cfg = _load_config(args)
    result = pipeline.run_analysis(cfg)
    _report_diagnostics(result.diagnostics)
    out = reports.write_all(result)
    print(f"wrote {out}")
    return 0


def _cmd_stats(args) -> int:
    cfg = _load_config(args)
    stats, _, diagnostics = pipeline.process_corpora(cfg)
    _report_diagnostics(diagnostics)
    reports.write_stats(_out_dir(cfg), stats, cfg.formats)
    return 0


def _cmd_cooccur(args) -> int:
    cfg = _load_config(args)
    _, tables, diagnostics = pipeline.process_corpora(cfg)
    _report_diagnostics(diagnostics)
    reports.write_cooccur(_out_dir(cfg), tables, cfg.formats)
    return 0


def _cmd_mi(args) -> int:
    cfg = _load_config(args)
    tables = reports.read_cooccur(Path(cfg.out_dir), cfg.years)
    reports.write_mi(_out_dir(cfg), pipeline.compute_mi(cfg, tables), cfg.formats)
    return 0


def _cmd_trends(args) -> int:
    cfg = _load_config(args)
    tables = reports.read_cooccur(Path(cfg.out_dir), cfg.years)
    trajectories, bins = pipeline.compute_trends(cfg, tables)
    reports.write_trends(_out_dir(cfg), trajectories, bins, cfg.years, cfg.formats)
    return 0


def _cmd_report(args) -> int:
    cfg = _load_config(args)
    out = Path(cfg.out_dir)
    stats = reports.read_stats(out, cfg.years)
    tables = reports.read_cooccur(out, cfg.years)
    mi = reports.read_mi(out, cfg.years)
    _, bins, _ = reports.read_trends(out)
    top_freq = {
        year: pipeline.top_frequency_report(tables[year], k=cfg.top_k_frequency)
        for year in cfg.years
    }
    persistent = pipeline.persistent_words(top_freq)
    reports.write_report(out, cfg, stats, top_freq, persistent, mi, bins)
    return 0


_COMMANDS = {
    "all": (_cmd_all, "run the whole pipeline and emit every artifact"),
    "stats": (_cmd_stats, "corpus statistics per year"),
    "cooccur": (_cmd_cooccur, "windowed co-occurrence tables per year"),
    "mi": (_cmd_mi, "mutual-information ranking from cached tables"),
    "trends": (_cmd_trends, "rank trajectories and sigma bins from cached tables"),
    "report": (_cmd_report, "markdown report from cached stage outputs"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assoc-trends",
        description="Measure how words co-occurring with target terms shift across years.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        _add_common_options(sub)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command][0]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InputError, OSError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
