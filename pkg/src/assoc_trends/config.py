"""Analysis configuration: defaults, config-file parsing, validation.

The config file is flat ``key = value`` text. Keys mirror the CLI flags
(underscores for dashes); input paths use ``input.<year> = <path>`` or a
single ``input = <path>`` shared across years. Every file key can be
overridden by the matching CLI flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError, InputError
from .trends import DEFAULT_BIN_EDGES, validate_bin_edges

DEFAULT_TERMS = ("artificial intelligence", "machine learning")
DEFAULT_YEARS = (2011, 2015, 2019)
FORMATS = ("csv", "json", "markdown")


@dataclass
class AnalysisConfig:
    inputs: dict[int, str] = field(default_factory=dict)
    years: tuple[int, ...] = DEFAULT_YEARS
    terms: tuple[str, ...] = DEFAULT_TERMS
    window_size: int = 5
    mi_min_rel_freq: float = 0.001
    top_percent: float = 0.01
    sigma_bin_edges: tuple[float, ...] = DEFAULT_BIN_EDGES
    max_editorial_rank: int | None = None
    stoplist_path: str | None = None
    out_dir: str = "out"
    formats: tuple[str, ...] = FORMATS
    threads: int = 1
    keep_hyphens: bool = True
    distinct_window: bool = False
    top_k_frequency: int = 15
    top_k_mi: int = 5

    def validate(self) -> None:
        if self.window_size < 1:
            raise ConfigError("window_size must be >= 1")
        if not self.years or any(b <= a for a, b in zip(self.years, self.years[1:])):
            raise ConfigError("years must be non-empty and strictly ascending")
        if not 0 < self.mi_min_rel_freq <= 1:
            raise ConfigError("mi_min_rel_freq must be in (0, 1]")
        if not 0 < self.top_percent <= 1:
            raise ConfigError("top_percent must be in (0, 1]")
        try:
            validate_bin_edges(self.sigma_bin_edges)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not self.terms:
            raise ConfigError("at least one target term is required")
        if self.max_editorial_rank is not None and not 1 <= self.max_editorial_rank <= 5:
            raise ConfigError("max_editorial_rank must be in [1, 5]")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.top_k_frequency < 1 or self.top_k_mi < 1:
            raise ConfigError("top-k values must be >= 1")
        unknown_fmt = set(self.formats) - set(FORMATS)
        if unknown_fmt:
            raise ConfigError(f"unknown output formats: {sorted(unknown_fmt)}")
        unknown_years = set(self.inputs) - set(self.years)
        if unknown_years:
            raise ConfigError(f"input paths for years not in the analysis: {sorted(unknown_years)}")
        if not self.inputs:
            raise ConfigError("no input paths configured")

    def echo(self) -> dict:
        """Stable key-sorted snapshot for provenance and config tests."""
        snapshot = {}
        for f in sorted(fields(self), key=lambda f: f.name):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, dict):
                value = {str(k): v for k, v in sorted(value.items())}
            snapshot[f.name] = value
        return snapshot


def parse_config_file(path: str | Path) -> dict:
    """Flat key/value file -> raw string values (input.<year> gathered under 'inputs')."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"config file not found: {path}")
    values: dict = {}
    inputs: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("input.") or key == "input":
            inputs[key] = value
        else:
            values[key] = value
    if inputs:
        values["inputs"] = inputs
    return values


def _parse_inputs(raw: dict, years: tuple[int, ...]) -> dict[int, str]:
    inputs: dict[int, str] = {}
    for key, path in raw.items():
        if key == "input":
            for year in years:
                inputs.setdefault(year, path)
        else:
            year_text = key.split(".", 1)[1]
            try:
                year = int(year_text)
            except ValueError:
                raise ConfigError(f"bad input key {key!r}: year expected") from None
            inputs[year] = path
    return inputs


def _csv_list(value, cast):
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) for v in value)
    return tuple(cast(v.strip()) for v in str(value).split(",") if v.strip())


def _to_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {value!r}")


_PARSERS = {
    "years": lambda v: _csv_list(v, int),
    "terms": lambda v: tuple(t.strip() for t in str(v).split(";") if t.strip())
    if not isinstance(v, (list, tuple))
    else tuple(v),
    "window_size": int,
    "mi_min_rel_freq": float,
    "top_percent": float,
    "sigma_bin_edges": lambda v: _csv_list(v, float),
    "max_editorial_rank": lambda v: None if v in (None, "", "none") else int(v),
    "stoplist_path": str,
    "out_dir": str,
    "formats": lambda v: _csv_list(v, str),
    "threads": int,
    "keep_hyphens": _to_bool,
    "distinct_window": _to_bool,
    "top_k_frequency": int,
    "top_k_mi": int,
}


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> AnalysisConfig:
    """Merge defaults < config file < CLI overrides into a validated config."""
    merged: dict = {}
    raw_inputs: dict[str, str] = {}
    for layer in (file_values or {}, overrides or {}):
        for key, value in layer.items():
            if value is None:
                continue
            if key == "inputs":
                raw_inputs.update(value)
                continue
            if key not in _PARSERS:
                raise ConfigError(f"unknown config key: {key}")
            try:
                merged[key] = _PARSERS[key](value)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc
    cfg = AnalysisConfig(**merged)
    cfg.inputs = _parse_inputs(raw_inputs, cfg.years)
    cfg.validate()
    return cfg
