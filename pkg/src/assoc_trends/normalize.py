"""Text normalization, tokenization, and stop-word removal.

The normalization pass lowercases, deletes URL-, email-, and phone-shaped
substrings, then replaces every character that is not a letter, apostrophe,
or whitespace with a space. Hyphens between letters are kept by default
(``keep_hyphens=False`` turns them into spaces), so "cloud-based" survives
as one token. Structural patterns are stripped before character-level
stripping because they need the original punctuation to match.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

_URL = re.compile(r"[a-z][a-z0-9+.-]*://\S+|www\.\S+", re.IGNORECASE)
_EMAIL = re.compile(r"\S+@\S+\.[a-z]{2,}\S*", re.IGNORECASE)
# Candidate phone runs; the replacement only deletes runs holding >= 7 digits.
_PHONE = re.compile(r"[0-9 ()+\-]{7,}")
# \w minus digits and underscore leaves unicode letters.
_NON_KEPT = re.compile(r"[^\w\s'-]|[\d_]")
_LONE_HYPHEN = re.compile(r"(?<!\w)-|-(?!\w)")
_WS = re.compile(r"\s+")


def _phone_repl(match: re.Match) -> str:
    run = match.group()
    return " " if sum(c.isdigit() for c in run) >= 7 else run


def normalize_text(raw: str, keep_hyphens: bool = True) -> str:
    """Normalize raw document text to a lowercase letters-and-apostrophes form."""
    s = raw.lower()
    s = _URL.sub(" ", s)
    s = _EMAIL.sub(" ", s)
    s = _PHONE.sub(_phone_repl, s)
    s = _NON_KEPT.sub(" ", s)
    if not s.isascii():
        # regex \w admits oddballs like superscript digits; scrub anything
        # that is not a letter, apostrophe, hyphen, or whitespace
        s = "".join(c if c.isalpha() or c in "'-" or c.isspace() else " " for c in s)
    if keep_hyphens:
        s = _LONE_HYPHEN.sub(" ", s)
    else:
        s = s.replace("-", " ")
    return _WS.sub(" ", s).strip()


def tokenize(normalized: str) -> list[str]:
    """Split an already-normalized string on whitespace."""
    return normalized.split()


def remove_stopwords(tokens: list[str], stoplist: "StopList") -> list[str]:
    entries = stoplist.entries
    return [t for t in tokens if t not in entries]


@dataclass(frozen=True)
class StopList:
    name: str
    entries: frozenset[str]

    def __post_init__(self):
        for word in self.entries:
            if not word or word != word.lower():
                raise ValueError(f"stop list entry not lowercase: {word!r}")


@dataclass(frozen=True)
class TokenStream:
    doc_id: str
    year: int
    tokens: tuple[str, ...]


def load_stoplist(path: str | Path, name: str | None = None) -> StopList:
    """Read a stop list file: one lowercase word per line, '#' comments allowed."""
    path = Path(path)
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line)
    return StopList(name=name or path.stem, entries=frozenset(words))


@lru_cache(maxsize=1)
def english_stoplist() -> StopList:
    """The bundled 179-entry English stop list."""
    text = (
        resources.files("assoc_trends.data")
        .joinpath("stopwords_english.txt")
        .read_text(encoding="utf-8")
    )
    words = {
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    }
    return StopList(name="english", entries=frozenset(words))


def build_token_stream(doc, stoplist: StopList, keep_hyphens: bool = True) -> TokenStream:
    """normalize -> tokenize -> remove stop words for one document."""
    tokens = remove_stopwords(
        tokenize(normalize_text(doc.text, keep_hyphens=keep_hyphens)), stoplist
    )
    return TokenStream(doc_id=doc.id, year=doc.year, tokens=tuple(tokens))
