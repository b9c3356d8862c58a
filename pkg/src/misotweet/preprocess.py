"""Seven-stage tweet normalization producing stemmed token sequences.

Stage order: URL removal, lowercasing, contraction expansion, emoji and
punctuation stripping, whitespace tokenization, stopword removal, stemming.
Expansion must precede punctuation stripping (the table keys need their
apostrophes) and stopword removal must precede stemming (the pinned list
holds surface forms). Every stage is total: arbitrary UTF-8 in, never an
error out.

The contraction table, stopword list, and emoji codepoint ranges are pinned
data files shipped with the package (``misotweet/data/``), so identical
input yields identical tokens on any machine.
"""

from __future__ import annotations

import re
import unicodedata
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConfigError
from .stemmer import stem_token

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")


@dataclass(frozen=True)
class StageToggles:
    """Per-stage switches. Tokenization itself always runs; it is the
    conversion to tokens, not a filter."""

    remove_urls: bool = True
    lowercase: bool = True
    expand_contractions: bool = True
    strip_emoji_and_punct: bool = True
    remove_stopwords: bool = True
    stem: bool = True


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    source_id: str = ""

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class PreprocessConfig:
    contraction_table: dict[str, str]
    stopword_list: frozenset[str]
    emoji_ranges: tuple[tuple[int, int], ...]
    stages: StageToggles = field(default_factory=StageToggles)

    def __post_init__(self):
        for key in self.contraction_table:
            if key != key.lower():
                raise ConfigError(f"contraction key not lowercase: {key!r}")
        if not self.stopword_list:
            raise ConfigError("stopword list is empty")
        prev_hi = -1
        for lo, hi in self.emoji_ranges:
            if lo > hi:
                raise ConfigError(f"invalid emoji range {lo:#x}-{hi:#x}")
            if lo <= prev_hi:
                raise ConfigError("emoji ranges must be sorted and non-overlapping")
            prev_hi = hi


def remove_urls(text: str) -> str:
    """Replace each http(s)/www URL (up to whitespace or end) by one space."""
    return _URL_RE.sub(" ", text)


def lowercase(text: str) -> str:
    """Lowercase each codepoint independently (no cross-character context)."""
    return "".join(ch.lower() for ch in text)


@lru_cache(maxsize=8)
def _contraction_pattern(items: tuple[tuple[str, str], ...]):
    # longest key first so e.g. can't've wins over can't
    keys = sorted((k for k, _ in items), key=len, reverse=True)
    alternation = "|".join(re.escape(k) for k in keys)
    boundary = "['’\\w]"
    return re.compile(f"(?<!{boundary})(?:{alternation})(?!{boundary})")


def expand_contractions(text: str, table: dict[str, str]) -> str:
    """Replace whole-word table keys by their expansions, longest key first."""
    if not table:
        return text
    pattern = _contraction_pattern(tuple(sorted(table.items())))
    return pattern.sub(lambda m: table[m.group(0)], text)


def strip_emoji_and_punct(text: str, emoji_ranges: tuple[tuple[int, int], ...]) -> str:
    """Delete codepoints inside the emoji ranges; replace punctuation and
    symbol codepoints (Unicode categories P* and S*) by a single space.
    Letters, digits, marks, and whitespace pass through."""
    starts = [lo for lo, _ in emoji_ranges]
    out: list[str] = []
    for ch in text:
        cp = ord(ch)
        i = bisect_right(starts, cp) - 1
        if i >= 0 and cp <= emoji_ranges[i][1]:
            continue
        if unicodedata.category(ch)[0] in "PS":
            out.append(" ")
        else:
            out.append(ch)
    return "".join(out)


def tokenize(text: str) -> list[str]:
    """Split on runs of whitespace, dropping empty tokens."""
    return text.split()


def remove_stopwords(tokens: list[str], stopword_list: frozenset[str]) -> list[str]:
    return [t for t in tokens if t not in stopword_list]


def stem(tokens: list[str]) -> list[str]:
    """Porter-stem each token independently.

    The lone degenerate stem (bare ``s`` reduces to the empty string) is
    dropped to keep token sequences free of empty entries.
    """
    stemmed = (stem_token(t) for t in tokens)
    return [t for t in stemmed if t]


def preprocess(text: str, config: PreprocessConfig, source_id: str = "") -> TokenSequence:
    """Run the full pipeline, honoring the config's stage toggles."""
    st = config.stages
    if st.remove_urls:
        text = remove_urls(text)
    if st.lowercase:
        text = lowercase(text)
    if st.expand_contractions:
        text = expand_contractions(text, config.contraction_table)
    if st.strip_emoji_and_punct:
        text = strip_emoji_and_punct(text, config.emoji_ranges)
    tokens = tokenize(text)
    if st.remove_stopwords:
        tokens = remove_stopwords(tokens, config.stopword_list)
    if st.stem:
        tokens = stem(tokens)
    return TokenSequence(tokens=tuple(tokens), source_id=source_id)


def _read_data_text(name: str) -> str:
    return resources.files("misotweet.data").joinpath(name).read_text("utf-8")


def load_contraction_table(path: str | Path | None = None) -> dict[str, str]:
    text = Path(path).read_text("utf-8") if path else _read_data_text("contractions.tsv")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("\t")
        table[key] = value
    return table


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    text = Path(path).read_text("utf-8") if path else _read_data_text("stopwords.txt")
    return frozenset(w for w in text.split() if w)


def load_emoji_ranges(path: str | Path | None = None) -> tuple[tuple[int, int], ...]:
    text = Path(path).read_text("utf-8") if path else _read_data_text("emoji_ranges.txt")
    ranges: list[tuple[int, int]] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        interval = line.split("\t")[0]
        lo, _, hi = interval.partition("-")
        ranges.append((int(lo, 16), int(hi, 16)))
    return tuple(ranges)


def default_config(stages: StageToggles | None = None) -> PreprocessConfig:
    """Config backed by the pinned data files shipped with the package."""
    return PreprocessConfig(
        contraction_table=load_contraction_table(),
        stopword_list=load_stopwords(),
        emoji_ranges=load_emoji_ranges(),
        stages=stages or StageToggles(),
    )
