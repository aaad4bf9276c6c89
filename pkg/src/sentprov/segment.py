"""Rule-based sentence segmentation and canonical normalization.

A sentence is a span of text terminated by a full stop. The stop counts as
a terminator only when followed by whitespace or end of text, which also
means a dot inside a decimal number (digit.digit) can never split. A stop
that closes a known abbreviation ("e.g.", "et al.", ...) is not a
terminator either; the abbreviation lexicon is a plain text file, one
entry per line, ``#`` for comments, and can be overridden per deployment.

Topic blocks in the source data are sometimes left unterminated, so any
trailing fragment without a full stop is emitted as a sentence of its own.

Canonical sentence text is lowercase with whitespace runs collapsed to
single spaces: the unit of case-insensitive identity used everywhere else.
"""

from __future__ import annotations

import re
from importlib import resources
from typing import Iterable, Optional

_TERMINATOR_RE = re.compile(r"\.(?=\s|$)")
_WS_RE = re.compile(r"\s+")

_DEFAULT_LEXICON: Optional[frozenset[str]] = None


def load_lexicon(path: Optional[str] = None) -> frozenset[str]:
    """Load an abbreviation lexicon; entries are lowercased.

    Without a path the packaged default lexicon is used. Entries must end
    with a full stop; ones that do not are rejected because they could
    never match a terminator candidate.
    """
    if path is None:
        text = resources.files("sentprov.data").joinpath("abbreviations.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fp:
            text = fp.read()
    entries = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if not line.endswith("."):
            raise ValueError(f"abbreviation must end with a full stop: {line!r}")
        entries.add(line.lower())
    return frozenset(entries)


def default_lexicon() -> frozenset[str]:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        _DEFAULT_LEXICON = load_lexicon()
    return _DEFAULT_LEXICON


def _ends_abbreviation(text: str, dot_index: int, lexicon: Iterable[str]) -> bool:
    """True when the stop at ``dot_index`` closes a lexicon abbreviation."""
    for entry in lexicon:
        start = dot_index - len(entry) + 1
        if start < 0:
            continue
        if text[start:dot_index + 1].lower() != entry:
            continue
        if start == 0 or not text[start - 1].isalnum():
            return True
    return False


def segment(text: str, lexicon: Optional[frozenset[str]] = None) -> list[str]:
    """Split cleaned comment text into raw sentence strings.

    Total and deterministic; empty input gives an empty list. Joining the
    output reproduces every non-whitespace character of the input in
    order, since splitting only ever discards inter-sentence whitespace.
    """
    if lexicon is None:
        lexicon = default_lexicon()
    sentences: list[str] = []
    start = 0
    for m in _TERMINATOR_RE.finditer(text):
        i = m.start()
        if _ends_abbreviation(text, i, lexicon):
            continue
        piece = text[start:i + 1].strip()
        if piece:
            sentences.append(piece)
        start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def normalize(raw_sentence: str) -> str:
    """Normalize a raw sentence to canonical form.

    Lowercases, collapses internal whitespace and trims; punctuation is
    preserved verbatim. Idempotent. Whitespace-only input is rejected: the
    segmenter never emits it, so seeing one signals an upstream bug.
    """
    out = _WS_RE.sub(" ", raw_sentence).strip().lower()
    if not out:
        raise ValueError("whitespace-only sentence cannot be normalized")
    return out
