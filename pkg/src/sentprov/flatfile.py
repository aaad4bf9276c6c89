"""Streaming reader for line-coded flat-file database releases.

A release file is a sequence of entry blocks. Every line starts with a
two-letter line code followed by exactly three spaces, except the entry
terminator line ``//``. Only two codes matter here: ``AC`` lines carry the
semicolon-separated accession list (first accession is the primary) and
``CC`` lines carry the free-text annotation. Everything else (ID, DT, DR,
SQ, ...) is skipped without comment; lines that do not follow the code
grammar at all are reported to the diagnostics sink and skipped.

Input bytes are decoded as Latin-1, which is lossless for the archival
files this reader targets (they predate universal UTF-8). Gzip-compressed
files are detected by their magic bytes, not by file extension.

The parser is single-pass and keeps only the current entry in memory, so
arbitrarily large release files stream in bounded space.
"""

from __future__ import annotations

import gzip
import io
import json
import re
from dataclasses import dataclass, field
from datetime import date as Date
from enum import Enum
from typing import IO, Callable, Iterator, Optional, Sequence, Union

ACCESSION_RE = re.compile(r"[A-Z][A-Z0-9]{5,9}\Z")

# A removable copyright/licence banner is bounded by delimiter lines made of
# nothing but dashes (at least ten of them).
_BANNER_DELIM_RE = re.compile(r"-{10,}\Z")

# Topic headings look like ``-!- SUBCELLULAR LOCATION: ...``; the keyword is
# an all-caps token sequence. Only the marker, keyword and colon are dropped.
_TOPIC_RE = re.compile(r"-!-\s+[A-Z][A-Z0-9/ \-]*?:\s*")

_GZIP_MAGIC = b"\x1f\x8b"


class Section(str, Enum):
    """The two sections a release can belong to."""

    SWISSPROT = "swissprot"
    TREMBL = "trembl"

    @property
    def rank(self) -> int:
        """Deterministic tie-break order for same-date releases."""
        return 0 if self is Section.SWISSPROT else 1

    @classmethod
    def parse(cls, value: str) -> "Section":
        v = value.strip().lower().replace("-", "").replace("_", "")
        if v in ("swissprot", "sp", "sprot"):
            return cls.SWISSPROT
        if v in ("trembl", "tr"):
            return cls.TREMBL
        raise ValueError(f"unknown section: {value!r}")


@dataclass(frozen=True)
class Release:
    """One archived database version."""

    section: Section
    label: str
    date: Date
    ordinal: Optional[int] = None

    def sort_key(self) -> tuple:
        return (self.date, self.section.rank, _natural_label(self.label))


def _natural_label(label: str) -> tuple:
    # "9" < "11" numerically, "2012_05" compares as a string
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


@dataclass(frozen=True)
class RawEntry:
    """One parsed entry: its accession list and cleaned comment text."""

    accessions: tuple[str, ...]
    comment_text: str
    release: Release


@dataclass(frozen=True)
class Diagnostic:
    release_label: str
    line_no: int
    reason: str


class DiagnosticsSink:
    """Collects parse diagnostics; can be dumped as JSON lines."""

    def __init__(self) -> None:
        self.records: list[Diagnostic] = []

    def record(self, release_label: str, line_no: int, reason: str) -> None:
        self.records.append(Diagnostic(release_label, line_no, reason))

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def write_jsonl(self, fp: IO[str]) -> None:
        for d in self.records:
            fp.write(json.dumps({
                "release_label": d.release_label,
                "line_no": d.line_no,
                "reason": d.reason,
            }) + "\n")


def open_flatfile(source: Union[str, "io.IOBase", IO[bytes]]) -> IO[str]:
    """Open a flat file for text reading, transparently ungzipping.

    ``source`` is a path or a binary file object. Compression is detected
    from the first two bytes, never from the name.
    """
    if hasattr(source, "read"):
        raw = source
    else:
        raw = open(source, "rb")
    if not isinstance(raw, io.BufferedReader) and not hasattr(raw, "peek"):
        raw = io.BufferedReader(raw)  # type: ignore[arg-type]
    head = raw.peek(2)[:2]  # type: ignore[union-attr]
    if head == _GZIP_MAGIC:
        raw = gzip.GzipFile(fileobj=raw)  # type: ignore[assignment]
    return io.TextIOWrapper(raw, encoding="latin-1")  # type: ignore[arg-type]


def clean_comment_lines(
    cc_lines: Sequence[str],
    on_removal: Optional[Callable[[int, int, str], None]] = None,
) -> str:
    """Strip line codes, topic headings and copyright banners from CC lines.

    Returns the entry's comment text as a single string: line contents are
    joined with single spaces, which preserves word boundaries across
    continuation lines. Dash-delimiter lines (>= 10 dashes) bound removable
    copyright/licence blocks; an unpaired trailing delimiter is dropped on
    its own and the text after it is kept, so annotation words are never
    silently lost. Anything unrecognized passes through as text.

    ``on_removal(start_index, end_index, reason)`` is invoked for every
    removed block so removals stay auditable (indexes into ``cc_lines``,
    end exclusive).
    """
    contents = []
    for raw in cc_lines:
        if not raw.startswith("CC"):
            raise ValueError(f"not a CC line: {raw!r}")
        contents.append(raw[2:].strip())

    delim_indexes = [i for i, c in enumerate(contents) if _BANNER_DELIM_RE.match(c)]
    removed = [False] * len(contents)
    pairs = zip(delim_indexes[0::2], delim_indexes[1::2])
    for start, end in pairs:
        for i in range(start, end + 1):
            removed[i] = True
        if on_removal is not None:
            on_removal(start, end + 1, "copyright/licence block removed")
    if len(delim_indexes) % 2 == 1:
        lone = delim_indexes[-1]
        removed[lone] = True
        if on_removal is not None:
            on_removal(lone, lone + 1, "unpaired banner delimiter removed")

    pieces = []
    for i, content in enumerate(contents):
        if removed[i]:
            continue
        m = _TOPIC_RE.match(content)
        if m:
            content = content[m.end():]
        if content:
            pieces.append(content)
    return " ".join(pieces)


def parse_release(
    source: Union[str, IO[bytes]],
    release: Release,
    diagnostics: Optional[DiagnosticsSink] = None,
) -> Iterator[RawEntry]:
    """Stream one release file, yielding a RawEntry per ``//`` block.

    Entries with no CC lines are still yielded (their comment text is
    empty) because unannotated-entry statistics depend on them. Entries
    that carry no valid accession cannot be identified and are dropped
    with a diagnostic. A truncated final entry (EOF before ``//``) is
    dropped with a diagnostic as well.
    """
    sink = diagnostics if diagnostics is not None else DiagnosticsSink()
    accessions: list[str] = []
    seen_acc: set[str] = set()
    cc_lines: list[str] = []
    cc_line_nos: list[int] = []
    group_started = False

    def removal_audit(start: int, end: int, reason: str) -> None:
        sink.record(release.label, cc_line_nos[start], reason)

    fp = open_flatfile(source)
    line_no = 0
    for line in fp:
        line_no += 1
        line = line.rstrip("\n")
        if line.rstrip() == "//":
            if accessions:
                text = clean_comment_lines(cc_lines, on_removal=removal_audit)
                yield RawEntry(tuple(accessions), text, release)
            elif group_started:
                sink.record(release.label, line_no, "entry without accessions dropped")
            accessions = []
            seen_acc = set()
            cc_lines = []
            cc_line_nos = []
            group_started = False
            continue
        if len(line) >= 5 and line[:2].isalpha() and line[:2].isupper() and line[2:5] == "   ":
            group_started = True
            code = line[:2]
            content = line[5:]
            if code == "AC":
                for token in content.split(";"):
                    token = token.strip()
                    if not token:
                        continue
                    if ACCESSION_RE.match(token):
                        if token not in seen_acc:
                            seen_acc.add(token)
                            accessions.append(token)
                    else:
                        sink.record(release.label, line_no, f"invalid accession {token!r}")
            elif code == "CC":
                cc_lines.append(line)
                cc_line_nos.append(line_no)
            continue
        if len(line) == 2 and line.isalpha() and line.isupper():
            # bare code line with no content, e.g. "XX"
            group_started = True
            continue
        sink.record(release.label, line_no, "unrecognized line skipped")

    if group_started or accessions or cc_lines:
        sink.record(release.label, line_no, "truncated final entry dropped")
