"""Per-release reuse statistics over the occurrence corpus.

Counts follow the extraction-time definitions: "total" is the redundant
multiset of sentence sightings in a release, "unique" the distinct texts,
"singleton" the texts sighted exactly once. Average sentences per entry
divides by annotated entries only; an entry counts as unannotated when
its comment text yielded zero sentences (a copyright-only comment block
is unannotated). Averages are exact rationals and are reported as absent,
never zero, for empty releases.

All stats are computed over raw per-release entries as parsed; merge
resolution deliberately plays no part here, so a release's numbers never
change retroactively when a later merge is ingested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Optional, Union

from .flatfile import Release, Section
from .store import CorpusStore


@dataclass(frozen=True)
class ReleaseStats:
    release: Release
    entries_total: int
    entries_annotated: int
    entries_unannotated: int
    total_sentences: int
    unique_sentences: int
    singleton_sentences: int
    avg_sentences_per_entry: Optional[Fraction]
    avg_entries_per_sentence: Optional[Fraction]
    reuse_spectrum: tuple[tuple[int, int], ...]  # (k, sentences in exactly k entries)

    @property
    def pct_unique(self) -> Optional[Fraction]:
        if self.total_sentences == 0:
            return None
        return Fraction(self.unique_sentences, self.total_sentences)

    @property
    def pct_singleton(self) -> Optional[Fraction]:
        if self.total_sentences == 0:
            return None
        return Fraction(self.singleton_sentences, self.total_sentences)

    @property
    def pct_unannotated(self) -> Optional[Fraction]:
        if self.entries_total == 0:
            return None
        return Fraction(self.entries_unannotated, self.entries_total)


def compute_release_stats(store: CorpusStore, release: Union[Release, int]) -> ReleaseStats:
    """All reuse statistics for one fully ingested release."""
    rid = store.release_id(release)
    rel = store.release_by_id(rid)
    conn = store._conn

    entries_total = conn.execute(
        "SELECT COUNT(*) FROM entries WHERE release_id=?", (rid,)).fetchone()[0]
    entries_annotated = conn.execute(
        "SELECT COUNT(DISTINCT entry_key) FROM occurrences WHERE release_id=?",
        (rid,)).fetchone()[0]
    total = conn.execute(
        "SELECT COALESCE(SUM(mult), 0) FROM occurrences WHERE release_id=?",
        (rid,)).fetchone()[0]
    unique = conn.execute(
        "SELECT COUNT(DISTINCT sentence_id) FROM occurrences WHERE release_id=?",
        (rid,)).fetchone()[0]
    singleton = conn.execute(
        "SELECT COUNT(*) FROM (SELECT sentence_id FROM occurrences WHERE release_id=? "
        "GROUP BY sentence_id HAVING COUNT(*)=1 AND SUM(mult)=1)", (rid,)).fetchone()[0]
    spectrum = tuple(conn.execute(
        "SELECT k, COUNT(*) FROM (SELECT COUNT(*) AS k FROM occurrences "
        "WHERE release_id=? GROUP BY sentence_id) GROUP BY k ORDER BY k",
        (rid,)).fetchall())

    return ReleaseStats(
        release=rel,
        entries_total=entries_total,
        entries_annotated=entries_annotated,
        entries_unannotated=entries_total - entries_annotated,
        total_sentences=total,
        unique_sentences=unique,
        singleton_sentences=singleton,
        avg_sentences_per_entry=(Fraction(total, entries_annotated)
                                 if entries_annotated else None),
        avg_entries_per_sentence=(Fraction(total, unique) if unique else None),
        reuse_spectrum=spectrum,
    )


def stats_series(store: CorpusStore, section: Section) -> list[ReleaseStats]:
    """One ReleaseStats per registered release of the section, date-ordered."""
    return [compute_release_stats(store, store.release_id(rel))
            for rel in store.releases(section)]


def reuse_distribution(store: CorpusStore, release: Union[Release, int]) -> tuple[tuple[int, int], ...]:
    """The frequency-of-frequencies spectrum for one release, sorted by k."""
    return compute_release_stats(store, release).reuse_spectrum


# -- serialization -------------------------------------------------------------

_SERIES_COLUMNS = (
    "section", "label", "date", "ordinal",
    "entries_total", "entries_annotated", "entries_unannotated",
    "total_sentences", "unique_sentences", "singleton_sentences",
    "avg_sentences_per_entry", "avg_entries_per_sentence",
    "pct_unique", "pct_singleton", "pct_unannotated",
)


def _num(value: Optional[Fraction]) -> str:
    return "" if value is None else "%.10g" % float(value)


def stats_row(st: ReleaseStats) -> dict:
    rel = st.release
    return {
        "section": rel.section.value,
        "label": rel.label,
        "date": rel.date.isoformat(),
        "ordinal": rel.ordinal,
        "entries_total": st.entries_total,
        "entries_annotated": st.entries_annotated,
        "entries_unannotated": st.entries_unannotated,
        "total_sentences": st.total_sentences,
        "unique_sentences": st.unique_sentences,
        "singleton_sentences": st.singleton_sentences,
        "avg_sentences_per_entry": (None if st.avg_sentences_per_entry is None
                                    else float(st.avg_sentences_per_entry)),
        "avg_entries_per_sentence": (None if st.avg_entries_per_sentence is None
                                     else float(st.avg_entries_per_sentence)),
        "pct_unique": None if st.pct_unique is None else float(st.pct_unique),
        "pct_singleton": None if st.pct_singleton is None else float(st.pct_singleton),
        "pct_unannotated": None if st.pct_unannotated is None else float(st.pct_unannotated),
    }


def write_series_tsv(series: list[ReleaseStats], fp: IO[str]) -> None:
    fp.write("\t".join(_SERIES_COLUMNS) + "\n")
    for st in series:
        row = stats_row(st)
        fp.write("\t".join(
            _num_cell(row[c]) for c in _SERIES_COLUMNS) + "\n")


def _num_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.10g" % value
    return str(value)


def write_series_json(series: list[ReleaseStats], fp: IO[str]) -> None:
    json.dump([stats_row(st) for st in series], fp, indent=2)
    fp.write("\n")


def write_distribution_tsv(spectrum: tuple[tuple[int, int], ...], fp: IO[str]) -> None:
    fp.write("entries_per_sentence\tsentences\n")
    for k, count in spectrum:
        fp.write(f"{k}\t{count}\n")
