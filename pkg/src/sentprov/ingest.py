"""Release ingestion: manifest-driven parse -> segment -> store loading.

A manifest is a TSV of (section, label, date, path) rows, one per release
file; ``#`` starts a comment and paths are resolved relative to the
manifest. Releases are ingested in date order, each inside a single
transaction so queries never see a half-loaded release. Re-running the
same manifest is a no-op for releases already marked complete, and a
manifest whose new releases predate already-ingested ones of the same
section is rejected: history is append-only.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import date as Date
from typing import Optional, Union

from .flatfile import DiagnosticsSink, Release, Section, parse_release
from .segment import default_lexicon, normalize, segment
from .store import CorpusStore, StoreError


class IngestError(StoreError):
    pass


@dataclass(frozen=True)
class ManifestRow:
    release: Release
    path: str


@dataclass
class ReleaseReport:
    release: Release
    entries: int = 0
    annotated_entries: int = 0
    occurrences: int = 0
    diagnostics: int = 0
    skipped: bool = False


@dataclass
class IngestReport:
    releases: list = field(default_factory=list)

    @property
    def total_entries(self) -> int:
        return sum(r.entries for r in self.releases)

    @property
    def total_occurrences(self) -> int:
        return sum(r.occurrences for r in self.releases)


def read_manifest(path: Union[str, os.PathLike]) -> list[ManifestRow]:
    base = os.path.dirname(os.path.abspath(os.fspath(path)))
    rows = []
    with open(path, encoding="utf-8") as fp:
        for line_no, line in enumerate(fp, start=1):
            line = line.split("#", 1)[0].rstrip("\n").strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise IngestError(f"{path}:{line_no}: expected 4 tab-separated "
                                  f"fields, got {len(parts)}")
            section, label, date, rel_path = parts
            release = Release(Section.parse(section), label, Date.fromisoformat(date))
            rows.append(ManifestRow(release, os.path.join(base, rel_path)))
    return rows


def ingest_release(store: CorpusStore, path: str, release: Release,
                   lexicon: Optional[frozenset] = None,
                   diagnostics: Optional[DiagnosticsSink] = None,
                   count_duplicates: bool = False) -> ReleaseReport:
    """Load one release file inside one transaction."""
    lex = lexicon if lexicon is not None else default_lexicon()
    sink = diagnostics if diagnostics is not None else DiagnosticsSink()
    before = len(sink)
    report = ReleaseReport(release)
    rid = store.release_id(release)

    with store.transaction():
        occ_rows = []
        extra_counts: dict[tuple[int, int, int], int] = {}
        for entry in parse_release(path, release, sink):
            report.entries += 1
            cluster = store.upsert_entry(rid, entry.accessions)
            raw_sentences = segment(entry.comment_text, lex)
            if not raw_sentences:
                continue
            report.annotated_entries += 1
            seen: set[int] = set()
            for raw in raw_sentences:
                sid = store.intern_sentence(normalize(raw))
                if sid in seen:
                    if count_duplicates:
                        key = (sid, cluster, rid)
                        extra_counts[key] = extra_counts.get(key, 0) + 1
                    continue
                seen.add(sid)
                occ_rows.append((sid, cluster, rid))
            if len(occ_rows) >= 50_000:
                store.add_occurrences_bulk(occ_rows)
                occ_rows = []
        store.add_occurrences_bulk(occ_rows)
        if extra_counts:
            store.bump_multiplicity(
                [(extra, sid, key_cluster, key_rid)
                 for (sid, key_cluster, key_rid), extra in extra_counts.items()])
        store.mark_complete(rid)

    report.occurrences = store._conn.execute(
        "SELECT COUNT(*) FROM occurrences WHERE release_id=?", (rid,)).fetchone()[0]
    report.diagnostics = len(sink) - before
    return report


def ingest_manifest(store: CorpusStore, manifest_path: Union[str, os.PathLike],
                    lexicon: Optional[frozenset] = None,
                    diagnostics: Optional[DiagnosticsSink] = None,
                    count_duplicates: bool = False) -> IngestReport:
    """Register and ingest every release in a manifest, date-ordered."""
    rows = read_manifest(manifest_path)
    for row in rows:
        if not os.path.exists(row.path):
            raise IngestError(f"release file not found: {row.path}")
    rows.sort(key=lambda r: r.release.sort_key())

    for row in rows:
        store.register_release(row.release)

    # append-only check: a not-yet-ingested release must not predate what
    # its section already holds
    for section in Section:
        ingested = [rel for rel in store.releases(section)
                    if store.is_complete(store.release_id(rel))]
        if not ingested:
            continue
        newest = max(rel.date for rel in ingested)
        for row in rows:
            if (row.release.section is section
                    and not store.is_complete(store.release_id(row.release))
                    and row.release.date < newest):
                raise IngestError(
                    f"date regression: {section.value}/{row.release.label} "
                    f"({row.release.date}) predates already-ingested data ({newest})")

    report = IngestReport()
    lex = lexicon if lexicon is not None else default_lexicon()
    store.fast_writes(True)
    try:
        for row in rows:
            if store.is_complete(store.release_id(row.release)):
                rel_report = ReleaseReport(row.release, skipped=True)
            else:
                rel_report = ingest_release(store, row.path, row.release, lex,
                                            diagnostics, count_duplicates)
            report.releases.append(rel_report)
    finally:
        store.fast_writes(False)
    return report
