"""Embedded store for the versioned occurrence corpus.

A corpus is four relations in a single SQLite file: registered releases,
interned sentences, accessions with their merge partition, and the
occurrence relation (sentence x entry x release). No server, one file.

Entry identity is merge-aware: an entry is the cluster of every accession
it has ever been co-listed with, and merges apply retroactively (a merge
joins the clusters' full histories, otherwise an annotation would appear
removed when the entry was merely merged). Clusters are tracked with an
in-memory union of accession sets; the exposed ``cluster_id`` is the
smallest accession id in the cluster, which makes ids independent of
merge order. Occurrence rows store the cluster id current at insert time
(an accession id, so it stays resolvable after later merges); readers
resolve rows through the partition on the fly.

Release ordinals are the 1-based position in the global date-ordered
release sequence, ties broken Swiss-Prot before TrEMBL. Ordinals are
recomputed on registration, so releases may be registered in any order;
occurrences reference the stable internal release id, never the ordinal.

Statistics queries count raw per-release entries exactly as parsed; only
timelines and pattern detection look through the merge partition. Whole
releases are ingested inside one transaction, so readers never observe a
partially ingested release.

The accession partition and the sentence intern table are held in memory
while a store is open; at full archive scale this costs a few GB and is
the documented trade-off for desk-scale speed.
"""

from __future__ import annotations

import json
import os
import sqlite3
from dataclasses import dataclass
from datetime import date as Date
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Iterator, Optional, Sequence, Union

from .flatfile import Release, Section
from .segment import normalize

FORMAT_MAGIC = "sentprov-corpus"
FORMAT_VERSION = 1


class StoreError(Exception):
    pass


class ConflictError(StoreError):
    pass


class NotFoundError(StoreError):
    pass


_SCHEMA = """
CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE releases (
    release_id INTEGER PRIMARY KEY,
    section    TEXT NOT NULL,
    label      TEXT NOT NULL,
    date       TEXT NOT NULL,
    ordinal    INTEGER NOT NULL,
    complete   INTEGER NOT NULL DEFAULT 0,
    UNIQUE (section, label)
);
CREATE TABLE sentences (
    sentence_id INTEGER PRIMARY KEY,
    text        TEXT NOT NULL UNIQUE
);
CREATE TABLE accessions (
    acc_id    INTEGER PRIMARY KEY,
    accession TEXT NOT NULL UNIQUE,
    root_id   INTEGER NOT NULL
);
CREATE TABLE entries (
    release_id  INTEGER NOT NULL,
    entry_key   INTEGER NOT NULL,
    primary_acc INTEGER NOT NULL,
    PRIMARY KEY (release_id, entry_key)
) WITHOUT ROWID;
CREATE TABLE occurrences (
    sentence_id INTEGER NOT NULL,
    entry_key   INTEGER NOT NULL,
    release_id  INTEGER NOT NULL,
    mult        INTEGER NOT NULL DEFAULT 1,
    PRIMARY KEY (sentence_id, entry_key, release_id)
) WITHOUT ROWID;
CREATE INDEX occ_by_release ON occurrences (release_id, sentence_id, entry_key);
CREATE TABLE classifications (
    record_id     INTEGER PRIMARY KEY,
    sentence_id   INTEGER NOT NULL,
    classification TEXT NOT NULL,
    decision_path TEXT NOT NULL,
    analyst       TEXT NOT NULL,
    created_at    TEXT NOT NULL,
    notes         TEXT NOT NULL DEFAULT ''
);
CREATE TABLE pattern_reports (
    kind        TEXT NOT NULL,
    sentence_id INTEGER NOT NULL,
    in_latest   INTEGER NOT NULL,
    report      TEXT NOT NULL,
    PRIMARY KEY (kind, sentence_id)
) WITHOUT ROWID;
"""


@dataclass(frozen=True)
class ClusterTrack:
    """One cluster's row in a sentence timeline."""

    cluster_id: int
    accessions: tuple[str, ...]
    first_ordinal: int
    ordinals: tuple[int, ...]
    primaries: dict  # ordinal -> primary accession shown at that release


@dataclass(frozen=True)
class SentenceTimeline:
    sentence_id: int
    text: str
    clusters: tuple[ClusterTrack, ...]
    counts: dict  # ordinal -> number of clusters holding the sentence
    rails: dict   # Section -> tuple of registered ordinals in the active span


class CorpusStore:
    """Single-file corpus store; one writer at a time, many readers."""

    def __init__(self, path: Union[str, os.PathLike] = ":memory:"):
        self.path = str(path)
        existing = self.path != ":memory:" and os.path.exists(self.path) and os.path.getsize(self.path) > 0
        # served read-mostly from a thread pool; writes are serialized by
        # the callers' locks, so cross-thread use is safe
        self._conn = sqlite3.connect(self.path, isolation_level=None,
                                     check_same_thread=False)
        self._conn.execute("PRAGMA synchronous=NORMAL")
        if existing:
            self._check_format()
        else:
            self._init_schema()
        self._load_caches()

    # -- lifecycle -----------------------------------------------------

    def _init_schema(self) -> None:
        cur = self._conn
        cur.executescript(_SCHEMA)
        cur.execute("INSERT INTO meta VALUES ('magic', ?)", (FORMAT_MAGIC,))
        cur.execute("INSERT INTO meta VALUES ('format_version', ?)", (str(FORMAT_VERSION),))

    def _check_format(self) -> None:
        try:
            rows = dict(self._conn.execute("SELECT key, value FROM meta"))
        except sqlite3.DatabaseError as exc:
            raise StoreError(f"{self.path}: not a corpus store ({exc})") from exc
        if rows.get("magic") != FORMAT_MAGIC:
            raise StoreError(f"{self.path}: bad magic header")
        if int(rows.get("format_version", "0")) > FORMAT_VERSION:
            raise StoreError(f"{self.path}: format version {rows['format_version']} "
                             f"newer than supported {FORMAT_VERSION}")

    def _load_caches(self) -> None:
        # releases
        self._releases_by_id: dict[int, Release] = {}
        self._release_ids: dict[tuple[Section, str], int] = {}
        for rid, section, label, date, ordinal in self._conn.execute(
                "SELECT release_id, section, label, date, ordinal FROM releases"):
            rel = Release(Section(section), label, Date.fromisoformat(date), ordinal)
            self._releases_by_id[rid] = rel
            self._release_ids[(rel.section, label)] = rid
        # accession partition
        self._acc_ids: dict[str, int] = {}
        self._acc_names: dict[int, str] = {}
        self._root: dict[int, int] = {}
        self._members: dict[int, list[int]] = {}
        for acc_id, accession, root_id in self._conn.execute(
                "SELECT acc_id, accession, root_id FROM accessions"):
            self._acc_ids[accession] = acc_id
            self._acc_names[acc_id] = accession
            self._root[acc_id] = root_id
            self._members.setdefault(root_id, []).append(acc_id)
        # sentence intern cache
        self._sentence_ids: dict[str, int] = dict(
            self._conn.execute("SELECT text, sentence_id FROM sentences"))

    def close(self) -> None:
        self._conn.close()

    def __enter__(self) -> "CorpusStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- meta ------------------------------------------------------------

    def get_meta(self, key: str) -> Optional[str]:
        row = self._conn.execute("SELECT value FROM meta WHERE key=?", (key,)).fetchone()
        return row[0] if row else None

    def set_meta(self, key: str, value: str) -> None:
        self._conn.execute("INSERT OR REPLACE INTO meta VALUES (?, ?)", (key, value))

    # -- transactions ------------------------------------------------------

    class _Txn:
        def __init__(self, store: "CorpusStore"):
            self.store = store

        def __enter__(self):
            self.store._conn.execute("BEGIN IMMEDIATE")
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc_type is None:
                self.store._conn.execute("COMMIT")
            else:
                self.store._conn.execute("ROLLBACK")
            return False

    def transaction(self) -> "_Txn":
        """Explicit transaction; used to make one release's ingest atomic."""
        return CorpusStore._Txn(self)

    # -- releases ----------------------------------------------------------

    def register_release(self, release: Release) -> int:
        """Register a release and return its global ordinal.

        Idempotent for identical metadata; a label re-registered with a
        different date is a conflict. Ordinals are recomputed from the
        full date-ordered sequence on every registration, so registration
        order does not matter.
        """
        key = (release.section, release.label)
        rid = self._release_ids.get(key)
        if rid is not None:
            known = self._releases_by_id[rid]
            if known.date != release.date:
                raise ConflictError(
                    f"release {release.section.value}/{release.label} already "
                    f"registered with date {known.date}, got {release.date}")
            return known.ordinal  # type: ignore[return-value]
        cur = self._conn.execute(
            "INSERT INTO releases (section, label, date, ordinal) VALUES (?,?,?,0)",
            (release.section.value, release.label, release.date.isoformat()))
        rid = cur.lastrowid
        self._releases_by_id[rid] = release
        self._release_ids[key] = rid
        self._renumber()
        return self._releases_by_id[rid].ordinal  # type: ignore[return-value]

    def _renumber(self) -> None:
        items = sorted(self._releases_by_id.items(), key=lambda kv: kv[1].sort_key())
        for ordinal, (rid, rel) in enumerate(items, start=1):
            if rel.ordinal != ordinal:
                self._conn.execute("UPDATE releases SET ordinal=? WHERE release_id=?",
                                   (ordinal, rid))
                self._releases_by_id[rid] = Release(rel.section, rel.label, rel.date, ordinal)

    def releases(self, section: Optional[Section] = None) -> list[Release]:
        rels = [r for r in self._releases_by_id.values()
                if section is None or r.section is section]
        return sorted(rels, key=lambda r: r.ordinal)  # type: ignore[arg-type,return-value]

    def release_id(self, release: Union[Release, int]) -> int:
        if isinstance(release, int):
            if release not in self._releases_by_id:
                raise NotFoundError(f"unknown release id {release}")
            return release
        rid = self._release_ids.get((release.section, release.label))
        if rid is None:
            raise NotFoundError(
                f"release {release.section.value}/{release.label} is not registered")
        return rid

    def release_by_id(self, rid: int) -> Release:
        return self._releases_by_id[rid]

    def find_release(self, section: Section, label: str) -> Release:
        rid = self._release_ids.get((section, label))
        if rid is None:
            raise NotFoundError(f"unknown release {section.value}/{label}")
        return self._releases_by_id[rid]

    def mark_complete(self, release: Union[Release, int]) -> None:
        self._conn.execute("UPDATE releases SET complete=1 WHERE release_id=?",
                           (self.release_id(release),))

    def is_complete(self, release: Union[Release, int]) -> bool:
        row = self._conn.execute("SELECT complete FROM releases WHERE release_id=?",
                                 (self.release_id(release),)).fetchone()
        return bool(row and row[0])

    def ordinal_map(self) -> dict[int, int]:
        """release_id -> ordinal for every registered release."""
        return {rid: rel.ordinal for rid, rel in self._releases_by_id.items()}  # type: ignore[misc]

    def release_by_ordinal(self, ordinal: int) -> Release:
        for rel in self._releases_by_id.values():
            if rel.ordinal == ordinal:
                return rel
        raise NotFoundError(f"no release with ordinal {ordinal}")

    def latest_release_ids(self, label: Optional[str] = None) -> list[int]:
        """Release ids counting as "the latest version".

        With a label: every section's release carrying that label. Without
        one: all releases sharing the maximum registered date.
        """
        if label is not None:
            ids = [rid for rid, rel in self._releases_by_id.items() if rel.label == label]
            if not ids:
                raise NotFoundError(f"no release labelled {label!r}")
            return ids
        if not self._releases_by_id:
            return []
        max_date = max(rel.date for rel in self._releases_by_id.values())
        return [rid for rid, rel in self._releases_by_id.items() if rel.date == max_date]

    # -- accession clusters -------------------------------------------------

    def _intern_accession(self, accession: str) -> int:
        acc_id = self._acc_ids.get(accession)
        if acc_id is None:
            cur = self._conn.execute(
                "INSERT INTO accessions (accession, root_id) VALUES (?, 0)", (accession,))
            acc_id = cur.lastrowid
            self._conn.execute("UPDATE accessions SET root_id=? WHERE acc_id=?",
                               (acc_id, acc_id))
            self._acc_ids[accession] = acc_id
            self._acc_names[acc_id] = accession
            self._root[acc_id] = acc_id
            self._members[acc_id] = [acc_id]
        return acc_id

    def _union(self, a: int, b: int) -> int:
        ra, rb = self._root[a], self._root[b]
        if ra == rb:
            return ra
        keep, drop = (ra, rb) if ra < rb else (rb, ra)
        moved = self._members.pop(drop)
        for m in moved:
            self._root[m] = keep
        self._members[keep].extend(moved)
        self._conn.executemany("UPDATE accessions SET root_id=? WHERE acc_id=?",
                               [(keep, m) for m in moved])
        return keep

    def find_cluster(self, accession: str) -> int:
        acc_id = self._acc_ids.get(accession)
        if acc_id is None:
            raise NotFoundError(f"unknown accession {accession!r}")
        return self._root[acc_id]

    def resolve(self, acc_id: int) -> int:
        """Map a stored entry key (an accession id) to its current cluster."""
        return self._root[acc_id]

    def cluster_accessions(self, cluster_id: int) -> list[str]:
        members = self._members.get(cluster_id)
        if members is None:
            raise NotFoundError(f"unknown cluster {cluster_id}")
        return sorted(self._acc_names[m] for m in members)

    def primary_accession_at(self, cluster_id: int,
                             release: Union[Release, int]) -> Optional[str]:
        """The accession shown for a cluster at one release.

        This is the primary accession recorded when the entry was sighted
        there; if several pre-merge entries of the cluster were sighted in
        the same release, the alphabetically first primary is returned.
        Merges choose nothing retroactively: each release keeps the
        primary it was ingested with. None when the cluster has no entry
        in that release.
        """
        members = self._members.get(cluster_id)
        if members is None:
            raise NotFoundError(f"unknown cluster {cluster_id}")
        rid = self.release_id(release)
        placeholders = ",".join("?" * len(members))
        rows = self._conn.execute(
            f"SELECT primary_acc FROM entries WHERE release_id=? "
            f"AND entry_key IN ({placeholders})", (rid, *members)).fetchall()
        if not rows:
            return None
        return min(self._acc_names[r[0]] for r in rows)

    def upsert_entry(self, release: Union[Release, int], accessions: Sequence[str]) -> int:
        """Record an entry sighting; returns the (possibly merged) cluster id.

        All clusters touching any listed accession are joined. The first
        accession is recorded as the entry's primary for this release.
        """
        if not accessions:
            raise StoreError("entry needs at least one accession")
        rid = self.release_id(release)
        ids = [self._intern_accession(a) for a in accessions]
        cluster = ids[0]
        for other in ids[1:]:
            cluster = self._union(cluster, other)
        cluster = self._root[ids[0]]
        self._conn.execute(
            "INSERT OR REPLACE INTO entries (release_id, entry_key, primary_acc) "
            "VALUES (?,?,?)", (rid, cluster, ids[0]))
        return cluster

    # -- sentences and occurrences -------------------------------------------

    def intern_sentence(self, text: str) -> int:
        sid = self._sentence_ids.get(text)
        if sid is None:
            cur = self._conn.execute("INSERT INTO sentences (text) VALUES (?)", (text,))
            sid = cur.lastrowid
            self._sentence_ids[text] = sid
        return sid

    def add_occurrence(self, sentence_text: str, cluster_id: int,
                       release: Union[Release, int], count_duplicate: bool = False) -> int:
        """Store the (sentence, cluster, release) triple exactly once.

        The text must already be canonical. With ``count_duplicate`` a
        repeated sighting bumps the row's multiplicity instead of being
        ignored; entry-level identities stay based on distinct triples.
        """
        try:
            canonical = normalize(sentence_text)
        except ValueError as exc:
            raise StoreError(str(exc)) from exc
        if canonical != sentence_text:
            raise StoreError(f"sentence text is not canonical: {sentence_text!r}")
        if cluster_id not in self._root:
            raise NotFoundError(f"unknown cluster {cluster_id}")
        rid = self.release_id(release)
        sid = self.intern_sentence(sentence_text)
        cur = self._conn.execute(
            "INSERT OR IGNORE INTO occurrences (sentence_id, entry_key, release_id) "
            "VALUES (?,?,?)", (sid, cluster_id, rid))
        if cur.rowcount == 0 and count_duplicate:
            self._conn.execute(
                "UPDATE occurrences SET mult = mult + 1 "
                "WHERE sentence_id=? AND entry_key=? AND release_id=?",
                (sid, cluster_id, rid))
        return sid

    def add_occurrences_bulk(self, rows: Iterable[tuple[int, int, int]]) -> None:
        """Fast path for ingest: pre-interned (sentence_id, entry_key, release_id)."""
        self._conn.executemany(
            "INSERT OR IGNORE INTO occurrences (sentence_id, entry_key, release_id) "
            "VALUES (?,?,?)", rows)

    def bump_multiplicity(self, rows: Iterable[tuple[int, int, int, int]]) -> None:
        """(extra, sentence_id, entry_key, release_id) multiplicity increments."""
        self._conn.executemany(
            "UPDATE occurrences SET mult = mult + ? "
            "WHERE sentence_id=? AND entry_key=? AND release_id=?", rows)

    def sentence_id(self, text: str) -> int:
        sid = self._sentence_ids.get(text)
        if sid is None:
            raise NotFoundError(f"unknown sentence {text!r}")
        return sid

    def sentence_text(self, sentence_id: int) -> str:
        row = self._conn.execute("SELECT text FROM sentences WHERE sentence_id=?",
                                 (sentence_id,)).fetchone()
        if row is None:
            raise NotFoundError(f"unknown sentence id {sentence_id}")
        return row[0]

    def has_sentence(self, sentence_id: int) -> bool:
        return self._conn.execute("SELECT 1 FROM sentences WHERE sentence_id=?",
                                  (sentence_id,)).fetchone() is not None

    def search_sentences(self, query: str, cap: int = 50) -> tuple[list[tuple[int, str]], bool]:
        """Exact-text match first, then substring matches up to ``cap``."""
        results: list[tuple[int, str]] = []
        exact = self._sentence_ids.get(query)
        if exact is not None:
            results.append((exact, query))
        like = "%" + query.replace("\\", "\\\\").replace("%", r"\%").replace("_", r"\_") + "%"
        rows = self._conn.execute(
            "SELECT sentence_id, text FROM sentences WHERE text LIKE ? ESCAPE '\\' "
            "ORDER BY sentence_id LIMIT ?", (like, cap + 1)).fetchall()
        truncated = len(rows) > cap
        for sid, text in rows[:cap]:
            if (sid, text) not in results:
                results.append((sid, text))
        return results[:cap], truncated

    def sentence_count(self) -> int:
        return self._conn.execute("SELECT COUNT(*) FROM sentences").fetchone()[0]

    def occurrence_count(self) -> int:
        return self._conn.execute("SELECT COUNT(*) FROM occurrences").fetchone()[0]

    def lifetime_cluster_count(self, sentence_id: int) -> int:
        if not self.has_sentence(sentence_id):
            raise NotFoundError(f"unknown sentence id {sentence_id}")
        keys = self._conn.execute(
            "SELECT DISTINCT entry_key FROM occurrences WHERE sentence_id=?",
            (sentence_id,)).fetchall()
        return len({self._root[k] for (k,) in keys})

    # -- timelines ------------------------------------------------------------

    def timeline(self, sentence_id: int) -> SentenceTimeline:
        """Merge-aware propagation timeline for one sentence.

        Clusters are ordered by first appearance then cluster id, which is
        the deterministic x-axis order the visualization relies on. The
        rails list every registered release of each section inside the
        sentence's active span, so true absence can be told apart from
        "no release happened".
        """
        text = self.sentence_text(sentence_id)
        rows = self._conn.execute(
            "SELECT entry_key, release_id FROM occurrences WHERE sentence_id=?",
            (sentence_id,)).fetchall()
        ordinals_of: dict[int, set[int]] = {}
        primaries: dict[tuple[int, int], str] = {}
        for entry_key, rid in rows:
            cluster = self._root[entry_key]
            ordinal = self._releases_by_id[rid].ordinal
            ordinals_of.setdefault(cluster, set()).add(ordinal)  # type: ignore[arg-type]
            prim = self._conn.execute(
                "SELECT primary_acc FROM entries WHERE release_id=? AND entry_key=?",
                (rid, entry_key)).fetchone()
            if prim is not None:
                name = self._acc_names[prim[0]]
                key = (cluster, ordinal)  # type: ignore[assignment]
                if key not in primaries or name < primaries[key]:
                    primaries[key] = name

        tracks = []
        for cluster, ords in ordinals_of.items():
            ordered = tuple(sorted(ords))
            tracks.append(ClusterTrack(
                cluster_id=cluster,
                accessions=tuple(self.cluster_accessions(cluster)),
                first_ordinal=ordered[0],
                ordinals=ordered,
                primaries={o: primaries[(cluster, o)] for o in ordered
                           if (cluster, o) in primaries},
            ))
        tracks.sort(key=lambda t: (t.first_ordinal, t.cluster_id))

        counts: dict[int, int] = {}
        for track in tracks:
            for o in track.ordinals:
                counts[o] = counts.get(o, 0) + 1

        rails: dict[Section, tuple[int, ...]] = {s: () for s in Section}
        if counts:
            lo, hi = min(counts), max(counts)
            for sec in Section:
                rails[sec] = tuple(r.ordinal for r in self.releases(sec)
                                   if lo <= r.ordinal <= hi)  # type: ignore[operator]

        return SentenceTimeline(sentence_id, text, tuple(tracks), counts, rails)

    def iter_sentence_occurrences(self) -> Iterator[tuple[int, list[tuple[int, int]]]]:
        """Stream (sentence_id, [(cluster_id, release_id), ...]) groups.

        Rows come out clustered by sentence id straight off the primary
        key, so memory stays bounded by the widest single sentence.
        """
        cur = self._conn.execute(
            "SELECT sentence_id, entry_key, release_id FROM occurrences "
            "ORDER BY sentence_id")
        for sid, group in groupby(cur, key=lambda r: r[0]):
            yield sid, [(self._root[k], rid) for _, k, rid in group]

    # -- export / import -------------------------------------------------------

    def export_occurrences(self, path: Union[str, os.PathLike]) -> None:
        """Write the diffable occurrence relation, sorted.

        Columns: sentence_id, cluster_id, section, release_label. Rows are
        distinct after merge resolution.
        """
        lines = set()
        for sid, entry_key, rid in self._conn.execute(
                "SELECT sentence_id, entry_key, release_id FROM occurrences"):
            rel = self._releases_by_id[rid]
            lines.add("%d\t%d\t%s\t%s\n"
                      % (sid, self._root[entry_key], rel.section.value, rel.label))
        with open(path, "w", encoding="utf-8") as fp:
            fp.writelines(sorted(lines))

    def export_dump(self, out_dir: Union[str, os.PathLike]) -> None:
        """Write a complete, re-importable dump of the corpus.

        All files are deterministically sorted so a dump can be compared
        byte for byte. ``occurrences.tsv`` is the diffable cluster-level
        relation; ``raw_occurrences.tsv`` keeps the entry-level rows the
        import needs.
        """
        out = os.fspath(out_dir)
        os.makedirs(out, exist_ok=True)
        with open(os.path.join(out, "releases.tsv"), "w", encoding="utf-8") as fp:
            for rel in self.releases():
                fp.write(f"{rel.section.value}\t{rel.label}\t{rel.date.isoformat()}"
                         f"\t{int(self.is_complete(self.release_id(rel)))}\n")
        with open(os.path.join(out, "sentences.tsv"), "w", encoding="utf-8") as fp:
            for sid, text in self._conn.execute(
                    "SELECT sentence_id, text FROM sentences ORDER BY sentence_id"):
                fp.write(f"{sid}\t{text}\n")
        with open(os.path.join(out, "accessions.tsv"), "w", encoding="utf-8") as fp:
            for acc_id, accession in self._conn.execute(
                    "SELECT acc_id, accession FROM accessions ORDER BY acc_id"):
                fp.write(f"{acc_id}\t{accession}\t{self._root[acc_id]}\n")
        with open(os.path.join(out, "entries.tsv"), "w", encoding="utf-8") as fp:
            lines = []
            for rid, entry_key, primary in self._conn.execute(
                    "SELECT release_id, entry_key, primary_acc FROM entries"):
                rel = self._releases_by_id[rid]
                lines.append("%s\t%s\t%d\t%d\n"
                             % (rel.section.value, rel.label, entry_key, primary))
            fp.writelines(sorted(lines))
        with open(os.path.join(out, "raw_occurrences.tsv"), "w", encoding="utf-8") as fp:
            lines = []
            for sid, entry_key, rid, mult in self._conn.execute(
                    "SELECT sentence_id, entry_key, release_id, mult FROM occurrences"):
                rel = self._releases_by_id[rid]
                lines.append("%d\t%d\t%s\t%s\t%d\n"
                             % (sid, entry_key, rel.section.value, rel.label, mult))
            fp.writelines(sorted(lines))
        self.export_occurrences(os.path.join(out, "occurrences.tsv"))

    @classmethod
    def import_dump(cls, in_dir: Union[str, os.PathLike],
                    path: Union[str, os.PathLike]) -> "CorpusStore":
        """Rebuild a store from an export dump; ids round-trip exactly."""
        src = os.fspath(in_dir)
        store = cls(path)
        with store.transaction():
            with open(os.path.join(src, "releases.tsv"), encoding="utf-8") as fp:
                for line in fp:
                    section, label, date, complete = line.rstrip("\n").split("\t")
                    rel = Release(Section(section), label, Date.fromisoformat(date))
                    store.register_release(rel)
                    if complete == "1":
                        store.mark_complete(rel)
            with open(os.path.join(src, "sentences.tsv"), encoding="utf-8") as fp:
                for line in fp:
                    sid, text = line.rstrip("\n").split("\t", 1)
                    store._conn.execute(
                        "INSERT INTO sentences (sentence_id, text) VALUES (?,?)",
                        (int(sid), text))
                    store._sentence_ids[text] = int(sid)
            groups: dict[int, list[int]] = {}
            with open(os.path.join(src, "accessions.tsv"), encoding="utf-8") as fp:
                for line in fp:
                    acc_id_s, accession, root_s = line.rstrip("\n").split("\t")
                    acc_id, root = int(acc_id_s), int(root_s)
                    store._conn.execute(
                        "INSERT INTO accessions (acc_id, accession, root_id) VALUES (?,?,?)",
                        (acc_id, accession, root))
                    store._acc_ids[accession] = acc_id
                    store._acc_names[acc_id] = accession
                    store._root[acc_id] = root
                    groups.setdefault(root, []).append(acc_id)
            store._members = groups
            with open(os.path.join(src, "entries.tsv"), encoding="utf-8") as fp:
                rows = []
                for line in fp:
                    section, label, entry_key, primary = line.rstrip("\n").split("\t")
                    rid = store.release_id(store.find_release(Section(section), label))
                    rows.append((rid, int(entry_key), int(primary)))
                store._conn.executemany(
                    "INSERT INTO entries (release_id, entry_key, primary_acc) VALUES (?,?,?)",
                    rows)
            with open(os.path.join(src, "raw_occurrences.tsv"), encoding="utf-8") as fp:
                rows = []
                for line in fp:
                    sid, entry_key, section, label, mult = line.rstrip("\n").split("\t")
                    rid = store.release_id(store.find_release(Section(section), label))
                    rows.append((int(sid), int(entry_key), rid, int(mult)))
                store._conn.executemany(
                    "INSERT INTO occurrences (sentence_id, entry_key, release_id, mult) "
                    "VALUES (?,?,?,?)", rows)
        return store

    # -- classifications ---------------------------------------------------------

    def add_classification(self, sentence_id: int, classification: str,
                           decision_path: dict, analyst: str,
                           created_at: str, notes: str = "") -> dict:
        cur = self._conn.execute(
            "INSERT INTO classifications (sentence_id, classification, decision_path, "
            "analyst, created_at, notes) VALUES (?,?,?,?,?,?)",
            (sentence_id, classification, json.dumps(decision_path), analyst,
             created_at, notes))
        return self.get_classification(cur.lastrowid)

    def get_classification(self, record_id: int) -> dict:
        row = self._conn.execute(
            "SELECT record_id, sentence_id, classification, decision_path, analyst, "
            "created_at, notes FROM classifications WHERE record_id=?",
            (record_id,)).fetchone()
        if row is None:
            raise NotFoundError(f"unknown classification record {record_id}")
        return self._classification_dict(row)

    def get_classifications(self, sentence_id: int) -> list[dict]:
        rows = self._conn.execute(
            "SELECT record_id, sentence_id, classification, decision_path, analyst, "
            "created_at, notes FROM classifications WHERE sentence_id=? "
            "ORDER BY record_id", (sentence_id,)).fetchall()
        return [self._classification_dict(r) for r in rows]

    @staticmethod
    def _classification_dict(row) -> dict:
        return {
            "record_id": row[0],
            "sentence_id": row[1],
            "classification": row[2],
            "decision_path": json.loads(row[3]),
            "analyst": row[4],
            "created_at": row[5],
            "notes": row[6],
        }

    # -- pattern report persistence -------------------------------------------------

    def replace_pattern_reports(self, reports: Iterable[tuple[str, int, bool, dict]]) -> None:
        """Materialize detector output: (kind, sentence_id, in_latest, report)."""
        with self.transaction():
            self._conn.execute("DELETE FROM pattern_reports")
            self._conn.executemany(
                "INSERT INTO pattern_reports (kind, sentence_id, in_latest, report) "
                "VALUES (?,?,?,?)",
                ((kind, sid, int(latest), json.dumps(report))
                 for kind, sid, latest, report in reports))
            self.set_meta("patterns_materialized", "1")

    def patterns_materialized(self) -> bool:
        return self.get_meta("patterns_materialized") == "1"

    def get_pattern_reports(self, kind: str, page: int = 1, page_size: int = 50,
                            latest_only: bool = False) -> tuple[int, list[dict]]:
        where = "kind=?" + (" AND in_latest=1" if latest_only else "")
        total = self._conn.execute(
            f"SELECT COUNT(*) FROM pattern_reports WHERE {where}", (kind,)).fetchone()[0]
        rows = self._conn.execute(
            f"SELECT report FROM pattern_reports WHERE {where} "
            "ORDER BY sentence_id LIMIT ? OFFSET ?",
            (kind, page_size, (page - 1) * page_size)).fetchall()
        return total, [json.loads(r[0]) for r in rows]

    # -- ingest speed knobs ------------------------------------------------------

    def fast_writes(self, enable: bool = True) -> None:
        """Trade crash safety for ingest speed; reset after bulk loads."""
        if enable:
            self._conn.execute("PRAGMA synchronous=OFF")
            self._conn.execute("PRAGMA journal_mode=MEMORY")
        else:
            self._conn.execute("PRAGMA synchronous=NORMAL")
            self._conn.execute("PRAGMA journal_mode=DELETE")
