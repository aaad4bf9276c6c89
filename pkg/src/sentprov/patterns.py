"""Detection of the four sentence-propagation patterns.

Every detector is a pure function of one sentence's merge-resolved
timeline plus the registered release rails. Presence and absence are only
meaningful at registered releases of a section: the two sections released
on unsynchronized calendars for years, so judging a Swiss-Prot cluster
against TrEMBL release dates would manufacture phantom gaps (striping).
Consequently gap and single-version tests walk each section's own rail.

The patterns:

* missing origin -- the clusters holding the sentence at its first
  release and the clusters still holding it at the end of its life are
  disjoint: the sentence outlived every entry it originated in.
  End-of-life is judged per section (the last registered release of each
  section inside the sentence's lifetime), since the sections' calendars
  never share a final ordinal. Evidence keeps both sets.
* reappearing -- a cluster where the sentence is present, then absent at
  one or more registered releases of the section, then present again.
  Evidence pairs are (first absent ordinal, ordinal present again).
* transient -- a cluster holding the sentence at exactly one registered
  release of a section that has a later registered release. Presence at
  the section's latest release is never flagged; removal there is not
  observable yet.
* trembl origin -- the sentence's first release is a TrEMBL release and
  it later occurs at a Swiss-Prot release; clusters that reach Swiss-Prot
  through a merge count.

A sentence may carry several patterns at once; corpus summaries count
per pattern, they do not partition.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .flatfile import Section
from .store import CorpusStore


class PatternKind(str, Enum):
    MISSING_ORIGIN = "missing_origin"
    REAPPEARING = "reappearing"
    TRANSIENT = "transient"
    TREMBL_ORIGIN = "trembl_origin"


@dataclass(frozen=True)
class PatternReport:
    kind: PatternKind
    sentence_id: int
    origin_clusters: tuple[int, ...]
    evidence: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "sentence_id": self.sentence_id,
            "origin_clusters": list(self.origin_clusters),
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class ReleaseRails:
    """Registered release ordinals per section, with lookup helpers."""

    by_section: dict
    section_of: dict

    @classmethod
    def from_store(cls, store: CorpusStore) -> "ReleaseRails":
        by_section = {sec: tuple(r.ordinal for r in store.releases(sec)) for sec in Section}
        section_of = {r.ordinal: r.section for r in store.releases()}
        return cls(by_section, section_of)

    def max_ordinal(self, section: Section) -> Optional[int]:
        rail = self.by_section[section]
        return rail[-1] if rail else None

    def gap_between(self, section: Section, a: int, b: int) -> Optional[int]:
        """First registered ordinal of the section strictly between a and b."""
        rail = self.by_section[section]
        i = bisect_right(rail, a)
        if i < len(rail) and rail[i] < b:
            return rail[i]
        return None


@dataclass
class SentencePresence:
    """One sentence's merge-resolved presence: cluster -> set of ordinals."""

    sentence_id: int
    by_cluster: dict = field(default_factory=dict)

    def add(self, cluster_id: int, ordinal: int) -> None:
        self.by_cluster.setdefault(cluster_id, set()).add(ordinal)

    def all_ordinals(self) -> set:
        out: set[int] = set()
        for ords in self.by_cluster.values():
            out |= ords
        return out


def _origin_clusters(presence: SentencePresence) -> tuple[tuple[int, ...], int]:
    earliest = min(presence.all_ordinals())
    origins = tuple(sorted(c for c, o in presence.by_cluster.items() if earliest in o))
    return origins, earliest


def detect_missing_origin(presence: SentencePresence,
                          rails: ReleaseRails) -> Optional[PatternReport]:
    """First-set vs last-set intersection test, section-locally.

    A cluster counts as still holding the sentence at the end of its life
    if it holds it at its section's final registered release on or before
    the sentence's last ordinal. Judging every cluster at the single
    global last ordinal would flag any sentence alive in both sections at
    corpus end, because the two release calendars never share a final
    ordinal.
    """
    ordinals = presence.all_ordinals()
    first, last = min(ordinals), max(ordinals)
    if last <= first:
        return None
    first_set = sorted(c for c, o in presence.by_cluster.items() if first in o)
    survivors = set()
    for section, rail in rails.by_section.items():
        i = bisect_right(rail, last)
        if i == 0:
            continue
        section_end = rail[i - 1]
        survivors.update(c for c, o in presence.by_cluster.items()
                         if section_end in o)
    if set(first_set) & survivors:
        return None
    return PatternReport(
        PatternKind.MISSING_ORIGIN, presence.sentence_id, tuple(first_set),
        evidence={
            "first_ordinal": first,
            "last_ordinal": last,
            "first_set": first_set,
            "last_set": sorted(survivors),
        })


def detect_reappearing(presence: SentencePresence,
                       rails: ReleaseRails) -> Optional[PatternReport]:
    gaps = []
    for cluster_id in sorted(presence.by_cluster):
        per_section: dict[Section, list[int]] = {}
        for o in presence.by_cluster[cluster_id]:
            per_section.setdefault(rails.section_of[o], []).append(o)
        for section, ords in sorted(per_section.items(), key=lambda kv: kv[0].rank):
            ords.sort()
            for a, b in zip(ords, ords[1:]):
                first_absent = rails.gap_between(section, a, b)
                if first_absent is not None:
                    gaps.append({
                        "cluster_id": cluster_id,
                        "gap_start_ordinal": first_absent,
                        "gap_end_ordinal": b,
                    })
    if not gaps:
        return None
    origins, _ = _origin_clusters(presence)
    return PatternReport(PatternKind.REAPPEARING, presence.sentence_id, origins,
                         evidence={"gaps": gaps})


def detect_transient(presence: SentencePresence,
                     rails: ReleaseRails) -> Optional[PatternReport]:
    instances = []
    for cluster_id in sorted(presence.by_cluster):
        per_section: dict[Section, list[int]] = {}
        for o in presence.by_cluster[cluster_id]:
            per_section.setdefault(rails.section_of[o], []).append(o)
        for section, ords in sorted(per_section.items(), key=lambda kv: kv[0].rank):
            if len(ords) != 1:
                continue
            sole = ords[0]
            latest = rails.max_ordinal(section)
            if latest is not None and sole < latest:
                instances.append({"cluster_id": cluster_id, "sole_ordinal": sole})
    if not instances:
        return None
    origins, _ = _origin_clusters(presence)
    return PatternReport(PatternKind.TRANSIENT, presence.sentence_id, origins,
                         evidence={"instances": instances})


def detect_trembl_origin(presence: SentencePresence,
                         rails: ReleaseRails) -> Optional[PatternReport]:
    origins, earliest = _origin_clusters(presence)
    if rails.section_of[earliest] is not Section.TREMBL:
        return None
    sp_ordinals = [o for ords in presence.by_cluster.values() for o in ords
                   if rails.section_of[o] is Section.SWISSPROT]
    if not sp_ordinals:
        return None
    return PatternReport(
        PatternKind.TREMBL_ORIGIN, presence.sentence_id, origins,
        evidence={
            "first_trembl_ordinal": earliest,
            "first_swissprot_ordinal": min(sp_ordinals),
        })


_DETECTORS: tuple[Callable, ...] = (
    detect_missing_origin,
    detect_reappearing,
    detect_transient,
    detect_trembl_origin,
)


def detect_all(presence: SentencePresence, rails: ReleaseRails) -> list[PatternReport]:
    reports = []
    for detector in _DETECTORS:
        report = detector(presence, rails)
        if report is not None:
            reports.append(report)
    return reports


@dataclass
class PatternSummary:
    """Corpus-wide pattern counts, overall and restricted to the latest release."""

    totals: dict
    latest: dict
    unique_sentences: int = 0
    unique_in_latest: int = 0

    @classmethod
    def empty(cls) -> "PatternSummary":
        return cls({k: 0 for k in PatternKind}, {k: 0 for k in PatternKind})

    def to_tsv(self) -> str:
        lines = ["pattern\tsentences\tsentences_in_latest"]
        for kind in PatternKind:
            lines.append(f"{kind.value}\t{self.totals[kind]}\t{self.latest[kind]}")
        lines.append(f"unique_sentences\t{self.unique_sentences}\t{self.unique_in_latest}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "patterns": {k.value: {"total": self.totals[k], "in_latest": self.latest[k]}
                         for k in PatternKind},
            "unique_sentences": self.unique_sentences,
            "unique_in_latest": self.unique_in_latest,
        }


def scan_corpus(store: CorpusStore, latest_label: Optional[str] = None,
                report_sink: Optional[Callable[[PatternReport, bool], None]] = None,
                ) -> PatternSummary:
    """Run every detector over every sentence, streaming.

    Memory stays bounded by one sentence's occurrence set. ``latest_label``
    pins which release counts as "the latest version" for the second
    summary column; by default the most recent registered date is used.
    ``report_sink(report, in_latest)`` receives every report as produced.
    """
    rails = ReleaseRails.from_store(store)
    latest_ids = set(store.latest_release_ids(latest_label))
    ordinal_of = store.ordinal_map()
    summary = PatternSummary.empty()

    for sentence_id, rows in store.iter_sentence_occurrences():
        presence = SentencePresence(sentence_id)
        in_latest = False
        for cluster_id, release_id in rows:
            presence.add(cluster_id, ordinal_of[release_id])
            if release_id in latest_ids:
                in_latest = True
        summary.unique_sentences += 1
        if in_latest:
            summary.unique_in_latest += 1
        for report in detect_all(presence, rails):
            summary.totals[report.kind] += 1
            if in_latest:
                summary.latest[report.kind] += 1
            if report_sink is not None:
                report_sink(report, in_latest)
    return summary
