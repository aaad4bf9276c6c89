"""Synthetic multi-release corpora with planted propagation events.

The generator simulates entries being born, annotated, copied from,
merged and re-annotated across two release calendars, then emits real
flat-file fixtures -- the same format the parser consumes -- plus a
ground-truth ledger of every planted event. Ledger labels are derived by
replaying the event log alone, a code path independent of both the store
and the streaming detectors, so a three-way agreement test (detector vs
brute force vs ledger) actually checks three implementations.

``brute_force_detect`` is the deliberately naive reference: it
materializes the full per-sentence, per-cluster, per-release presence
matrix from a store and walks every registered release ordinal with
plain state machines. It refuses corpora above a size cap; being slow
and obvious is its job.

Sentences are synthesized from a word list and always carry a trailing
full stop, so the whole parse -> segment -> store pipeline reproduces
the generator's intent exactly.
"""

from __future__ import annotations

import json
import os
import random
import textwrap
from dataclasses import dataclass, field, asdict
from datetime import date as Date
from typing import Iterable, Optional, Sequence, Union

from .flatfile import Release, Section
from .store import CorpusStore

_WORDS = (
    "protein kinase membrane binding domain catalytic activity receptor "
    "transport mitochondrial nuclear cytoplasm ribosomal subunit complex "
    "essential function role pathway biosynthesis degradation signal "
    "naïve transcription repressor activator zinc iron cofactor redox "
    "oxidative stress response growth division cycle repair helix motif "
    "family homolog putative probable involved required regulates encodes "
    "catalyzes hydrolysis transfer phosphate lipid sugar peptide bond"
).split()

_TOPICS = ("FUNCTION", "SUBUNIT", "SIMILARITY", "COFACTOR", "MISCELLANEOUS")

_BANNER = (
    "CC   ---------------------------------------------------------------------------\n"
    "CC   Distributed under the make-believe licence for synthetic fixtures\n"
    "CC   ---------------------------------------------------------------------------\n"
)


class OracleSizeError(Exception):
    """The corpus is too large for the intentionally naive oracle."""


@dataclass(frozen=True)
class GeneratorParams:
    seed: int = 42
    swissprot_releases: int = 6
    trembl_releases: int = 8
    entry_count: int = 60
    sentence_pool_size: int = 40
    copy_rate: float = 0.30
    removal_rate: float = 0.12
    readd_rate: float = 0.35
    merge_rate: float = 0.05

    def __post_init__(self) -> None:
        for name in ("copy_rate", "removal_rate", "readd_rate", "merge_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        for name in ("swissprot_releases", "trembl_releases", "entry_count",
                     "sentence_pool_size"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass
class GroundTruthLedger:
    params: dict
    releases: list  # [{section, label, date}]
    events: list    # event dicts in simulation order
    expected: dict  # sentence text -> sorted list of pattern kind strings
    occurrence_count: int

    def recompute_expected(self) -> dict:
        """Re-derive the labels from the event list alone."""
        return derive_expected(self.releases, self.events)

    def to_json(self, path: Union[str, os.PathLike]) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            json.dump({
                "params": self.params,
                "releases": self.releases,
                "events": self.events,
                "expected": self.expected,
                "occurrence_count": self.occurrence_count,
            }, fp)

    @classmethod
    def from_json(cls, path: Union[str, os.PathLike]) -> "GroundTruthLedger":
        with open(path, encoding="utf-8") as fp:
            raw = json.load(fp)
        return cls(raw["params"], raw["releases"], raw["events"],
                   raw["expected"], raw["occurrence_count"])


def _add_months(d: Date, months: int) -> Date:
    y = d.year + (d.month - 1 + months) // 12
    m = (d.month - 1 + months) % 12 + 1
    return Date(y, m, min(d.day, 28))


def _sentence_pool(rng: random.Random, size: int) -> list[str]:
    pool: list[str] = []
    seen = set()
    while len(pool) < size:
        n = rng.randint(4, 9)
        text = " ".join(rng.choice(_WORDS) for _ in range(n)) + "."
        if text not in seen:
            seen.add(text)
            pool.append(text)
    return pool


def format_entry_block(accessions: Sequence[str], sentences: Sequence[str],
                       banner: bool = False, duplicate_first: bool = False) -> str:
    """Render one flat-file entry block, sentences as topic comments."""
    lines = [f"ID   {accessions[0]}_SYN            Reviewed;         100 AA.\n"]
    for i in range(0, len(accessions), 8):
        lines.append("AC   " + " ".join(a + ";" for a in accessions[i:i + 8]) + "\n")
    emitted = list(sentences)
    if duplicate_first and emitted:
        emitted.append(emitted[0])
    for i, sentence in enumerate(emitted):
        shown = sentence[0].upper() + sentence[1:]
        topic = _TOPICS[i % len(_TOPICS)]
        wrapped = textwrap.wrap(f"-!- {topic}: {shown}", width=66) or [f"-!- {topic}:"]
        lines.append("CC   " + wrapped[0] + "\n")
        for cont in wrapped[1:]:
            lines.append("CC       " + cont + "\n")
    if banner:
        lines.append(_BANNER)
    lines.append("//\n")
    return "".join(lines)


class _Entry:
    __slots__ = ("uid", "section", "born_index", "accessions", "current",
                 "removed_ever", "alive")

    def __init__(self, uid: str, section: Section, born_index: int):
        self.uid = uid
        self.section = section
        self.born_index = born_index
        self.accessions = [uid]
        self.current: set[str] = set()
        self.removed_ever: set[str] = set()
        self.alive = False


def generate(params: GeneratorParams, out_dir: Union[str, os.PathLike],
             ) -> tuple[str, GroundTruthLedger]:
    """Write a synthetic corpus; returns (manifest path, ground truth).

    Identical params and seed produce identical bytes. Sentence sharing
    can only arise from planted copy events (initial annotation draws
    from the pool without replacement), so provenance in the ledger is
    exact by construction.
    """
    rng = random.Random(params.seed)
    out = os.fspath(out_dir)
    os.makedirs(out, exist_ok=True)

    calendar: list[Release] = []
    for i in range(params.swissprot_releases):
        calendar.append(Release(Section.SWISSPROT, str(i + 1),
                                _add_months(Date(1990, 1, 15), 6 * i)))
    for j in range(params.trembl_releases):
        calendar.append(Release(Section.TREMBL, str(j + 1),
                                _add_months(Date(1991, 3, 10), 4 * j)))
    calendar.sort(key=lambda r: r.sort_key())
    per_section = {sec: [r for r in calendar if r.section is sec] for sec in Section}

    pool = _sentence_pool(rng, params.sentence_pool_size)
    unassigned = list(pool)

    entries: list[_Entry] = []
    for i in range(params.entry_count):
        section = Section.SWISSPROT if rng.random() < 0.55 else Section.TREMBL
        n_rel = len(per_section[section])
        if n_rel == 0:
            continue
        uid = ("P%05d" if section is Section.SWISSPROT else "Q%05d") % i
        entries.append(_Entry(uid, section, rng.randrange(n_rel)))

    events: list[dict] = []
    occurrence_count = 0
    manifest_rows = []
    section_step = {sec: 0 for sec in Section}

    for release in calendar:
        sec, label = release.section, release.label
        step = section_step[sec]
        section_step[sec] += 1
        here = {"section": sec.value, "label": label}

        for entry in entries:
            if entry.section is sec and entry.born_index == step and not entry.alive:
                entry.alive = True
                initial = []
                for _ in range(rng.randint(0, 3)):
                    if unassigned:
                        initial.append(unassigned.pop(rng.randrange(len(unassigned))))
                entry.current.update(initial)
                events.append({"kind": "birth", "entry": entry.uid,
                               "sentences": sorted(initial), **here})

        active = [e for e in entries if e.alive]
        section_active = [e for e in active if e.section is sec]
        # donor pool snapshotted once per release; per-entry filtering would
        # make the step quadratic in corpus size
        donors = [e for e in active if e.current]

        for entry in section_active:
            for s in sorted(entry.current):
                if rng.random() < params.removal_rate:
                    entry.current.discard(s)
                    entry.removed_ever.add(s)
                    events.append({"kind": "remove", "entry": entry.uid,
                                   "sentence": s, **here})
            for s in sorted(entry.removed_ever - entry.current):
                if rng.random() < params.readd_rate:
                    entry.current.add(s)
                    events.append({"kind": "readd", "entry": entry.uid,
                                   "sentence": s, **here})
            if donors and rng.random() < params.copy_rate:
                donor = donors[rng.randrange(len(donors))]
                if donor is not entry and donor.current:
                    s = rng.choice(sorted(donor.current))
                    if s not in entry.current:
                        entry.current.add(s)
                        events.append({"kind": "copy", "entry": entry.uid,
                                       "from_entry": donor.uid, "sentence": s, **here})

        if rng.random() < params.merge_rate and len(section_active) >= 1:
            targets = sorted(section_active, key=lambda e: e.uid)
            target = targets[rng.randrange(len(targets))]
            others = sorted((e for e in active if e is not target), key=lambda e: e.uid)
            if others:
                absorbed = others[rng.randrange(len(others))]
                absorbed.alive = False
                target.accessions.extend(absorbed.accessions)
                inherited = [s for s in sorted(absorbed.current - target.current)
                             if rng.random() < 0.6]
                target.current.update(inherited)
                events.append({"kind": "merge", "target": target.uid,
                               "absorbed": absorbed.uid,
                               "inherited": inherited, **here})

        filename = f"{sec.value}_{label}.dat"
        with open(os.path.join(out, filename), "w", encoding="latin-1") as fp:
            for entry in sorted((e for e in entries if e.alive and e.section is sec),
                                key=lambda e: e.uid):
                fp.write(format_entry_block(
                    entry.accessions, sorted(entry.current),
                    banner=rng.random() < 0.15,
                    duplicate_first=rng.random() < 0.10))
                occurrence_count += len(entry.current)
        manifest_rows.append((sec.value, label, release.date.isoformat(), filename))

    manifest_path = os.path.join(out, "manifest.tsv")
    with open(manifest_path, "w", encoding="utf-8") as fp:
        fp.write("# section\tlabel\tdate\tpath\n")
        for row in manifest_rows:
            fp.write("\t".join(row) + "\n")

    releases_json = [{"section": r.section.value, "label": r.label,
                      "date": r.date.isoformat()} for r in calendar]
    ledger = GroundTruthLedger(
        params=asdict(params),
        releases=releases_json,
        events=events,
        expected=derive_expected(releases_json, events),
        occurrence_count=occurrence_count,
    )
    ledger.to_json(os.path.join(out, "ledger.json"))
    return manifest_path, ledger


# -- event-log replay (the ledger's own label derivation) ----------------------


class _UidClusters:
    """Tiny union by smallest uid; independent of the store's partition."""

    def __init__(self) -> None:
        self.root: dict[str, str] = {}

    def add(self, uid: str) -> None:
        self.root.setdefault(uid, uid)

    def union(self, a: str, b: str) -> None:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            keep, drop = (ra, rb) if ra < rb else (rb, ra)
            self.root[drop] = keep

    def find(self, uid: str) -> str:
        while self.root[uid] != uid:
            self.root[uid] = self.root[self.root[uid]]
            uid = self.root[uid]
        return uid


def derive_expected(releases: list, events: list) -> dict:
    """Replay the event log and label every sentence, no store involved."""
    def _natural(label: str) -> tuple:
        try:
            return (0, int(label), "")
        except ValueError:
            return (1, 0, label)

    ordered = sorted(
        releases,
        key=lambda r: (r["date"], 0 if r["section"] == Section.SWISSPROT.value else 1,
                       _natural(r["label"])))
    ordinal_of = {(r["section"], r["label"]): i + 1 for i, r in enumerate(ordered)}
    section_of_ordinal = {i + 1: r["section"] for i, r in enumerate(ordered)}
    rails = {sec.value: [i + 1 for i, r in enumerate(ordered) if r["section"] == sec.value]
             for sec in Section}

    by_release: dict[tuple[str, str], list[dict]] = {}
    for ev in events:
        by_release.setdefault((ev["section"], ev["label"]), []).append(ev)

    state: dict[str, dict] = {}
    clusters = _UidClusters()
    presence_rows: list[tuple[str, str, int]] = []

    for rel in ordered:
        key = (rel["section"], rel["label"])
        for ev in by_release.get(key, []):
            kind = ev["kind"]
            if kind == "birth":
                state[ev["entry"]] = {"alive": True, "section": rel["section"],
                                      "current": set(ev["sentences"])}
                clusters.add(ev["entry"])
            elif kind == "remove":
                state[ev["entry"]]["current"].discard(ev["sentence"])
            elif kind == "readd":
                state[ev["entry"]]["current"].add(ev["sentence"])
            elif kind == "copy":
                state[ev["entry"]]["current"].add(ev["sentence"])
            elif kind == "merge":
                clusters.union(ev["target"], ev["absorbed"])
                state[ev["absorbed"]]["alive"] = False
                state[ev["target"]]["current"].update(ev["inherited"])
        ordinal = ordinal_of[key]
        for uid, st in state.items():
            if st["alive"] and st["section"] == rel["section"]:
                for s in st["current"]:
                    presence_rows.append((s, uid, ordinal))

    presence: dict[str, dict[str, set[int]]] = {}
    for text, uid, ordinal in presence_rows:
        presence.setdefault(text, {}).setdefault(clusters.find(uid), set()).add(ordinal)

    expected: dict[str, list[str]] = {}
    for text, by_cluster in presence.items():
        kinds = _label_presence(by_cluster, rails, section_of_ordinal)
        if kinds:
            expected[text] = sorted(kinds)
    return expected


def _label_presence(by_cluster: dict, rails: dict, section_of_ordinal: dict) -> set:
    all_ordinals = set()
    for ords in by_cluster.values():
        all_ordinals |= ords
    first, last = min(all_ordinals), max(all_ordinals)
    kinds: set[str] = set()

    if last > first:
        first_set = {c for c, o in by_cluster.items() if first in o}
        survivors = set()
        for rail in rails.values():
            ends = [r for r in rail if r <= last]
            if ends:
                section_end = max(ends)
                survivors |= {c for c, o in by_cluster.items() if section_end in o}
        if not first_set & survivors:
            kinds.add("missing_origin")

    for cluster, ords in by_cluster.items():
        for sec_value, rail in rails.items():
            sec_ords = sorted(o for o in ords if section_of_ordinal[o] == sec_value)
            if not sec_ords:
                continue
            for a, b in zip(sec_ords, sec_ords[1:]):
                if any(a < r < b for r in rail):
                    kinds.add("reappearing")
            if len(sec_ords) == 1 and any(r > sec_ords[0] for r in rail):
                kinds.add("transient")

    if section_of_ordinal[first] == Section.TREMBL.value:
        if any(section_of_ordinal[o] == Section.SWISSPROT.value for o in all_ordinals):
            kinds.add("trembl_origin")
    return kinds


# -- naive reference detectors over a store ------------------------------------


def brute_force_detect(store: CorpusStore, cap: int = 20_000) -> dict:
    """Exhaustive presence-matrix reference for the streaming detectors.

    Returns, per sentence id, the pattern kind set plus the flagged
    (cluster, ordinal) evidence for the reappearing and transient kinds,
    deep-comparable against the detectors' reports. Refuses corpora
    whose occurrence relation exceeds ``cap`` rows.
    """
    n = store.occurrence_count()
    if n > cap:
        raise OracleSizeError(f"{n} occurrences exceed the oracle cap of {cap}")

    ordinal_of = store.ordinal_map()
    rails = {sec: [r.ordinal for r in store.releases(sec)] for sec in Section}
    section_of = {r.ordinal: r.section for r in store.releases()}

    matrix: dict[int, dict[int, set[int]]] = {}
    for sid, rows in store.iter_sentence_occurrences():
        for cluster_id, release_id in rows:
            matrix.setdefault(sid, {}).setdefault(cluster_id, set()).add(
                ordinal_of[release_id])

    results: dict[int, dict] = {}
    for sid, by_cluster in matrix.items():
        all_ords = set()
        for ords in by_cluster.values():
            all_ords |= ords
        first, last = min(all_ords), max(all_ords)
        kinds: set[str] = set()
        reappearing: set[tuple[int, int, int]] = set()
        transient: set[tuple[int, int]] = set()

        if last > first:
            first_set = {c for c, o in by_cluster.items() if first in o}
            survivors = set()
            for sec in Section:
                ends = [r for r in rails[sec] if r <= last]
                if ends:
                    section_end = max(ends)
                    survivors |= {c for c, o in by_cluster.items()
                                  if section_end in o}
            if not first_set & survivors:
                kinds.add("missing_origin")

        for cluster, ords in by_cluster.items():
            for sec in Section:
                rail = rails[sec]
                seen = False
                in_gap = False
                gap_start = None
                count_here = 0
                sole = None
                for r in rail:
                    present = r in ords
                    if present:
                        count_here += 1
                        sole = r
                        if seen and in_gap:
                            reappearing.add((cluster, gap_start, r))
                            in_gap = False
                        seen = True
                    elif seen and not in_gap:
                        in_gap = True
                        gap_start = r
                if count_here == 1 and any(r > sole for r in rail):
                    transient.add((cluster, sole))

        if reappearing:
            kinds.add("reappearing")
        if transient:
            kinds.add("transient")
        if section_of[first] is Section.TREMBL:
            if any(section_of[o] is Section.SWISSPROT for o in all_ords):
                kinds.add("trembl_origin")

        results[sid] = {"kinds": kinds, "reappearing": reappearing,
                        "transient": transient}
    return results
