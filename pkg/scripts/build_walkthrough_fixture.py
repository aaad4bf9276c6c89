#!/usr/bin/env python3
"""Build the committed selenocysteine-history fixture.

Writes gzip-compressed release files plus a manifest under
tests/fixtures/walkthrough/. The history is hand-authored so the headline
walkthrough facts hold exactly:

* the sentence starts in two entries (P07658, P07203) at the earliest
  archived release, version 9 (version 10 was never archived, so the
  9 -> 11 step must not read as a gap);
* it peaks at 54 entries in version 44, appears in 84 entries overall,
  and after the big version-45 cleanup survives in exactly 9 entries
  none of which are the origins (missing origin, last set of 9);
* P18283 and P12079 lose it and get it back roughly 7 and 11 years
  later (reappearing);
* six entries carry it for a single version: five in version 44 and
  P21765 in version 24, where it was replaced by the UGC correction
  (transient);
* a second sentence ("inactivated by cyanide.") starts in three TrEMBL
  entries, one of which is later merged into a Swiss-Prot entry
  (originating in TrEMBL);
* the lipopolysaccharides sentence used by the classification worked
  example propagates P23875 -> Q46223 and outlives its origin.

Deterministic output: fixed dates, sorted entries, gzip mtime pinned.
"""

from __future__ import annotations

import gzip
import io
import os
import sys
import textwrap
from datetime import date as Date

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures", "walkthrough")

S_SEL = "The active-site selenocysteine is encoded by the opal codon, UGA."
S_FAM = "Belongs to the glutathione peroxidase family."
S_GPX_UNTERM = "Belongs to the GPX family"  # deliberately unterminated topic
S_REPL = "The active-site is not encoded by the opal codon UGA but by UGC."
S_CY = "Inactivated by cyanide."
S_LIP = "May have an essential function in lipopolysaccharides biosynthesis."
S_CAUTION = ("Was initially believed to have an essential function in "
             "lipopolysaccharides biosynthesis.")
S_MERGED = "Protects cells against the toxic effects of peroxides."
S_TR1 = "Putative membrane transport protein."

BANNER = (
    "CC   ---------------------------------------------------------------------------\n"
    "CC   This fixture entry is distributed under a make-believe licence\n"
    "CC   ---------------------------------------------------------------------------\n"
)

SP_LABELS = [9] + list(range(11, 46))  # version 10 was never archived
TR_LABELS = list(range(1, 21))


def add_months(d: Date, months: int) -> Date:
    y = d.year + (d.month - 1 + months) // 12
    m = (d.month - 1 + months) % 12 + 1
    return Date(y, m, min(d.day, 28))


def sp_date(v: int) -> Date:
    return add_months(Date(1988, 8, 1), int((v - 9) * 5.5 + 0.5))


def tr_date(j: int) -> Date:
    return add_months(Date(1996, 11, 10), (j - 1) * 4)


def sp_span(a: int, b: int) -> set[int]:
    return {v for v in SP_LABELS if a <= v <= b}


def tr_span(a: int, b: int) -> set[int]:
    return {j for j in TR_LABELS if a <= j <= b}


class Entry:
    def __init__(self, primary: str, alive: set[int], banner: bool = False):
        self.primary = primary
        self.alive = alive
        self.banner = banner
        # sentence -> (topic, releases present, terminated)
        self.sentences: list[tuple[str, str, set[int], bool]] = []
        self.accessions_by_release: dict[int, list[str]] = {}

    def sentence(self, topic: str, text: str, releases: set[int],
                 terminated: bool = True) -> "Entry":
        self.sentences.append((topic, text, releases, terminated))
        return self

    def accessions_at(self, v: int) -> list[str]:
        return self.accessions_by_release.get(v, [self.primary])


def block(entry: Entry, v: int) -> str:
    accessions = entry.accessions_at(v)
    lines = [f"ID   {accessions[0]}_FIX            Reviewed;         100 AA.\n"]
    for i in range(0, len(accessions), 8):
        lines.append("AC   " + " ".join(a + ";" for a in accessions[i:i + 8]) + "\n")
    lines.append("DT   01-JAN-1988 (integrated into the fixture archive)\n")
    for topic, text, releases, terminated in entry.sentences:
        if v not in releases:
            continue
        body = text if terminated else text
        wrapped = textwrap.wrap(f"-!- {topic}: {body}", width=66)
        lines.append("CC   " + wrapped[0] + "\n")
        for cont in wrapped[1:]:
            lines.append("CC       " + cont + "\n")
    if entry.banner:
        lines.append(BANNER)
    lines.append("//\n")
    return "".join(lines)


def build_entries() -> tuple[list[Entry], list[Entry]]:
    sp: list[Entry] = []
    tr: list[Entry] = []

    for acc in ("P07658", "P07203"):
        e = Entry(acc, sp_span(9, 45), banner=True)
        e.sentence("FUNCTION", S_SEL, sp_span(9, 44))
        e.sentence("SIMILARITY", S_FAM, sp_span(9, 45))
        sp.append(e)

    e = Entry("P18283", sp_span(9, 45))
    e.sentence("FUNCTION", S_SEL, sp_span(12, 13) | sp_span(28, 44))
    e.sentence("SIMILARITY", S_GPX_UNTERM, sp_span(9, 45), terminated=False)
    sp.append(e)

    e = Entry("P12079", sp_span(9, 45))
    e.sentence("FUNCTION", S_SEL, sp_span(12, 15) | sp_span(40, 44))
    e.sentence("SIMILARITY", S_FAM, sp_span(9, 45))
    sp.append(e)

    e = Entry("P21765", sp_span(23, 26))
    e.sentence("FUNCTION", S_SEL, {24})
    e.sentence("FUNCTION", S_REPL, sp_span(25, 26))
    e.sentence("SIMILARITY", S_FAM, sp_span(23, 26))
    sp.append(e)

    # the nine survivors; P30001 later absorbs P30011
    for i in range(1, 10):
        acc = f"P3000{i}"
        e = Entry(acc, sp_span(31, 45))
        e.sentence("FUNCTION", S_SEL, sp_span(31, 45))
        if acc == "P30001":
            for v in sp_span(40, 45):
                e.accessions_by_release[v] = ["P30001", "P30011"]
        sp.append(e)
    e = Entry("P30011", sp_span(11, 39))
    e.sentence("SIMILARITY", S_FAM, sp_span(11, 39))
    sp.append(e)

    # five single-version carriers in 44
    for i in range(1, 6):
        e = Entry(f"P4000{i}", sp_span(44, 45))
        e.sentence("FUNCTION", S_SEL, {44})
        e.sentence("SIMILARITY", S_FAM, sp_span(44, 45))
        sp.append(e)

    # 36 entries that lift the count to its version-44 peak
    for i in range(1, 37):
        e = Entry(f"P41{i:03d}", sp_span(43, 45))
        e.sentence("FUNCTION", S_SEL, sp_span(43, 44))
        sp.append(e)

    # 29 earlier carriers with assorted short spans, all gone by 43
    for i in range(29):
        start = 11 + (i % 25)
        end = min(start + 1 + (i % 5), 42)
        e = Entry(f"P42{i:03d}", sp_span(start, end))
        e.sentence("FUNCTION", S_SEL, sp_span(start, end))
        sp.append(e)

    # classification worked example
    e = Entry("P23875", sp_span(28, 45))
    e.sentence("FUNCTION", S_LIP, sp_span(30, 35))
    e.sentence("CAUTION", S_CAUTION, sp_span(36, 45))
    sp.append(e)
    e = Entry("Q46223", sp_span(31, 45))
    e.sentence("FUNCTION", S_LIP, sp_span(33, 42))
    sp.append(e)

    # progressive five-way merge
    merge_alive = {"P22352": sp_span(30, 45), "O43787": sp_span(30, 37),
                   "Q86W78": sp_span(30, 40), "Q9NZ74": sp_span(30, 43),
                   "Q9UEL1": sp_span(30, 43)}
    for acc, alive in merge_alive.items():
        e = Entry(acc, alive)
        e.sentence("FUNCTION", S_MERGED, alive)
        if acc == "P22352":
            for v in sp_span(38, 40):
                e.accessions_by_release[v] = ["P22352", "O43787"]
            for v in sp_span(41, 43):
                e.accessions_by_release[v] = ["P22352", "O43787", "Q86W78"]
            for v in sp_span(44, 45):
                e.accessions_by_release[v] = ["P22352", "O43787", "Q86W78",
                                              "Q9NZ74", "Q9UEL1"]
        sp.append(e)

    # a Swiss-Prot entry with no annotation at all
    sp.append(Entry("P70001", sp_span(9, 45)))

    # the entry the TrEMBL-born sentence is merged into
    e = Entry("P60001", sp_span(40, 45))
    for v in sp_span(40, 45):
        e.accessions_by_release[v] = ["P60001", "Q55501"]
    e.sentence("MISCELLANEOUS", S_CY, sp_span(40, 45))
    sp.append(e)

    # TrEMBL side
    e = Entry("Q55501", tr_span(1, 16))
    e.sentence("MISCELLANEOUS", S_CY, tr_span(3, 16))
    tr.append(e)
    for acc in ("Q55502", "Q55503"):
        e = Entry(acc, tr_span(1, 20))
        e.sentence("MISCELLANEOUS", S_CY, tr_span(3, 16))
        tr.append(e)
    tr.append(Entry("Q70002", tr_span(1, 20), banner=True))
    e = Entry("Q70003", tr_span(5, 20))
    e.sentence("FUNCTION", S_TR1, tr_span(5, 20))
    tr.append(e)

    return sp, tr


def main(out_dir: str = FIXTURE_DIR) -> None:
    sp_entries, tr_entries = build_entries()
    os.makedirs(out_dir, exist_ok=True)
    manifest = []

    def write_release(filename: str, entries: list[Entry], v: int) -> None:
        buf = io.StringIO()
        for entry in sorted(entries, key=lambda e: e.primary):
            if v in entry.alive:
                buf.write(block(entry, v))
        path = os.path.join(out_dir, filename)
        with open(path, "wb") as raw:
            with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
                gz.write(buf.getvalue().encode("latin-1"))

    for v in SP_LABELS:
        name = f"sp_{v:02d}.dat.gz"
        write_release(name, sp_entries, v)
        manifest.append(("swissprot", str(v), sp_date(v).isoformat(), name))
    for j in TR_LABELS:
        name = f"tr_{j:02d}.dat.gz"
        write_release(name, tr_entries, j)
        manifest.append(("trembl", str(j), tr_date(j).isoformat(), name))

    with open(os.path.join(out_dir, "manifest.tsv"), "w", encoding="utf-8") as fp:
        fp.write("# section\tlabel\tdate\tpath\n")
        for row in manifest:
            fp.write("\t".join(row) + "\n")

    # sanity: the version-44 peak must be exactly 54 carriers
    count_44 = sum(1 for e in sp_entries
                   for topic, text, rels, _ in e.sentences
                   if text == S_SEL and 44 in rels)
    carriers = {e.primary for e in sp_entries
                for topic, text, rels, _ in e.sentences if text == S_SEL}
    count_45 = sum(1 for e in sp_entries
                   for topic, text, rels, _ in e.sentences
                   if text == S_SEL and 45 in rels)
    assert count_44 == 54, count_44
    assert len(carriers) == 84, len(carriers)
    assert count_45 == 9, count_45
    print(f"walkthrough fixture -> {out_dir} (peak {count_44}, lifetime {len(carriers)}, "
          f"survivors {count_45})")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else FIXTURE_DIR)
