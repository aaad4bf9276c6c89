import os
import random
from datetime import date, timedelta

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sentprov.flatfile import Release, Section
from sentprov.store import ConflictError, CorpusStore, NotFoundError, StoreError

from oracles import connected_components, timeline_counts

SP = Section.SWISSPROT
TR = Section.TREMBL


def rel(section, label, iso):
    return Release(section, label, date.fromisoformat(iso))


def make_release(store, section=SP, label="1", iso="1990-01-01"):
    r = rel(section, label, iso)
    store.register_release(r)
    return r


class TestRegisterRelease:
    def test_date_order_fixes_ordinals(self, mem_store):
        # Swiss-Prot 9 (1988) predates TrEMBL 1 (1996)
        assert mem_store.register_release(rel(SP, "9", "1988-08-01")) == 1
        assert mem_store.register_release(rel(TR, "1", "1996-11-01")) == 2

    def test_idempotent_reregistration(self, mem_store):
        r = rel(SP, "9", "1988-08-01")
        assert mem_store.register_release(r) == mem_store.register_release(r) == 1

    def test_conflicting_date_rejected(self, mem_store):
        mem_store.register_release(rel(SP, "9", "1988-08-01"))
        with pytest.raises(ConflictError):
            mem_store.register_release(rel(SP, "9", "1989-01-01"))

    def test_shuffled_registration_sorts_by_date(self, mem_store):
        releases = [rel(SP, str(i), f"19{90 + i}-03-01") for i in range(10)]
        shuffled = releases[:]
        random.Random(3).shuffle(shuffled)
        for r in shuffled:
            mem_store.register_release(r)
        # oracle: plain date sort
        expected = [r.label for r in sorted(releases, key=lambda r: r.date)]
        stored = [r.label for r in mem_store.releases(SP)]
        assert stored == expected
        assert [r.ordinal for r in mem_store.releases(SP)] == list(range(1, 11))

    def test_same_date_tie_broken_swissprot_first(self, mem_store):
        mem_store.register_release(rel(TR, "27", "2004-07-05"))
        mem_store.register_release(rel(SP, "44", "2004-07-05"))
        ordered = mem_store.releases()
        assert [r.section for r in ordered] == [SP, TR]


class TestUpsertEntry:
    def test_merge_example(self, mem_store):
        r = make_release(mem_store)
        c1 = mem_store.upsert_entry(r, ["P22352"])
        c2 = mem_store.upsert_entry(r, ["O43787"])
        assert c1 != c2
        merged = mem_store.upsert_entry(r, ["P22352", "O43787"])
        assert set(mem_store.cluster_accessions(merged)) == {"P22352", "O43787"}
        assert mem_store.find_cluster("P22352") == mem_store.find_cluster("O43787")

    def test_repeat_identical_call_is_stable(self, mem_store):
        r = make_release(mem_store)
        first = mem_store.upsert_entry(r, ["P11111", "Q22222"])
        assert mem_store.upsert_entry(r, ["P11111", "Q22222"]) == first

    def test_empty_accessions_rejected(self, mem_store):
        r = make_release(mem_store)
        with pytest.raises(StoreError):
            mem_store.upsert_entry(r, [])

    def test_unregistered_release_rejected(self, mem_store):
        with pytest.raises(NotFoundError):
            mem_store.upsert_entry(rel(SP, "1", "1990-01-01"), ["P11111"])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(
        st.lists(st.sampled_from([f"P{i:05d}" for i in range(12)]),
                 min_size=1, max_size=4),
        min_size=1, max_size=20))
    def test_partition_matches_connected_components(self, colistings):
        store = CorpusStore(":memory:")
        try:
            r = make_release(store)
            for group in colistings:
                store.upsert_entry(r, group)
            seen = {a for group in colistings for a in group}
            ours = {frozenset(store.cluster_accessions(store.find_cluster(a)))
                    for a in seen}
            assert ours == connected_components(colistings)
        finally:
            store.close()

    def test_membership_only_grows(self, mem_store):
        r = make_release(mem_store)
        mem_store.upsert_entry(r, ["P00001", "P00002"])
        before = set(mem_store.cluster_accessions(mem_store.find_cluster("P00001")))
        mem_store.upsert_entry(r, ["P00002", "P00003"])
        after = set(mem_store.cluster_accessions(mem_store.find_cluster("P00001")))
        assert before <= after

    def test_primary_accession_is_per_release(self, mem_store):
        r1 = make_release(mem_store, SP, "1", "1990-01-01")
        r2 = make_release(mem_store, SP, "2", "1991-01-01")
        mem_store.upsert_entry(r1, ["O43787"])
        merged = mem_store.upsert_entry(r2, ["P22352", "O43787"])
        # the old release keeps the primary it was ingested with
        assert mem_store.primary_accession_at(merged, r1) == "O43787"
        assert mem_store.primary_accession_at(merged, r2) == "P22352"
        r3 = make_release(mem_store, SP, "3", "1992-01-01")
        assert mem_store.primary_accession_at(merged, r3) is None


class TestAddOccurrence:
    def test_duplicate_triple_stored_once(self, mem_store):
        r = make_release(mem_store)
        c = mem_store.upsert_entry(r, ["P00001"])
        sid1 = mem_store.add_occurrence("shared sentence.", c, r)
        sid2 = mem_store.add_occurrence("shared sentence.", c, r)
        assert sid1 == sid2
        assert mem_store.occurrence_count() == 1

    def test_same_text_two_clusters_interned_once(self, mem_store):
        r = make_release(mem_store)
        c1 = mem_store.upsert_entry(r, ["P00001"])
        c2 = mem_store.upsert_entry(r, ["P00002"])
        sid1 = mem_store.add_occurrence("shared sentence.", c1, r)
        sid2 = mem_store.add_occurrence("shared sentence.", c2, r)
        assert sid1 == sid2
        assert mem_store.occurrence_count() == 2

    def test_interning_distinct_texts(self, mem_store):
        r = make_release(mem_store)
        c = mem_store.upsert_entry(r, ["P00001"])
        assert (mem_store.add_occurrence("one.", c, r)
                != mem_store.add_occurrence("two.", c, r))

    def test_non_canonical_text_rejected(self, mem_store):
        r = make_release(mem_store)
        c = mem_store.upsert_entry(r, ["P00001"])
        for bad in ("Upper case.", "double  space.", " leading.", ""):
            with pytest.raises(StoreError):
                mem_store.add_occurrence(bad, c, r)

    def test_hand_tallied_fixture_corpus(self, mem_store):
        # 5 entries x 3 releases; occupancy tallied by hand below
        releases = [make_release(mem_store, SP, str(i), f"199{i}-01-01")
                    for i in range(1, 4)]
        entries = [f"P0000{i}" for i in range(1, 6)]
        plan = {
            # entry -> {release label: sentences}
            "P00001": {"1": ["a."], "2": ["a."], "3": ["a."]},          # 3 rows
            "P00002": {"1": ["a.", "b."], "2": ["b."], "3": []},        # 3 rows
            "P00003": {"2": ["c."], "3": ["c.", "a."]},                 # 3 rows
            "P00004": {"1": [], "2": [], "3": ["d."]},                  # 1 row
            "P00005": {"3": ["a.", "b.", "c.", "d."]},                  # 4 rows
        }
        for r in releases:
            for acc in entries:
                sentences = plan[acc].get(r.label)
                if sentences is None:
                    continue
                c = mem_store.upsert_entry(r, [acc])
                for s in sentences:
                    mem_store.add_occurrence(s, c, r)
        assert mem_store.occurrence_count() == 3 + 3 + 3 + 1 + 4  # = 14 by hand

    def test_multiplicity_mode_counts_duplicates(self, mem_store):
        r = make_release(mem_store)
        c = mem_store.upsert_entry(r, ["P00001"])
        mem_store.add_occurrence("twice in one entry.", c, r)
        mem_store.add_occurrence("twice in one entry.", c, r, count_duplicate=True)
        mult = mem_store._conn.execute("SELECT mult FROM occurrences").fetchone()[0]
        assert mult == 2
        assert mem_store.occurrence_count() == 1


class TestTimeline:
    def test_single_occurrence(self, mem_store):
        r = make_release(mem_store)
        c = mem_store.upsert_entry(r, ["P00001"])
        sid = mem_store.add_occurrence("only one.", c, r)
        tl = mem_store.timeline(sid)
        assert len(tl.clusters) == 1
        assert tl.clusters[0].ordinals == (1,)
        assert tl.counts == {1: 1}

    def test_unknown_sentence(self, mem_store):
        with pytest.raises(NotFoundError):
            mem_store.timeline(999)

    def test_clusters_ordered_by_first_appearance(self, mem_store):
        r1 = make_release(mem_store, SP, "1", "1990-01-01")
        r2 = make_release(mem_store, SP, "2", "1991-01-01")
        late = mem_store.upsert_entry(r2, ["P00009"])
        early = mem_store.upsert_entry(r1, ["P00001"])
        sid = mem_store.add_occurrence("walks.", early, r1)
        mem_store.add_occurrence("walks.", late, r2)
        mem_store.add_occurrence("walks.", early, r2)
        tl = mem_store.timeline(sid)
        assert [t.accessions for t in tl.clusters] == [("P00001",), ("P00009",)]

    def test_merged_clusters_collapse_in_timeline(self, mem_store):
        r1 = make_release(mem_store, SP, "1", "1990-01-01")
        r2 = make_release(mem_store, SP, "2", "1991-01-01")
        a = mem_store.upsert_entry(r1, ["P00001"])
        b = mem_store.upsert_entry(r1, ["P00002"])
        sid = mem_store.add_occurrence("merged later.", a, r1)
        mem_store.add_occurrence("merged later.", b, r1)
        assert mem_store.timeline(sid).counts == {1: 2}
        mem_store.upsert_entry(r2, ["P00001", "P00002"])  # retroactive join
        tl = mem_store.timeline(sid)
        assert len(tl.clusters) == 1
        assert tl.counts == {1: 1}

    def test_rails_cover_active_span_for_both_sections(self, mem_store):
        for i, iso in enumerate(["1990-01-01", "1991-01-01", "1992-01-01",
                                 "1993-01-01"], start=1):
            make_release(mem_store, SP, str(i), iso)
        make_release(mem_store, TR, "1", "1991-06-01")
        make_release(mem_store, TR, "2", "1999-01-01")
        r2 = mem_store.find_release(SP, "2")
        r4 = mem_store.find_release(SP, "4")
        c = mem_store.upsert_entry(r2, ["P00001"])
        sid = mem_store.add_occurrence("spans.", c, r2)
        mem_store.upsert_entry(r4, ["P00001"])
        mem_store.add_occurrence("spans.", c, r4)
        tl = mem_store.timeline(sid)
        sp_labels = [mem_store.release_by_ordinal(o).label for o in tl.rails[SP]]
        tr_labels = [mem_store.release_by_ordinal(o).label for o in tl.rails[TR]]
        assert sp_labels == ["2", "3", "4"]
        assert tr_labels == ["1"]  # 1999 release is outside the active span

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_counts_match_brute_force_oracle(self, data):
        store = CorpusStore(":memory:")
        try:
            n_rel = data.draw(st.integers(2, 5))
            releases = []
            for i in range(n_rel):
                releases.append(make_release(store, SP, str(i), f"199{i}-01-01"))
            accs = [f"P{i:05d}" for i in range(6)]
            rows = data.draw(st.lists(
                st.tuples(st.sampled_from(accs), st.integers(0, n_rel - 1)),
                min_size=1, max_size=30))
            sid = None
            for acc, ri in rows:
                c = store.upsert_entry(releases[ri], [acc])
                sid = store.add_occurrence("the sentence.", c, releases[ri])
            tl = store.timeline(sid)
            oracle_rows = [(store.find_cluster(acc), ri + 1) for acc, ri in rows]
            assert tl.counts == timeline_counts(oracle_rows)
            assert sum(tl.counts.values()) == store.occurrence_count()
        finally:
            store.close()


class TestExportImport:
    def _build(self, store):
        r1 = make_release(store, SP, "1", "1990-01-01")
        r2 = make_release(store, TR, "1", "1996-01-01")
        a = store.upsert_entry(r1, ["P00001", "P00002"])
        b = store.upsert_entry(r2, ["Q00001"])
        store.add_occurrence("alpha beta.", a, r1)
        store.add_occurrence("alpha beta.", b, r2)
        store.add_occurrence("gamma delta", b, r2)
        store.mark_complete(r1)
        store.mark_complete(r2)

    def test_round_trip_is_byte_identical(self, tmp_path):
        store = CorpusStore(tmp_path / "a.db")
        self._build(store)
        first = tmp_path / "dump1"
        store.export_dump(first)
        store.close()

        rebuilt = CorpusStore.import_dump(first, tmp_path / "b.db")
        second = tmp_path / "dump2"
        rebuilt.export_dump(second)
        rebuilt.close()

        names = sorted(os.listdir(first))
        assert names == sorted(os.listdir(second))
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes(), name

    def test_export_relation_format(self, tmp_path):
        store = CorpusStore(":memory:")
        self._build(store)
        out = tmp_path / "occurrences.tsv"
        store.export_occurrences(out)
        lines = out.read_text().splitlines()
        assert lines == sorted(lines)
        assert all(len(line.split("\t")) == 4 for line in lines)
        store.close()


class TestFormat:
    def test_magic_header_checked(self, tmp_path):
        bogus = tmp_path / "bogus.db"
        import sqlite3
        conn = sqlite3.connect(bogus)
        conn.execute("CREATE TABLE meta (key TEXT PRIMARY KEY, value TEXT NOT NULL)")
        conn.execute("INSERT INTO meta VALUES ('magic', 'something-else')")
        conn.commit()
        conn.close()
        with pytest.raises(StoreError):
            CorpusStore(bogus)

    def test_reopen_preserves_everything(self, tmp_path):
        path = tmp_path / "c.db"
        store = CorpusStore(path)
        r = make_release(store)
        c = store.upsert_entry(r, ["P00001", "P00002"])
        sid = store.add_occurrence("persisted.", c, r)
        store.close()
        reopened = CorpusStore(path)
        assert reopened.sentence_text(sid) == "persisted."
        assert set(reopened.cluster_accessions(reopened.find_cluster("P00001"))) == {
            "P00001", "P00002"}
        assert reopened.timeline(sid).counts == {1: 1}
        reopened.close()
