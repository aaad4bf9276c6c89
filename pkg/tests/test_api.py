import json
from datetime import date

import pytest
from fastapi.testclient import TestClient

from sentprov.api import create_app
from sentprov.flatfile import Release, Section
from sentprov.patterns import scan_corpus
from sentprov.store import CorpusStore

SEL = "the active-site selenocysteine is encoded by the opal codon, uga."
LIP = "may have an essential function in lipopolysaccharides biosynthesis."


def materialize(store, latest_label=None):
    rows = []
    scan_corpus(store, latest_label,
                lambda r, latest: rows.append(
                    (r.kind.value, r.sentence_id, latest, r.to_dict())))
    store.replace_pattern_reports(rows)


@pytest.fixture(scope="module")
def client(walkthrough_store):
    materialize(walkthrough_store)
    app = create_app(walkthrough_store)
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def wide_client(tmp_path):
    """A corpus with one sentence spread over 150 clusters (over the
    feasibility threshold) and one narrow sentence."""
    store = CorpusStore(":memory:")
    r = Release(Section.SWISSPROT, "1", date(2000, 1, 1))
    store.register_release(r)
    for i in range(150):
        c = store.upsert_entry(r, [f"P{i:05d}"])
        store.add_occurrence("everywhere at once.", c, r)
    narrow = store.upsert_entry(r, ["Q99999"])
    store.add_occurrence("rare sentence.", narrow, r)
    with TestClient(create_app(store)) as c:
        yield c
    store.close()


class TestSearch:
    def test_exact_canonical_text(self, client):
        out = client.get("/v1/sentences", params={"q": SEL})
        assert out.status_code == 200
        results = out.json()["results"]
        assert results[0]["text"] == SEL

    def test_by_id(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(SEL)
        out = client.get("/v1/sentences", params={"q": str(sid)})
        assert any(r["sentence_id"] == sid for r in out.json()["results"])

    def test_substring(self, client):
        out = client.get("/v1/sentences", params={"q": "cyanide"})
        assert [r["text"] for r in out.json()["results"]] == ["inactivated by cyanide."]

    def test_empty_query_422(self, client):
        out = client.get("/v1/sentences", params={"q": "  "})
        assert out.status_code == 422
        assert set(out.json()) == {"code", "message"}


class TestTimeline:
    def test_selenocysteine_payload(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(SEL)
        out = client.get(f"/v1/sentences/{sid}/timeline")
        assert out.status_code == 200
        body = out.json()
        # equals the store's own timeline
        tl = walkthrough_store.timeline(sid)
        assert len(body["points"]) == sum(len(t.ordinals) for t in tl.clusters)
        assert body["clusters"][0]["accessions"] in (["P07203"], ["P07658"])
        # colors and rails for both sections
        assert {p["color"] for p in body["points"]} == {"blue"}
        assert body["rails"]["swissprot"][0]["label"] == "9"
        assert len(body["rails"]["trembl"]) == 20
        # hover payload fields
        point = body["points"][0]
        assert {"accession", "section", "release_label", "release_date",
                "entry_url"} <= set(point)
        assert point["entry_url"].startswith("https://")
        # counts match the store
        assert {c["ordinal"]: c["count"] for c in body["counts"]} == tl.counts

    def test_merge_aware_accession_list(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id("protects cells against the toxic effects of peroxides.")
        body = client.get(f"/v1/sentences/{sid}/timeline").json()
        assert body["clusters"][0]["accessions"] == [
            "O43787", "P22352", "Q86W78", "Q9NZ74", "Q9UEL1"]

    def test_unknown_sentence_404(self, client):
        out = client.get("/v1/sentences/99999/timeline")
        assert out.status_code == 404
        assert out.json()["code"] == "unknown_sentence"

    def test_malformed_id_422(self, client):
        assert client.get("/v1/sentences/not-a-number/timeline").status_code == 422


class TestPatterns:
    def test_listing_with_envelope(self, client):
        out = client.get("/v1/patterns/missing_origin")
        assert out.status_code == 200
        body = out.json()
        assert body["total"] == 2
        assert len(body["reports"]) == 2
        sids = [r["sentence_id"] for r in body["reports"]]
        assert sids == sorted(sids)

    def test_page_beyond_end_is_empty_with_correct_total(self, client):
        body = client.get("/v1/patterns/transient", params={"page": 7}).json()
        assert body["reports"] == []
        assert body["total"] == 1

    def test_unknown_kind_400(self, client):
        assert client.get("/v1/patterns/nonsense").status_code == 400

    def test_latest_filter(self, client):
        body = client.get("/v1/patterns/missing_origin",
                          params={"latest": "true"}).json()
        # only the selenocysteine sentence survives into the newest release
        assert body["total"] == 1

    def test_unmaterialized_store_409(self, wide_client):
        out = wide_client.get("/v1/patterns/transient")
        assert out.status_code == 409
        assert out.json()["code"] == "reports_not_materialized"


class TestStats:
    def test_series_shape(self, client):
        body = client.get("/v1/stats/swissprot").json()
        assert body["section"] == "swissprot"
        assert len(body["series"]) == 36
        for row in body["series"]:
            for key in ("pct_unique", "pct_singleton", "pct_unannotated"):
                if row[key] is not None:
                    assert 0.0 <= row[key] <= 1.0

    def test_empty_section_vocabulary(self, client):
        assert client.get("/v1/stats/nowhere").status_code == 400


class TestClassifications:
    def test_worked_example_path_is_erroneous(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(LIP)
        record = {
            "sentence_id": sid,
            "classification": "erroneous",
            "decision_path": {"q2": "yes", "q3": "yes", "q4": "yes"},
            "analyst": "curator-a",
            "notes": "update to the origin applies to the secondary entry",
        }
        out = client.post("/v1/classifications", json=record)
        assert out.status_code == 201, out.text
        stored = out.json()
        assert stored["classification"] == "erroneous"
        assert stored["decision_path"] == {
            "q1": "no", "q2": "yes", "q3": "yes", "q4": "yes"}
        # round-trip: get returns the same record, field-identical
        got = client.get("/v1/classifications", params={"sentence_id": sid}).json()
        assert stored in got["records"]

    def test_insufficient_evidence_is_possibly_erroneous(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(SEL)
        out = client.post("/v1/classifications", json={
            "sentence_id": sid,
            "classification": "possibly_erroneous",
            "decision_path": {"q2": "insufficient evidence"},
            "analyst": "curator-b",
        })
        assert out.status_code == 201
        assert out.json()["classification"] == "possibly_erroneous"

    def test_history_is_append_only(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(SEL)
        before = len(client.get("/v1/classifications",
                                params={"sentence_id": sid}).json()["records"])
        client.post("/v1/classifications", json={
            "sentence_id": sid, "classification": "accurate",
            "decision_path": {"q2": "no"}, "analyst": "curator-c"})
        records = client.get("/v1/classifications",
                             params={"sentence_id": sid}).json()["records"]
        assert len(records) == before + 1
        assert [r["record_id"] for r in records] == sorted(
            r["record_id"] for r in records)

    def test_mismatched_path_409(self, client, walkthrough_store):
        sid = walkthrough_store.sentence_id(LIP)
        out = client.post("/v1/classifications", json={
            "sentence_id": sid,
            "classification": "erroneous",
            "decision_path": {"q2": "no"},
            "analyst": "curator-a"})
        assert out.status_code == 409
        assert out.json()["code"] == "path_mismatch"

    def test_too_many_results_forced_over_threshold(self, wide_client):
        out = wide_client.get("/v1/sentences", params={"q": "everywhere at once."})
        sid = out.json()["results"][0]["sentence_id"]
        # whatever path the client submits, the server answers Q1 itself
        posted = wide_client.post("/v1/classifications", json={
            "sentence_id": sid,
            "classification": "too_many_results",
            "decision_path": {"q2": "yes", "q3": "yes", "q4": "yes"},
            "analyst": "curator-a"})
        assert posted.status_code == 201
        assert posted.json()["decision_path"] == {"q1": "yes"}
        # and a non-TMR assertion for the same sentence conflicts
        rejected = wide_client.post("/v1/classifications", json={
            "sentence_id": sid,
            "classification": "erroneous",
            "decision_path": {"q2": "yes", "q3": "yes", "q4": "yes"},
            "analyst": "curator-a"})
        assert rejected.status_code == 409

    def test_too_many_results_under_threshold_422(self, wide_client):
        out = wide_client.get("/v1/sentences", params={"q": "rare sentence."})
        sid = out.json()["results"][0]["sentence_id"]
        posted = wide_client.post("/v1/classifications", json={
            "sentence_id": sid,
            "classification": "too_many_results",
            "decision_path": {},
            "analyst": "curator-a"})
        assert posted.status_code == 422
        assert posted.json()["code"] == "threshold_not_met"

    def test_unknown_sentence_404(self, client):
        out = client.post("/v1/classifications", json={
            "sentence_id": 12345678,
            "classification": "accurate",
            "decision_path": {"q2": "no"},
            "analyst": "x"})
        assert out.status_code == 404

    def test_get_requires_sentence_id(self, client):
        assert client.get("/v1/classifications").status_code == 422
