"""JSON API serving timelines, pattern reports, stats and classifications.

Read-only views over a corpus store, versioned under ``/v1/``; the one
writable resource is curator classifications, which are append-only
(earlier judgments of the same sentence stay on record -- interpretation
varies between curators and that disagreement is data). All errors are
``{code, message}`` JSON.

Question 1 of the classification protocol (is the sentence in more than
100 entries?) is answered by the server from the corpus; a submitted Q1
is ignored. A classification that contradicts the decision tree for its
own path is rejected with 409, and asserting "too many results" for a
sentence at or under the threshold is a 422.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import classify
from .flatfile import Section
from .patterns import PatternKind
from .stats import stats_row, stats_series
from .store import CorpusStore, NotFoundError

DEFAULT_ENTRY_URL = "https://www.uniprot.org/uniprotkb/{accession}/entry"

SECTION_COLORS = {Section.SWISSPROT: "blue", Section.TREMBL: "red"}

SEARCH_CAP = 50


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class ClassificationIn(BaseModel):
    sentence_id: int
    classification: str
    decision_path: dict[str, str] = Field(default_factory=dict)
    analyst: str
    notes: str = ""


def create_app(store: CorpusStore,
               entry_url_template: str = DEFAULT_ENTRY_URL,
               latest_label: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="sentprov", version="1")
    write_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message})

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        return JSONResponse(status_code=exc.status_code,
                            content={"code": "http_error", "message": str(exc.detail)})

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content={"code": "validation_error", "message": str(exc)})

    @app.get("/v1/sentences")
    def search_sentences(q: Optional[str] = None):
        if q is None or not q.strip():
            raise ApiError(422, "empty_query", "q must be a non-empty string")
        results, truncated = store.search_sentences(q, SEARCH_CAP)
        if q.isdigit() and store.has_sentence(int(q)):
            sid = int(q)
            pair = (sid, store.sentence_text(sid))
            if pair not in results:
                results.insert(0, pair)
        return {
            "query": q,
            "results": [{"sentence_id": sid, "text": text} for sid, text in results],
            "truncated": truncated,
        }

    @app.get("/v1/sentences/{sentence_id}/timeline")
    def get_timeline(sentence_id: int):
        try:
            tl = store.timeline(sentence_id)
        except NotFoundError as exc:
            raise ApiError(404, "unknown_sentence", str(exc))
        release_info = {}
        for rel in store.releases():
            release_info[rel.ordinal] = {
                "section": rel.section.value,
                "label": rel.label,
                "date": rel.date.isoformat(),
            }
        points = []
        clusters = []
        for track in tl.clusters:
            clusters.append({
                "cluster_id": track.cluster_id,
                "accessions": list(track.accessions),
                "first_ordinal": track.first_ordinal,
            })
            for o in track.ordinals:
                info = release_info[o]
                accession = track.primaries.get(o, track.accessions[0])
                points.append({
                    "cluster_id": track.cluster_id,
                    "ordinal": o,
                    "section": info["section"],
                    "release_label": info["label"],
                    "release_date": info["date"],
                    "accession": accession,
                    "color": SECTION_COLORS[Section(info["section"])],
                    "entry_url": entry_url_template.format(accession=accession),
                })
        rails = {
            sec.value: [{"ordinal": o, **release_info[o]} for o in tl.rails[sec]]
            for sec in Section
        }
        return {
            "sentence_id": tl.sentence_id,
            "text": tl.text,
            "clusters": clusters,
            "points": points,
            "counts": [{"ordinal": o, "count": c} for o, c in sorted(tl.counts.items())],
            "rails": rails,
        }

    @app.get("/v1/patterns/{kind}")
    def list_patterns(kind: str, page: int = 1, page_size: int = 50,
                      latest: bool = False):
        valid = {k.value for k in PatternKind}
        if kind not in valid:
            raise ApiError(400, "unknown_kind",
                           f"kind must be one of {sorted(valid)}")
        if page < 1 or not 1 <= page_size <= 500:
            raise ApiError(422, "bad_paging", "page >= 1 and 1 <= page_size <= 500")
        if not store.patterns_materialized():
            raise ApiError(409, "reports_not_materialized",
                           "run the detect command to materialize pattern reports")
        total, reports = store.get_pattern_reports(kind, page, page_size, latest)
        return {"kind": kind, "page": page, "page_size": page_size,
                "total": total, "reports": reports}

    @app.get("/v1/stats/{section}")
    def get_stats(section: str):
        try:
            sec = Section.parse(section)
        except ValueError as exc:
            raise ApiError(400, "unknown_section", str(exc))
        series = stats_series(store, sec)
        return {"section": sec.value, "series": [stats_row(st) for st in series]}

    @app.post("/v1/classifications", status_code=201)
    def post_classification(body: ClassificationIn):
        try:
            submitted = classify.Classification.parse(body.classification)
        except ValueError as exc:
            raise ApiError(422, "bad_classification", str(exc))
        try:
            cluster_count = store.lifetime_cluster_count(body.sentence_id)
        except NotFoundError as exc:
            raise ApiError(404, "unknown_sentence", str(exc))

        q1 = classify.answer_q1(cluster_count)
        if q1 is classify.Answer.YES:
            if submitted is not classify.Classification.TOO_MANY_RESULTS:
                raise ApiError(
                    409, "path_mismatch",
                    f"sentence occurs in {cluster_count} entries (> "
                    f"{classify.CLUSTER_FEASIBILITY_LIMIT}); the protocol "
                    "classifies it as too_many_results regardless of the "
                    "submitted path")
            leaf, consumed = classify.Classification.TOO_MANY_RESULTS, {"q1": q1.value}
        else:
            if submitted is classify.Classification.TOO_MANY_RESULTS:
                raise ApiError(
                    422, "threshold_not_met",
                    f"too_many_results requires more than "
                    f"{classify.CLUSTER_FEASIBILITY_LIMIT} entries; this sentence "
                    f"occurs in {cluster_count}")
            answers = {"q1": q1}
            for q in ("q2", "q3", "q4"):
                if q in body.decision_path:
                    try:
                        answers[q] = classify.Answer.parse(body.decision_path[q])
                    except ValueError as exc:
                        raise ApiError(422, "bad_answer", str(exc))
            try:
                leaf, consumed = classify.evaluate_path(answers)
            except classify.PathError as exc:
                raise ApiError(409, "path_mismatch", str(exc))
            if leaf is not submitted:
                raise ApiError(
                    409, "path_mismatch",
                    f"decision path leads to {leaf.value}, not {submitted.value}")

        created = datetime.now(timezone.utc).isoformat(timespec="seconds")
        with write_lock:
            record = store.add_classification(
                body.sentence_id, leaf.value, consumed, body.analyst,
                created, body.notes)
        return record

    @app.get("/v1/classifications")
    def get_classifications(sentence_id: Optional[int] = None):
        if sentence_id is None:
            raise ApiError(422, "missing_sentence_id",
                           "sentence_id query parameter is required")
        if not store.has_sentence(sentence_id):
            raise ApiError(404, "unknown_sentence", f"unknown sentence id {sentence_id}")
        return {"sentence_id": sentence_id,
                "records": store.get_classifications(sentence_id)}

    @app.get("/v1/meta")
    def get_meta():
        return {
            "sentences": store.sentence_count(),
            "occurrences": store.occurrence_count(),
            "releases": [{"section": r.section.value, "label": r.label,
                          "date": r.date.isoformat(), "ordinal": r.ordinal}
                         for r in store.releases()],
            "latest_label": latest_label,
            "patterns_materialized": store.patterns_materialized(),
        }

    return app
