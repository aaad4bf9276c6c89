#!/usr/bin/env python3
"""Export the JSON fixtures the browser UI tests run against.

Writes the full decision-table enumeration and the walkthrough sentence's
timeline payload, both taken from the live server code paths, into
frontend/test/fixtures/. A Python test asserts the committed copies stay
equal to what the server currently produces, so the UI tests and the
server cannot drift apart silently.
"""

from __future__ import annotations

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from fastapi.testclient import TestClient

from sentprov.api import create_app
from sentprov.classify import decision_table
from sentprov.ingest import ingest_manifest
from sentprov.store import CorpusStore

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE_DIR = os.path.join(HERE, "..", "frontend", "test", "fixtures")
MANIFEST = os.path.join(HERE, "..", "tests", "fixtures", "walkthrough", "manifest.tsv")

SEL = "the active-site selenocysteine is encoded by the opal codon, uga."


def main() -> None:
    os.makedirs(FIXTURE_DIR, exist_ok=True)

    with open(os.path.join(FIXTURE_DIR, "decision_table.json"), "w") as fp:
        json.dump(decision_table(), fp, indent=2)
        fp.write("\n")

    store = CorpusStore(":memory:")
    ingest_manifest(store, MANIFEST)
    sid = store.sentence_id(SEL)
    with TestClient(create_app(store)) as client:
        payload = client.get(f"/v1/sentences/{sid}/timeline").json()
    store.close()
    with open(os.path.join(FIXTURE_DIR, "timeline_selenocysteine.json"), "w") as fp:
        json.dump(payload, fp, indent=2)
        fp.write("\n")

    print(f"fixtures -> {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
