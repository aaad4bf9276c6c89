import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sentprov.ingest import ingest_manifest
from sentprov.store import CorpusStore

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
WALKTHROUGH_MANIFEST = os.path.join(FIXTURES, "walkthrough", "manifest.tsv")


@pytest.fixture(scope="session")
def walkthrough_store(tmp_path_factory):
    """The committed selenocysteine-history corpus, ingested once."""
    path = tmp_path_factory.mktemp("walkthrough") / "corpus.db"
    store = CorpusStore(path)
    ingest_manifest(store, WALKTHROUGH_MANIFEST)
    yield store
    store.close()


@pytest.fixture()
def mem_store():
    store = CorpusStore(":memory:")
    yield store
    store.close()
