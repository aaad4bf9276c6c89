"""Sentence provenance and propagation analysis for versioned flat-file
annotation databases."""

from .flatfile import RawEntry, Release, Section
from .store import CorpusStore

__version__ = "0.1.0"

__all__ = ["CorpusStore", "RawEntry", "Release", "Section", "__version__"]
