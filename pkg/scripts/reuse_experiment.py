#!/usr/bin/env python3
"""End-to-end reuse experiment on a synthetic corpus.

Generates a corpus, loads it through the full parse/segment/store
pipeline, then prints the per-release reuse trajectory and the
propagation-pattern summary next to the generator's ground truth.
Useful as a smoke run and as a template for experiments on real
release archives (swap the generate step for your own manifest).

    python scripts/reuse_experiment.py [--seed N] [--entries N] [--keep DIR]
"""

from __future__ import annotations

import argparse
import tempfile

from sentprov.flatfile import Section
from sentprov.ingest import ingest_manifest
from sentprov.patterns import scan_corpus
from sentprov.stats import stats_series
from sentprov.store import CorpusStore
from sentprov.synth import GeneratorParams, generate


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--entries", type=int, default=120)
    parser.add_argument("--keep", metavar="DIR",
                        help="write the corpus here instead of a temp dir")
    args = parser.parse_args()

    out_dir = args.keep or tempfile.mkdtemp(prefix="reuse-experiment-")
    params = GeneratorParams(seed=args.seed, entry_count=args.entries,
                             swissprot_releases=8, trembl_releases=10)
    manifest, ledger = generate(params, out_dir)
    print(f"corpus: {out_dir} ({ledger.occurrence_count} occurrences)")

    store = CorpusStore(":memory:")
    ingest_manifest(store, manifest)

    for section in Section:
        print(f"\n{section.value}: release  entries  total  unique  singleton  "
              "pct_unique")
        for st in stats_series(store, section):
            pct = "" if st.pct_unique is None else f"{float(st.pct_unique):.3f}"
            print(f"  {st.release.label:>7}  {st.entries_total:7d}  "
                  f"{st.total_sentences:5d}  {st.unique_sentences:6d}  "
                  f"{st.singleton_sentences:9d}  {pct:>10}")

    summary = scan_corpus(store)
    expected = {}
    for kinds in ledger.expected.values():
        for kind in kinds:
            expected[kind] = expected.get(kind, 0) + 1
    print("\npattern           detected  planted")
    for kind, total in ((k.value, v) for k, v in summary.totals.items()):
        print(f"{kind:<18}{total:8d}  {expected.get(kind, 0):7d}")
    store.close()


if __name__ == "__main__":
    main()
