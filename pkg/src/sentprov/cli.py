"""Operator command line: ingest, stats, detect, export, import, serve.

The store lock file next to the corpus guarantees ingestion never runs
while the API is serving the same store (and vice versa).
"""

from __future__ import annotations

import json
import os
import sys

import click
from filelock import FileLock, Timeout

from .flatfile import DiagnosticsSink, Section
from .ingest import IngestError, ingest_manifest
from .patterns import scan_corpus
from .stats import (stats_series, write_distribution_tsv, write_series_json,
                    write_series_tsv)
from .store import CorpusStore, NotFoundError, StoreError
from .synth import GeneratorParams, generate


def _lock(store_path: str) -> FileLock:
    return FileLock(os.fspath(store_path) + ".lock")


def _open_store(ctx) -> CorpusStore:
    path = ctx.obj["store"]
    if path != ":memory:" and not os.path.exists(path):
        raise click.ClickException(f"store not found: {path}")
    return CorpusStore(path)


@click.group()
@click.option("--store", default="corpus.db", show_default=True,
              help="Path of the corpus store file.")
@click.pass_context
def main(ctx, store):
    """Sentence provenance and propagation toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["store"] = store


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--lexicon", type=click.Path(exists=True, dir_okay=False),
              help="Abbreviation lexicon overriding the packaged one.")
@click.option("--diagnostics", "diagnostics_path", type=click.Path(dir_okay=False),
              help="Write parse diagnostics as JSON lines to this file.")
@click.option("--count-duplicates", is_flag=True,
              help="Count a sentence repeated inside one entry with multiplicity "
                   "instead of collapsing it.")
@click.pass_context
def ingest(ctx, manifest, lexicon, diagnostics_path, count_duplicates):
    """Ingest the releases listed in MANIFEST (section, label, date, path TSV)."""
    from .segment import load_lexicon

    store_path = ctx.obj["store"]
    lex = load_lexicon(lexicon) if lexicon else None
    sink = DiagnosticsSink()
    try:
        with _lock(store_path).acquire(timeout=1):
            store = CorpusStore(store_path)
            try:
                report = ingest_manifest(store, manifest, lex, sink, count_duplicates)
            finally:
                store.close()
    except Timeout:
        raise click.ClickException(f"store {store_path} is locked (serve running?)")
    except (IngestError, StoreError, ValueError) as exc:
        raise click.ClickException(str(exc))

    for r in report.releases:
        rel = r.release
        if r.skipped:
            click.echo(f"{rel.section.value} {rel.label} {rel.date}: "
                       "already ingested, skipped")
        else:
            click.echo(f"{rel.section.value} {rel.label} {rel.date}: "
                       f"entries={r.entries} annotated={r.annotated_entries} "
                       f"occurrences={r.occurrences} diagnostics={r.diagnostics}")
    click.echo(f"total: entries={report.total_entries} "
               f"occurrences={report.total_occurrences} diagnostics={len(sink)}")
    if diagnostics_path:
        with open(diagnostics_path, "w", encoding="utf-8") as fp:
            sink.write_jsonl(fp)


@main.command()
@click.option("--section", "sections", multiple=True,
              type=click.Choice(["swissprot", "trembl"]),
              help="Section(s) to report; default both.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Directory for the series files.")
@click.option("--distribution", "distributions", multiple=True,
              metavar="SECTION:LABEL",
              help="Also write the reuse spectrum of this release.")
@click.pass_context
def stats(ctx, sections, out_dir, distributions):
    """Write per-release statistics series as TSV and JSON."""
    store = _open_store(ctx)
    try:
        os.makedirs(out_dir, exist_ok=True)
        picked = [Section(s) for s in sections] or list(Section)
        for sec in picked:
            series = stats_series(store, sec)
            base = os.path.join(out_dir, f"stats_{sec.value}")
            with open(base + ".tsv", "w", encoding="utf-8") as fp:
                write_series_tsv(series, fp)
            with open(base + ".json", "w", encoding="utf-8") as fp:
                write_series_json(series, fp)
            click.echo(f"{sec.value}: {len(series)} releases -> {base}.tsv")
        for spec_str in distributions:
            try:
                section_str, label = spec_str.split(":", 1)
                sec = Section.parse(section_str)
                release = store.find_release(sec, label)
            except (ValueError, NotFoundError) as exc:
                raise click.ClickException(f"bad --distribution {spec_str!r}: {exc}")
            from .stats import reuse_distribution
            spectrum = reuse_distribution(store, release)
            path = os.path.join(out_dir, f"distribution_{sec.value}_{label}.tsv")
            with open(path, "w", encoding="utf-8") as fp:
                write_distribution_tsv(spectrum, fp)
            click.echo(f"distribution {sec.value}/{label} -> {path}")
    finally:
        store.close()


@main.command()
@click.option("--latest-release", "latest_label", default=None,
              help="Release label counting as 'the latest version' "
                   "(default: most recent date).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default=".",
              show_default=True)
@click.pass_context
def detect(ctx, latest_label, out_dir):
    """Scan every sentence for propagation patterns; write reports and summary."""
    store = _open_store(ctx)
    try:
        os.makedirs(out_dir, exist_ok=True)
        reports_path = os.path.join(out_dir, "pattern_reports.jsonl")
        rows = []
        with open(reports_path, "w", encoding="utf-8") as fp:
            def sink(report, in_latest):
                d = report.to_dict()
                d["in_latest"] = in_latest
                fp.write(json.dumps(d) + "\n")
                rows.append((report.kind.value, report.sentence_id, in_latest,
                             report.to_dict()))
            try:
                summary = scan_corpus(store, latest_label, sink)
            except NotFoundError as exc:
                raise click.ClickException(str(exc))
        store.replace_pattern_reports(rows)
        store.set_meta("pattern_summary", json.dumps(summary.to_dict()))
        summary_path = os.path.join(out_dir, "pattern_summary.tsv")
        with open(summary_path, "w", encoding="utf-8") as fp:
            fp.write(summary.to_tsv())
        click.echo(summary.to_tsv().rstrip("\n"))
        click.echo(f"reports -> {reports_path}")
        click.echo(f"summary -> {summary_path}")
    finally:
        store.close()


@main.command()
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.pass_context
def export(ctx, out_dir):
    """Dump the corpus as sorted TSV files (diffable and re-importable)."""
    store = _open_store(ctx)
    try:
        store.export_dump(out_dir)
        click.echo(f"exported -> {out_dir}")
    finally:
        store.close()


@main.command(name="import")
@click.argument("in_dir", type=click.Path(exists=True, file_okay=False))
@click.pass_context
def import_cmd(ctx, in_dir):
    """Rebuild a store from an export dump."""
    store_path = ctx.obj["store"]
    if os.path.exists(store_path) and os.path.getsize(store_path) > 0:
        raise click.ClickException(f"refusing to import into existing store {store_path}")
    try:
        store = CorpusStore.import_dump(in_dir, store_path)
    except (StoreError, OSError, ValueError) as exc:
        raise click.ClickException(f"import failed: {exc}")
    try:
        click.echo(f"imported {store.occurrence_count()} occurrences "
                   f"-> {store_path}")
    finally:
        store.close()


@main.command()
@click.option("--bind", default="127.0.0.1:8077", show_default=True,
              metavar="HOST:PORT")
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False, exists=True),
              help="Static directory with the built browser UI.")
@click.option("--entry-url", default=None,
              help="External entry URL template, '{accession}' placeholder.")
@click.option("--latest-release", "latest_label", default=None)
@click.pass_context
def serve(ctx, bind, ui_dir, entry_url, latest_label):
    """Serve the JSON API (and optionally the browser UI)."""
    import uvicorn

    from .api import DEFAULT_ENTRY_URL, create_app

    store_path = ctx.obj["store"]
    if not os.path.exists(store_path):
        raise click.ClickException(f"store not found: {store_path}")
    host, _, port_str = bind.rpartition(":")
    if not host or not port_str.isdigit():
        raise click.ClickException(f"--bind must be HOST:PORT, got {bind!r}")
    lock = _lock(store_path)
    try:
        lock.acquire(timeout=1)
    except Timeout:
        raise click.ClickException(f"store {store_path} is locked (ingest running?)")
    try:
        store = CorpusStore(store_path)
        app = create_app(store, entry_url or DEFAULT_ENTRY_URL, latest_label)
        if ui_dir:
            from starlette.staticfiles import StaticFiles
            app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
        uvicorn.run(app, host=host, port=int(port_str), log_level="info")
    finally:
        lock.release()


@main.command()
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--swissprot-releases", type=int, default=6, show_default=True)
@click.option("--trembl-releases", type=int, default=8, show_default=True)
@click.option("--entries", "entry_count", type=int, default=60, show_default=True)
@click.option("--pool", "sentence_pool_size", type=int, default=40, show_default=True)
@click.option("--copy-rate", type=float, default=0.30, show_default=True)
@click.option("--removal-rate", type=float, default=0.12, show_default=True)
@click.option("--readd-rate", type=float, default=0.35, show_default=True)
@click.option("--merge-rate", type=float, default=0.05, show_default=True)
def generate_cmd(out_dir, seed, swissprot_releases, trembl_releases, entry_count,
                 sentence_pool_size, copy_rate, removal_rate, readd_rate, merge_rate):
    """Generate a synthetic corpus with a ground-truth ledger."""
    try:
        params = GeneratorParams(
            seed=seed, swissprot_releases=swissprot_releases,
            trembl_releases=trembl_releases, entry_count=entry_count,
            sentence_pool_size=sentence_pool_size, copy_rate=copy_rate,
            removal_rate=removal_rate, readd_rate=readd_rate, merge_rate=merge_rate)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    manifest, ledger = generate(params, out_dir)
    click.echo(f"manifest -> {manifest}")
    click.echo(f"occurrences={ledger.occurrence_count} "
               f"flagged_sentences={len(ledger.expected)}")


main.add_command(generate_cmd, name="generate")


if __name__ == "__main__":
    main()
