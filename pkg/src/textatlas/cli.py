"""Command-line interface over the pipeline stages and the store."""

from __future__ import annotations

import json
import logging

import click

from . import pipeline
from .delivery.report import render_html, render_json
from .delivery.store import Store
from .entities import related_persons


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable debug logging.")
def main(verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)


@main.command()
@click.option("--format", "fmt", type=click.Choice(["txt", "rss"]), required=True)
@click.option("--in", "input_path", required=True, type=click.Path(exists=True))
@click.option("--out", "run_dir", required=True, type=click.Path())
@click.option("--run-id", default=None)
def ingest(fmt, input_path, run_dir, run_id):
    """Load a document collection into a run directory."""
    result = pipeline.ingest(input_path, fmt, run_dir, run_id)
    click.echo(f"ingested {len(result.documents)} documents "
               f"({len(result.warnings)} warnings)")


@main.command()
@click.option("--threshold", default=0.5, show_default=True)
@click.option("--remove", is_flag=True, help="Drop the later-id member of each pair.")
@click.argument("run_dir", type=click.Path(exists=True))
def dedup(threshold, remove, run_dir):
    """Flag (or remove) near-duplicate documents by pentagram overlap."""
    pairs = pipeline.dedup(run_dir, threshold, remove)
    for a, b, ratio in pairs:
        click.echo(f"{a}\t{b}\t{ratio:.3f}")
    click.echo(f"{len(pairs)} duplicate pairs")


@main.command()
@click.option("--model", required=True, type=click.Path(exists=True))
@click.option("--stoplist", default=None, type=click.Path(exists=True))
@click.option("--top", default=100, show_default=True)
@click.argument("run_dir", type=click.Path(exists=True))
def keywords(model, stoplist, top, run_dir):
    """Extract ranked keywords per document."""
    pipeline.keywords_stage(run_dir, model, stoplist, top)
    click.echo("keywords written")


@main.command()
@click.option("--triggers", default=None, type=click.Path(exists=True))
@click.option("--known", default=None, type=click.Path(exists=True))
@click.option("--corrections", default=None, type=click.Path(exists=True))
@click.option("--threshold", default=None, type=float,
              help="Name-variant similarity threshold.")
@click.argument("run_dir", type=click.Path(exists=True))
def names(triggers, known, corrections, threshold, run_dir):
    """Recognize person/organisation names and merge spelling variants."""
    kwargs = {}
    if threshold is not None:
        kwargs["threshold"] = threshold
    store = pipeline.names_stage(run_dir, triggers, known, corrections, **kwargs)
    click.echo(f"{len(store.persons)} identities")


@main.command()
@click.option("--gazetteer", required=True, type=click.Path(exists=True))
@click.option("--country-model", default=None, type=click.Path(exists=True))
@click.option("--triggers", default=None, type=click.Path(exists=True))
@click.argument("run_dir", type=click.Path(exists=True))
def geotag(gazetteer, country_model, triggers, run_dir):
    """Spot and disambiguate place references, compute country scores."""
    pipeline.geotag_stage(run_dir, gazetteer, country_model, triggers)
    click.echo("places written")


@main.command()
@click.option("--threshold", default=0.5, show_default=True)
@click.option("--linkage", default="average", type=click.Choice(["average", "single"]))
@click.argument("run_dir", type=click.Path(exists=True))
def cluster(threshold, linkage, run_dir):
    """Group documents into clusters by cosine similarity."""
    clusters = pipeline.cluster_stage(run_dir, threshold, linkage)
    for c in clusters:
        click.echo(f"{c.cluster_id}\t{c.size}\t{c.title}")


@main.command()
@click.option("--list", "term_list", required=True, type=click.Path(exists=True))
@click.argument("run_dir", type=click.Path(exists=True))
def terms(term_list, run_dir):
    """Match specialist terms against every cluster."""
    pipeline.terms_stage(run_dir, term_list)
    click.echo("terms written")


@main.command()
@click.option("--threshold", default=0.5, show_default=True)
@click.argument("run_a", type=click.Path(exists=True))
@click.argument("run_b", type=click.Path(exists=True))
def xlink(threshold, run_a, run_b):
    """Link clusters across two runs in different languages."""
    links = pipeline.xlink_stage(run_a, run_b, threshold)
    for link in links:
        click.echo(f"{link.cluster_a}\t{link.cluster_b}\t{link.score:.3f}")
    click.echo(f"{len(links)} links")


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.argument("run_dir", type=click.Path(exists=True))
def persist(store_dir, run_dir):
    """Commit a finished run into the historical store."""
    run_id = Store(store_dir).persist_run(run_dir)
    click.echo(f"persisted {run_id}")


@main.command()
@click.option("--format", "fmt", type=click.Choice(["json", "html"]), default="json")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.argument("run_id")
def report(fmt, store_dir, out_dir, run_id):
    """Render a run's JSON or static HTML report."""
    store = Store(store_dir)
    render = render_json if fmt == "json" else render_html
    written = render(store, run_id, out_dir)
    click.echo(f"wrote {len(written)} files to {out_dir}")


@main.command()
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.argument("store_dir", type=click.Path(exists=True))
def serve(addr, store_dir):
    """Serve the read-only JSON API over a store."""
    import uvicorn

    from .delivery.api import create_app

    host, _, port = addr.partition(":")
    uvicorn.run(create_app(Store(store_dir)), host=host, port=int(port or 8000))


@main.group()
def persons():
    """Inspect person identities in a store."""


@persons.command("show")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.argument("person_id", type=int)
def persons_show(store_dir, person_id):
    store = Store(store_dir)
    record = store.persons().persons.get(person_id)
    if record is None:
        raise click.ClickException(f"unknown personId {person_id}")
    click.echo(json.dumps({
        "personId": record.person_id,
        "canonical": record.canonical,
        "variants": sorted(record.variants),
        "titles": sorted(record.titles),
        "encyclopediaUrls": record.encyclopedia_urls,
        "articleIds": record.article_ids,
        "clusterIds": record.cluster_ids,
    }, ensure_ascii=False, indent=1))


@persons.command("related")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--mode", default="frequent", type=click.Choice(["frequent", "specific"]))
@click.argument("person_id", type=int)
def persons_related(store_dir, mode, person_id):
    store = Store(store_dir)
    people = store.persons()
    for pid, score in related_persons(person_id, store.cooccurrence(), people, mode):
        click.echo(f"{pid}\t{people.persons[pid].canonical}\t{score:.2f}")


if __name__ == "__main__":
    main()
