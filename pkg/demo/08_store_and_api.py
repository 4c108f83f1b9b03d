"""From raw text files to a queryable store and a read-only HTTP API.

Runs the whole pipeline over a tiny collection, persists the run into a
store, asks the store a few questions and finally exercises the HTTP
endpoints in-process.
"""

from pathlib import Path
from tempfile import TemporaryDirectory

from fastapi.testclient import TestClient

from textatlas import pipeline
from textatlas.delivery.api import create_app
from textatlas.delivery.store import Store

DOCS = [
    ("d1.txt", "Reactor restart confirmed",
     "North Korea has restarted the plutonium programme at its nuclear "
     "reactor. Director General Mohammed ElBaradei said the plutonium "
     "programme must freeze under agency inspections."),
    ("d2.txt", "Inspectors demand a freeze",
     "Inspectors quoted Mohamed El Baradei on the reactor freeze in "
     "North Korea. The plutonium programme and the nuclear reactor stay "
     "under watch while the freeze holds."),
]

FREQ = [("the", 60000), ("of", 30000), ("and", 28000), ("in", 20000),
        ("a", 21000), ("has", 8000), ("said", 2000), ("at", 9000),
        ("its", 3000), ("programme", 30), ("nuclear", 50), ("reactor", 5),
        ("freeze", 8)]
GAZ = [("KP", "country", "KP", "40.3", "127.5", "3", "en", "North Korea", "North Korea")]
TRIGGERS = [("en", "before", "title", "director general"),
            ("en", "before", "verbal", "quoted")]
TERMS = [("plutonium-en", "en", "plutonium", "|s", "plutonium", "nuclear fuel", "")]


def tsv(path: Path, rows) -> Path:
    path.write_text("".join("\t".join(map(str, r)) + "\n" for r in rows))
    return path


with TemporaryDirectory() as tmp:
    base = Path(tmp)
    src = base / "src"
    src.mkdir()
    manifest = []
    for filename, title, body in DOCS:
        (src / filename).write_text(body, encoding="utf-8")
        manifest.append((filename, "en", "demo-wire", "2026-08-20", title))
    tsv(src / "manifest.tsv", manifest)

    run = base / "day-run"
    pipeline.ingest(src, "txt", run, run_id="day-run")
    pipeline.dedup(run)
    pipeline.keywords_stage(run, tsv(base / "freq.tsv", FREQ))
    pipeline.names_stage(run, tsv(base / "triggers.tsv", TRIGGERS))
    pipeline.geotag_stage(run, tsv(base / "gaz.tsv", GAZ),
                          triggers_path=base / "triggers.tsv")
    pipeline.cluster_stage(run)
    pipeline.terms_stage(run, tsv(base / "terms.tsv", TERMS))

    store = Store(base / "store")
    store.persist_run(run)
    print("persisted runs:", store.run_ids())
    print("state hash:", store.state_hash()[:16], "…")

    record = store.run_record("day-run")
    print("\nclusters in the run:")
    for cid in record["clusterIds"]:
        cluster = store.cluster(cid)
        print(f"  {cid}: {cluster['title']!r} with {cluster['size']} document(s)")

    hit = store.query("keyword", "plutonium")
    print("\nclusters mentioning 'plutonium':", hit["clusters"])

    app = create_app(store)
    client = TestClient(app)
    print("\nHTTP walk:")
    runs = client.get("/runs").json()
    print("  GET /runs ->", [r["runId"] for r in runs])
    cid = runs[0]["clusterIds"][0]
    kwic = client.get(f"/clusters/{cid}/kwic", params={"term": "plutonium-en"})
    print(f"  GET /clusters/{cid}/kwic -> {len(kwic.json())} concordance lines")
    person = client.get("/persons/1").json()
    print("  GET /persons/1 ->", person["canonical"],
          f"({len(person['variants'])} spellings)")
    missing = client.get("/clusters/nope")
    print("  GET /clusters/nope ->", missing.status_code)
