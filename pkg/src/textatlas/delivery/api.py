"""Read-only JSON API over a persisted store."""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from ..entities import related_persons
from .store import Store


def _page(items: list, limit: int, offset: int) -> list:
    return items[offset : offset + limit]


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="textatlas", docs_url=None, redoc_url=None)

    @app.exception_handler(KeyError)
    async def missing(request: Request, exc: KeyError):
        return JSONResponse(status_code=404, content={"error": str(exc.args[0])})

    @app.exception_handler(ValueError)
    async def bad_request(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/runs")
    def runs(limit: int = Query(100, ge=1), offset: int = Query(0, ge=0)):
        return _page(store.run_records(), limit, offset)

    @app.get("/runs/{run_id}/clusters")
    def run_clusters(
        run_id: str,
        sort: str = Query("size"),
        limit: int = Query(100, ge=1),
        offset: int = Query(0, ge=0),
    ):
        clusters = store.clusters_of_run(run_id)
        if sort == "size":
            pass  # clusters_of_run already orders largest first
        elif sort == "related":
            # Group linked clusters next to each other, strongest link first.
            clusters.sort(
                key=lambda c: (
                    -max((l["score"] for l in c["links"]), default=0.0),
                    -c["size"],
                    c["clusterId"],
                )
            )
        else:
            raise ValueError(f"unknown sort {sort!r}")
        return _page(clusters, limit, offset)

    @app.get("/clusters/{cluster_id}")
    def cluster(cluster_id: str):
        return store.cluster(cluster_id)

    @app.get("/clusters/{cluster_id}/map")
    def cluster_map(cluster_id: str):
        return store.cluster_map(cluster_id)

    @app.get("/clusters/{cluster_id}/kwic")
    def cluster_kwic(cluster_id: str, term: str | None = Query(None)):
        return store.cluster_kwic(cluster_id, term)

    @app.get("/clusters/{cluster_id}/documents")
    def cluster_documents(cluster_id: str):
        record = store.cluster(cluster_id)
        docs = store.documents_of_run(record["runId"])
        members = set(record["members"])
        return [d for d in docs if d["id"] in members]

    def _person_payload(person_id: int) -> dict:
        persons = store.persons()
        if person_id not in persons.persons:
            raise KeyError(f"unknown personId {person_id}")
        record = persons.persons[person_id]
        cooc = store.cooccurrence()
        related = {
            mode: [
                {
                    "personId": pid,
                    "score": score,
                    "canonical": persons.persons[pid].canonical,
                }
                for pid, score in related_persons(person_id, cooc, persons, mode)
            ]
            for mode in ("frequent", "specific")
        }
        return {
            "personId": record.person_id,
            "canonical": record.canonical,
            "kind": record.kind,
            "variants": sorted(record.variants),
            "titles": sorted(record.titles),
            "encyclopediaUrls": record.encyclopedia_urls,
            "articleIds": record.article_ids,
            "clusterIds": record.cluster_ids,
            "related": related,
        }

    @app.get("/persons/{person_id}")
    def person(person_id: int):
        return _person_payload(person_id)

    @app.get("/persons/{person_id}/related")
    def person_related(person_id: int, mode: str = Query("frequent")):
        if mode not in ("frequent", "specific"):
            raise ValueError(f"unknown mode {mode!r}")
        return _person_payload(person_id)["related"][mode]

    @app.get("/search")
    def search(
        person: str | None = None,
        keyword: str | None = None,
        country: str | None = None,
        date: str | None = None,
    ):
        results = {}
        if person is not None:
            results["person"] = store.query("person", person)
        if keyword is not None:
            results["keyword"] = store.query("keyword", keyword)
        if country is not None:
            results["country"] = store.query("country", country)
        if date is not None:
            results["date"] = store.query("date", date)
        if not results:
            raise ValueError("provide at least one of person/keyword/country/date")
        return results

    return app
