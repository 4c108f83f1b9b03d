"""File-backed historical store over persisted pipeline runs.

The store keeps the raw run artifacts under runs/<runId>/ and derives all
query structures (person registry, co-occurrence network, postings
indexes, assembled cluster records, map layers) from them. The derived
state is a cache: it is rebuilt from the raw artifacts on every persist,
which makes re-persisting idempotent and the whole store reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import shutil
from collections import Counter
from pathlib import Path

from ..entities import CoOccurrenceStore, PersonStore, normalize_name
from ..geo import map_layer_from_records
from ..runio import RunDir
from ..xlink import fold_keyword

_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


class Store:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.runs_dir = self.root / "runs"
        self.derived_dir = self.root / "derived"

    # -- persistence -------------------------------------------------------

    def run_ids(self) -> list[str]:
        if not self.runs_dir.exists():
            return []
        metas = []
        for path in self.runs_dir.iterdir():
            meta = json.loads((path / "run.json").read_text(encoding="utf-8"))
            metas.append((meta.get("timestamp", ""), path.name))
        return [run_id for _, run_id in sorted(metas)]

    def persist_run(self, run_dir: str | Path | RunDir) -> str:
        run = run_dir if isinstance(run_dir, RunDir) else RunDir(run_dir)
        missing = run.missing_artifacts()
        if missing:
            raise ValueError(
                f"run {run.path} is incomplete, missing: {', '.join(missing)}"
            )
        run_id = run.run_id
        target = self.runs_dir / run_id
        if target.exists():
            return run_id  # idempotent re-persist
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        staging = self.root / f".staging-{run_id}"
        if staging.exists():
            shutil.rmtree(staging)
        staging.mkdir(parents=True)
        for name in ("run.json", *_artifact_names(run)):
            shutil.copy2(run.path / name, staging / name)
        os.replace(staging, target)
        self.rebuild()
        return run_id

    def rebuild(self) -> None:
        """Recompute all derived state from the committed runs."""
        tmp = self.root / ".derived-tmp"
        if tmp.exists():
            shutil.rmtree(tmp)
        (tmp / "clusters").mkdir(parents=True)
        (tmp / "maps").mkdir()
        (tmp / "kwic").mkdir()

        persons = PersonStore()
        cooc = CoOccurrenceStore()
        pid_map: dict[tuple[str, int], int] = {}
        index = {"person": {}, "keyword": {}, "country": {}, "date": {}}
        run_order = self.run_ids()
        cluster_run: dict[str, str] = {}

        for run_id in run_order:
            run = RunDir(self.runs_dir / run_id)
            meta = run.meta()
            names = run.read("names.json")
            clusters = run.read("clusters.json")["clusters"]
            places = run.read("places.json")
            terms = run.read("terms.json")

            for record in sorted(names["persons"], key=lambda r: r["personId"]):
                gid = self._merge_person(persons, record)
                pid_map[(run_id, record["personId"])] = gid

            doc_cluster = {
                doc_id: c["clusterId"] for c in clusters for doc_id in c["members"]
            }
            mention_pids: dict[str, set[int]] = {}
            cluster_pids: dict[str, set[int]] = {}
            for doc_id, mention_rows in names.get("mentions", {}).items():
                for row in mention_rows:
                    local = row.get("personId")
                    if local is None:
                        continue
                    gid = pid_map[(run_id, local)]
                    mention_pids.setdefault(doc_id, set()).add(gid)
                    cluster_id = doc_cluster.get(doc_id)
                    if cluster_id is not None:
                        cluster_pids.setdefault(cluster_id, set()).add(gid)
                        persons.record_mention(
                            gid, doc_id, cluster_id, row.get("trigger")
                        )
            cooc.update(run_id, cluster_pids)

            date = (meta.get("timestamp") or "")[:10]
            if date:
                index["date"].setdefault(date, [])
                if run_id not in index["date"][date]:
                    index["date"][date].append(run_id)

            for cluster in clusters:
                cid = cluster["clusterId"]
                cluster_run[cid] = run_id
                assembled = self._assemble_cluster(
                    run_id, meta, cluster, places, names, terms, pid_map
                )
                (tmp / "clusters" / f"{cid}.json").write_text(
                    json.dumps(assembled, ensure_ascii=False, indent=1, sort_keys=True),
                    encoding="utf-8",
                )
                member_mentions = [
                    r
                    for doc_id in cluster["members"]
                    for r in places.get("mentions", {}).get(doc_id, [])
                ]
                (tmp / "maps" / f"{cid}.geojson").write_text(
                    json.dumps(map_layer_from_records(member_mentions), indent=1),
                    encoding="utf-8",
                )
                (tmp / "kwic" / f"{cid}.json").write_text(
                    json.dumps(
                        terms.get("kwic", {}).get(cid, {}),
                        ensure_ascii=False, indent=1, sort_keys=True,
                    ),
                    encoding="utf-8",
                )
                for term, _ in assembled["keywords"]:
                    index["keyword"].setdefault(fold_keyword(term), []).append(cid)
                for row in assembled["countries"]:
                    index["country"].setdefault(row["code"], []).append(cid)

        for pid, record in persons.persons.items():
            index["person"][str(pid)] = {
                "clusters": record.cluster_ids,
                "articles": record.article_ids,
            }

        (tmp / "persons.json").write_text(
            json.dumps(persons.to_json(), ensure_ascii=False, indent=1, sort_keys=True),
            encoding="utf-8",
        )
        (tmp / "cooccurrence.json").write_text(
            json.dumps(cooc.to_json(), indent=1), encoding="utf-8"
        )
        (tmp / "index.json").write_text(
            json.dumps(
                {"runOrder": run_order, "clusterRun": cluster_run, **index},
                ensure_ascii=False, indent=1, sort_keys=True,
            ),
            encoding="utf-8",
        )
        if self.derived_dir.exists():
            shutil.rmtree(self.derived_dir)
        os.replace(tmp, self.derived_dir)

    @staticmethod
    def _merge_person(persons: PersonStore, record: dict) -> int:
        variants = set(record["variants"])
        matched = sorted(
            {
                persons.variant_index[normalize_name(v)]
                for v in variants
                if normalize_name(v) in persons.variant_index
            }
        )
        if matched:
            keep = persons.persons[matched[0]]
            for other in matched[1:]:
                persons._absorb(keep, persons.persons[other])
            keep.variants |= variants
            keep.titles |= set(record.get("titles", []))
            from ..entities import canonical_variant

            keep.canonical = canonical_variant(keep.variants)
            for v in variants:
                persons.variant_index[normalize_name(v)] = keep.person_id
            return keep.person_id
        minted = persons._mint(variants, record.get("kind", "person"))
        minted.titles |= set(record.get("titles", []))
        return minted.person_id

    def _assemble_cluster(
        self, run_id, meta, cluster, places, names, terms, pid_map
    ) -> dict:
        members = cluster["members"]
        country_counts: Counter = Counter()
        for doc_id in members:
            for row in places.get("countries", {}).get(doc_id, []):
                country_counts[row["code"]] += row["rawCount"]
        keyness_by_code = dict(
            (code, value) for code, value in cluster.get("countryKeyness", [])
        )
        countries = [
            {
                "code": code,
                "rawCount": count,
                "keyness": keyness_by_code.get(code, 0.0),
            }
            for code, count in sorted(
                country_counts.items(), key=lambda kv: (-kv[1], kv[0])
            )
        ]

        mention_count: Counter = Counter()
        trigger_for: dict[int, str] = {}
        for doc_id in members:
            for row in names.get("mentions", {}).get(doc_id, []):
                local = row.get("personId")
                if local is None:
                    continue
                gid = pid_map[(run_id, local)]
                mention_count[gid] += 1
                if row.get("trigger") and gid not in trigger_for:
                    trigger_for[gid] = row["trigger"]
        persons_json = {p["personId"]: p for p in names["persons"]}
        local_by_gid = {}
        for (rid, local), gid in pid_map.items():
            if rid == run_id:
                local_by_gid.setdefault(gid, local)
        name_rows = [
            {
                "personId": gid,
                "surface": persons_json[local_by_gid[gid]]["canonical"],
                "trigger": trigger_for.get(gid),
            }
            for gid, _ in sorted(
                mention_count.items(), key=lambda kv: (-kv[1], kv[0])
            )
        ]

        term_rows = [
            {
                "termId": hit["termId"],
                "count": hit["count"],
                "forms": hit["forms"],
                "displayForm": hit.get("displayForm", ""),
                "subjectField": hit.get("subjectField"),
            }
            for hit in terms.get("terms", {}).get(cluster["clusterId"], [])
        ]

        links = []
        if (self.runs_dir / run_id / "links.json").exists():
            data = json.loads(
                (self.runs_dir / run_id / "links.json").read_text(encoding="utf-8")
            )
            for link in data.get("links", []):
                if cluster["clusterId"] in (link["clusterA"], link["clusterB"]):
                    other = (
                        link["clusterB"]
                        if link["clusterA"] == cluster["clusterId"]
                        else link["clusterA"]
                    )
                    links.append({"cluster": other, "score": link["score"]})
        links.sort(key=lambda l: (-l["score"], l["cluster"]))

        return {
            "schemaVersion": 1,
            "clusterId": cluster["clusterId"],
            "runId": run_id,
            "language": meta.get("language", ""),
            "title": cluster["title"],
            "size": len(members),
            "members": members,
            "centroidDocId": cluster.get("centroidDocId"),
            "keywords": [[term, value] for term, value in cluster["keywords"]],
            "countries": countries,
            "names": name_rows,
            "terms": term_rows,
            "links": links,
        }

    # -- reads -------------------------------------------------------------

    def _derived(self, *parts) -> Path:
        return self.derived_dir.joinpath(*parts)

    def _index(self) -> dict:
        return json.loads(self._derived("index.json").read_text(encoding="utf-8"))

    def persons(self) -> PersonStore:
        return PersonStore.from_json(
            json.loads(self._derived("persons.json").read_text(encoding="utf-8"))
        )

    def cooccurrence(self) -> CoOccurrenceStore:
        return CoOccurrenceStore.from_json(
            json.loads(self._derived("cooccurrence.json").read_text(encoding="utf-8"))
        )

    def run_record(self, run_id: str) -> dict:
        path = self.runs_dir / run_id / "run.json"
        if not path.exists():
            raise KeyError(f"unknown runId {run_id!r}")
        meta = json.loads(path.read_text(encoding="utf-8"))
        index = self._index()
        cluster_ids = sorted(
            cid for cid, rid in index["clusterRun"].items() if rid == run_id
        )
        return {
            "runId": run_id,
            "timestamp": meta.get("timestamp"),
            "language": meta.get("language"),
            "clusterIds": cluster_ids,
            "documentCount": meta.get("documentCount", 0),
            "resources": meta.get("resources", {}),
        }

    def run_records(self) -> list[dict]:
        return [self.run_record(run_id) for run_id in self.run_ids()]

    def cluster(self, cluster_id: str) -> dict:
        path = self._derived("clusters", f"{cluster_id}.json")
        if not path.exists():
            raise KeyError(f"unknown clusterId {cluster_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def clusters_of_run(self, run_id: str) -> list[dict]:
        records = [
            self.cluster(cid) for cid in self.run_record(run_id)["clusterIds"]
        ]
        records.sort(key=lambda c: (-c["size"], c["clusterId"]))
        return records

    def cluster_map(self, cluster_id: str) -> dict:
        path = self._derived("maps", f"{cluster_id}.geojson")
        if not path.exists():
            raise KeyError(f"unknown clusterId {cluster_id!r}")
        return json.loads(path.read_text(encoding="utf-8"))

    def cluster_kwic(self, cluster_id: str, term_id: str | None = None):
        path = self._derived("kwic", f"{cluster_id}.json")
        if not path.exists():
            raise KeyError(f"unknown clusterId {cluster_id!r}")
        data = json.loads(path.read_text(encoding="utf-8"))
        if term_id is None:
            return data
        return data.get(term_id, [])

    def documents_of_run(self, run_id: str) -> list[dict]:
        run = RunDir(self.runs_dir / run_id)
        return run.read("documents.json")["documents"]

    def _newest_first(self, cluster_ids: list[str]) -> list[str]:
        index = self._index()
        order = {rid: i for i, rid in enumerate(index["runOrder"])}
        unique = sorted(set(cluster_ids))
        unique.sort(key=lambda cid: (-order.get(index["clusterRun"].get(cid), -1), cid))
        return unique

    def query(self, kind: str, key: str) -> dict:
        """Postings for a person/keyword/country/date query."""
        index = self._index()
        if kind == "person":
            persons = self.persons()
            record = None
            if key.isdigit() and int(key) in persons.persons:
                record = persons.persons[int(key)]
            else:
                record = persons.resolve(key)
            if record is None:
                return {"clusters": [], "articles": []}
            postings = index["person"].get(str(record.person_id), {})
            return {
                "personId": record.person_id,
                "clusters": self._newest_first(postings.get("clusters", [])),
                "articles": sorted(postings.get("articles", [])),
            }
        if kind == "keyword":
            return {"clusters": self._newest_first(index["keyword"].get(fold_keyword(key), []))}
        if kind == "country":
            return {"clusters": self._newest_first(index["country"].get(key.upper(), []))}
        if kind == "date":
            if not _DATE_RE.match(key):
                raise ValueError(f"malformed date {key!r}, expected YYYY-MM-DD")
            return {"runs": index["date"].get(key, [])}
        raise ValueError(f"unknown query kind {kind!r}")

    def state_hash(self) -> str:
        """Content hash over every file in the store."""
        digest = hashlib.sha256()
        for path in sorted(self.root.rglob("*")):
            if path.is_file():
                digest.update(str(path.relative_to(self.root)).encode())
                digest.update(path.read_bytes())
        return digest.hexdigest()


def _artifact_names(run: RunDir) -> list[str]:
    from ..runio import OPTIONAL_ARTIFACTS, REQUIRED_ARTIFACTS

    names = list(REQUIRED_ARTIFACTS)
    names.extend(name for name in OPTIONAL_ARTIFACTS if run.has(name))
    return names
