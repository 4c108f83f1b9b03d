"""Run-directory pipeline stages wired together by the CLI."""

from __future__ import annotations

import logging
from collections import Counter
from pathlib import Path

from . import clustering, corpus, entities, geo, keyness, terms as terms_mod, xlink
from .runio import RunDir, file_hash

log = logging.getLogger(__name__)


def ingest(
    input_path: str | Path, fmt: str, run_path: str | Path, run_id: str | None = None
) -> corpus.LoadResult:
    source_format = {"txt": "plaintext-dir", "rss": "rss"}.get(fmt, fmt)
    result = corpus.load_collection(input_path, source_format)
    for warning in result.warnings:
        log.warning("%s", warning)
    run = RunDir(run_path)
    if run_id:
        run.update_meta(runId=run_id)
    run.save_documents(result.documents)
    return result


def dedup(
    run_path: str | Path, threshold: float = 0.5, remove: bool = False
) -> list[tuple[str, str, float]]:
    run = RunDir(run_path)
    docs = run.load_documents()
    pairs = corpus.find_near_duplicates(docs, threshold)
    removed = []
    if remove and pairs:
        kept = corpus.remove_duplicates(docs, pairs)
        removed = sorted({d.id for d in docs} - {d.id for d in kept})
        run.save_documents(kept)
    run.write(
        "duplicates.json",
        {
            "threshold": threshold,
            "pairs": [[a, b, ratio] for a, b, ratio in pairs],
            "removed": removed,
        },
    )
    return pairs


def keywords_stage(
    run_path: str | Path,
    model_path: str | Path,
    stoplist_path: str | Path | None = None,
    top: int = keyness.DEFAULT_TOP_K,
) -> None:
    run = RunDir(run_path)
    docs = run.load_documents()
    stop = keyness.load_stop_list(stoplist_path) if stoplist_path else frozenset()
    models: dict[str, keyness.FrequencyModel] = {}
    out = {}
    for doc in docs:
        model = models.get(doc.language)
        if model is None:
            model = keyness.load_frequency_model(model_path, doc.language)
            models[doc.language] = model
        vector = keyness.extract_keywords(doc, model, stop, top)
        out[doc.id] = [[t, v] for t, v in vector.ranked()]
    run.write("keywords.json", {"keywords": out})
    run.update_meta(resources={"frequencyModel": file_hash(model_path)})


def names_stage(
    run_path: str | Path,
    triggers_path: str | Path | None = None,
    known_path: str | Path | None = None,
    corrections_path: str | Path | None = None,
    threshold: float = entities.DEFAULT_SIMILARITY_THRESHOLD,
) -> entities.PersonStore:
    run = RunDir(run_path)
    docs = run.load_documents()
    triggers = entities.load_triggers(triggers_path) if triggers_path else []
    known = entities.load_known_names(known_path) if known_path else {}

    mention_rows: dict[str, list[dict]] = {}
    all_mentions: list[entities.NameMention] = []
    for doc in docs:
        mentions = entities.recognize_names(doc, known, triggers)
        all_mentions.extend(mentions)
        mention_rows[doc.id] = [
            {
                "offset": m.offset,
                "length": m.length,
                "surface": m.surface,
                "trigger": m.trigger,
                "kind": m.kind,
            }
            for m in mentions
        ]

    store = entities.PersonStore()
    surfaces = sorted({m.surface for m in all_mentions})
    if surfaces:
        store.merge_variants(surfaces, threshold)
    if corrections_path:
        store.apply_corrections(
            Path(corrections_path).read_text(encoding="utf-8").splitlines()
        )
    for doc_id, rows in mention_rows.items():
        for row in rows:
            record = store.resolve(row["surface"])
            row["personId"] = record.person_id if record else None
            if record and row["trigger"]:
                record.titles.add(row["trigger"])
            if record and row["kind"] == "organisation":
                record.kind = "organisation"

    resources = {}
    if triggers_path:
        resources["triggers"] = file_hash(triggers_path)
    if known_path:
        resources["knownNames"] = file_hash(known_path)
    run.write(
        "names.json",
        {"persons": store.to_json(), "mentions": mention_rows, "threshold": threshold},
    )
    run.update_meta(resources=resources)
    return store


def geotag_stage(
    run_path: str | Path,
    gazetteer_path: str | Path,
    country_model_path: str | Path | None = None,
    triggers_path: str | Path | None = None,
) -> None:
    run = RunDir(run_path)
    docs = run.load_documents()
    gazetteer = geo.load_gazetteer(gazetteer_path)
    triggers = entities.load_triggers(triggers_path) if triggers_path else []
    country_model = None
    if country_model_path:
        entries = {}
        for line in Path(country_model_path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                code, rate = line.split("\t")
                entries[code] = float(rate)
        country_model = geo.CountryFrequencyModel(entries)

    name_tokens_by_doc: dict[str, set[str]] = {}
    if run.has("names.json"):
        for doc_id, rows in run.read("names.json").get("mentions", {}).items():
            tokens = set()
            for row in rows:
                tokens.update(row["surface"].split())
            name_tokens_by_doc[doc_id] = tokens

    mentions_out = {}
    countries_out = {}
    for doc in docs:
        mentions = geo.spot_places(
            doc, gazetteer, triggers, name_tokens_by_doc.get(doc.id, set())
        )
        mentions_out[doc.id] = geo.mention_records(mentions, gazetteer)
        scores = geo.country_scores(mentions, doc, country_model, gazetteer)
        countries_out[doc.id] = [
            {"code": s.country_code, "rawCount": s.raw_count, "keyness": s.keyness}
            for s in scores
        ]
    run.write("places.json", {"mentions": mentions_out, "countries": countries_out})
    run.update_meta(resources={"gazetteer": file_hash(gazetteer_path)})


def cluster_stage(
    run_path: str | Path,
    threshold: float = clustering.DEFAULT_CLUSTER_THRESHOLD,
    linkage: str = "average",
) -> list[clustering.Cluster]:
    run = RunDir(run_path)
    docs = run.load_documents()
    keyword_data = run.read("keywords.json")["keywords"]
    places = run.read("places.json") if run.has("places.json") else {}
    titles = {d.id: d.title for d in docs}

    vectors_by_language: dict[str, list[clustering.DocVector]] = {}
    keyword_vectors: dict[str, keyness.KeywordVector] = {}
    for doc in docs:
        kv = keyness.KeywordVector(
            doc.id, {t: v for t, v in keyword_data.get(doc.id, [])}
        )
        keyword_vectors[doc.id] = kv
        scores = [
            geo.CountryScore(doc.id, row["code"], row["rawCount"], row["keyness"])
            for row in places.get("countries", {}).get(doc.id, [])
        ]
        vector = clustering.build_vector(kv, scores)
        if vector is not None:
            vectors_by_language.setdefault(doc.language, []).append(vector)

    finalized: list[clustering.Cluster] = []
    for language in sorted(vectors_by_language):
        vectors = vectors_by_language[language]
        groups = clustering.cluster_members(vectors, threshold, linkage)
        by_id = {v.doc_id: v for v in vectors}
        for group in groups:
            finalized.append(
                clustering.finalize_cluster(
                    "?", [by_id[d] for d in group], titles, keyword_vectors
                )
            )
    finalized.sort(key=lambda c: (-c.size, c.centroid_doc_id))
    run_id = run.run_id
    for i, cluster in enumerate(finalized, start=1):
        cluster.cluster_id = f"{run_id}-c{i}"

    run.write(
        "clusters.json",
        {
            "threshold": threshold,
            "clusters": [
                {
                    "clusterId": c.cluster_id,
                    "title": c.title,
                    "centroidDocId": c.centroid_doc_id,
                    "members": c.member_doc_ids,
                    "keywords": [[t, v] for t, v in c.keywords],
                    "countryKeyness": [[code, v] for code, v in c.countries],
                }
                for c in finalized
            ],
        },
    )
    return finalized


def terms_stage(run_path: str | Path, term_list_path: str | Path) -> None:
    run = RunDir(run_path)
    docs = {d.id: d for d in run.load_documents()}
    term_list = terms_mod.load_term_list(term_list_path)
    clusters = run.read("clusters.json")["clusters"]
    hits_out = {}
    kwic_out = {}
    for cluster in clusters:
        cid = cluster["clusterId"]
        members = [docs[d] for d in cluster["members"] if d in docs]
        hits = terms_mod.match_terms(cid, members, term_list)
        hits_out[cid] = [
            {
                "termId": h.term_id,
                "count": h.count,
                "perDoc": h.per_doc,
                "forms": h.matched_forms,
                "displayForm": h.display_form,
                "subjectField": h.subject_field,
            }
            for h in hits
        ]
        kwic_out[cid] = {
            h.term_id: [
                {
                    "docId": k.doc_id,
                    "termId": k.term_id,
                    "matchedForm": k.matched_form,
                    "offset": k.offset,
                    "left": k.left,
                    "right": k.right,
                }
                for k in terms_mod.kwic(h.term_id, members, term_list)
            ]
            for h in hits
        }
    run.write("terms.json", {"terms": hits_out, "kwic": kwic_out})
    run.update_meta(resources={"termList": file_hash(term_list_path)})


def _joint_person_map(
    runs: list[RunDir], threshold: float = entities.DEFAULT_SIMILARITY_THRESHOLD
) -> dict[tuple[str, int], int]:
    """Map (runId, local personId) to a joint cross-run identity id."""
    variant_owner: dict[str, list[tuple[str, int]]] = {}
    for run in runs:
        for person in run.read("names.json")["persons"]:
            for variant in person["variants"]:
                variant_owner.setdefault(variant, []).append(
                    (run.run_id, person["personId"])
                )
    all_variants = sorted(variant_owner)
    mapping: dict[tuple[str, int], int] = {}
    for joint_id, group in enumerate(
        entities.variant_groups(all_variants, threshold), start=1
    ):
        for variant in group:
            for key in variant_owner[variant]:
                mapping[key] = joint_id
    return mapping


def run_signatures(
    run: RunDir, joint: dict[tuple[str, int], int]
) -> list[xlink.ClusterSignature]:
    clusters = run.read("clusters.json")["clusters"]
    names = run.read("names.json")
    language = run.meta().get("language", "")
    run_id = run.run_id
    signatures = []
    for cluster in clusters:
        members = set(cluster["members"])
        name_counts: Counter = Counter()
        for doc_id, rows in names.get("mentions", {}).items():
            if doc_id not in members:
                continue
            for row in rows:
                if row.get("personId") is not None:
                    name_counts[joint[(run_id, row["personId"])]] += 1
        sig = xlink.signature(
            cluster["clusterId"],
            language,
            dict(cluster.get("countryKeyness", [])),
            dict(name_counts),
            {t: v for t, v in cluster["keywords"]},
        )
        if sig is None:
            log.info("cluster %s has no facets; skipped from linking", cluster["clusterId"])
            continue
        signatures.append(sig)
    return signatures


def xlink_stage(
    run_a_path: str | Path,
    run_b_path: str | Path,
    threshold: float = xlink.DEFAULT_LINK_THRESHOLD,
    weights: dict[str, float] | None = None,
) -> list[xlink.CrossLink]:
    run_a, run_b = RunDir(run_a_path), RunDir(run_b_path)
    joint = _joint_person_map([run_a, run_b])
    links = xlink.link_clusters(
        run_signatures(run_a, joint), run_signatures(run_b, joint), threshold, weights
    )
    payload = {
        "threshold": threshold,
        "links": [
            {"clusterA": l.cluster_a, "clusterB": l.cluster_b, "score": l.score}
            for l in links
        ],
    }
    for run in (run_a, run_b):
        existing = run.read("links.json").get("links", []) if run.has("links.json") else []
        merged = {(
            row["clusterA"], row["clusterB"]
        ): row for row in existing}
        for row in payload["links"]:
            merged[(row["clusterA"], row["clusterB"])] = row
        run.write(
            "links.json",
            {
                "threshold": threshold,
                "links": sorted(
                    merged.values(), key=lambda r: (-r["score"], r["clusterA"])
                ),
            },
        )
    return links
