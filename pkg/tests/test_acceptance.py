"""Acceptance gate: one check (and one PASS/FAIL line) per shipped guarantee.

Every test prints a single verdict line so the suite doubles as a
human-readable acceptance report:

    pytest tests/test_acceptance.py -s
"""

import json
import random
from pathlib import Path

import jsonschema
import pytest

from fixture_corpus import TABLE2_VARIANTS
from oracles import (
    brute_force_average_linkage,
    brute_force_duplicates,
    centroid_doc_oracle,
    keyness_oracle,
    scan_count,
    sparse_cosine,
    weighted_facet_similarity,
)
from textatlas.clustering import DocVector, cluster_members, cosine, finalize_cluster
from textatlas.corpus import Document, find_near_duplicates, overlap_ratio, pentagrams
from textatlas.delivery.report import render_html, run_report
from textatlas.delivery.store import Store
from textatlas.entities import variant_groups
from textatlas.keyness import FrequencyModel, extract_keywords, keyness
from textatlas.terms import TermEntry, kwic, load_term_list, match_terms
from textatlas.xlink import DEFAULT_FACET_WEIGHTS, ClusterSignature, link_clusters

SCHEMA_PATH = (
    Path(__file__).resolve().parents[1]
    / "src" / "textatlas" / "delivery" / "schemas" / "run.schema.json"
)


def verdict(ok: bool, label: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {label}")
    assert ok, label


def doc(doc_id, body, language="en"):
    return Document(id=doc_id, source="t", language=language, title=doc_id, body=body)


def test_duplicate_detection():
    # A constructed pair with exactly 50% pentagram overlap is flagged at
    # the 0.5 threshold (inclusive).
    a = doc("a", "w1 w2 w3 w4 w5 w6")
    b = doc("b", "w1 w2 w3 w4 w5 x6")
    boundary_ok = (
        overlap_ratio(pentagrams(a), pentagrams(b)) == 0.5
        and find_near_duplicates([a, b], 0.5) == [("a", "b", 0.5)]
    )

    # All-pairs results equal the brute-force oracle on 20 documents.
    rng = random.Random(7)
    vocab = [f"tok{i}" for i in range(30)]
    docs = [doc(f"d{i:02d}", " ".join(rng.choice(vocab) for _ in range(40)))
            for i in range(14)]
    for i in range(6):
        words = docs[i].body.split()
        cut = rng.randint(10, 35)
        docs.append(doc(
            f"r{i:02d}",
            " ".join(words[:cut] + [rng.choice(vocab) for _ in range(40 - cut)]),
        ))
    expected = brute_force_duplicates({d.id: d.body for d in docs}, 0.5)
    got = find_near_duplicates(docs, 0.5)
    oracle_ok = [(x, y) for x, y, _ in got] == [(x, y) for x, y, _ in expected] and all(
        abs(r1 - r2) < 1e-12 for (_, _, r1), (_, _, r2) in zip(got, expected)
    )
    verdict(boundary_ok and oracle_ok,
            "duplicate detection: 50% boundary flagged; 20-doc oracle match")


def test_keyword_keyness():
    model = FrequencyModel("en", {"w": 1000.0}, 1_000_000, 0.01)
    zero_ok = abs(keyness("w", 1, 1000, model)) <= 1e-9

    sweep_model = FrequencyModel("en", {"w": 5.0}, 1_000_000, 0.01)
    sweep = [keyness("w", c, 10_000, sweep_model) for c in range(1, 21)]
    monotone_ok = all(b > a for a, b in zip(sweep, sweep[1:]))

    rank_model = FrequencyModel(
        "en", {"the": 60000.0, "reactor": 5.0, "uranium": 2.0, "talks": 50.0},
        1_000_000, 0.01,
    )
    ranking_ok = True
    for body in [
        "the reactor reactor uranium talks",
        "uranium uranium uranium the the talks",
        "the the the the reactor",
        "talks talks talks reactor uranium the",
        "reactor uranium reactor uranium reactor",
    ]:
        d = doc("d", body)
        counts = {}
        for t in d.tokens:
            counts[t.lowercase] = counts.get(t.lowercase, 0) + 1
        expected = {
            w: keyness_oracle(c, len(d.tokens), rank_model.rate(w))
            for w, c in counts.items()
        }
        expected_ranked = sorted(
            ((w, v) for w, v in expected.items() if v > 0),
            key=lambda kv: (-kv[1], kv[0]),
        )
        got = extract_keywords(d, rank_model).ranked()
        ranking_ok = ranking_ok and [w for w, _ in got] == [w for w, _ in expected_ranked]
    verdict(zero_ok and monotone_ok and ranking_ok,
            "keyness: zero at O=E; monotone sweep; oracle ranking on 5 docs")


def test_country_reference_counting(fixture_world):
    places = json.loads(
        (fixture_world["en_run"] / "places.json").read_text(encoding="utf-8")
    )
    fr = [c for c in places["countries"]["en-b1.txt"] if c["code"] == "FR"]
    verdict(bool(fr) and fr[0]["rawCount"] == 4,
            "geo: France+Paris+Lyon+Tours document counts 4 FR references")


def test_document_clustering():
    vectors = [
        DocVector("a1", {"w:nuclear": 10.0, "w:reactor": 9.0}),
        DocVector("a2", {"w:nuclear": 9.0, "w:reactor": 10.0, "w:freeze": 1.0}),
        DocVector("b1", {"w:farm": 10.0, "w:grain": 8.0}),
        DocVector("b2", {"w:farm": 8.0, "w:grain": 10.0, "w:talks": 1.0}),
    ]
    by_id = {v.doc_id: v for v in vectors}
    separation_ok = (
        cosine(by_id["a1"], by_id["a2"]) > 0.8
        and cosine(by_id["b1"], by_id["b2"]) > 0.8
        and cosine(by_id["a1"], by_id["b1"]) < 0.2
        and cosine(by_id["a2"], by_id["b2"]) < 0.2
    )
    two_group_ok = cluster_members(vectors, 0.5) == [["a1", "a2"], ["b1", "b2"]]

    oracle_ok = True
    dims = "pqrstuv"
    for seed in range(10):
        rng = random.Random(seed)
        n = rng.randint(2, 10)
        rand = [
            DocVector(f"d{i}", {
                f"w:{d}": rng.uniform(0.5, 20.0)
                for d in rng.sample(dims, rng.randint(1, 4))
            })
            for i in range(n)
        ]
        expected = brute_force_average_linkage(
            {v.doc_id: v.entries for v in rand}, 0.5
        )
        oracle_ok = oracle_ok and cluster_members(rand, 0.5) == expected

        group = rand[: max(2, n // 2)]
        centroid = finalize_cluster(
            "c", group, {v.doc_id: v.doc_id for v in group},
            {v.doc_id: _keyword_vector(v) for v in group},
        ).centroid_doc_id
        oracle_ok = oracle_ok and centroid == centroid_doc_oracle(
            {v.doc_id: v.entries for v in group}
        )

    a, b = vectors[0], vectors[2]
    scaled = DocVector("a1", {k: v * 987.65 for k, v in a.entries.items()})
    scale_ok = abs(cosine(a, b) - cosine(scaled, b)) <= 1e-9
    verdict(separation_ok and two_group_ok and oracle_ok and scale_ok,
            "clustering: 2-group fixture; <=10-doc oracle; centroid scan; scale invariance")


def _keyword_vector(v):
    from textatlas.keyness import KeywordVector

    return KeywordVector(v.doc_id, {k[2:]: w for k, w in v.entries.items()})


def test_name_variant_merging():
    groups = variant_groups(TABLE2_VARIANTS)
    one_identity_ok = len(groups) == 1 and groups[0] == set(TABLE2_VARIANTS)

    mixed = TABLE2_VARIANTS + ["John Smith", "Angela Merkel"]
    separate_ok = len(variant_groups(mixed)) == 3

    sizes = [len(variant_groups(mixed, t)) for t in (0.6, 0.75, 0.9)]
    monotone_ok = sizes == sorted(sizes)
    verdict(one_identity_ok and separate_ok and monotone_ok,
            "names: 12 spellings merge to one identity; unrelated split; monotone thresholds")


def test_term_matching(fixture_world):
    terms = json.loads(
        (fixture_world["en_run"] / "terms.json").read_text(encoding="utf-8")
    )
    hits = {t["termId"]: t for t in terms["terms"]["en-run-c1"]}
    count_ok = hits["plutonium-en"]["count"] == 7
    kwic_ok = len(terms["kwic"]["en-run-c1"]["plutonium-en"]) == 7

    russian = TermEntry(
        "centrifuge-ru", "ru", "центрифуг",
        sorted(set("а|и|е|е|ой|у|ам|ами|ах|".split("|"))), "центрифуга",
    )
    slovene = TermEntry(
        "centrifuga-sl", "sl", "centrifug",
        ["a", "i", "o", "", "ama", "ah", "am", "ami"], "centrifuga",
    )
    forms_ok = russian.expansions == frozenset({
        "центрифуга", "центрифуги", "центрифуге", "центрифугой", "центрифугу",
        "центрифугам", "центрифуг", "центрифугами", "центрифугах",
    }) and slovene.expansions == frozenset({
        "centrifuga", "centrifugi", "centrifugo", "centrifug",
        "centrifugama", "centrifugah", "centrifugam", "centrifugami",
    })

    docs = json.loads(
        (fixture_world["en_run"] / "documents.json").read_text(encoding="utf-8")
    )["documents"]
    body_by_id = {d["id"]: d["body"] for d in docs}
    clusters = json.loads(
        (fixture_world["en_run"] / "clusters.json").read_text(encoding="utf-8")
    )["clusters"]
    members = {c["clusterId"]: c["members"] for c in clusters}
    term_list = load_term_list(fixture_world["resources"]["terms"])
    forms_by_id = {t.term_id: set(t.expansions) for t in term_list}
    scan_ok = True
    for cid, hit_list in terms["terms"].items():
        text = " . ".join(body_by_id[m] for m in members[cid])
        for hit in hit_list:
            if hit["termId"] == "uranium-en":
                # A plain "uranium" scan would also count the positions the
                # longer "natural uranium" term consumed; subtract those.
                expected = scan_count(
                    text, forms_by_id["uranium-en"] | forms_by_id["natural-uranium-en"]
                ) - scan_count(text, forms_by_id["natural-uranium-en"])
            else:
                expected = scan_count(text, forms_by_id[hit["termId"]])
            scan_ok = scan_ok and hit["count"] == expected
    verdict(count_ok and kwic_ok and forms_ok and scan_ok,
            "terms: plutonium count 7 with 7 KWIC lines; suffix form lists; scan oracle")


def test_cluster_keyword_averaging():
    members = [
        DocVector("d1", {"w:alpha": 10.0, "w:beta": 2.0}),
        DocVector("d2", {"w:alpha": 8.0, "w:gamma": 4.0}),
        DocVector("d3", {"w:alpha": 9.0, "w:beta": 1.0}),
    ]
    cluster = finalize_cluster(
        "c", members, {v.doc_id: v.doc_id for v in members},
        {v.doc_id: _keyword_vector(v) for v in members},
    )
    got = dict(cluster.keywords)
    ok = (
        abs(got["alpha"] - 27.0 / 3) <= 1e-12
        and abs(got["beta"] - 3.0 / 3) <= 1e-12
        and abs(got["gamma"] - 4.0 / 3) <= 1e-12
    )
    verdict(ok, "cluster keywords: zero-filled arithmetic mean to 1e-12")


def test_cross_lingual_linking(fixture_world):
    fixture_ok = any(
        (l.cluster_a, l.cluster_b) == ("en-run-c1", "es-run-c1")
        for l in fixture_world["links"]
    )

    rng = random.Random(3)
    countries = ["FR", "KP", "IR", "US", "IT"]
    run_a = [
        ClusterSignature(
            f"en-c{i}", "en",
            {countries[i]: rng.uniform(1, 10),
             countries[(i + 1) % 5]: rng.uniform(0.1, 2)},
            {i + 1: rng.uniform(1, 5)},
            {f"topic{i}": 1.0},
        )
        for i in range(5)
    ]
    run_b = [
        ClusterSignature(
            f"es-c{i}", "es",
            {countries[i]: rng.uniform(1, 10)},
            {i + 1: rng.uniform(1, 5), (i + 2) % 5 + 1: rng.uniform(0.1, 1)},
            {f"topic{i}": 1.0, "extra": 0.4},
        )
        for i in range(5)
    ]
    expected = []
    for a in run_a:
        for b in run_b:
            score = weighted_facet_similarity(
                {
                    "countries": sparse_cosine(a.country_facet, b.country_facet),
                    "names": sparse_cosine(a.name_facet, b.name_facet),
                    "keywords": sparse_cosine(a.keyword_facet, b.keyword_facet),
                },
                DEFAULT_FACET_WEIGHTS,
            )
            if score >= 0.5:
                first, second = sorted((a.cluster_id, b.cluster_id))
                expected.append((first, second))
    expected.sort()
    got = sorted((l.cluster_a, l.cluster_b) for l in link_clusters(run_a, run_b))
    verdict(fixture_ok and got == expected,
            "xlink: bilingual fixture links; 5x5 all-pairs oracle match")


def test_delivery_guarantees(fixture_world, tmp_path):
    store: Store = fixture_world["store"]
    schema = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
    schema_ok = True
    for run_id in store.run_ids():
        try:
            jsonschema.validate(run_report(store, run_id), schema)
        except jsonschema.ValidationError:
            schema_ok = False

    site = tmp_path / "site"
    render_html(store, "en-run", site)
    pages = {p.name: p.read_text(encoding="utf-8") for p in site.glob("*.html")}
    links_ok = True
    from html.parser import HTMLParser

    class Collector(HTMLParser):
        def __init__(self):
            super().__init__()
            self.hrefs = []

        def handle_starttag(self, tag, attrs):
            if tag == "a":
                self.hrefs.extend(v for k, v in attrs if k == "href")

    for name, html in pages.items():
        collector = Collector()
        collector.feed(html)
        for href in collector.hrefs:
            if href.startswith(("http://", "https://")):
                continue
            target, _, anchor = href.partition("#")
            if target and target not in pages:
                links_ok = False
            body = pages.get(target, html) if target else html
            if anchor and f'id="{anchor}"' not in body:
                links_ok = False

    reference = store.query("person", "Mohammed ElBaradei")
    variants_ok = all(
        store.query("person", v) == reference for v in TABLE2_VARIANTS
    )

    before = store.state_hash()
    store.persist_run(fixture_world["en_run"])
    idempotent_ok = store.state_hash() == before
    verdict(schema_ok and links_ok and variants_ok and idempotent_ok,
            "delivery: schema-valid JSON; no dangling links; variant queries; idempotent persist")
