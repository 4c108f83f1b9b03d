"""Grouping a day's articles into stories by keyword-vector similarity.

Documents become sparse vectors of keyword and country keyness; group-
average agglomerative clustering merges everything above cosine 0.5.
"""

from textatlas.clustering import DocVector, cluster_collection, cosine
from textatlas.keyness import KeywordVector

VECTORS = [
    DocVector("mon-01", {"w:reactor": 12.0, "w:uranium": 9.0, "c:KP": 5.0}),
    DocVector("mon-02", {"w:reactor": 10.0, "w:uranium": 11.0, "w:freeze": 2.0, "c:KP": 4.0}),
    DocVector("mon-03", {"w:uranium": 8.0, "w:reactor": 9.0, "w:inspectors": 3.0}),
    DocVector("mon-04", {"w:farmers": 11.0, "w:grain": 7.0, "c:FR": 6.0}),
    DocVector("mon-05", {"w:farmers": 9.0, "w:grain": 10.0, "w:harvest": 2.0, "c:FR": 4.0}),
]
TITLES = {
    "mon-01": "Reactor restart confirmed",
    "mon-02": "Uranium freeze demanded",
    "mon-03": "Inspectors count uranium drums",
    "mon-04": "Farmers plan protests",
    "mon-05": "Grain talks stall",
}

print("similarity of the first nuclear pair vs. a cross pair:")
print(f"  mon-01 / mon-02: {cosine(VECTORS[0], VECTORS[1]):.2f}")
print(f"  mon-01 / mon-04: {cosine(VECTORS[0], VECTORS[3]):.2f}")

keyword_vectors = {
    v.doc_id: KeywordVector(
        v.doc_id, {k[2:]: w for k, w in v.entries.items() if k.startswith("w:")}
    )
    for v in VECTORS
}

clusters = cluster_collection(VECTORS, TITLES, keyword_vectors, id_prefix="day-c")
for c in clusters:
    print(f"\n{c.cluster_id}: {c.title!r} ({c.size} articles)")
    print(f"  members:  {', '.join(c.member_doc_ids)}")
    print(f"  centroid: {c.centroid_doc_id}")
    top = ", ".join(f"{t} {v:.1f}" for t, v in c.keywords[:4])
    print(f"  keywords: {top}")
