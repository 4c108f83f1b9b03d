"""Document vectors, cosine similarity, agglomerative clustering."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .geo import CountryScore
from .keyness import KeywordVector

log = logging.getLogger(__name__)

DEFAULT_CLUSTER_THRESHOLD = 0.5

WORD_PREFIX = "w:"
COUNTRY_PREFIX = "c:"


@dataclass
class DocVector:
    doc_id: str
    entries: dict[str, float]

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.entries.values()))


@dataclass
class Cluster:
    cluster_id: str
    member_doc_ids: list[str]
    centroid: dict[str, float]
    centroid_doc_id: str
    title: str
    keywords: list[tuple[str, float]]
    countries: list[tuple[str, float]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.member_doc_ids)


def build_vector(
    keyword_vector: KeywordVector,
    country_scores: list[CountryScore],
    country_weight: float = 1.0,
) -> DocVector | None:
    """Combine keyword keyness and country keyness under distinct dimensions.

    Returns None for a document with nothing to cluster on.
    """
    entries: dict[str, float] = {
        WORD_PREFIX + term: weight
        for term, weight in keyword_vector.entries.items()
        if weight > 0
    }
    for score in country_scores:
        if score.keyness > 0:
            entries[COUNTRY_PREFIX + score.country_code] = score.keyness * country_weight
    if not entries:
        log.info("document %s excluded from clustering: empty vector", keyword_vector.doc_id)
        return None
    return DocVector(keyword_vector.doc_id, entries)


def cosine(a: DocVector, b: DocVector) -> float:
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for zero-norm vector")
    small, large = (a.entries, b.entries) if len(a.entries) <= len(b.entries) else (b.entries, a.entries)
    dot = sum(w * large.get(dim, 0.0) for dim, w in small.items())
    return dot / (na * nb)


def _group_average(matrix: list[list[float]], a: list[int], b: list[int]) -> float:
    total = 0.0
    for i in a:
        for j in b:
            total += matrix[i][j]
    return total / (len(a) * len(b))


def cluster_members(
    vectors: list[DocVector],
    threshold: float = DEFAULT_CLUSTER_THRESHOLD,
    linkage: str = "average",
) -> list[list[str]]:
    """Agglomerative clustering of documents; returns member id lists.

    Merging continues while some pair of clusters has linkage similarity
    at or above the threshold. Ties merge the pair containing the lowest
    document id.
    """
    if not vectors:
        return []
    order = sorted(range(len(vectors)), key=lambda i: vectors[i].doc_id)
    vectors = [vectors[i] for i in order]
    n = len(vectors)
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        matrix[i][i] = 1.0
        for j in range(i + 1, n):
            matrix[i][j] = matrix[j][i] = cosine(vectors[i], vectors[j])

    clusters: list[list[int]] = [[i] for i in range(n)]
    while len(clusters) > 1:
        best = None
        for ci in range(len(clusters)):
            for cj in range(ci + 1, len(clusters)):
                if linkage == "average":
                    sim = _group_average(matrix, clusters[ci], clusters[cj])
                elif linkage == "single":
                    sim = max(
                        matrix[i][j] for i in clusters[ci] for j in clusters[cj]
                    )
                else:
                    raise ValueError(f"unknown linkage {linkage!r}")
                if sim < threshold:
                    continue
                key = (
                    -sim,
                    min(min(clusters[ci]), min(clusters[cj])),
                    max(min(clusters[ci]), min(clusters[cj])),
                )
                if best is None or key < best[0]:
                    best = (key, ci, cj)
        if best is None:
            break
        _, ci, cj = best
        merged = sorted(clusters[ci] + clusters[cj])
        clusters = [c for k, c in enumerate(clusters) if k not in (ci, cj)]
        clusters.append(merged)

    groups = [sorted(vectors[i].doc_id for i in members) for members in clusters]
    groups.sort(key=lambda g: (-len(g), g[0]))
    return groups


def mean_vector(vectors: list[DocVector]) -> dict[str, float]:
    total: dict[str, float] = {}
    for v in vectors:
        for dim, w in v.entries.items():
            total[dim] = total.get(dim, 0.0) + w
    return {dim: w / len(vectors) for dim, w in total.items()}


def finalize_cluster(
    cluster_id: str,
    members: list[DocVector],
    titles: dict[str, str],
    keyword_vectors: dict[str, KeywordVector],
) -> Cluster:
    """Compute centroid, centroid title and group-averaged keywords."""
    if not members:
        raise ValueError("cluster must have at least one member")
    members = sorted(members, key=lambda v: v.doc_id)
    centroid = mean_vector(members)
    centroid_vec = DocVector("__centroid__", centroid)
    best_id, best_sim = None, -1.0
    for v in members:
        sim = cosine(v, centroid_vec)
        if sim > best_sim or (sim == best_sim and v.doc_id < best_id):
            best_id, best_sim = v.doc_id, sim

    # Group averaging: mean keyness over all members, absent counted as 0.
    sums: dict[str, float] = {}
    for v in members:
        kv = keyword_vectors[v.doc_id]
        for term, weight in kv.entries.items():
            sums[term] = sums.get(term, 0.0) + weight
    keywords = sorted(
        ((term, total / len(members)) for term, total in sums.items()),
        key=lambda kv: (-kv[1], kv[0]),
    )

    country_sums: dict[str, float] = {}
    for v in members:
        for dim, w in v.entries.items():
            if dim.startswith(COUNTRY_PREFIX):
                code = dim[len(COUNTRY_PREFIX):]
                country_sums[code] = country_sums.get(code, 0.0) + w
    countries = sorted(
        ((code, total / len(members)) for code, total in country_sums.items()),
        key=lambda kv: (-kv[1], kv[0]),
    )

    return Cluster(
        cluster_id=cluster_id,
        member_doc_ids=[v.doc_id for v in members],
        centroid=centroid,
        centroid_doc_id=best_id,
        title=titles[best_id],
        keywords=keywords,
        countries=countries,
    )


def cluster_collection(
    vectors: list[DocVector],
    titles: dict[str, str],
    keyword_vectors: dict[str, KeywordVector],
    threshold: float = DEFAULT_CLUSTER_THRESHOLD,
    linkage: str = "average",
    id_prefix: str = "",
) -> list[Cluster]:
    """Cluster the collection and finalize every cluster.

    Cluster ids are assigned by descending size, ties by centroid doc id.
    """
    groups = cluster_members(vectors, threshold, linkage)
    by_id = {v.doc_id: v for v in vectors}
    finalized = [
        finalize_cluster("?", [by_id[d] for d in group], titles, keyword_vectors)
        for group in groups
    ]
    finalized.sort(key=lambda c: (-c.size, c.centroid_doc_id))
    for index, cluster in enumerate(finalized, start=1):
        cluster.cluster_id = f"{id_prefix}{index}"
    return finalized
