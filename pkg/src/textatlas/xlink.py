"""Cross-lingual cluster linking via language-independent signatures."""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass, field

DEFAULT_FACET_WEIGHTS = {"countries": 0.4, "names": 0.4, "keywords": 0.2}
DEFAULT_LINK_THRESHOLD = 0.5


@dataclass
class ClusterSignature:
    cluster_id: str
    language: str
    country_facet: dict[str, float] = field(default_factory=dict)
    name_facet: dict[int, float] = field(default_factory=dict)
    keyword_facet: dict[str, float] = field(default_factory=dict)
    # Reserved for a thesaurus-class facet; never populated here.
    class_facet: dict[str, float] = field(default_factory=dict)

    def is_empty(self) -> bool:
        return not (self.country_facet or self.name_facet or self.keyword_facet)


@dataclass
class CrossLink:
    cluster_a: str
    cluster_b: str
    score: float


def fold_keyword(word: str) -> str:
    """Case- and diacritic-fold a keyword so cognates line up."""
    decomposed = unicodedata.normalize("NFKD", word.casefold())
    return "".join(c for c in decomposed if not unicodedata.combining(c))


def signature(
    cluster_id: str,
    language: str,
    country_weights: dict[str, float],
    name_counts: dict[int, float],
    keyword_weights: dict[str, float],
) -> ClusterSignature | None:
    """Project a cluster onto its language-independent facets.

    Returns None when every facet would be empty (nothing to link on).
    """
    sig = ClusterSignature(
        cluster_id,
        language,
        {c: w for c, w in country_weights.items() if w > 0},
        {p: w for p, w in name_counts.items() if w > 0},
        {fold_keyword(k): w for k, w in keyword_weights.items() if w > 0},
    )
    return None if sig.is_empty() else sig


def _facet_cosine(a: dict, b: dict) -> float:
    if not a or not b:
        return 0.0
    dot = sum(w * b.get(k, 0.0) for k, w in a.items())
    na = math.sqrt(sum(w * w for w in a.values()))
    nb = math.sqrt(sum(w * w for w in b.values()))
    return dot / (na * nb)


def xsim(
    a: ClusterSignature,
    b: ClusterSignature,
    weights: dict[str, float] | None = None,
) -> float:
    """Weighted facet-cosine similarity of two cluster signatures.

    A facet empty on either side contributes nothing and its weight is
    redistributed proportionally over the remaining facets.
    """
    if a.language == b.language:
        raise ValueError("cross-lingual similarity requires different languages")
    if a.is_empty() and b.is_empty():
        raise ValueError("both signatures are empty")
    weights = weights or DEFAULT_FACET_WEIGHTS
    facets = {
        "countries": (a.country_facet, b.country_facet),
        "names": (a.name_facet, b.name_facet),
        "keywords": (a.keyword_facet, b.keyword_facet),
    }
    active = {
        name: pair for name, pair in facets.items() if pair[0] and pair[1]
    }
    if not active:
        return 0.0
    total_weight = sum(weights[name] for name in active)
    return sum(
        weights[name] / total_weight * _facet_cosine(*pair)
        for name, pair in active.items()
    )


def link_clusters(
    run_a: list[ClusterSignature],
    run_b: list[ClusterSignature],
    threshold: float = DEFAULT_LINK_THRESHOLD,
    weights: dict[str, float] | None = None,
) -> list[CrossLink]:
    """All cross-language cluster pairs at or above the threshold."""
    links = []
    for sa in run_a:
        for sb in run_b:
            if sa.language == sb.language:
                continue
            score = xsim(sa, sb, weights)
            if score >= threshold:
                first, second = sorted((sa.cluster_id, sb.cluster_id))
                links.append(CrossLink(first, second, score))
    links.sort(key=lambda l: (-l.score, l.cluster_a, l.cluster_b))
    return links
