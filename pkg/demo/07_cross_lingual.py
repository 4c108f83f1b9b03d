"""Linking the same story across languages without translation.

Clusters are projected onto language-independent facets — country codes,
person identities and diacritic-folded keywords — and compared with a
weighted facet cosine.
"""

from textatlas.xlink import ClusterSignature, link_clusters, xsim

# English run: a nuclear story and a farming story.
english = [
    ClusterSignature(
        "en-c1", "en",
        country_facet={"KP": 9.0, "IR": 3.0},
        name_facet={1: 6.0, 2: 1.0},          # joint person ids across runs
        keyword_facet={"plutonium": 5.0, "reactor": 4.0, "freeze": 2.0},
    ),
    ClusterSignature(
        "en-c2", "en",
        country_facet={"FR": 8.0},
        name_facet={},
        keyword_facet={"farmers": 5.0, "grain": 3.0},
    ),
]

# Spanish run: the same nuclear story, different words, same facets.
spanish = [
    ClusterSignature(
        "es-c1", "es",
        country_facet={"KP": 7.0, "IR": 2.0},
        name_facet={1: 4.0},
        keyword_facet={"plutonio": 6.0, "reactor": 3.0},
    ),
]

print("facet similarity of every cross-language pair:")
for a in english:
    for b in spanish:
        print(f"  {a.cluster_id} / {b.cluster_id}: {xsim(a, b):.2f}")

print("\nlinks above the 0.5 threshold:")
for link in link_clusters(english, spanish):
    print(f"  {link.cluster_a} <-> {link.cluster_b}  (score {link.score:.2f})")

# "reactor" survives folding in both languages and the shared person and
# country facets carry the rest; the farming cluster links to nothing.
