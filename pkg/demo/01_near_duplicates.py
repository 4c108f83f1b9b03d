"""Spotting near-identical wire copy with word-pentagram shingles.

News agencies re-issue the same dispatch with tiny edits. Hash every
window of five consecutive words, compare the sets, and two rewrites of
one story light up immediately.
"""

from textatlas.corpus import Document, find_near_duplicates, overlap_ratio, pentagrams

original = Document(
    id="wire-1", source="demo", language="en", title="Reactor restart",
    body="North Korea has restarted its plutonium programme at the main "
         "nuclear reactor, diplomats said on Thursday.",
)
rewrite = Document(
    id="wire-2", source="demo", language="en", title="Reactor restart (upd)",
    body="North Korea has restarted its plutonium programme at the main "
         "nuclear reactor, officials confirmed on Friday.",
)
unrelated = Document(
    id="wire-3", source="demo", language="en", title="Harvest talks",
    body="Striking farmers met in France to plan new protests over grain "
         "prices before the harvest talks.",
)

docs = [original, rewrite, unrelated]

print("pairwise pentagram overlap:")
sets = {d.id: pentagrams(d) for d in docs}
for a in docs:
    for b in docs:
        if a.id < b.id:
            ratio = overlap_ratio(sets[a.id], sets[b.id])
            print(f"  {a.id} / {b.id}: {ratio:.2f}")

print("\nflagged at the 50% threshold:")
for a, b, ratio in find_near_duplicates(docs, threshold=0.5):
    print(f"  {a} duplicates {b} ({ratio:.0%} shared)")
