"""Recognizing people by trigger words and merging spelling variants.

Transliterated names appear in wildly different spellings. Character
bigram/trigram cosine similarity chains them into one identity while
keeping unrelated people apart.
"""

from textatlas.corpus import Document
from textatlas.entities import (
    PersonStore,
    TriggerPattern,
    name_similarity,
    recognize_names,
)

TRIGGERS = [
    TriggerPattern("en", ("director", "general"), "before", "title"),
    TriggerPattern("en", ("president",), "before", "title"),
    TriggerPattern("en", ("quoted",), "before", "verbal"),
    TriggerPattern("en", ("has", "said"), "after", "verbal"),
]

doc = Document(
    id="d1", source="demo", language="en", title="Agency round-up",
    body="Director General Mohammed ElBaradei warned about the freeze. "
         "Reports quoted Mohamed El Baradei and agencies quoted Muhammad "
         "al-Baradai. Officials quoted Mohammed al-Baradei as well. "
         "President George Bush has said the talks would continue.",
)

mentions = recognize_names(doc, triggers=TRIGGERS)
print("recognized mentions:")
for m in mentions:
    print(f"  {m.surface!r:<28} trigger={m.trigger!r}")

print("\npairwise spelling similarity:")
surfaces = [m.surface for m in mentions]
for i, a in enumerate(surfaces):
    for b in surfaces[i + 1 :]:
        print(f"  {a!r} / {b!r}: {name_similarity(a, b):.2f}")

store = PersonStore()
store.merge_variants(surfaces)
print("\nmerged identities:")
for record in store.persons.values():
    print(f"  #{record.person_id} {record.canonical!r}")
    for v in sorted(record.variants):
        print(f"      - {v}")
