"""Specialist-term spotting with suffix expansion and keyword-in-context.

A term list stores a stem plus a suffix set, so one row covers every
inflected form — essential for highly inflected languages where a noun
has eight or more surface forms.
"""

from textatlas.corpus import Document
from textatlas.terms import TermEntry, gloss_term, kwic, match_terms

TERMS = [
    TermEntry("plutonium-en", "en", "plutonium", ["", "s"], "plutonium",
              "nuclear fuel", {"es": "plutonio"}),
    TermEntry("natural-uranium-en", "en", "natural uranium", [""],
              "natural uranium", "nuclear fuel", {}),
    TermEntry("uranium-en", "en", "uranium", [""], "uranium", "nuclear fuel", {}),
    # Slovene: stem + suffix set covers all eight case/number forms.
    TermEntry("centrifuga-sl", "sl", "centrifug",
              ["a", "i", "o", "", "ama", "ah", "am", "ami"], "centrifuga",
              "enrichment", {"en": "centrifuge"}),
]

print("expansions generated for the Slovene term:")
print(" ", ", ".join(sorted(TERMS[3].expansions)))

docs = [
    Document(id="d1", source="demo", language="en", title="Stocks",
             body="Inspectors weighed natural uranium drums and sampled the "
                  "plutonium line. Fresh plutoniums joined the uranium stocks."),
]

print("\nterm hits (note: 'natural uranium' wins over plain 'uranium'):")
for hit in match_terms("c1", docs, TERMS):
    forms = "|".join(hit.matched_forms)
    print(f"  {hit.display_form:<16} [{hit.count}] ({forms}) — {hit.subject_field}")

print("\nconcordance for plutonium:")
for line in kwic("plutonium-en", docs, TERMS, window=28):
    print(f"  …{line.left:>28}[{line.matched_form}]{line.right:<28}…")

print("\nSpanish gloss:", gloss_term(TERMS[0], "es"))
print("German gloss falls back to the display form:", gloss_term(TERMS[0], "de"))
