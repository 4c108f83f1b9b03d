"""Ranking what a document is about with log-likelihood keyness.

A word is a keyword when it appears far more often in the document than a
reference corpus predicts. Frequent function words score zero; rare
domain words dominate.
"""

from textatlas.corpus import Document
from textatlas.keyness import FrequencyModel, extract_keywords

# Reference rates per million tokens of general news text.
model = FrequencyModel(
    language="en",
    entries={
        "the": 60000.0, "of": 30000.0, "and": 28000.0, "said": 2000.0,
        "nuclear": 50.0, "programme": 30.0, "reactor": 5.0, "uranium": 2.0,
    },
    corpus_size=1_000_000,
    floor_freq=0.01,  # unseen words are treated as very rare, not impossible
)

doc = Document(
    id="d1", source="demo", language="en", title="Reactor restart",
    body="The reactor restarted and the uranium stocks grew. Inspectors "
         "said the nuclear programme and the reactor site must be sealed. "
         "Uranium, uranium everywhere.",
)

vector = extract_keywords(doc, model, stop_list=frozenset({"the", "and", "of"}))
print(f"keywords for {doc.id!r}:")
for word, score in vector.ranked():
    bar = "#" * int(score / 5)
    print(f"  {word:<12} {score:8.2f}  {bar}")

# "the" never shows up: it occurs exactly as often as the reference
# corpus predicts, so its keyness is clamped to zero.
