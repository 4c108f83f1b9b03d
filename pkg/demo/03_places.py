"""Geotagging with a gazetteer: homographs, disambiguation, country scores.

"Paris" is a city in France and in Texas; "Bush" is a person and a town.
The spotting pass resolves both with document context before counting
country references.
"""

from pathlib import Path
from tempfile import TemporaryDirectory

from textatlas.corpus import Document
from textatlas.entities import TriggerPattern
from textatlas.geo import country_scores, load_gazetteer, map_layer, spot_places

ROWS = [
    # placeId, kind, country, lat, lon, importance, language, name, english
    ("FR", "country", "FR", "46.2", "2.2", "3", "en", "France", "France"),
    ("US", "country", "US", "39.8", "-98.5", "3", "en", "United States", "United States"),
    ("paris-fr", "city", "FR", "48.85", "2.35", "3", "en", "Paris", "Paris"),
    ("paris-us", "city", "US", "33.66", "-95.55", "1", "en", "Paris", "Paris"),
    ("lyon-fr", "city", "FR", "45.76", "4.84", "2", "en", "Lyon", "Lyon"),
    ("tours-fr", "city", "FR", "47.39", "0.68", "1", "en", "Tours", "Tours"),
    ("bush-us", "city", "US", "30.4", "-95.0", "0.5", "en", "Bush", "Bush"),
]

with TemporaryDirectory() as tmp:
    path = Path(tmp) / "gazetteer.tsv"
    path.write_text("".join("\t".join(r) + "\n" for r in ROWS), encoding="utf-8")
    gazetteer = load_gazetteer(path)

doc = Document(
    id="d1", source="demo", language="en", title="Farm protests",
    body="Striking farmers met in France to plan new protests. Crowds "
         "filled Paris while growers gathered in Lyon and in Tours. "
         "President Bush watched from afar.",
)

triggers = [TriggerPattern("en", ("president",), "before", "title")]
mentions = spot_places(doc, gazetteer, triggers)

print("place mentions (note: 'President Bush' is suppressed, 'Tours' the")
print("verb would be too since it is lowercase):")
for m in mentions:
    print(f"  {m.surface:<8} -> {m.place_id} ({m.country_code})")

print("\ncountry scores:")
for s in country_scores(mentions, doc, gazetteer=gazetteer):
    print(f"  {s.country_code}: {s.raw_count} references, keyness {s.keyness:.1f}")

layer = map_layer(mentions, gazetteer)
print(f"\nGeoJSON layer with {len(layer['features'])} features ready for a map.")
