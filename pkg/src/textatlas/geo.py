"""Place recognition, homograph disambiguation, country scores, map layers."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document
from .keyness import MILLION, g2_contingency
from .entities import TriggerPattern

log = logging.getLogger(__name__)

# Languages written without a case distinction; lowercase matches allowed.
DEFAULT_CASELESS_LANGUAGES = frozenset({"ar", "fa", "he", "zh", "ja", "ko", "ka"})

# Gazetteer countries share this many expected references per million tokens
# when no country frequency model is supplied.
UNIFORM_COUNTRY_RATE_BUDGET = 1000.0


@dataclass
class GazetteerEntry:
    place_id: str
    kind: str  # "country" | "city"
    country_code: str
    latitude: float
    longitude: float
    importance: float
    names: dict[str, list[str]] = field(default_factory=dict)
    english_name: str = ""


@dataclass
class PlaceMention:
    doc_id: str
    offset: int
    length: int
    surface: str
    place_id: str
    country_code: str


@dataclass
class CountryScore:
    doc_id: str
    country_code: str
    raw_count: int
    keyness: float


@dataclass
class CountryFrequencyModel:
    entries: dict[str, float]
    floor: float = 0.01

    def rate(self, country_code: str) -> float:
        return self.entries.get(country_code, self.floor)


class Gazetteer:
    def __init__(self):
        self.entries: dict[str, GazetteerEntry] = {}
        # language -> folded surface -> [place_id]
        self.by_language: dict[str, dict[str, list[str]]] = {}
        self.any_language: dict[str, list[str]] = {}
        self.max_name_tokens = 0

    def countries(self) -> list[str]:
        return sorted({e.country_code for e in self.entries.values()})

    def _index(self, language: str, name: str, place_id: str) -> None:
        folded = name.casefold()
        lang_index = self.by_language.setdefault(language, {})
        for index in (lang_index, self.any_language):
            ids = index.setdefault(folded, [])
            if place_id not in ids:
                ids.append(place_id)
        self.max_name_tokens = max(self.max_name_tokens, len(name.split()))

    def add(self, entry: GazetteerEntry) -> None:
        self.entries[entry.place_id] = entry
        for language, names in entry.names.items():
            for name in names:
                self._index(language, name, entry.place_id)
        if entry.english_name:
            self._index("en", entry.english_name, entry.place_id)

    def candidates(self, surface: str, language: str) -> list[str]:
        """Document-language names first, then names in any language."""
        folded = surface.casefold()
        found = self.by_language.get(language, {}).get(folded)
        if found:
            return list(found)
        return list(self.any_language.get(folded, []))

    def english_gloss(self, surface: str, language: str) -> str | None:
        ids = self.candidates(surface, language)
        if not ids:
            return None
        entry = self.entries[ids[0]]
        return entry.english_name or None


def load_gazetteer(path: str | Path) -> Gazetteer:
    """TSV rows: placeId, kind, countryCode, lat, lon, importance, language, name, englishName."""
    gazetteer = Gazetteer()
    rows = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 9:
            raise ValueError(f"{path}:{lineno}: expected 9 columns, got {len(cols)}")
        place_id, kind, country_code, lat, lon, importance, language, name, english = cols
        try:
            latitude, longitude = float(lat), float(lon)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: bad coordinates") from exc
        if not -90.0 <= latitude <= 90.0 or not -180.0 <= longitude <= 180.0:
            raise ValueError(
                f"{path}:{lineno}: coordinates out of range ({latitude}, {longitude})"
            )
        if kind not in ("country", "city"):
            raise ValueError(f"{path}:{lineno}: bad kind {kind!r}")
        rows.append(
            (lineno, place_id, kind, country_code, latitude, longitude,
             float(importance), language, name, english)
        )
    for lineno, place_id, kind, country_code, latitude, longitude, importance, language, name, english in rows:
        entry = gazetteer.entries.get(place_id)
        if entry is None:
            entry = GazetteerEntry(
                place_id, kind, country_code, latitude, longitude, importance,
                english_name=english,
            )
            gazetteer.entries[place_id] = entry
        entry.names.setdefault(language, [])
        if name not in entry.names[language]:
            entry.names[language].append(name)
        if english and not entry.english_name:
            entry.english_name = english
    country_codes = {
        e.country_code for e in gazetteer.entries.values() if e.kind == "country"
    }
    for lineno, place_id, kind, country_code, *_ in rows:
        if kind == "city" and country_code not in country_codes:
            raise ValueError(
                f"{path}:{lineno}: city {place_id} references unknown country "
                f"{country_code!r}"
            )
    # Rebuild the surface indexes once entries are complete.
    entries = list(gazetteer.entries.values())
    gazetteer.entries = {}
    for entry in entries:
        gazetteer.add(entry)
    return gazetteer


def _person_triggers(triggers: list[TriggerPattern] | None) -> list[tuple[str, ...]]:
    return [
        t.phrase
        for t in (triggers or [])
        if t.position == "before" and t.kind in ("title", "profession")
    ]


def spot_places(
    doc: Document,
    gazetteer: Gazetteer,
    triggers: list[TriggerPattern] | None = None,
    person_name_tokens: set[str] | None = None,
    caseless_languages: frozenset[str] = DEFAULT_CASELESS_LANGUAGES,
) -> list[PlaceMention]:
    """Longest-match gazetteer scan with homograph disambiguation.

    A capitalized match is suppressed when a person title immediately
    precedes it or when its tokens belong to a person name recognized in
    the same document.
    """
    tokens = doc.tokens
    lower = [t.lowercase for t in tokens]
    title_phrases = _person_triggers(triggers)
    person_name_tokens = person_name_tokens or set()
    require_case = doc.language not in caseless_languages

    raw: list[tuple[int, int, str, list[str]]] = []
    i = 0
    while i < len(tokens):
        matched = None
        for width in range(min(gazetteer.max_name_tokens, len(tokens) - i), 0, -1):
            first, last = tokens[i], tokens[i + width - 1]
            surface = doc.body[first.offset : last.offset + last.length]
            if " " in surface and surface.count(" ") != width - 1:
                continue  # tokens not space-adjacent (punctuation between)
            candidate_ids = gazetteer.candidates(surface, doc.language)
            if candidate_ids:
                matched = (i, width, surface, candidate_ids)
                break
        if matched is None:
            i += 1
            continue
        start, width, surface, candidate_ids = matched
        raw.append((start, width, surface, candidate_ids))
        i = start + width

    # Countries independently mentioned in this document (for the cascade).
    mentioned_countries = set()
    for _, _, _, candidate_ids in raw:
        for pid in candidate_ids:
            entry = gazetteer.entries[pid]
            if entry.kind == "country":
                mentioned_countries.add(entry.country_code)

    mentions = []
    for start, width, surface, candidate_ids in raw:
        first = tokens[start]
        if require_case and not first.surface[:1].isupper():
            continue  # "normal word" homograph guard
        if any(t.surface in person_name_tokens for t in tokens[start : start + width]):
            log.debug("suppressed place %r: person name part", surface)
            continue
        preceded = False
        for phrase in title_phrases:
            plen = len(phrase)
            if start - plen >= 0 and tuple(lower[start - plen : start]) == phrase:
                preceded = True
                break
        if preceded:
            log.debug("suppressed place %r: person title precedes", surface)
            continue
        entry = _disambiguate(candidate_ids, gazetteer, mentioned_countries)
        offset = first.offset
        length = len(surface)
        mentions.append(
            PlaceMention(doc.id, offset, length, surface, entry.place_id, entry.country_code)
        )
    return mentions


def _disambiguate(
    candidate_ids: list[str], gazetteer: Gazetteer, mentioned_countries: set[str]
) -> GazetteerEntry:
    """Total-order cascade over homographic place candidates."""

    def rank(place_id: str):
        entry = gazetteer.entries[place_id]
        return (
            0 if entry.country_code in mentioned_countries else 1,
            0 if entry.kind == "country" else 1,
            -entry.importance,
            entry.place_id,
        )

    return gazetteer.entries[min(candidate_ids, key=rank)]


def country_scores(
    mentions: list[PlaceMention],
    doc: Document,
    country_model: CountryFrequencyModel | None = None,
    gazetteer: Gazetteer | None = None,
    corpus_size: int = 1_000_000,
) -> list[CountryScore]:
    """Aggregate mention counts per country and score them by G-squared."""
    if not mentions:
        return []
    counts = Counter(m.country_code for m in mentions)
    if country_model is None:
        codes = gazetteer.countries() if gazetteer else sorted(counts)
        uniform = UNIFORM_COUNTRY_RATE_BUDGET / max(len(codes), 1)
        country_model = CountryFrequencyModel({c: uniform for c in codes}, floor=uniform)
    n = len(doc.tokens)
    scores = []
    for code, raw_count in sorted(counts.items()):
        rate = country_model.rate(code)
        observed_rate = raw_count / n * MILLION if n else 0.0
        if observed_rate <= rate:
            value = 0.0
        else:
            ref_count = rate / MILLION * corpus_size
            value = max(
                0.0,
                g2_contingency(raw_count, ref_count, n - raw_count, corpus_size - ref_count),
            )
        scores.append(CountryScore(doc.id, code, raw_count, value))
    scores.sort(key=lambda s: (-s.keyness, s.country_code))
    return scores


def mention_records(mentions: list[PlaceMention], gazetteer: Gazetteer) -> list[dict]:
    """Denormalize mentions with coordinates so maps need no gazetteer later."""
    records = []
    for m in mentions:
        entry = gazetteer.entries[m.place_id]
        records.append(
            {
                "docId": m.doc_id,
                "offset": m.offset,
                "length": m.length,
                "surface": m.surface,
                "placeId": m.place_id,
                "countryCode": m.country_code,
                "kind": entry.kind,
                "name": entry.english_name or m.place_id,
                "latitude": entry.latitude,
                "longitude": entry.longitude,
            }
        )
    return records


def map_layer_from_records(records: list[dict]) -> dict:
    """GeoJSON FeatureCollection: per-place points plus per-country aggregates."""
    place_counts = Counter(r["placeId"] for r in records)
    country_counts = Counter(r["countryCode"] for r in records)
    by_place = {r["placeId"]: r for r in records}
    country_coords = {
        r["countryCode"]: (r["longitude"], r["latitude"])
        for r in records
        if r["kind"] == "country"
    }
    features = []
    for place_id, count in sorted(place_counts.items()):
        r = by_place[place_id]
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [r["longitude"], r["latitude"]],
                },
                "properties": {
                    "placeId": place_id,
                    "name": r["name"],
                    "kind": r["kind"],
                    "countryCode": r["countryCode"],
                    "count": count,
                },
            }
        )
    for code, count in sorted(country_counts.items()):
        coords = country_coords.get(code)
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": list(coords),
                }
                if coords
                else None,
                "properties": {
                    "countryCode": code,
                    "kind": "country-aggregate",
                    "count": count,
                },
            }
        )
    return {"type": "FeatureCollection", "features": features}


def map_layer(mentions: list[PlaceMention], gazetteer: Gazetteer) -> dict:
    return map_layer_from_records(mention_records(mentions, gazetteer))
