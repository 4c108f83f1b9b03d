"""Person/organisation name recognition, variant merging and networks."""

from __future__ import annotations

import json
import logging
import math
import unicodedata
import urllib.request
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .corpus import Document, Token
from .keyness import g2_contingency

log = logging.getLogger(__name__)

# Validated against the reference variant fixture: the weakest link that
# still chains all spellings of one person sits near 0.63, so 0.75 would
# split transliteration outliers off. 0.6 keeps unrelated names far apart.
DEFAULT_SIMILARITY_THRESHOLD = 0.6

# Lowercase particles allowed inside a capitalized name run.
NAME_INFIXES = frozenset(
    {"al", "el", "bin", "ben", "de", "del", "della", "der", "den", "van",
     "von", "la", "le", "di", "da", "du", "dos", "das", "ter", "ibn"}
)


@dataclass(frozen=True)
class TriggerPattern:
    language: str
    phrase: tuple[str, ...]
    position: str  # "before" | "after"
    kind: str  # "title" | "profession" | "verbal"


@dataclass
class NameMention:
    doc_id: str
    offset: int
    length: int
    surface: str
    trigger: str | None = None
    kind: str = "person"


@dataclass
class PersonRecord:
    person_id: int
    canonical: str
    variants: set[str] = field(default_factory=set)
    titles: set[str] = field(default_factory=set)
    encyclopedia_urls: list[str] = field(default_factory=list)
    article_ids: list[str] = field(default_factory=list)
    cluster_ids: list[str] = field(default_factory=list)
    kind: str = "person"


def load_triggers(path: str | Path) -> list[TriggerPattern]:
    """TSV rows: language, position, kind, phrase."""
    patterns = []
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 columns")
        language, position, kind, phrase = cols
        if position not in ("before", "after"):
            raise ValueError(f"{path}:{lineno}: bad position {position!r}")
        patterns.append(
            TriggerPattern(language, tuple(phrase.lower().split()), position, kind)
        )
    return patterns


def load_known_names(path: str | Path) -> dict[str, tuple[int, str]]:
    """TSV rows personId, kind, variant -> folded variant to (id, kind)."""
    known = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns")
        pid, kind, variant = cols
        known[variant.lower()] = (int(pid), kind)
    return known


def _is_capitalized(token: Token) -> bool:
    return token.surface[:1].isupper()


def _adjacent(body: str, prev: Token, nxt: Token) -> bool:
    """Tokens joined by plain spacing or a hyphen/apostrophe, not punctuation."""
    gap = body[prev.offset + prev.length : nxt.offset]
    return (gap != "" and gap.strip() == "" and "\n" not in gap) or gap in ("-", "'", "’")


def _name_runs(tokens: list[Token], body: str) -> list[tuple[int, int]]:
    """Maximal [start, end) index runs of capitalized tokens.

    Lowercase particles (al, van, de, ...) stay inside a run when flanked
    by capitalized tokens on both sides. Sentence punctuation between
    tokens breaks a run.
    """
    runs = []
    i = 0
    n = len(tokens)
    while i < n:
        if not _is_capitalized(tokens[i]):
            i += 1
            continue
        j = i + 1
        while j < n and _adjacent(body, tokens[j - 1], tokens[j]):
            if _is_capitalized(tokens[j]):
                j += 1
            elif (
                tokens[j].lowercase in NAME_INFIXES
                and j + 1 < n
                and _adjacent(body, tokens[j], tokens[j + 1])
                and _is_capitalized(tokens[j + 1])
            ):
                j += 2
            else:
                break
        runs.append((i, j))
        i = j
    return runs


def _span_surface(doc: Document, start: int, end: int) -> tuple[int, int, str]:
    first, last = doc.tokens[start], doc.tokens[end - 1]
    offset = first.offset
    length = last.offset + last.length - offset
    return offset, length, doc.body[offset : offset + length]


def recognize_names(
    doc: Document,
    known_names: dict[str, tuple[int, str]] | None = None,
    triggers: list[TriggerPattern] | None = None,
) -> list[NameMention]:
    """Find person/organisation mentions via known names and trigger patterns."""
    known_names = known_names or {}
    triggers = [
        t for t in (triggers or []) if t.language in (doc.language, "*")
    ]
    tokens = doc.tokens
    lower = [t.lowercase for t in tokens]
    mentions: list[NameMention] = []

    for start, end in _name_runs(tokens, doc.body):
        accepted: tuple[int, int, str | None, str] | None = None

        # Trigger before: the phrase may end just before the run or inside it.
        best_split = None
        for trig in triggers:
            if trig.position != "before":
                continue
            plen = len(trig.phrase)
            # name start candidates within the run
            for name_start in range(start, end):
                if name_start - plen < 0:
                    continue
                if name_start > start and not _is_capitalized(tokens[name_start]):
                    continue
                if tuple(lower[name_start - plen : name_start]) == trig.phrase and _adjacent(
                    doc.body, tokens[name_start - 1], tokens[name_start]
                ):
                    key = (name_start, -plen)
                    if best_split is None or key < best_split[0]:
                        t_off, t_len, t_surface = _span_surface(
                            doc, name_start - plen, name_start
                        )
                        best_split = (key, name_start, t_surface)
        if best_split is not None:
            _, name_start, trig_surface = best_split
            accepted = (name_start, end, trig_surface, "person")

        # Trigger after ("has said" etc.): run followed by the phrase.
        if accepted is None:
            for trig in triggers:
                if trig.position != "after":
                    continue
                plen = len(trig.phrase)
                if tuple(lower[end : end + plen]) == trig.phrase and _adjacent(
                    doc.body, tokens[end - 1], tokens[end]
                ):
                    accepted = (start, end, " ".join(trig.phrase), "person")
                    break

        # Known-name lookup: longest contiguous subspan first.
        if accepted is None:
            found = False
            for width in range(end - start, 0, -1):
                for s in range(start, end - width + 1):
                    candidate = " ".join(lower[s : s + width])
                    if candidate in known_names:
                        _, kind = known_names[candidate]
                        accepted = (s, s + width, None, kind)
                        found = True
                        break
                if found:
                    break

        if accepted is None:
            log.debug("rejected name candidate: %r", lower[start:end])
            continue
        name_start, name_end, trig_surface, kind = accepted
        if name_end <= name_start:
            continue
        offset, length, surface = _span_surface(doc, name_start, name_end)
        mentions.append(NameMention(doc.id, offset, length, surface, trig_surface, kind))

    # Keep spans non-overlapping, preferring longer mentions.
    mentions.sort(key=lambda m: (-m.length, m.offset))
    chosen: list[NameMention] = []
    for m in mentions:
        if all(
            m.offset + m.length <= c.offset or m.offset >= c.offset + c.length
            for c in chosen
        ):
            chosen.append(m)
    chosen.sort(key=lambda m: m.offset)
    return chosen


def normalize_name(surface: str) -> str:
    """Lowercase, fold diacritics, collapse separators to one boundary mark."""
    decomposed = unicodedata.normalize("NFKD", surface)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    out = []
    boundary = True
    for c in stripped.lower():
        if c.isalnum():
            out.append(c)
            boundary = False
        elif not boundary:
            out.append("_")
            boundary = True
    core = "".join(out).strip("_")
    return f"_{core}_" if core else ""


def name_ngrams(surface: str) -> Counter[str]:
    """Character bigram+trigram counts of the normalized name."""
    norm = normalize_name(surface)
    grams: Counter[str] = Counter()
    for n in (2, 3):
        for i in range(len(norm) - n + 1):
            grams[norm[i : i + n]] += 1
    return grams


def name_similarity(a: str, b: str) -> float:
    """Cosine similarity of character n-gram vectors of two names."""
    va, vb = name_ngrams(a), name_ngrams(b)
    if not va or not vb:
        raise ValueError("name is empty after normalization")
    dot = sum(c * vb[g] for g, c in va.items())
    norm_a = math.sqrt(sum(c * c for c in va.values()))
    norm_b = math.sqrt(sum(c * c for c in vb.values()))
    return dot / (norm_a * norm_b)


def variant_groups(
    names: list[str], threshold: float = DEFAULT_SIMILARITY_THRESHOLD
) -> list[set[str]]:
    """Connected components of the pairwise-similarity graph at threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    unique = sorted(set(names))
    parent = {n: n for n in unique}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in combinations(unique, 2):
        if name_similarity(a, b) >= threshold:
            parent[find(a)] = find(b)

    groups: dict[str, set[str]] = {}
    for n in unique:
        groups.setdefault(find(n), set()).add(n)
    return sorted(groups.values(), key=lambda g: min(g))


def canonical_variant(variants: set[str]) -> str:
    """Longest variant; ties broken lexicographically."""
    return sorted(variants, key=lambda v: (-len(v), v))[0]


class PersonStore:
    """Identity registry: numeric ids over merged spelling variants."""

    def __init__(self):
        self.persons: dict[int, PersonRecord] = {}
        self.variant_index: dict[str, int] = {}
        self.next_id = 1

    def _mint(self, variants: set[str], kind: str = "person") -> PersonRecord:
        record = PersonRecord(
            self.next_id, canonical_variant(variants), set(variants), kind=kind
        )
        self.next_id += 1
        self.persons[record.person_id] = record
        for v in variants:
            self.variant_index[normalize_name(v)] = record.person_id
        return record

    def resolve(self, name: str) -> PersonRecord | None:
        pid = self.variant_index.get(normalize_name(name))
        return self.persons.get(pid) if pid is not None else None

    def merge_variants(
        self, names: list[str], threshold: float = DEFAULT_SIMILARITY_THRESHOLD
    ) -> list[PersonRecord]:
        """Group variant spellings; extend existing identities or mint new ones."""
        records = []
        for group in variant_groups(names, threshold):
            existing = sorted(
                {
                    self.variant_index[normalize_name(v)]
                    for v in group
                    if normalize_name(v) in self.variant_index
                }
            )
            if existing:
                record = self.persons[existing[0]]
                for other_id in existing[1:]:
                    self._absorb(record, self.persons[other_id])
                record.variants |= group
                record.canonical = canonical_variant(record.variants)
                for v in group:
                    self.variant_index[normalize_name(v)] = record.person_id
            else:
                record = self._mint(group)
            records.append(record)
        return records

    def _absorb(self, keep: PersonRecord, drop: PersonRecord) -> None:
        keep.variants |= drop.variants
        keep.titles |= drop.titles
        keep.encyclopedia_urls = sorted(set(keep.encyclopedia_urls) | set(drop.encyclopedia_urls))
        keep.article_ids = sorted(set(keep.article_ids) | set(drop.article_ids))
        keep.cluster_ids = sorted(set(keep.cluster_ids) | set(drop.cluster_ids))
        for v in drop.variants:
            self.variant_index[normalize_name(v)] = keep.person_id
        del self.persons[drop.person_id]

    def record_mention(
        self, person_id: int, doc_id: str, cluster_id: str, title: str | None = None
    ) -> None:
        record = self.persons[person_id]
        if doc_id not in record.article_ids:
            record.article_ids = sorted(set(record.article_ids) | {doc_id})
        if cluster_id not in record.cluster_ids:
            record.cluster_ids = sorted(set(record.cluster_ids) | {cluster_id})
        if title:
            record.titles.add(title)

    def apply_corrections(self, lines: list[str]) -> None:
        """Apply `merge id1 id2` / `split id "variant"...` directives.

        Multi-word variants in split directives must be quoted.
        """
        import shlex

        for line in lines:
            parts = shlex.split(line, comments=True)
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "merge" and len(parts) == 3:
                a, b = int(parts[1]), int(parts[2])
                if a in self.persons and b in self.persons and a != b:
                    self._absorb(self.persons[a], self.persons[b])
            elif parts[0] == "split" and len(parts) >= 3:
                pid = int(parts[1])
                pulled = set(parts[2:])
                record = self.persons.get(pid)
                if record is None:
                    continue
                pulled &= record.variants
                if not pulled or pulled == record.variants:
                    continue
                record.variants -= pulled
                record.canonical = canonical_variant(record.variants)
                self._mint(pulled)
            else:
                raise ValueError(f"bad corrections line: {line!r}")

    def to_json(self) -> list[dict]:
        return [
            {
                "personId": r.person_id,
                "canonical": r.canonical,
                "kind": r.kind,
                "variants": sorted(r.variants),
                "titles": sorted(r.titles),
                "encyclopediaUrls": r.encyclopedia_urls,
                "articleIds": r.article_ids,
                "clusterIds": r.cluster_ids,
            }
            for r in sorted(self.persons.values(), key=lambda r: r.person_id)
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "PersonStore":
        store = cls()
        for row in data:
            record = PersonRecord(
                row["personId"],
                row["canonical"],
                set(row["variants"]),
                set(row.get("titles", [])),
                list(row.get("encyclopediaUrls", [])),
                list(row.get("articleIds", [])),
                list(row.get("clusterIds", [])),
                row.get("kind", "person"),
            )
            store.persons[record.person_id] = record
            for v in record.variants:
                store.variant_index[normalize_name(v)] = record.person_id
        if store.persons:
            store.next_id = max(store.persons) + 1
        return store


class CoOccurrenceStore:
    """Counts of person pairs sharing a cluster; idempotent per (run, cluster)."""

    def __init__(self):
        self.counts: dict[tuple[int, int], int] = {}
        self.seen: set[tuple[str, str]] = set()

    def update(self, run_id: str, cluster_persons: dict[str, set[int]]) -> None:
        for cluster_id, person_ids in cluster_persons.items():
            key = (run_id, cluster_id)
            if key in self.seen:
                continue
            self.seen.add(key)
            for a, b in combinations(sorted(person_ids), 2):
                self.counts[(a, b)] = self.counts.get((a, b), 0) + 1

    def count(self, a: int, b: int) -> int:
        return self.counts.get((min(a, b), max(a, b)), 0)

    def neighbours(self, person_id: int) -> dict[int, int]:
        out = {}
        for (a, b), c in self.counts.items():
            if a == person_id:
                out[b] = c
            elif b == person_id:
                out[a] = c
        return out

    def to_json(self) -> dict:
        return {
            "counts": [[a, b, c] for (a, b), c in sorted(self.counts.items())],
            "seen": sorted(list(pair) for pair in self.seen),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoOccurrenceStore":
        store = cls()
        store.counts = {(a, b): c for a, b, c in data.get("counts", [])}
        store.seen = {tuple(pair) for pair in data.get("seen", [])}
        return store


def related_persons(
    person_id: int,
    co_store: CoOccurrenceStore,
    person_store: PersonStore,
    mode: str = "frequent",
    total_clusters: int | None = None,
) -> list[tuple[int, float]]:
    """Rank co-occurring identities by raw count or association strength."""
    if person_id not in person_store.persons:
        raise KeyError(f"unknown personId {person_id}")
    neighbours = co_store.neighbours(person_id)
    if not neighbours:
        return []
    if mode == "frequent":
        ranked = [(pid, float(c)) for pid, c in neighbours.items()]
    elif mode == "specific":
        if total_clusters is None:
            all_clusters = set()
            for r in person_store.persons.values():
                all_clusters.update(r.cluster_ids)
            total_clusters = len(all_clusters)
        n_self = len(person_store.persons[person_id].cluster_ids)
        ranked = []
        for pid, co in neighbours.items():
            n_other = len(person_store.persons[pid].cluster_ids)
            a = co
            b = max(n_other - co, 0)
            c = max(n_self - co, 0)
            d = max(total_clusters - n_self - n_other + co, 0)
            ranked.append((pid, max(0.0, g2_contingency(a, b, c, d))))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ranked.sort(key=lambda kv: (-kv[1], kv[0]))
    return ranked


def _default_fetch(url: str, timeout: float = 5.0) -> bool:
    request = urllib.request.Request(url, method="HEAD")
    try:
        with urllib.request.urlopen(request, timeout=timeout) as response:
            return 200 <= response.status < 300
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            return False
        raise


class EncyclopediaCache:
    """url -> known existence; misses stay unknown so they are retried."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self.data: dict[str, bool] = {}
        if self.path and self.path.exists():
            self.data = json.loads(self.path.read_text(encoding="utf-8"))

    def save(self) -> None:
        if self.path:
            self.path.write_text(
                json.dumps(self.data, indent=1, sort_keys=True), encoding="utf-8"
            )


def encyclopedia_lookup(
    person: PersonRecord,
    endpoints: list[str],
    cache: EncyclopediaCache,
    fetch=None,
    offline: bool = False,
) -> list[str]:
    """Probe per-language encyclopedia URL templates for the person's slug."""
    fetch = fetch or _default_fetch
    slug = person.canonical.replace(" ", "_")
    urls = []
    for template in endpoints:
        url = template.format(slug=slug)
        if url in cache.data:
            if cache.data[url]:
                urls.append(url)
            continue
        if offline:
            continue
        try:
            exists = fetch(url)
        except Exception as exc:  # network failure: unknown, retry next run
            log.warning("encyclopedia probe failed for %s: %s", url, exc)
            continue
        cache.data[url] = exists
        if exists:
            urls.append(url)
    person.encyclopedia_urls = sorted(set(person.encyclopedia_urls) | set(urls))
    return urls
