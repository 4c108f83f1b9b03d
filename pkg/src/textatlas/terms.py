"""Specialist-term matching with suffix expansion, KWIC contexts, glossing."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Document

DEFAULT_KWIC_WINDOW = 60


@dataclass
class TermEntry:
    term_id: str
    language: str
    stem: str
    suffixes: list[str]
    display_form: str
    subject_field: str | None = None
    translations: dict[str, str] = field(default_factory=dict)
    expansions: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.stem:
            raise ValueError(f"term {self.term_id}: empty stem")
        forms = {self.stem + suffix for suffix in self.suffixes}
        if not forms:
            raise ValueError(f"term {self.term_id}: empty expansion set")
        self.expansions = frozenset(f.lower() for f in forms)


@dataclass
class TermHit:
    cluster_id: str
    term_id: str
    count: int
    per_doc: dict[str, int]
    matched_forms: list[str]
    display_form: str = ""
    subject_field: str | None = None


@dataclass
class KwicHit:
    doc_id: str
    term_id: str
    matched_form: str
    offset: int
    left: str
    right: str


def load_term_list(path: str | Path) -> list[TermEntry]:
    """TSV rows: termId, language, stem, pipe-separated suffixes, displayForm,
    subjectField, translations as lang=form pairs separated by pipes."""
    entries = []
    seen_ids = set()
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 7:
            raise ValueError(f"{path}:{lineno}: expected 7 columns, got {len(cols)}")
        term_id, language, stem, raw_suffixes, display, subject, raw_translations = cols
        if term_id in seen_ids:
            raise ValueError(f"{path}:{lineno}: duplicate termId {term_id!r}")
        seen_ids.add(term_id)
        # Suffix lists are sets; a trailing pipe contributes the empty suffix.
        suffixes = sorted(set(raw_suffixes.split("|"))) if raw_suffixes else [""]
        translations = {}
        if raw_translations:
            for pair in raw_translations.split("|"):
                lang, _, form = pair.partition("=")
                if form:
                    translations[lang] = form
        try:
            entries.append(
                TermEntry(
                    term_id, language, stem, suffixes, display,
                    subject or None, translations,
                )
            )
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return entries


def _find_matches(
    doc: Document, terms: list[TermEntry]
) -> list[tuple[int, int, str, str]]:
    """Non-overlapping (token_start, token_len, term_id, matched_form) matches.

    Longest expansion wins at each position; matches respect token
    boundaries and may span several tokens.
    """
    applicable = [t for t in terms if t.language == doc.language]
    if not applicable:
        return []
    # expansion token-tuple -> (token_count, term_id, form); longest wins.
    by_first: dict[str, list[tuple[int, tuple[str, ...], str, str]]] = {}
    for term in applicable:
        for form in term.expansions:
            parts = tuple(form.split())
            by_first.setdefault(parts[0], []).append(
                (len(parts), parts, term.term_id, form)
            )
    for options in by_first.values():
        options.sort(key=lambda o: (-o[0], -len(" ".join(o[1])), o[2]))

    lower = [t.lowercase for t in doc.tokens]
    matches = []
    i = 0
    while i < len(lower):
        options = by_first.get(lower[i])
        hit = None
        if options:
            for width, parts, term_id, form in options:
                if tuple(lower[i : i + width]) == parts:
                    hit = (i, width, term_id, form)
                    break
        if hit:
            matches.append(hit)
            i += hit[1]
        else:
            i += 1
    return matches


def match_terms(
    cluster_id: str, docs: list[Document], terms: list[TermEntry]
) -> list[TermHit]:
    """Count term occurrences across the cluster's documents."""
    per_term_doc: dict[str, Counter] = {}
    per_term_forms: dict[str, set[str]] = {}
    for doc in docs:
        for _, _, term_id, form in _find_matches(doc, terms):
            per_term_doc.setdefault(term_id, Counter())[doc.id] += 1
            per_term_forms.setdefault(term_id, set()).add(form)
    by_id = {t.term_id: t for t in terms}
    hits = []
    for term_id, counts in per_term_doc.items():
        entry = by_id[term_id]
        hits.append(
            TermHit(
                cluster_id,
                term_id,
                sum(counts.values()),
                dict(sorted(counts.items())),
                sorted(per_term_forms[term_id]),
                entry.display_form,
                entry.subject_field,
            )
        )
    hits.sort(key=lambda h: (-h.count, h.term_id))
    return hits


def kwic(
    term_id: str,
    docs: list[Document],
    terms: list[TermEntry],
    window: int = DEFAULT_KWIC_WINDOW,
) -> list[KwicHit]:
    """One context line per occurrence, document order then offset order."""
    hits = []
    for doc in docs:
        for start, width, matched_id, form in _find_matches(doc, terms):
            if matched_id != term_id:
                continue
            first, last = doc.tokens[start], doc.tokens[start + width - 1]
            offset = first.offset
            end = last.offset + last.length
            hits.append(
                KwicHit(
                    doc.id,
                    term_id,
                    doc.body[offset:end],
                    offset,
                    doc.body[max(0, offset - window) : offset],
                    doc.body[end : end + window],
                )
            )
    return hits


def gloss(
    display_form: str,
    translations: dict[str, str],
    target_language: str,
) -> str:
    """Target-language translation when available, else the display form."""
    return translations.get(target_language, display_form)


def gloss_term(entry: TermEntry, target_language: str) -> str:
    return gloss(entry.display_form, entry.translations, target_language)
