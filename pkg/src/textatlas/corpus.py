"""Document ingestion, tokenization and near-duplicate detection."""

from __future__ import annotations

import hashlib
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

# Maximal runs of Unicode letters/digits; apostrophes between letters are
# kept inside the token ("Korea's" stays whole). Underscore is excluded.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)

PENTAGRAM_SIZE = 5


@dataclass(frozen=True)
class Token:
    surface: str
    offset: int
    length: int
    lowercase: str


@dataclass
class Document:
    id: str
    source: str
    language: str
    title: str
    body: str
    published: str | None = None
    tokens: list[Token] = field(default_factory=list)

    def __post_init__(self):
        if not self.tokens:
            self.tokens = tokenize(self.body)


@dataclass
class PentagramSet:
    doc_id: str
    grams: frozenset[int]
    count: int


@dataclass
class LoadResult:
    documents: list[Document]
    warnings: list[str] = field(default_factory=list)


def tokenize(text: str) -> list[Token]:
    """Split text into tokens of letters/digits, preserving offsets."""
    return [
        Token(m.group(0), m.start(), m.end() - m.start(), m.group(0).lower())
        for m in _TOKEN_RE.finditer(text)
    ]


def _gram_hash(window: tuple[str, ...]) -> int:
    digest = hashlib.blake2b("\x1f".join(window).encode("utf-8"), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


def pentagrams(doc: Document) -> PentagramSet:
    """Hash every window of five consecutive lowercase tokens."""
    forms = [t.lowercase for t in doc.tokens]
    count = max(0, len(forms) - (PENTAGRAM_SIZE - 1))
    grams = frozenset(
        _gram_hash(tuple(forms[i : i + PENTAGRAM_SIZE])) for i in range(count)
    )
    return PentagramSet(doc.id, grams, count)


def overlap_ratio(a: PentagramSet, b: PentagramSet) -> float:
    """Largest per-document fraction of shared pentagrams, in [0, 1]."""
    if not a.grams or not b.grams:
        return 0.0
    shared = len(a.grams & b.grams)
    return max(shared / len(a.grams), shared / len(b.grams))


def find_near_duplicates(
    docs: list[Document], threshold: float = 0.5
) -> list[tuple[str, str, float]]:
    """All unordered document pairs whose pentagram overlap meets threshold."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    sets = [pentagrams(d) for d in docs]
    pairs = []
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            ratio = overlap_ratio(sets[i], sets[j])
            if ratio >= threshold:
                a, b = sorted((sets[i].doc_id, sets[j].doc_id))
                pairs.append((a, b, ratio))
    pairs.sort(key=lambda p: (-p[2], p[0], p[1]))
    return pairs


def remove_duplicates(
    docs: list[Document], pairs: list[tuple[str, str, float]]
) -> list[Document]:
    """Drop the later-id member of every flagged pair."""
    dropped = {max(a, b) for a, b, _ in pairs}
    return [d for d in docs if d.id not in dropped]


def load_collection(path: str | Path, format: str) -> LoadResult:
    if format == "plaintext-dir":
        return _load_plaintext_dir(Path(path))
    if format == "rss":
        return _load_rss(Path(path))
    raise ValueError(f"unknown collection format: {format}")


def _load_plaintext_dir(root: Path) -> LoadResult:
    """Directory of UTF-8 .txt files plus a TSV manifest.

    Manifest columns: filename, language, source, date, title.
    """
    if not root.is_dir():
        raise FileNotFoundError(f"not a readable directory: {root}")
    manifest = root / "manifest.tsv"
    result = LoadResult([])
    if not manifest.exists():
        txts = sorted(root.glob("*.txt"))
        if txts:
            raise FileNotFoundError(
                f"missing manifest.tsv in {root}: language metadata is required"
            )
        return result
    for lineno, line in enumerate(
        manifest.read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) < 5:
            result.warnings.append(f"{manifest}:{lineno}: expected 5 columns, skipped")
            continue
        filename, language, source, date, title = cols[:5]
        if not language.strip():
            result.warnings.append(f"{manifest}:{lineno}: missing language, rejected")
            continue
        fpath = root / filename
        if not fpath.exists():
            raise FileNotFoundError(f"{manifest}:{lineno}: no such file: {fpath}")
        result.documents.append(
            Document(
                id=filename,
                source=source,
                language=language.strip().lower(),
                title=title,
                body=fpath.read_text(encoding="utf-8"),
                published=date or None,
            )
        )
    return result


def _load_rss(path: Path) -> LoadResult:
    """RSS 2.0 feed: item title/description/pubDate/guid, channel language."""
    if not path.exists():
        raise FileNotFoundError(f"not a readable file: {path}")
    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        raise ValueError(f"unparseable RSS file {path}: {exc}") from exc
    channel = tree.getroot().find("channel")
    if channel is None:
        raise ValueError(f"{path}: no <channel> element")
    feed_lang = (channel.findtext("language") or "").strip().lower()[:2]
    source = channel.findtext("title") or str(path)
    result = LoadResult([])
    for i, item in enumerate(channel.findall("item")):
        title = item.findtext("title")
        description = item.findtext("description")
        if not title or description is None:
            result.warnings.append(f"{path}: item {i}: missing title/description, skipped")
            continue
        lang = (item.findtext("language") or feed_lang).strip().lower()
        if not lang:
            result.warnings.append(f"{path}: item {i}: missing language tag, rejected")
            continue
        guid = item.findtext("guid") or f"{path.name}#{i}"
        result.documents.append(
            Document(
                id=guid,
                source=source,
                language=lang,
                title=title,
                body=description,
                published=item.findtext("pubDate"),
            )
        )
    return result
