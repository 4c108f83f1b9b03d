"""Reading and writing pipeline artifacts in a run directory."""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from pathlib import Path

from .corpus import Document

SCHEMA_VERSION = 1

REQUIRED_ARTIFACTS = (
    "documents.json",
    "keywords.json",
    "places.json",
    "names.json",
    "clusters.json",
    "terms.json",
)
OPTIONAL_ARTIFACTS = ("duplicates.json", "links.json")


def file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class RunDir:
    """One pipeline run's artifacts on disk."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    @property
    def run_id(self) -> str:
        return self.meta().get("runId", self.path.name)

    def _file(self, name: str) -> Path:
        return self.path / name

    def write(self, name: str, payload: dict) -> None:
        self.path.mkdir(parents=True, exist_ok=True)
        payload = {"schemaVersion": SCHEMA_VERSION, **payload}
        self._file(name).write_text(
            json.dumps(payload, ensure_ascii=False, indent=1, sort_keys=True),
            encoding="utf-8",
        )

    def read(self, name: str) -> dict:
        path = self._file(name)
        if not path.exists():
            raise FileNotFoundError(f"missing artifact {name} in {self.path}")
        return json.loads(path.read_text(encoding="utf-8"))

    def has(self, name: str) -> bool:
        return self._file(name).exists()

    def missing_artifacts(self) -> list[str]:
        return [name for name in REQUIRED_ARTIFACTS if not self.has(name)]

    # -- metadata ----------------------------------------------------------

    def meta(self) -> dict:
        if self.has("run.json"):
            return self.read("run.json")
        return {}

    def update_meta(self, **fields) -> dict:
        meta = self.meta()
        meta.pop("schemaVersion", None)
        resources = meta.get("resources", {})
        resources.update(fields.pop("resources", {}))
        meta.update(fields)
        meta["resources"] = resources
        meta.setdefault("runId", self.path.name)
        meta.setdefault(
            "timestamp", datetime.now(timezone.utc).isoformat(timespec="seconds")
        )
        self.write("run.json", meta)
        return meta

    # -- documents ---------------------------------------------------------

    def save_documents(self, docs: list[Document], language: str | None = None) -> None:
        self.write(
            "documents.json",
            {
                "documents": [
                    {
                        "id": d.id,
                        "source": d.source,
                        "language": d.language,
                        "title": d.title,
                        "body": d.body,
                        "published": d.published,
                    }
                    for d in docs
                ]
            },
        )
        languages = sorted({d.language for d in docs})
        majority = max(
            languages,
            key=lambda l: sum(1 for d in docs if d.language == l),
            default="",
        ) if docs else ""
        self.update_meta(language=language or majority, documentCount=len(docs))

    def load_documents(self) -> list[Document]:
        data = self.read("documents.json")
        return [
            Document(
                id=row["id"],
                source=row["source"],
                language=row["language"],
                title=row["title"],
                body=row["body"],
                published=row.get("published"),
            )
            for row in data["documents"]
        ]
