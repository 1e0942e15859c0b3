"""Versioned on-disk run artifacts with content hashing.

An artifact is a JSON document holding the simulation config, the scores it
produced, and optionally the derived scored metagraph and filling sequences.
The content hash covers config and scores, so partial writes and tampering
are detected; derived fields can be added later without breaking it.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import CorruptArtifactError, SchemaVersionError
from .simulate import GraphScore, SimConfig, default_margins

SCHEMA_MAJOR = 1
SCHEMA_MINOR = 1
SCHEMA_VERSION = f"{SCHEMA_MAJOR}.{SCHEMA_MINOR}"


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_hash(config: SimConfig, scores: dict[str, GraphScore]) -> str:
    payload = {
        "config": config.to_dict(),
        "scores": {g6: sc.to_dict() for g6, sc in sorted(scores.items())},
    }
    return hashlib.sha256(_canonical_json(payload).encode()).hexdigest()


@dataclass
class RunArtifact:
    config: SimConfig
    scores: dict[str, GraphScore]
    content_hash: str
    created_at: str
    schema_version: str = SCHEMA_VERSION
    margins: dict[str, float] = field(default_factory=dict)
    metagraph: dict | None = None  # export_metagraph(..., "json") document
    sequences: list[dict] | None = None  # FillingSequence.to_dict() entries

    @staticmethod
    def build(config: SimConfig, scores: dict[str, GraphScore]) -> "RunArtifact":
        return RunArtifact(
            config=config,
            scores=dict(scores),
            content_hash=content_hash(config, scores),
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            margins=default_margins(config.n_samples),
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "created_at": self.created_at,
            "config": self.config.to_dict(),
            "scores": {g6: sc.to_dict() for g6, sc in sorted(self.scores.items())},
            "content_hash": self.content_hash,
            "margins": self.margins,
            "metagraph": self.metagraph,
            "sequences": self.sequences,
        }


def save_run(artifact: RunArtifact, path) -> None:
    """Write atomically: full temp file, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(artifact.to_dict(), sort_keys=True, indent=2) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_run(path) -> RunArtifact:
    """Load and verify an artifact; older minor schemas get defaulted fields."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptArtifactError(f"unreadable artifact {path}: {exc}") from exc
    version = str(doc.get("schema_version", ""))
    try:
        major, minor = (int(x) for x in version.split("."))
    except ValueError as exc:
        raise SchemaVersionError(f"malformed schema version {version!r}") from exc
    if major != SCHEMA_MAJOR or minor > SCHEMA_MINOR:
        raise SchemaVersionError(
            f"artifact schema {version} not supported by reader {SCHEMA_VERSION}"
        )
    config = SimConfig.from_dict(doc["config"])
    scores = {g6: GraphScore.from_dict(sc) for g6, sc in doc["scores"].items()}
    expected = content_hash(config, scores)
    if doc.get("content_hash") != expected:
        raise CorruptArtifactError(f"content hash mismatch in {path}")
    margins = doc.get("margins")
    if margins is None:  # added in 1.1
        margins = default_margins(config.n_samples)
    return RunArtifact(
        config=config,
        scores=scores,
        content_hash=doc["content_hash"],
        created_at=doc.get("created_at", ""),
        schema_version=SCHEMA_VERSION,
        margins=margins,
        metagraph=doc.get("metagraph"),
        sequences=doc.get("sequences"),
    )
