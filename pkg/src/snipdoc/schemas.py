"""Versioned line-delimited JSON artifacts.

Every artifact starts with a header line ``{"schema": "<kind>/<version>"}``.
Readers fail closed: a missing or mismatched header raises
:class:`SchemaVersionError` (the CLI maps this to exit code 3). Field names
for every kind are documented in SCHEMAS.md.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

MANIFEST = "snipdoc.manifest/1"
COMMENTS = "snipdoc.comments/1"
GOLD = "snipdoc.gold/1"
DATASET = "snipdoc.dataset/1"
LINKS = "snipdoc.links/1"
PREDICTIONS = "snipdoc.predictions/1"
FOREST = "snipdoc.forest/1"
REPORT = "snipdoc.report/1"
EVENTS = "snipdoc.events/1"
SNAPSHOT = "snipdoc.snapshot/1"
EXPORT = "snipdoc.export/1"
REPLICATION = "snipdoc.replication/1"


class SchemaVersionError(Exception):
    """Input file is missing a schema header or carries an unknown one."""

    def __init__(self, path: str | Path, found: str | None, expected: str):
        self.path = str(path)
        self.found = found
        self.expected = expected
        super().__init__(
            f"{path}: expected schema {expected!r}, found {found!r}"
        )


def dumps(record: dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


def write_jsonl(
    path: str | Path, schema: str, records: Iterable[dict[str, Any]]
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps({"schema": schema}) + "\n")
        for record in records:
            fh.write(dumps(record) + "\n")


def read_jsonl(path: str | Path, schema: str) -> list[dict[str, Any]]:
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line) if header_line.strip() else None
        except json.JSONDecodeError:
            header = None
        found = header.get("schema") if isinstance(header, dict) else None
        if found != schema:
            raise SchemaVersionError(path, found, schema)
        return [json.loads(line) for line in fh if line.strip()]


def append_jsonl(path: str | Path, schema: str, record: dict[str, Any]) -> None:
    """Append one record, writing the header first when the file is new."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not path.exists() or path.stat().st_size == 0:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps({"schema": schema}) + "\n")
    with path.open("a", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(record) + "\n")


def manifest_records(manifest) -> list[dict[str, Any]]:
    """Serialize a CorpusManifest (see extractor) to plain records.

    The first record summarizes mining skips; the rest carry one method
    each.
    """
    records: list[dict[str, Any]] = [
        {"kind": "mining_summary", "skip_counts": dict(manifest.skip_counts)}
    ]
    for entry in manifest.entries:
        method = entry.method
        records.append(
            {
                "method_id": method.id,
                "project": entry.project,
                "path": entry.path,
                "name": method.name,
                "is_test": method.is_test,
                "token_count": len(method.tokens),
                "body": [
                    {
                        "line": s.line_no,
                        "text": s.text,
                        "blank": s.is_blank,
                        "comment_only": s.is_comment_only,
                    }
                    for s in method.body_lines
                ],
                "comments": [
                    {
                        "id": c.id,
                        "kind": c.kind,
                        "text": c.text,
                        "start_line": c.start_line,
                        "end_line": c.end_line,
                        "trailing": c.trailing,
                    }
                    for c in entry.comments
                ],
            }
        )
    return records


def manifest_from_records(records: list[dict[str, Any]]):
    """Rebuild a CorpusManifest from serialized records."""
    from .extractor import (
        CorpusManifest,
        InnerComment,
        ManifestEntry,
        SourceFile,
        SourceMethod,
        Statement,
        tokenize_method,
    )

    manifest = CorpusManifest()
    for rec in records:
        if rec.get("kind") == "mining_summary":
            manifest.skip_counts.update(rec["skip_counts"])
            continue
        body = tuple(
            Statement(
                line_no=b["line"],
                text=b["text"],
                is_blank=b["blank"],
                is_comment_only=b["comment_only"],
            )
            for b in rec["body"]
        )
        text = "\n".join(s.text for s in body)
        method = SourceMethod(
            id=rec["method_id"],
            file=SourceFile(path=rec["path"], project_id=rec["project"], content=""),
            name=rec["name"],
            body_lines=body,
            tokens=tuple(tokenize_method(text)),
            is_test=rec["is_test"],
        )
        comments = [
            InnerComment(
                id=c["id"],
                kind=c["kind"],
                text=c["text"],
                start_line=c["start_line"],
                end_line=c["end_line"],
                trailing=c["trailing"],
            )
            for c in rec["comments"]
        ]
        manifest.entries.append(ManifestEntry(method=method, comments=comments))
    return manifest
