"""Optional recomputation of the published heuristic-linker results.

When a replication dataset is available (see SCHEMAS.md for the expected
``linking_gold.jsonl`` layout), this recomputes the blank-line and
term-similarity rows of the published comparison: exact-match rate,
statement recall, and statement precision per linker. The harness only
checks tolerance; it fabricates nothing when the dataset is absent.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from . import schemas
from .extractor import InnerComment, SourceFile, SourceMethod, _build_statements, tokenize_method
from .linkers import link_blank_line, link_token_similarity
from .metrics import aggregate_link_scores, link_scores

REPLICATION_ENV = "SNIPDOC_REPLICATION_DIR"
REPLICATION_FILE = "linking_gold.jsonl"

# published values: {linker: (correct rate, recall, precision)}
PUBLISHED = {
    "blank-line": (0.20, 0.87, 0.57),
    "token-sim-0.1": (0.03, 0.62, 0.33),
    "token-sim-0.2": (0.05, 0.38, 0.34),
    "token-sim-0.3": (0.05, 0.23, 0.26),
}
TOLERANCE = 0.05


@dataclass(frozen=True)
class ReplicationRow:
    linker: str
    correct_rate: float
    recall: float
    precision: float
    expected: tuple[float, float, float]

    @property
    def within_tolerance(self) -> bool:
        actual = (self.correct_rate, self.recall, self.precision)
        return all(abs(a - e) <= TOLERANCE for a, e in zip(actual, self.expected))


def replication_dir() -> Path | None:
    value = os.environ.get(REPLICATION_ENV)
    if not value:
        return None
    path = Path(value)
    return path if (path / REPLICATION_FILE).is_file() else None


def _load_instances(directory: Path) -> list[tuple[SourceMethod, InnerComment, set[int]]]:
    records = schemas.read_jsonl(directory / REPLICATION_FILE, schemas.REPLICATION)
    instances = []
    for i, rec in enumerate(records):
        text = rec["method_text"]
        body = _build_statements(text)
        method = SourceMethod(
            id=rec.get("method_id", f"repl{i}"),
            file=SourceFile(path=rec.get("path", f"repl{i}.java"), project_id="replication", content=text),
            name=rec.get("name", f"repl{i}"),
            body_lines=body,
            tokens=tuple(tokenize_method(text)),
            is_test=False,
        )
        comment = InnerComment(
            id=f"{method.id}:c0",
            kind=rec.get("comment_kind", "line"),
            text=rec["comment_text"],
            start_line=rec["comment_start_line"],
            end_line=rec.get("comment_end_line", rec["comment_start_line"]),
            trailing=rec.get("trailing", False),
        )
        instances.append((method, comment, set(rec["gold_lines"])))
    return instances


def reproduce_linking_rows(directory: Path) -> list[ReplicationRow]:
    """Recompute the heuristic linker rows on a replication dataset."""
    instances = _load_instances(directory)
    if not instances:
        raise ValueError("replication dataset is empty")

    engines = {
        "blank-line": lambda m, c: link_blank_line(m, c),
        "token-sim-0.1": lambda m, c: link_token_similarity(m, c, 0.1),
        "token-sim-0.2": lambda m, c: link_token_similarity(m, c, 0.2),
        "token-sim-0.3": lambda m, c: link_token_similarity(m, c, 0.3),
    }
    rows = []
    for name, engine in engines.items():
        scores = [
            link_scores(engine(method, comment), gold)
            for method, comment, gold in instances
        ]
        agg = aggregate_link_scores(scores)
        rows.append(
            ReplicationRow(
                linker=name,
                correct_rate=agg["correct_rate"],
                recall=agg["micro_recall"],
                precision=agg["micro_precision"],
                expected=PUBLISHED[name],
            )
        )
    return rows
