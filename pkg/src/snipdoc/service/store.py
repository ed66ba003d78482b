"""Annotation workflow state: tasks, labels, conflicts, resolutions.

Each sampled comment becomes a task assigned to exactly two annotators.
Statuses move pending -> partially_labeled -> labeled, labeled flips to
conflicted when the two labels disagree, and a third party moves
conflicted to resolved. All mutations append to a JSONL event log behind
one lock; a snapshot plus replay restores the store, so the audit trail
is never rewritten.
"""

from __future__ import annotations

import random
import statistics
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .. import schemas
from ..extractor import CorpusManifest
from ..stats import cohens_kappa
from ..util import derive_seed

BASE_CATEGORIES = (
    "summary",
    "rationale",
    "deprecation",
    "usage",
    "exception",
    "todo",
    "incomplete",
    "commented_code",
    "formatter",
    "pointer",
    "orphan",
    "code_example",
)
EXTENSION_PREFIX = "ext:"

PENDING = "pending"
PARTIALLY_LABELED = "partially_labeled"
LABELED = "labeled"
CONFLICTED = "conflicted"
RESOLVED = "resolved"

PER_FILE_CAP = 10


class AuthorizationError(Exception):
    pass


class DuplicateSubmissionError(Exception):
    pass


class StoreError(Exception):
    pass


@dataclass
class LabelRecord:
    task_id: str
    annotator_id: str
    categories: list[str]
    links: list[int]
    timestamp: float

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "annotator_id": self.annotator_id,
            "categories": sorted(self.categories),
            "links": sorted(self.links),
            "timestamp": self.timestamp,
        }


@dataclass
class AnnotationTask:
    task_id: str
    method_id: str
    path: str
    comment_id: str
    assignees: tuple[str, str]
    status: str = PENDING
    labels: dict[str, LabelRecord] = field(default_factory=dict)
    conflict_kind: str | None = None
    resolver_id: str | None = None
    resolution: LabelRecord | None = None

    def gold_label(self) -> LabelRecord | None:
        if self.status == RESOLVED:
            return self.resolution
        if self.status == LABELED:
            return next(iter(self.labels.values()))
        return None


def detect_conflict_kind(a: LabelRecord, b: LabelRecord) -> str | None:
    """category / link / both, or None when the two labels agree."""
    categories_differ = set(a.categories) != set(b.categories)
    links_differ = set(a.links) != set(b.links)
    if categories_differ and links_differ:
        return "both"
    if categories_differ:
        return "category"
    if links_differ:
        return "link"
    return None


class AnnotationStore:
    """Single-writer store; every public method is safe to call from
    concurrent request handlers."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self.tasks: dict[str, AnnotationTask] = {}
        self.extension_categories: list[str] = []
        self.linkable: dict[str, list[int]] = {}
        # what each task rendered: body lines + the comment under review
        self.render: dict[str, dict] = {}
        self._seq = 0
        self._load()

    @property
    def log_path(self) -> Path:
        return self.directory / "events.jsonl"

    @property
    def snapshot_path(self) -> Path:
        return self.directory / "snapshot.jsonl"

    # -- persistence ----------------------------------------------------

    def _append_event(self, kind: str, payload: dict) -> None:
        self._seq += 1
        schemas.append_jsonl(
            self.log_path, schemas.EVENTS,
            {"seq": self._seq, "kind": kind, "payload": payload},
        )

    def _load(self) -> None:
        snapshot_seq = 0
        if self.snapshot_path.exists():
            records = schemas.read_jsonl(self.snapshot_path, schemas.SNAPSHOT)
            if records:
                state = records[0]
                snapshot_seq = state["seq"]
                self._restore_state(state)
        if self.log_path.exists():
            for event in schemas.read_jsonl(self.log_path, schemas.EVENTS):
                self._seq = max(self._seq, event["seq"])
                if event["seq"] > snapshot_seq:
                    self._apply_event(event["kind"], event["payload"])
        self._seq = max(self._seq, snapshot_seq)

    def snapshot(self) -> None:
        """Write the current state so later loads replay fewer events."""
        with self._lock:
            state = {
                "seq": self._seq,
                "extension_categories": list(self.extension_categories),
                "linkable": self.linkable,
                "render": self.render,
                "tasks": [self._task_state(t) for t in self.tasks.values()],
            }
            schemas.write_jsonl(self.snapshot_path, schemas.SNAPSHOT, [state])

    def _task_state(self, task: AnnotationTask) -> dict:
        return {
            "task_id": task.task_id,
            "method_id": task.method_id,
            "path": task.path,
            "comment_id": task.comment_id,
            "assignees": list(task.assignees),
            "status": task.status,
            "labels": {a: r.to_dict() for a, r in task.labels.items()},
            "conflict_kind": task.conflict_kind,
            "resolver_id": task.resolver_id,
            "resolution": task.resolution.to_dict() if task.resolution else None,
        }

    def _restore_state(self, state: dict) -> None:
        self.extension_categories = list(state["extension_categories"])
        self.linkable = {k: list(v) for k, v in state["linkable"].items()}
        self.render = dict(state.get("render", {}))
        for ts in state["tasks"]:
            task = AnnotationTask(
                task_id=ts["task_id"],
                method_id=ts["method_id"],
                path=ts["path"],
                comment_id=ts["comment_id"],
                assignees=tuple(ts["assignees"]),
                status=ts["status"],
                conflict_kind=ts["conflict_kind"],
                resolver_id=ts["resolver_id"],
            )
            task.labels = {
                a: LabelRecord(**r) for a, r in ts["labels"].items()
            }
            if ts["resolution"]:
                task.resolution = LabelRecord(**ts["resolution"])
            self.tasks[task.task_id] = task

    def _apply_event(self, kind: str, payload: dict) -> None:
        if kind == "task_created":
            self.tasks[payload["task_id"]] = AnnotationTask(
                task_id=payload["task_id"],
                method_id=payload["method_id"],
                path=payload["path"],
                comment_id=payload["comment_id"],
                assignees=tuple(payload["assignees"]),
            )
            self.linkable[payload["task_id"]] = list(payload["linkable"])
            self.render[payload["task_id"]] = payload.get("render", {})
        elif kind == "label_submitted":
            record = LabelRecord(**payload["record"])
            task = self.tasks[record.task_id]
            task.labels[record.annotator_id] = record
            task.status = payload["status"]
            task.conflict_kind = payload.get("conflict_kind")
        elif kind == "conflict_resolved":
            record = LabelRecord(**payload["record"])
            task = self.tasks[record.task_id]
            task.resolution = record
            task.resolver_id = payload["resolver_id"]
            task.status = RESOLVED
        elif kind == "category_added":
            name = payload["name"]
            if name not in self.extension_categories:
                self.extension_categories.append(name)

    # -- batch creation --------------------------------------------------

    def create_batch(
        self,
        manifest: CorpusManifest,
        pool: list[str],
        per_file_cap: int = PER_FILE_CAP,
        seed: int = 0,
    ) -> list[AnnotationTask]:
        """One task per sampled comment, two distinct assignees each.

        Files with more comments than the cap contribute a seeded sample of
        exactly the cap; assignment pairs rotate round-robin through the
        pool. A pool smaller than 3 cannot support third-party resolution.
        """
        if len(pool) < 3:
            raise StoreError("annotator pool must have at least 3 members")
        if not manifest.entries:
            raise StoreError("manifest has no entries")
        with self._lock:
            by_file: dict[str, list] = {}
            for entry in manifest.entries:
                by_file.setdefault(entry.path, []).append(entry)
            created = []
            counter = len(self.tasks)
            for path in sorted(by_file):
                candidates = [
                    (entry, comment)
                    for entry in by_file[path]
                    for comment in entry.comments
                ]
                if len(candidates) > per_file_cap:
                    rng = random.Random(derive_seed(seed, "sample", path))
                    picked_idx = sorted(
                        rng.sample(range(len(candidates)), per_file_cap)
                    )
                    candidates = [candidates[i] for i in picked_idx]
                for entry, comment in candidates:
                    k = counter
                    assignees = (pool[(2 * k) % len(pool)], pool[(2 * k + 1) % len(pool)])
                    task = AnnotationTask(
                        task_id=f"task-{k:05d}",
                        method_id=entry.method.id,
                        path=entry.path,
                        comment_id=comment.id,
                        assignees=assignees,
                    )
                    render = {
                        "body": [
                            {
                                "line": s.line_no,
                                "text": s.text,
                                "linkable": s.is_linkable,
                            }
                            for s in entry.method.body_lines
                        ],
                        "comment": {
                            "text": comment.text,
                            "kind": comment.kind,
                            "start_line": comment.start_line,
                            "end_line": comment.end_line,
                            "trailing": comment.trailing,
                        },
                    }
                    self.tasks[task.task_id] = task
                    self.linkable[task.task_id] = entry.method.linkable_lines()
                    self.render[task.task_id] = render
                    self._append_event(
                        "task_created",
                        {
                            "task_id": task.task_id,
                            "method_id": task.method_id,
                            "path": task.path,
                            "comment_id": task.comment_id,
                            "assignees": list(assignees),
                            "linkable": self.linkable[task.task_id],
                            "render": render,
                        },
                    )
                    created.append(task)
                    counter += 1
            return created

    # -- labeling ---------------------------------------------------------

    def valid_categories(self) -> list[str]:
        return list(BASE_CATEGORIES) + list(self.extension_categories)

    def add_extension_category(self, name: str) -> str:
        if not name.startswith(EXTENSION_PREFIX):
            name = EXTENSION_PREFIX + name
        if name == EXTENSION_PREFIX:
            raise StoreError("extension category needs a name")
        with self._lock:
            if name not in self.extension_categories:
                self.extension_categories.append(name)
                self._append_event("category_added", {"name": name})
        return name

    def _check_categories(self, categories: list[str]) -> None:
        if not categories:
            raise StoreError("at least one category is required")
        valid = set(self.valid_categories())
        for cat in categories:
            if cat in valid:
                continue
            if cat.startswith(EXTENSION_PREFIX) and len(cat) > len(EXTENSION_PREFIX):
                continue
            raise StoreError(f"unknown category {cat!r}")

    def _check_links(self, task_id: str, links: list[int]) -> None:
        allowed = set(self.linkable.get(task_id, []))
        bad = set(links) - allowed
        if bad:
            raise StoreError(f"lines {sorted(bad)} are not linkable in this task")

    def submit_label(
        self,
        task_id: str,
        annotator_id: str,
        categories: list[str],
        links: list[int],
        timestamp: float | None = None,
    ) -> str:
        """Record one annotator's label; returns the new task status."""
        with self._lock:
            task = self.tasks.get(task_id)
            if task is None:
                raise KeyError(task_id)
            if annotator_id not in task.assignees:
                raise AuthorizationError(
                    f"{annotator_id} is not assigned to {task_id}"
                )
            if annotator_id in task.labels:
                raise DuplicateSubmissionError(
                    f"{annotator_id} already labeled {task_id}"
                )
            self._check_categories(categories)
            self._check_links(task_id, links)
            for cat in categories:
                if cat.startswith(EXTENSION_PREFIX):
                    self.add_extension_category(cat)
            record = LabelRecord(
                task_id=task_id,
                annotator_id=annotator_id,
                categories=sorted(set(categories)),
                links=sorted(set(links)),
                timestamp=timestamp if timestamp is not None else time.time(),
            )
            task.labels[annotator_id] = record
            if len(task.labels) == 1:
                task.status = PARTIALLY_LABELED
            else:
                first, second = (task.labels[a] for a in task.assignees)
                kind = detect_conflict_kind(first, second)
                if kind is None:
                    task.status = LABELED
                    task.conflict_kind = None
                else:
                    task.status = CONFLICTED
                    task.conflict_kind = kind
            self._append_event(
                "label_submitted",
                {
                    "record": record.to_dict(),
                    "status": task.status,
                    "conflict_kind": task.conflict_kind,
                },
            )
            return task.status

    def resolve(
        self,
        task_id: str,
        resolver_id: str,
        categories: list[str],
        links: list[int],
        timestamp: float | None = None,
    ) -> str:
        """Third-party adjudication of a conflicted task."""
        with self._lock:
            task = self.tasks.get(task_id)
            if task is None:
                raise KeyError(task_id)
            if resolver_id in task.assignees:
                raise AuthorizationError("resolver must not be an assignee")
            if task.status != CONFLICTED:
                raise StoreError(f"task {task_id} is not conflicted")
            self._check_categories(categories)
            self._check_links(task_id, links)
            record = LabelRecord(
                task_id=task_id,
                annotator_id=resolver_id,
                categories=sorted(set(categories)),
                links=sorted(set(links)),
                timestamp=timestamp if timestamp is not None else time.time(),
            )
            task.resolution = record
            task.resolver_id = resolver_id
            task.status = RESOLVED
            self._append_event(
                "conflict_resolved",
                {"record": record.to_dict(), "resolver_id": resolver_id},
            )
            return task.status

    # -- queries ----------------------------------------------------------

    def assignments(self, annotator_id: str) -> list[AnnotationTask]:
        """This annotator's tasks still waiting for their label, oldest
        first (task ids are creation-ordered)."""
        with self._lock:
            return sorted(
                (
                    t
                    for t in self.tasks.values()
                    if annotator_id in t.assignees and annotator_id not in t.labels
                ),
                key=lambda t: t.task_id,
            )

    def conflicts_for(self, resolver_id: str) -> list[AnnotationTask]:
        """Open conflicts this user may resolve (not their own tasks)."""
        with self._lock:
            return sorted(
                (
                    t
                    for t in self.tasks.values()
                    if t.status == CONFLICTED and resolver_id not in t.assignees
                ),
                key=lambda t: t.task_id,
            )

    def open_conflicts(self) -> list[AnnotationTask]:
        with self._lock:
            return sorted(
                (t for t in self.tasks.values() if t.status == CONFLICTED),
                key=lambda t: t.task_id,
            )

    # -- export -----------------------------------------------------------

    def export_gold(self) -> dict:
        """Adjudicated dataset: agreeing + resolved tasks only, plus
        per-category counts and link-count statistics, the conflict-rate
        breakdown, and inter-annotator kappa over category sets."""
        with self._lock:
            records = []
            category_links: dict[str, list[int]] = {}
            for task in sorted(self.tasks.values(), key=lambda t: t.task_id):
                gold = task.gold_label()
                if gold is None:
                    continue
                records.append(
                    {
                        "task_id": task.task_id,
                        "method_id": task.method_id,
                        "path": task.path,
                        "comment_id": task.comment_id,
                        "categories": sorted(gold.categories),
                        "lines": sorted(gold.links),
                        "resolved": task.status == RESOLVED,
                    }
                )
                for cat in gold.categories:
                    category_links.setdefault(cat, []).append(len(gold.links))

            category_stats = [
                {
                    "category": cat,
                    "count": len(counts),
                    "mean_links": round(statistics.mean(counts), 4),
                    "median_links": statistics.median(counts),
                    "sd_links": round(
                        statistics.pstdev(counts) if len(counts) > 1 else 0.0, 4
                    ),
                }
                for cat, counts in sorted(category_links.items())
            ]

            double_labeled = [
                t for t in self.tasks.values() if len(t.labels) == 2
            ]
            conflicts = [t for t in double_labeled if t.conflict_kind]
            by_kind = {"category": 0, "link": 0, "both": 0}
            for t in conflicts:
                by_kind[t.conflict_kind] += 1
            kappa = None
            if double_labeled:
                a_labels, b_labels = [], []
                for t in sorted(double_labeled, key=lambda t: t.task_id):
                    first, second = (t.labels[a] for a in t.assignees)
                    a_labels.append(",".join(sorted(first.categories)))
                    b_labels.append(",".join(sorted(second.categories)))
                kappa = cohens_kappa(a_labels, b_labels)

            return {
                "records": records,
                "category_stats": category_stats,
                "conflict_report": {
                    "double_labeled": len(double_labeled),
                    "conflicts": len(conflicts),
                    "rate": (
                        round(len(conflicts) / len(double_labeled), 4)
                        if double_labeled
                        else 0.0
                    ),
                    "by_kind": by_kind,
                    "category_kappa": kappa,
                },
            }

    def write_export(self, path: str | Path) -> None:
        export = self.export_gold()
        records = [{"kind": "record", **r} for r in export["records"]]
        records += [{"kind": "category_stats", **s} for s in export["category_stats"]]
        records.append({"kind": "conflict_report", **export["conflict_report"]})
        schemas.write_jsonl(path, schemas.EXPORT, records)
