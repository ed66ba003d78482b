"""Text-to-text instance encodings, snippet dedup, and dataset splitting.

Three tasks share one input convention: the comment of interest is wrapped
in <comment>...</comment> inside its method. Linking inputs additionally
prefix every linkable statement with its line tag <N>; linking targets are
the sorted gold tags (e.g. <1><2><4>). Summarization inputs remove the
comment and wrap each maximal contiguous run of linked lines in one
<start>...<end> pair; targets are the lowercased, stemmed comment text.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .extractor import InnerComment, SourceMethod, comment_spans
from .javalex import JavaLexError, Token, lex
from .stemming import stem_text
from .util import clean_comment_text, derive_seed, is_ascii

CLASSIFICATION = "classification"
LINKING = "linking"
SUMMARIZATION = "summarization"
TASKS = (CLASSIFICATION, LINKING, SUMMARIZATION)

SUMMARY_TARGET = "code summary"
OTHER_TARGET = "other"
MIN_SUMMARY_WORDS = 5

_LINK_TARGET_RE = re.compile(r"(?:\s*<\d+>)*\s*")
_TAG_RE = re.compile(r"<(\d+)>")
_SPAN_RE = re.compile(r"<start>(.*?)<end>", re.DOTALL)


class EncodingError(ValueError):
    pass


@dataclass
class TaskInstance:
    task: str
    input_text: str
    target_text: str
    method_id: str
    comment_id: str
    group: str = ""

    def to_record(self, split: str) -> dict:
        return {
            "task": self.task,
            "input_text": self.input_text,
            "target_text": self.target_text,
            "method_id": self.method_id,
            "comment_id": self.comment_id,
            "split": split,
        }


@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    group_key: str = "file"
    seed: int = 0

    def validate(self) -> None:
        if len(self.ratios) != 3 or any(r <= 0 for r in self.ratios):
            raise ValueError("ratios must be three positive fractions")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise ValueError("ratios must sum to 1")
        if self.group_key not in {"file", "none"}:
            raise ValueError("group_key must be 'file' or 'none'")


def preprocess_comment(text: str) -> str:
    """Strip comment markers, lowercase, and stem word by word."""
    return stem_text(clean_comment_text(text))


def is_summary_candidate(comment_text: str) -> bool:
    """True iff the preprocessed comment has >= 5 words, all ASCII."""
    processed = preprocess_comment(comment_text)
    return len(processed.split()) >= MIN_SUMMARY_WORDS and is_ascii(processed)


def _comment_token(method: SourceMethod, comment: InnerComment) -> Token:
    spans = comment_spans(method.text)
    try:
        ordinal = int(comment.id.rsplit(":c", 1)[1])
    except (IndexError, ValueError):
        ordinal = -1
    if 0 <= ordinal < len(spans):
        token = spans[ordinal]
        if token.text == comment.text and token.line == comment.start_line:
            return token
    for token in spans:
        if token.line == comment.start_line and token.text == comment.text:
            return token
    raise EncodingError(f"comment {comment.id} not found in method {method.id}")


def encode_classification(method: SourceMethod, comment: InnerComment) -> str:
    """Method text with this one comment wrapped in <comment> tags."""
    token = _comment_token(method, comment)
    text = method.text
    return (
        text[: token.offset]
        + "<comment>"
        + token.text
        + "</comment>"
        + text[token.end_offset :]
    )


def classification_target(categories: set[str]) -> str:
    return SUMMARY_TARGET if "summary" in categories else OTHER_TARGET


def encode_linking(
    method: SourceMethod, comment: InnerComment, gold: set[int] | None = None
) -> TaskInstance:
    """Classification encoding plus a <N> tag in front of every linkable
    statement, N being its 1-based body line number; the target is the
    sorted tag stream for the gold set (empty target for an empty set)."""
    wrapped = encode_classification(method, comment)
    lines = wrapped.split("\n")
    for stmt in method.body_lines:
        if stmt.is_linkable:
            lines[stmt.line_no - 1] = f"<{stmt.line_no}>" + lines[stmt.line_no - 1]
    target = ""
    if gold is not None:
        target = encode_link_target(method, gold)
    return TaskInstance(
        task=LINKING,
        input_text="\n".join(lines),
        target_text=target,
        method_id=method.id,
        comment_id=comment.id,
        group=method.file.path,
    )


def encode_link_target(method: SourceMethod, gold: set[int]) -> str:
    linkable = set(method.linkable_lines())
    bad = set(gold) - linkable
    if bad:
        raise EncodingError(
            f"gold links {sorted(bad)} are not linkable lines of {method.id}"
        )
    return "".join(f"<{n}>" for n in sorted(gold))


def decode_link_target(text: str) -> set[int] | None:
    """Parse a stream of <N> tags; duplicates collapse. Returns None for
    malformed text (the caller drops such predictions)."""
    if not _LINK_TARGET_RE.fullmatch(text):
        return None
    return {int(m) for m in _TAG_RE.findall(text)}


def contiguous_runs(lines: set[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers, as (first, last) pairs."""
    runs: list[tuple[int, int]] = []
    for n in sorted(lines):
        if runs and n == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], n)
        else:
            runs.append((n, n))
    return runs


def encode_summarization(
    method: SourceMethod, comment: InnerComment, links: set[int]
) -> TaskInstance:
    """Input: method text with the comment removed and one <start>...<end>
    pair around each maximal contiguous run of linked lines. Target: the
    preprocessed comment text."""
    if not links:
        raise EncodingError("summarization requires a non-empty link set")
    if not is_summary_candidate(comment.text):
        raise EncodingError("comment is not a summary candidate")
    linkable = set(method.linkable_lines())
    if set(links) - linkable:
        raise EncodingError("links reference non-linkable lines")

    token = _comment_token(method, comment)
    lines = method.text.split("\n")
    segments = token.text.split("\n")
    first, last = token.line, token.end_line
    if first == last:
        line = lines[first - 1]
        lines[first - 1] = line[: token.col] + line[token.col + len(token.text) :]
    else:
        lines[first - 1] = lines[first - 1][: token.col]
        for k in range(first + 1, last):
            lines[k - 1] = ""
        lines[last - 1] = lines[last - 1][len(segments[-1]) :]

    for a, b in contiguous_runs(set(links)):
        lines[a - 1] = "<start> " + lines[a - 1]
        lines[b - 1] = lines[b - 1] + " <end>"

    kept = [
        line
        for idx, line in enumerate(lines, start=1)
        if not (first <= idx <= last and not line.strip())
    ]
    return TaskInstance(
        task=SUMMARIZATION,
        input_text="\n".join(kept),
        target_text=preprocess_comment(comment.text),
        method_id=method.id,
        comment_id=comment.id,
        group=method.file.path,
    )


def snippet_spans(input_text: str) -> list[str]:
    return [m.group(1) for m in _SPAN_RE.finditer(input_text)]


def snippet_tokens(input_text: str) -> tuple[str, ...]:
    """Normalized token stream of the documented code inside the
    <start>/<end> spans; the snippet-level dedup key."""
    text = "\n".join(snippet_spans(input_text))
    try:
        return tuple(t.text for t in lex(text, keep_comments=False))
    except JavaLexError:
        return tuple(text.split())


def dedup_snippets(instances: list[TaskInstance]) -> list[TaskInstance]:
    """At most one instance per documented-code token stream; first wins."""
    seen: set[tuple[str, ...]] = set()
    out = []
    for inst in instances:
        key = snippet_tokens(inst.input_text)
        if key in seen:
            continue
        seen.add(key)
        out.append(inst)
    return out


def split_dataset(
    instances: list[TaskInstance], spec: SplitSpec
) -> tuple[list[TaskInstance], list[TaskInstance], list[TaskInstance]]:
    """Partition instances into train/eval/test.

    With group_key='file' all instances sharing a file stay together, so
    sizes only approximate the ratios as group atomicity allows. Targets
    come from largest-remainder apportionment; a seeded shuffle orders the
    groups and each lands in the partition with the largest remaining
    deficit. Fewer than three groups is an error.
    """
    spec.validate()
    groups: dict[str, list[TaskInstance]] = {}
    for idx, inst in enumerate(instances):
        key = inst.group if spec.group_key == "file" else f"#{idx}"
        groups.setdefault(key, []).append(inst)
    if len(groups) < 3:
        raise ValueError(
            f"need at least 3 groups to form 3 partitions, got {len(groups)}"
        )

    total = len(instances)
    floors = [int(r * total) for r in spec.ratios]
    remainders = [r * total - f for r, f in zip(spec.ratios, floors)]
    for _ in range(total - sum(floors)):
        best = max(range(3), key=lambda i: (remainders[i], -i))
        floors[best] += 1
        remainders[best] = -1.0

    keys = sorted(groups)
    rng = random.Random(derive_seed(spec.seed, "split"))
    rng.shuffle(keys)

    deficits = list(floors)
    parts: tuple[list[TaskInstance], ...] = ([], [], [])
    for key in keys:
        members = groups[key]
        target = max(range(3), key=lambda i: (deficits[i], -i))
        parts[target].extend(members)
        deficits[target] -= len(members)
    for part in parts:
        part.sort(key=lambda inst: (inst.method_id, inst.comment_id))
    return parts


def build_datasets(
    manifest,
    gold_records: list[dict],
    seed: int,
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    group_key: str = "file",
    summarization_cap: int = 512,
) -> dict[str, dict[str, list[TaskInstance]]]:
    """Build the per-task instance sets from a mined manifest and gold
    labels, dedup summarization snippets, and split each task dataset.

    Only labeled comments produce instances. Linking and summarization
    instances exist for summary-labeled comments; summarization further
    requires non-empty links, a summary-candidate comment, and a method
    within the summarization token cap.
    """
    gold_by_comment = {rec["comment_id"]: rec for rec in gold_records}
    collected: dict[str, list[TaskInstance]] = {task: [] for task in TASKS}

    for entry in manifest.entries:
        method = entry.method
        for comment in entry.comments:
            gold = gold_by_comment.get(comment.id)
            if gold is None:
                continue
            categories = set(gold["categories"])
            links = set(gold["lines"])

            collected[CLASSIFICATION].append(
                TaskInstance(
                    task=CLASSIFICATION,
                    input_text=encode_classification(method, comment),
                    target_text=classification_target(categories),
                    method_id=method.id,
                    comment_id=comment.id,
                    group=entry.path,
                )
            )
            if "summary" not in categories:
                continue
            collected[LINKING].append(encode_linking(method, comment, links))
            if (
                links
                and is_summary_candidate(comment.text)
                and len(method.tokens) <= summarization_cap
            ):
                collected[SUMMARIZATION].append(
                    encode_summarization(method, comment, links)
                )

    collected[SUMMARIZATION] = dedup_snippets(collected[SUMMARIZATION])

    datasets: dict[str, dict[str, list[TaskInstance]]] = {}
    for task in TASKS:
        spec = SplitSpec(
            ratios=ratios, group_key=group_key, seed=derive_seed(seed, "split", task)
        )
        train, eval_part, test = split_dataset(collected[task], spec)
        datasets[task] = {"train": train, "eval": eval_part, "test": test}
    return datasets
