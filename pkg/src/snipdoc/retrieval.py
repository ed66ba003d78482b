"""Nearest-neighbor baseline summarizer.

Indexes the training pairs' documented-code token sets and answers a query
with the summary of the highest-Jaccard entry, ties going to the earliest
entry. A linear scan keeps scoring exact at the corpus sizes involved.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class IndexEntry:
    tokens: frozenset[str]
    summary: str
    provenance: str


@dataclass(frozen=True)
class SnippetIndex:
    entries: tuple[IndexEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


def jaccard(a: set[str] | frozenset[str], b: set[str] | frozenset[str]) -> float:
    """|a ∩ b| / |a ∪ b|; two empty sets count as identical (1.0)."""
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def build_index(pairs: list[tuple[set[str] | frozenset[str], str, str]]) -> SnippetIndex:
    """Index (snippet token set, summary, provenance) triples in order.

    Input order is preserved because retrieval breaks ties by entry index;
    duplicates are indexed as-is (dedup happens upstream)."""
    if not pairs:
        raise ValueError("cannot build an index from zero pairs")
    return SnippetIndex(
        entries=tuple(
            IndexEntry(tokens=frozenset(tokens), summary=summary, provenance=prov)
            for tokens, summary, prov in pairs
        )
    )


def retrieve_summary(
    query: set[str] | frozenset[str], index: SnippetIndex
) -> tuple[str, float, str]:
    """(summary, score, provenance) of the max-Jaccard entry; earliest wins ties."""
    if not index.entries:
        raise ValueError("index is empty")
    best_score = -1.0
    best_entry = index.entries[0]
    for entry in index.entries:
        score = jaccard(query, entry.tokens)
        if score > best_score:
            best_score = score
            best_entry = entry
    return best_entry.summary, best_score, best_entry.provenance
