"""Small shared helpers: deterministic seed derivation and comment cleanup."""

from __future__ import annotations

import hashlib
import re


def derive_seed(master_seed: int, *parts: str | int) -> int:
    """Derive a stable per-purpose seed from a master seed and labels.

    Uses sha256 over the joined parts, so results are identical across
    processes and platforms (unlike ``hash()``, which is salted per run).
    """
    material = ":".join([str(master_seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


_BLOCK_EDGES = re.compile(r"^/\*+|\*+/$")
_LINE_PREFIX = re.compile(r"^//+")
_STAR_MARGIN = re.compile(r"^\s*\*(?!/)")


def clean_comment_text(raw: str) -> str:
    """Strip comment markers and collapse whitespace.

    ``// Loads the cached values`` becomes ``Loads the cached values``;
    block comments lose their delimiters and any leading ``*`` margins.
    """
    text = raw.strip()
    if text.startswith("/*"):
        text = _BLOCK_EDGES.sub("", text)
        lines = [_STAR_MARGIN.sub("", line) for line in text.split("\n")]
        text = " ".join(lines)
    elif text.startswith("//"):
        text = _LINE_PREFIX.sub("", text)
    return " ".join(text.split())


def is_ascii(text: str) -> bool:
    return all(ord(ch) < 128 for ch in text)


def word_count(text: str) -> int:
    return len(text.split())
