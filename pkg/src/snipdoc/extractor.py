"""Method segmentation, inner-comment extraction, and corpus mining.

Methods are located by brace matching over the token stream rather than a
full grammar, which keeps extraction robust on unusual or partial files.
Each method's body is a run of physical lines numbered from 1; blank and
comment-only lines are tracked because they are not linkable targets.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .javalex import JavaLexError, Token, is_javadoc, lex

logger = logging.getLogger(__name__)

# Keywords that can be followed by "(" without starting a method declaration.
_CONTROL_WORDS = {
    "if", "for", "while", "switch", "catch", "synchronized", "do", "try",
    "return", "new", "else", "case", "assert", "throw", "super", "this",
}
# A word immediately before a name(... header that rules out a method.
_DECL_BLOCKERS = {"new", ".", "class", "interface", "enum", "record"}


class ExtractionError(Exception):
    """File could not be segmented (unbalanced braces, bad comment, ...)."""

    def __init__(self, message: str, offset: int = 0, line: int = 0):
        super().__init__(message)
        self.offset = offset
        self.line = line


@dataclass(frozen=True)
class SourceFile:
    path: str
    project_id: str
    content: str


@dataclass(frozen=True)
class Statement:
    line_no: int  # 1-based within the method body
    text: str
    is_blank: bool
    is_comment_only: bool

    @property
    def is_linkable(self) -> bool:
        # lines of pure punctuation (closing braces and the like) carry no
        # statement a comment could document
        return (
            not self.is_blank
            and not self.is_comment_only
            and any(ch.isalnum() or ch in "_$" for ch in self.text)
        )


@dataclass(frozen=True)
class InnerComment:
    id: str
    kind: str  # "line" | "block"
    text: str  # raw text including markers
    start_line: int  # 1-based within the method body
    end_line: int
    trailing: bool  # code precedes the comment on its first line


@dataclass(frozen=True)
class SourceMethod:
    id: str
    file: SourceFile
    name: str
    body_lines: tuple[Statement, ...]
    tokens: tuple[str, ...]
    is_test: bool

    @property
    def text(self) -> str:
        return "\n".join(s.text for s in self.body_lines)

    def statement(self, line_no: int) -> Statement:
        return self.body_lines[line_no - 1]

    def linkable_lines(self) -> list[int]:
        return [s.line_no for s in self.body_lines if s.is_linkable]


def method_id(tokens: list[str] | tuple[str, ...]) -> str:
    """Stable hash of the normalized token stream."""
    digest = hashlib.sha256(" ".join(tokens).encode("utf-8")).hexdigest()
    return digest[:16]


def _check_braces(tokens: list[Token]) -> None:
    depth = 0
    opens: list[Token] = []
    for tok in tokens:
        if tok.text == "{":
            depth += 1
            opens.append(tok)
        elif tok.text == "}":
            depth -= 1
            if depth < 0:
                raise ExtractionError(
                    "unbalanced '}' at file scope", offset=tok.offset, line=tok.line
                )
            opens.pop()
    if depth != 0:
        tok = opens[-1]
        raise ExtractionError(
            "unclosed '{' at file scope", offset=tok.offset, line=tok.line
        )


def _skip_parens(tokens: list[Token], open_idx: int) -> int:
    """Index just past the ')' matching tokens[open_idx] == '('."""
    depth = 0
    for j in range(open_idx, len(tokens)):
        if tokens[j].text == "(":
            depth += 1
        elif tokens[j].text == ")":
            depth -= 1
            if depth == 0:
                return j + 1
    return len(tokens)


def _match_header(tokens: list[Token], name_idx: int) -> int | None:
    """If tokens[name_idx] starts a ``name(...) [throws ...] {`` header,
    return the index of the opening body brace, else None."""
    name = tokens[name_idx]
    if name.kind != "word" or name.text in _CONTROL_WORDS:
        return None
    if name_idx + 1 >= len(tokens) or tokens[name_idx + 1].text != "(":
        return None
    if name_idx > 0 and tokens[name_idx - 1].text in _DECL_BLOCKERS:
        return None
    j = _skip_parens(tokens, name_idx + 1)
    if j < len(tokens) and tokens[j].kind == "word" and tokens[j].text == "throws":
        j += 1
        while j < len(tokens) and (
            tokens[j].kind == "word" or tokens[j].text in {",", "."}
        ):
            j += 1
    if j < len(tokens) and tokens[j].text == "{":
        return j
    return None


def _close_brace_idx(tokens: list[Token], open_idx: int) -> int:
    depth = 0
    for j in range(open_idx, len(tokens)):
        if tokens[j].text == "{":
            depth += 1
        elif tokens[j].text == "}":
            depth -= 1
            if depth == 0:
                return j
    raise ExtractionError("unclosed method body", offset=tokens[open_idx].offset)


def _method_slice(content: str, sig_tok: Token, close_tok: Token) -> str:
    start = content.rfind("\n", 0, sig_tok.offset) + 1
    if content[start : sig_tok.offset].strip():
        start = sig_tok.offset  # other code shares the line: cut exactly
    return content[start : close_tok.end_offset]


def _build_statements(method_text: str) -> tuple[Statement, ...]:
    lines = method_text.split("\n")
    has_code = [False] * len(lines)
    has_comment = [False] * len(lines)
    for tok in lex(method_text, keep_comments=True):
        first = tok.line - 1
        last = tok.end_line - 1
        if tok.kind == "comment":
            for k in range(first, last + 1):
                has_comment[k] = True
        else:
            for k in range(first, last + 1):
                has_code[k] = True
    return tuple(
        Statement(
            line_no=i + 1,
            text=line,
            is_blank=not has_code[i] and not has_comment[i],
            is_comment_only=not has_code[i] and has_comment[i],
        )
        for i, line in enumerate(lines)
    )


def extract_methods(file: SourceFile) -> list[SourceMethod]:
    """Segment a Java file into methods (constructors included).

    Anonymous-class and local-class bodies stay inside the enclosing method.
    Methods annotated ``@Test`` are flagged. Raises :class:`ExtractionError`
    on unbalanced braces or lexing failures; a file without methods yields
    an empty list.
    """
    try:
        tokens = lex(file.content, keep_comments=False)
    except JavaLexError as exc:
        raise ExtractionError(str(exc), offset=exc.offset, line=exc.line) from exc
    _check_braces(tokens)

    methods: list[SourceMethod] = []
    annotations: list[str] = []
    sig_start: int | None = None
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.text == "@" and i + 1 < len(tokens) and tokens[i + 1].kind == "word":
            j = i + 1
            parts = [tokens[j].text]
            j += 1
            while j + 1 < len(tokens) and tokens[j].text == "." and tokens[j + 1].kind == "word":
                parts.append(tokens[j + 1].text)
                j += 2
            if j < len(tokens) and tokens[j].text == "(":
                j = _skip_parens(tokens, j)
            annotations.append(".".join(parts))
            i = j
            continue
        if tok.text in {";", "{", "}"}:
            annotations = []
            sig_start = None
            i += 1
            continue
        if sig_start is None:
            sig_start = i
        body_open = _match_header(tokens, i)
        if body_open is not None:
            close = _close_brace_idx(tokens, body_open)
            text = _method_slice(file.content, tokens[sig_start], tokens[close])
            body = _build_statements(text)
            toks = tuple(tokenize_method(text))
            methods.append(
                SourceMethod(
                    id=method_id(toks),
                    file=file,
                    name=tok.text,
                    body_lines=body,
                    tokens=toks,
                    is_test=any(a.rsplit(".", 1)[-1] == "Test" for a in annotations),
                )
            )
            annotations = []
            sig_start = None
            i = close + 1
            continue
        i += 1
    return methods


def tokenize_method(text: str) -> list[str]:
    return [t.text for t in lex(text, keep_comments=False)]


def comment_spans(method_text: str) -> list[Token]:
    """Raw comment tokens of a method body, Javadoc excluded, in order."""
    spans = []
    for tok in lex(method_text, keep_comments=True):
        if tok.kind == "comment" and not is_javadoc(tok.text):
            spans.append(tok)
    return spans


def extract_inner_comments(method: SourceMethod) -> list[InnerComment]:
    """Single-line and block comments inside a method body.

    Javadoc (``/**``) is excluded, as are comment markers inside string
    literals. ``trailing`` is set when code precedes the comment on its
    first line. Raises :class:`ExtractionError` with the offending line on
    an unterminated block comment.
    """
    text = method.text
    try:
        all_tokens = lex(text, keep_comments=True)
    except JavaLexError as exc:
        raise ExtractionError(str(exc), offset=exc.offset, line=exc.line) from exc

    code_lines_cols: dict[int, int] = {}
    for tok in all_tokens:
        if tok.kind != "comment":
            cur = code_lines_cols.get(tok.line)
            if cur is None or tok.col < cur:
                code_lines_cols[tok.line] = tok.col

    comments: list[InnerComment] = []
    idx = 0
    for tok in all_tokens:
        if tok.kind != "comment" or is_javadoc(tok.text):
            continue
        kind = "line" if tok.text.startswith("//") else "block"
        first_code_col = code_lines_cols.get(tok.line)
        comments.append(
            InnerComment(
                id=f"{method.id}:c{idx}",
                kind=kind,
                text=tok.text,
                start_line=tok.line,
                end_line=tok.end_line,
                trailing=first_code_col is not None and first_code_col < tok.col,
            )
        )
        idx += 1
    return comments


def filter_method(method: SourceMethod, max_tokens: int) -> bool:
    """True iff the method's token count is within the cap (inclusive)."""
    if max_tokens <= 0:
        raise ValueError("max_tokens must be positive")
    return len(method.tokens) <= max_tokens


def dedup_methods(methods: list[SourceMethod]) -> list[SourceMethod]:
    """One method per normalized-token-stream hash; first occurrence wins."""
    seen: set[str] = set()
    out = []
    for m in methods:
        if m.id in seen:
            continue
        seen.add(m.id)
        out.append(m)
    return out


@dataclass
class MineConfig:
    max_tokens: int = 1024
    include_tests: bool = False


@dataclass
class ManifestEntry:
    method: SourceMethod
    comments: list[InnerComment]

    @property
    def project(self) -> str:
        return self.method.file.project_id

    @property
    def path(self) -> str:
        return self.method.file.path


@dataclass
class CorpusManifest:
    entries: list[ManifestEntry] = field(default_factory=list)
    skip_counts: dict[str, int] = field(default_factory=dict)

    def method_by_id(self, mid: str) -> SourceMethod:
        for entry in self.entries:
            if entry.method.id == mid:
                return entry.method
        raise KeyError(mid)


def mine_corpus(root_dir: str | Path, config: MineConfig | None = None) -> CorpusManifest:
    """Walk a corpus root (one subdirectory per project) and build a manifest.

    Retains every method passing the token cap and test-method filters,
    deduplicated on the normalized token stream (first occurrence by sorted
    path wins); counts skipped items per reason. Unreadable files are logged
    and skipped; a missing root is fatal.
    """
    config = config or MineConfig()
    root = Path(root_dir)
    if not root.is_dir():
        raise ExtractionError(f"corpus root does not exist: {root}")

    projects = sorted(p for p in root.iterdir() if p.is_dir())
    if not projects and any(root.glob("*.java")):
        projects = [root]

    manifest = CorpusManifest()
    skip = manifest.skip_counts

    def bump(reason: str) -> None:
        skip[reason] = skip.get(reason, 0) + 1

    seen_ids: set[str] = set()
    for project in projects:
        for java_path in sorted(project.rglob("*.java")):
            rel = java_path.relative_to(root).as_posix()
            try:
                content = java_path.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                logger.warning("skipping unreadable file %s: %s", rel, exc)
                bump("unreadable_file")
                continue
            source = SourceFile(path=rel, project_id=project.name, content=content)
            try:
                methods = extract_methods(source)
            except ExtractionError as exc:
                logger.warning("skipping file %s: %s", rel, exc)
                bump("extract_error")
                continue
            for method in methods:
                if method.is_test and not config.include_tests:
                    bump("test_method")
                    continue
                if not filter_method(method, config.max_tokens):
                    bump("over_token_cap")
                    continue
                if method.id in seen_ids:
                    bump("duplicate_method")
                    continue
                seen_ids.add(method.id)
                manifest.entries.append(
                    ManifestEntry(method=method, comments=extract_inner_comments(method))
                )
    return manifest
