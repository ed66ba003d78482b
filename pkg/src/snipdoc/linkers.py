"""Comment-to-code scope detectors.

Three engines link an inner comment to the statement lines it documents:
a blank-line heuristic, a term-overlap threshold rule, and a random-forest
statement classifier (the forest itself lives in :mod:`snipdoc.forest`).
A link set is a sorted set of 1-based body line numbers and may only name
non-blank, non-comment-only lines.
"""

from __future__ import annotations

from .extractor import InnerComment, SourceMethod
from .javalex import JavaLexError, lex
from .util import clean_comment_text

LAMBDA_GRID = [round(0.1 * k, 1) for k in range(1, 10)]

FEATURE_SCHEMA_VERSION = 1
FEATURE_NAMES = [
    # code features
    "stmt_type",
    "norm_distance",
    "is_first_after_comment",
    "blank_between",
    "relative_indent",
    "shares_call_prev",
    "shares_call_next",
    "stmt_token_length",
    # comment features
    "comment_word_length",
    "comment_noun_count",
    "comment_verb_count",
    "comment_is_block",
    # relationship features
    "term_similarity",
    "shared_identifiers",
    "same_indent",
    "intervening_comment",
]

STATEMENT_TYPES = {
    "other": 0, "if": 1, "loop": 2, "return": 3,
    "throw": 4, "call": 5, "assignment": 6, "declaration": 7,
}

_JAVA_KEYWORDS = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double",
    "else", "enum", "extends", "final", "finally", "float", "for", "goto",
    "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return",
    "short", "static", "strictfp", "super", "switch", "synchronized",
    "this", "throw", "throws", "transient", "try", "void", "volatile",
    "while", "var", "record", "yield",
}

_VERB_LIST = {
    "add", "append", "apply", "build", "cache", "calculate", "call",
    "check", "clear", "close", "compute", "convert", "copy", "create",
    "delete", "disable", "dispatch", "do", "enable", "ensure", "execute",
    "fetch", "fill", "filter", "find", "flush", "get", "handle", "has",
    "ignore", "init", "insert", "invoke", "is", "iterate", "load", "lock",
    "log", "loop", "make", "map", "mark", "merge", "move", "notify",
    "open", "parse", "perform", "prepare", "print", "process", "push",
    "put", "read", "register", "release", "remove", "render", "reset",
    "resolve", "retrieve", "return", "run", "save", "send", "set", "skip",
    "sort", "split", "start", "stop", "store", "swap", "sync", "take",
    "throw", "track", "try", "update", "use", "validate", "verify",
    "wait", "wrap", "write",
}

_STOPWORDS = {
    "the", "a", "an", "of", "to", "in", "on", "for", "and", "or", "if",
    "it", "its", "this", "that", "these", "those", "with", "from", "by",
    "at", "as", "be", "been", "are", "was", "were", "we", "not", "no",
    "so", "then", "than", "when", "where", "which", "all", "any", "into",
    "will", "can", "should", "must", "may", "here", "there", "also",
    "only", "just", "but", "out", "up", "down", "over", "under",
}

_VERB_SUFFIXES = ("ed", "ing", "ize", "ify")


def is_verb(word: str) -> bool:
    word = word.lower()
    if word in _VERB_LIST:
        return True
    if word.endswith("s") and word[:-1] in _VERB_LIST:
        return True
    return len(word) > 3 and word.endswith(_VERB_SUFFIXES)


def is_noun(word: str) -> bool:
    word = word.lower()
    return word.isalpha() and word not in _STOPWORDS and not is_verb(word)


def _overlap(terms_a: set[str], terms_b: set[str]) -> float:
    if not terms_a and not terms_b:
        return 0.0
    return len(terms_a & terms_b) / max(len(terms_a), len(terms_b))


def term_similarity(a: str, b: str) -> float:
    """Fraction of shared whitespace-split terms, lowercased:
    |A ∩ B| / max(|A|, |B|); two empty strings give 0."""
    return _overlap(set(a.lower().split()), set(b.lower().split()))


def statement_terms(text: str) -> set[str]:
    """Lowercased word and number tokens of a code line. Punctuation and
    operators are dropped so ``values.sort(null);`` yields
    ``{values, sort, null}``."""
    return {
        t.lower()
        for t in _line_tokens(text)
        if t and (t[0].isalnum() or t[0] in "_$")
    }


def comment_statement_similarity(comment_text: str, statement_text: str) -> float:
    """Term overlap between a comment (markers stripped, whitespace words)
    and a statement (lexical word tokens)."""
    words = set(clean_comment_text(comment_text).lower().split())
    return _overlap(words, statement_terms(statement_text))


def link_blank_line(method: SourceMethod, comment: InnerComment) -> set[int]:
    """Scope = linkable statements after the comment up to the first blank
    line (exclusive) or the end of the method. Comment-only lines are
    skipped but do not end the scan; a trailing comment's scope starts with
    the code on its own line."""
    start = comment.start_line if comment.trailing else comment.end_line + 1
    linked: set[int] = set()
    for stmt in method.body_lines[start - 1 :]:
        if stmt.is_blank:
            break
        if stmt.is_linkable:
            linked.add(stmt.line_no)
    return linked


def link_token_similarity(
    method: SourceMethod, comment: InnerComment, lam: float
) -> set[int]:
    """Every linkable statement whose term overlap with the comment text
    (markers stripped) is >= lam."""
    if not 0 <= lam <= 1:
        raise ValueError("lambda must lie in [0, 1]")
    return {
        stmt.line_no
        for stmt in method.body_lines
        if stmt.is_linkable
        and comment_statement_similarity(comment.text, stmt.text) >= lam
    }


def _line_tokens(text: str) -> list[str]:
    try:
        return [t.text for t in lex(text, keep_comments=False)]
    except JavaLexError:
        return text.split()


_ASSIGN_OPS = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=",
}


def statement_type(text: str) -> int:
    tokens = _line_tokens(text.strip())
    # closing braces and else-chains precede the statement that matters:
    # "} else if (x) {" classifies by its "if"
    while tokens and tokens[0] in {"}", "{", ";", "else"}:
        tokens.pop(0)
    if not tokens:
        return STATEMENT_TYPES["other"]
    first = tokens[0]
    if first == "if":
        return STATEMENT_TYPES["if"]
    if first in {"for", "while", "do"}:
        return STATEMENT_TYPES["loop"]
    if first == "return":
        return STATEMENT_TYPES["return"]
    if first == "throw":
        return STATEMENT_TYPES["throw"]
    assign = next((i for i, t in enumerate(tokens) if t in _ASSIGN_OPS), None)
    if assign is not None:
        before = tokens[:assign]
        if (
            tokens[assign] == "="
            and len(before) >= 2
            and _is_word(before[-1])
            and (_is_word(before[-2]) or before[-2] in {">", "]"})
        ):
            return STATEMENT_TYPES["declaration"]
        return STATEMENT_TYPES["assignment"]
    for i in range(len(tokens) - 1):
        if _is_identifier(tokens[i]) and tokens[i + 1] == "(":
            return STATEMENT_TYPES["call"]
    if len(tokens) >= 2 and _is_word(tokens[0]) and _is_identifier(tokens[1]):
        return STATEMENT_TYPES["declaration"]
    return STATEMENT_TYPES["other"]


def _is_word(token: str) -> bool:
    return bool(token) and (token[0].isalpha() or token[0] in "_$")


def _is_identifier(token: str) -> bool:
    return _is_word(token) and token not in _JAVA_KEYWORDS


def call_names(text: str) -> set[str]:
    tokens = _line_tokens(text)
    return {
        tokens[i]
        for i in range(len(tokens) - 1)
        if _is_identifier(tokens[i]) and tokens[i + 1] == "("
    }


def identifiers(text: str) -> set[str]:
    return {t for t in _line_tokens(text) if _is_identifier(t)}


def _indent(text: str) -> int:
    expanded = text.expandtabs(4)
    return len(expanded) - len(expanded.lstrip(" "))


def extract_features(
    method: SourceMethod, comment: InnerComment, statement
) -> list[float]:
    """The 16-feature vector (order = FEATURE_NAMES) describing one
    (comment, statement) candidate pair."""
    if not statement.is_linkable:
        raise ValueError("features are defined for linkable statements only")
    body = method.body_lines
    n_lines = max(1, len(body))
    comment_line_text = body[comment.start_line - 1].text

    linkable = method.linkable_lines()
    after = [ln for ln in linkable if ln > comment.end_line]
    is_first_after = 1.0 if after and statement.line_no == after[0] else 0.0

    lo = min(comment.end_line, statement.line_no)
    hi = max(comment.end_line, statement.line_no)
    between = body[lo : hi - 1]  # lines strictly between the two
    blank_between = 1.0 if any(s.is_blank for s in between) else 0.0
    intervening = 1.0 if any(s.is_comment_only for s in between) else 0.0

    prev_link = max((ln for ln in linkable if ln < statement.line_no), default=None)
    next_link = min((ln for ln in linkable if ln > statement.line_no), default=None)
    own_calls = call_names(statement.text)
    shares_prev = (
        1.0
        if prev_link is not None and own_calls & call_names(body[prev_link - 1].text)
        else 0.0
    )
    shares_next = (
        1.0
        if next_link is not None and own_calls & call_names(body[next_link - 1].text)
        else 0.0
    )

    cleaned = clean_comment_text(comment.text)
    comment_words = cleaned.split()
    stmt_ids = {t.lower() for t in identifiers(statement.text)}
    comment_terms = {w.lower() for w in comment_words}

    return [
        float(statement_type(statement.text)),
        (statement.line_no - comment.end_line) / n_lines,
        is_first_after,
        blank_between,
        float(_indent(statement.text) - _indent(comment_line_text)),
        shares_prev,
        shares_next,
        float(len(_line_tokens(statement.text))),
        float(len(comment_words)),
        float(sum(1 for w in comment_words if is_noun(w))),
        float(sum(1 for w in comment_words if is_verb(w))),
        1.0 if comment.kind == "block" else 0.0,
        comment_statement_similarity(comment.text, statement.text),
        float(len(stmt_ids & comment_terms)),
        1.0 if _indent(statement.text) == _indent(comment_line_text) else 0.0,
        intervening,
    ]
