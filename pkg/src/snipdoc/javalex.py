"""Scanner for Java source text.

Splits code into lexical tokens (identifiers/keywords, literals, operators,
punctuation) and, optionally, comment tokens. The scanner is a hand-rolled
state machine rather than a grammar: it only needs to be right about token
boundaries, string/char literals, and comments, which is what the rest of
the toolkit builds on.
"""

from __future__ import annotations

from dataclasses import dataclass


class JavaLexError(Exception):
    """Raised on unterminated comments or string/char literals."""

    def __init__(self, message: str, line: int, offset: int):
        super().__init__(f"{message} (line {line})")
        self.line = line
        self.offset = offset


@dataclass(frozen=True)
class Token:
    kind: str  # word | number | string | char | op | comment
    text: str
    line: int  # 1-based line of the first character
    col: int  # 0-based column of the first character
    offset: int  # character offset into the scanned text

    @property
    def end_offset(self) -> int:
        return self.offset + len(self.text)

    @property
    def end_line(self) -> int:
        return self.line + self.text.count("\n")


# Longest-match operator table; single chars and punctuation share the "op"
# kind since downstream code only cares about the text.
_OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?", ":",
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "@",
]
_OP_BY_FIRST: dict[str, list[str]] = {}
for _op in _OPERATORS:
    _OP_BY_FIRST.setdefault(_op[0], []).append(_op)


def _is_word_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_word_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def lex(text: str, keep_comments: bool = False) -> list[Token]:
    """Scan ``text`` into tokens.

    Comments and whitespace are dropped unless ``keep_comments`` is set, in
    which case each comment becomes a single token carrying its raw text
    (``//...`` or ``/*...*/``). Comment markers inside string and character
    literals are never comments. Unknown characters become single-character
    tokens. Raises :class:`JavaLexError` on unterminated block comments or
    literals.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    line = 1
    line_start = 0

    def emit(kind: str, start: int, end: int, tok_line: int, tok_col: int) -> None:
        tokens.append(Token(kind, text[start:end], tok_line, tok_col, start))

    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if ch.isspace():
            i += 1
            continue

        col = i - line_start
        tok_line = line

        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                end = text.find("\n", i)
                if end == -1:
                    end = n
                if keep_comments:
                    emit("comment", i, end, tok_line, col)
                i = end
                continue
            if nxt == "*":
                end = text.find("*/", i + 2)
                if end == -1:
                    raise JavaLexError("unterminated block comment", tok_line, i)
                end += 2
                if keep_comments:
                    emit("comment", i, end, tok_line, col)
                line += text.count("\n", i, end)
                if "\n" in text[i:end]:
                    line_start = text.rfind("\n", i, end) + 1
                i = end
                continue

        if ch == '"':
            # Text block ("""...""") or ordinary string literal.
            if text.startswith('"""', i):
                end = text.find('"""', i + 3)
                if end == -1:
                    raise JavaLexError("unterminated text block", tok_line, i)
                end += 3
            else:
                j = i + 1
                while j < n:
                    if text[j] == "\\":
                        j += 2
                        continue
                    if text[j] == '"' or text[j] == "\n":
                        break
                    j += 1
                if j >= n or text[j] == "\n":
                    raise JavaLexError("unterminated string literal", tok_line, i)
                end = j + 1
            emit("string", i, end, tok_line, col)
            line += text.count("\n", i, end)
            if "\n" in text[i:end]:
                line_start = text.rfind("\n", i, end) + 1
            i = end
            continue

        if ch == "'":
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == "'" or text[j] == "\n":
                    break
                j += 1
            if j >= n or text[j] == "\n":
                raise JavaLexError("unterminated char literal", tok_line, i)
            emit("char", i, j + 1, tok_line, col)
            i = j + 1
            continue

        if _is_word_start(ch):
            j = i + 1
            while j < n and _is_word_char(text[j]):
                j += 1
            emit("word", i, j, tok_line, col)
            i = j
            continue

        if ch.isdigit():
            j = i + 1
            while j < n:
                c = text[j]
                if c.isalnum() or c == "_":
                    j += 1
                elif c == "." and j + 1 < n and text[j + 1].isdigit():
                    j += 1
                else:
                    break
            emit("number", i, j, tok_line, col)
            i = j
            continue

        matched = None
        for op in _OP_BY_FIRST.get(ch, ()):
            if text.startswith(op, i):
                matched = op
                break
        if matched is None:
            matched = ch  # unknown character: single-character token
        emit("op", i, i + len(matched), tok_line, col)
        i += len(matched)

    return tokens


def tokenize(text: str) -> list[str]:
    """Deterministic lexical token texts of ``text``, comments excluded.

    ``int x=0;`` -> ``['int', 'x', '=', '0', ';']``
    """
    return [t.text for t in lex(text, keep_comments=False)]


def is_javadoc(raw: str) -> bool:
    """A block comment opening with ``/**`` documents an API element."""
    return raw.startswith("/**")
