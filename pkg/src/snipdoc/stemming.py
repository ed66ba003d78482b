"""Porter's suffix-stripping stemmer (the classic 1980 rule set).

Normalization for summary targets needs a deterministic stemmer with no
model downloads, so the original algorithm is implemented here directly:
five steps of longest-suffix rules guarded by the measure *m* and the
vowel/double-consonant/cvc conditions.
"""

from __future__ import annotations


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in "aeiou":
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences: [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_cons(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_cons(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if not (
        _is_cons(word, len(word) - 3)
        and not _is_cons(word, len(word) - 2)
        and _is_cons(word, len(word) - 1)
    ):
        return False
    return word[-1] not in "wxy"


def _rule_step(word: str, rules: list[tuple[str, str, int]]) -> str:
    """Apply the longest textually matching suffix rule, if its measure
    condition holds. Rules are (suffix, replacement, min_measure_exclusive)
    ordered longest suffix first; only the first match is considered."""
    for suffix, repl, min_m in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > min_m:
                return stem + repl
            return word
    return word


_STEP2 = [
    ("ational", "ate", 0), ("ization", "ize", 0), ("iveness", "ive", 0),
    ("fulness", "ful", 0), ("ousness", "ous", 0),
    ("tional", "tion", 0),
    ("entli", "ent", 0), ("ousli", "ous", 0), ("ation", "ate", 0),
    ("alism", "al", 0), ("aliti", "al", 0), ("iviti", "ive", 0),
    ("biliti", "ble", 0),
    ("enci", "ence", 0), ("anci", "ance", 0), ("izer", "ize", 0),
    ("abli", "able", 0), ("alli", "al", 0), ("ator", "ate", 0),
    ("eli", "e", 0),
]

_STEP3 = [
    ("icate", "ic", 0), ("ative", "", 0), ("alize", "al", 0),
    ("iciti", "ic", 0),
    ("ical", "ic", 0), ("ness", "", 0),
    ("ful", "", 0),
]

_STEP4 = [
    ("ement", "", 1),
    ("ance", "", 1), ("ence", "", 1), ("able", "", 1), ("ible", "", 1),
    ("ment", "", 1),
    ("ant", "", 1), ("ent", "", 1), ("ism", "", 1), ("ate", "", 1),
    ("iti", "", 1), ("ous", "", 1), ("ive", "", 1), ("ize", "", 1),
    ("ion", "", 1),
    ("al", "", 1), ("er", "", 1), ("ic", "", 1), ("ou", "", 1),
]


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    if word.endswith("ed") and _has_vowel(word[:-2]):
        return _step1b_fixup(word[:-2])
    if word.endswith("ing") and _has_vowel(word[:-3]):
        return _step1b_fixup(word[:-3])
    return word


def _step1b_fixup(stem: str) -> str:
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_cons(stem) and not stem.endswith(("l", "s", "z")):
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _step4(word: str) -> str:
    for suffix, _, min_m in _STEP4:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                return word
            if _measure(stem) > min_m:
                return stem
            return word
    return word


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word: str) -> str:
    if _measure(word) > 1 and _ends_double_cons(word) and word.endswith("l"):
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Stem a single word. Input is lowercased; words of length <= 2 and
    tokens with non-alphabetic characters are returned as-is."""
    word = word.lower()
    if len(word) <= 2 or not word.isalpha():
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _rule_step(word, _STEP2)
    word = _rule_step(word, _STEP3)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word


def stem_text(text: str) -> str:
    """Lowercase and stem every whitespace-separated word."""
    return " ".join(stem(w) for w in text.lower().split())
