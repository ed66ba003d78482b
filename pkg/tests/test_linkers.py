"""Heuristic linkers: scope properties, similarity, and feature extraction."""

import random

import pytest

from snipdoc.extractor import SourceFile, extract_inner_comments, extract_methods
from snipdoc.linkers import (
    FEATURE_NAMES,
    LAMBDA_GRID,
    extract_features,
    identifiers,
    is_noun,
    is_verb,
    link_blank_line,
    link_token_similarity,
    statement_type,
    term_similarity,
)

from genmethods import generate_method


def method_from(source):
    methods = extract_methods(SourceFile("M.java", "p", source))
    assert len(methods) == 1
    return methods[0]


SAMPLE = """\
class M {
    void run(List<String> values) {
        // sort the values in place
        values.sort(null);
        count = values.size();

        log.info(count);
        int extra = 0; // leftover slot
    }
}
"""


# -- blank-line heuristic ----------------------------------------------------


def test_blank_line_scope_stops_at_blank():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    assert link_blank_line(method, comment) == {3, 4}


def test_blank_line_scope_for_trailing_comment_starts_on_own_line():
    method = method_from(SAMPLE)
    trailing = extract_inner_comments(method)[1]
    assert trailing.trailing
    assert link_blank_line(method, trailing) == {7}


def test_blank_line_scope_skips_embedded_comment_lines():
    source = """\
class M {
    void f() {
        // scope head
        first();
        // interleaved note
        second();

        third();
    }
}
"""
    method = method_from(source)
    comment = extract_inner_comments(method)[0]
    assert link_blank_line(method, comment) == {3, 5}


def test_blank_line_scope_empty_when_comment_ends_method():
    source = """\
class M {
    void f() {
        first();
        // nothing follows
    }
}
"""
    method = method_from(source)
    comment = extract_inner_comments(method)[0]
    assert link_blank_line(method, comment) == set()


def contiguous_or_empty(lines, linkable):
    if not lines:
        return True
    ordered = sorted(lines)
    # contiguity is over linkable lines: every linkable line between the
    # endpoints must be included
    between = [
        ln for ln in linkable if ordered[0] <= ln <= ordered[-1]
    ]
    return between == ordered


def test_blank_line_scope_contiguous_or_empty_on_generated_corpus():
    rng = random.Random(2024)
    checked = 0
    for _ in range(1000):
        method = generate_method(rng)
        linkable = method.linkable_lines()
        for comment in extract_inner_comments(method):
            scope = link_blank_line(method, comment)
            assert scope <= set(linkable)
            assert contiguous_or_empty(scope, linkable), (
                method.text,
                comment,
                scope,
            )
            checked += 1
    assert checked >= 1000


# -- token-similarity linker ---------------------------------------------------


def test_term_similarity_normalizes_by_longer_side():
    assert term_similarity("sort the values", "sort values now list") == 0.5
    assert term_similarity("", "anything") == 0.0
    assert term_similarity("", "") == 0.0
    assert term_similarity("Sort", "sort") == 1.0


def test_token_similarity_selects_matching_lines():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    scope = link_token_similarity(method, comment, lam=0.2)
    assert 4 in scope  # values.sort(null) shares "sort"/"values"


def test_token_similarity_rejects_bad_lambda():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    with pytest.raises(ValueError):
        link_token_similarity(method, comment, lam=1.5)
    with pytest.raises(ValueError):
        link_token_similarity(method, comment, lam=-0.1)


def test_token_similarity_monotone_in_lambda():
    rng = random.Random(77)
    for _ in range(200):
        method = generate_method(rng)
        for comment in extract_inner_comments(method):
            previous = None
            for lam in LAMBDA_GRID:
                scope = link_token_similarity(method, comment, lam=lam)
                if previous is not None:
                    assert scope <= previous, (method.text, comment, lam)
                previous = scope


# -- statement typing and word heuristics ---------------------------------------


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("if (x > 0) {", "if"),
        ("} else if (y) {", "if"),
        ("for (int i = 0; i < n; i++) {", "loop"),
        ("while (open) {", "loop"),
        ("do {", "loop"),
        ("return total;", "return"),
        ("throw new IllegalStateException();", "throw"),
        ("values.sort(null);", "call"),
        ("run();", "call"),
        ("total = total + 1;", "assignment"),
        ("count += 2;", "assignment"),
        ("int count = 0;", "declaration"),
        ("final Map<String, Integer> m = new HashMap<>();", "declaration"),
        ("String name;", "declaration"),
        ("}", "other"),
        ("break;", "other"),
    ],
)
def test_statement_type_categories(text, expected):
    from snipdoc.linkers import STATEMENT_TYPES

    assert statement_type(text) == STATEMENT_TYPES[expected]


def test_verb_and_noun_heuristics():
    assert is_verb("loads")
    assert is_verb("returned")
    assert is_verb("sorting")
    assert not is_verb("list")  # common identifier noun, deliberately excluded
    assert is_noun("entry")
    assert not is_noun("the")
    assert not is_noun("x2")


def test_identifiers_extracts_words_not_keywords():
    names = identifiers("int count = values.size();")
    assert "count" in names and "values" in names and "size" in names
    assert "int" not in names


# -- feature vectors -------------------------------------------------------------


def test_feature_vector_shape_and_ranges():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    for line in method.linkable_lines():
        features = extract_features(method, comment, method.statement(line))
        assert len(features) == len(FEATURE_NAMES)
        named = dict(zip(FEATURE_NAMES, features))
        assert 0.0 <= named["term_similarity"] <= 1.0
        assert named["is_first_after_comment"] in (0.0, 1.0)
        assert named["blank_between"] in (0.0, 1.0)
        assert named["comment_word_length"] > 0


def test_feature_vector_rejects_unlinkable_line():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    with pytest.raises(ValueError):
        extract_features(method, comment, method.statement(2))  # comment line
    with pytest.raises(ValueError):
        extract_features(method, comment, method.statement(5))  # blank line


def test_feature_first_after_comment_flag():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    named = dict(zip(FEATURE_NAMES, extract_features(method, comment, method.statement(3))))
    assert named["is_first_after_comment"] == 1.0
    named = dict(zip(FEATURE_NAMES, extract_features(method, comment, method.statement(4))))
    assert named["is_first_after_comment"] == 0.0


def test_feature_distance_sign():
    method = method_from(SAMPLE)
    comment = extract_inner_comments(method)[0]
    after = dict(zip(FEATURE_NAMES, extract_features(method, comment, method.statement(3))))
    far = dict(zip(FEATURE_NAMES, extract_features(method, comment, method.statement(6))))
    assert 0 < after["norm_distance"] < far["norm_distance"]
