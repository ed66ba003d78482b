"""Stemmer conformance on the classic rule set."""

import pytest

from snipdoc.stemming import stem, stem_text


@pytest.mark.parametrize(
    ("word", "expected"),
    [
        # step 1: plurals and -ed/-ing
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("cats", "cat"),
        ("feed", "feed"),
        ("agreed", "agre"),
        ("plastered", "plaster"),
        ("motoring", "motor"),
        ("sing", "sing"),
        ("conflated", "conflat"),
        ("troubling", "troubl"),
        ("sized", "size"),
        ("hopping", "hop"),
        ("falling", "fall"),
        ("hissing", "hiss"),
        ("failing", "fail"),
        ("filing", "file"),
        # step 1c
        ("happy", "happi"),
        ("sky", "sky"),
        # steps 2-4
        ("relational", "relat"),
        ("conditional", "condit"),
        ("valenci", "valenc"),
        ("digitizer", "digit"),
        ("operator", "oper"),
        ("feudalism", "feudal"),
        ("decisiveness", "decis"),
        ("triplicate", "triplic"),
        ("formative", "form"),
        ("formalize", "formal"),
        ("electrical", "electr"),
        ("hopefulness", "hope"),
        ("goodness", "good"),
        ("revival", "reviv"),
        ("allowance", "allow"),
        ("inference", "infer"),
        ("adjustment", "adjust"),
        ("dependent", "depend"),
        ("adoption", "adopt"),
        ("homologou", "homolog"),
        ("communism", "commun"),
        ("activate", "activ"),
        ("angulariti", "angular"),
        ("effective", "effect"),
        # step 5
        ("probate", "probat"),
        ("rate", "rate"),
        ("cease", "ceas"),
        ("controll", "control"),
        ("roll", "roll"),
    ],
)
def test_classic_examples(word, expected):
    assert stem(word) == expected


def test_short_words_unchanged():
    assert stem("a") == "a"
    assert stem("is") == "is"
    assert stem("ax") == "ax"


def test_non_alphabetic_unchanged():
    assert stem("x86") == "x86"
    assert stem("foo_bar") == "foo_bar"
    assert stem("3.14") == "3.14"


def test_lowercases_input():
    assert stem("Loading") == "load"
    assert stem("VALUES") == "valu"


def test_stem_text_maps_whitespace_words():
    assert stem_text("loads the cached values") == "load the cach valu"
    assert stem_text("") == ""


def test_fixture_comment_sweep(manifest):
    # every alphabetic word stems to a nonempty prefix-length-or-shorter
    # lowercase string, deterministically
    words = {
        word.lower()
        for entry in manifest.entries
        for c in entry.comments
        for word in c.text.split()
        if word.isalpha()
    }
    assert words
    for word in words:
        out = stem(word)
        assert out
        assert len(out) <= len(word)
        assert out == stem(word)
