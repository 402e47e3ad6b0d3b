from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maintminer.activity import Activity
from maintminer.errors import EmptyCorpus
from maintminer.stemming import stem
from maintminer.textfeat import (
    default_naive_table,
    default_vocabulary,
    has_keywords,
    keyword_vector,
    naive_classify,
    normalize_message,
    top_k_frequencies,
)

VOCAB = default_vocabulary()


def test_vocabulary_is_the_published_twenty():
    assert VOCAB.stems == (
        "add", "allow", "bug", "chang", "error", "fail", "fix", "implement",
        "improv", "issu", "method", "new", "npe", "refactor", "remov",
        "report", "set", "support", "test", "use",
    )


def test_vocabulary_union_of_top10s():
    union = set()
    for stems in VOCAB.per_class_top10.values():
        union.update(stems)
    assert union == set(VOCAB.stems)


def test_normalize_worked_example():
    stems = normalize_message("Refactored blob logic into separate methods")
    assert {"refactor", "method"} <= stems
    assert "into" not in stems


def test_normalize_empty():
    assert normalize_message("") == frozenset()


def test_normalize_set_semantics():
    assert normalize_message("Fixes fixed fixing") == frozenset({"fix"})


def test_normalize_strips_custom_stopwords():
    assert normalize_message("hadoop yarn patch merge svn trunk") == frozenset()


def test_vocab_stems_are_stemmer_fixed_points():
    for s in VOCAB.stems:
        assert stem(s) == s


def test_keyword_vector_worked_example():
    v = keyword_vector(normalize_message("Refactored blob logic into separate methods"), VOCAB)
    on = {VOCAB.stems[i] for i in range(20) if v[i] == 1}
    assert on == {"refactor", "method"}


def test_keyword_vector_zero_and_saturated():
    assert keyword_vector(frozenset(), VOCAB).sum() == 0
    assert keyword_vector(frozenset(VOCAB.stems), VOCAB).sum() == 20


@given(st.text(max_size=200))
@settings(max_examples=200, deadline=None)
def test_naive_classify_total(text):
    assert naive_classify(text) in set(Activity)


@given(st.text(alphabet=st.characters(categories=("Lu", "Ll", "Zs")), max_size=120),
       st.sampled_from(sorted({"fix", "widget", "table", "added"})))
@settings(max_examples=100, deadline=None)
def test_keyword_vector_duplicate_word_invariant(text, word):
    base = normalize_message(f"{text} {word}")
    doubled = normalize_message(f"{text} {word} {word}")
    assert (keyword_vector(base, VOCAB) == keyword_vector(doubled, VOCAB)).all()


def test_naive_examples():
    assert naive_classify("fixed NPE when closing stream") is Activity.CORRECTIVE
    assert naive_classify("misc housekeeping") is Activity.CORRECTIVE
    assert naive_classify("add new support for widgets") is Activity.ADAPTIVE
    assert naive_classify("fix crash and add feature") is Activity.CORRECTIVE


def test_naive_table_contents():
    table = default_naive_table()
    assert "fix" in table.stems[Activity.CORRECTIVE]
    assert "add" in table.stems[Activity.ADAPTIVE]
    assert "refactor" in table.stems[Activity.PERFECTIVE]


def test_top_k_tiny_corpus_tie_break():
    corpus = [
        (Activity.CORRECTIVE, "fix fix bug"),
        (Activity.PERFECTIVE, "refactor"),
        (Activity.ADAPTIVE, "add"),
    ]
    top = top_k_frequencies(corpus, k=2)
    assert top.per_class[Activity.CORRECTIVE] == ("bug", "fix")


def test_top_k_planted_ranking():
    corpus = []
    # plant corrective frequencies: alpha 5x, beta 3x, gamma 2x
    for i in range(5):
        corpus.append((Activity.CORRECTIVE, f"alpha fillerxa{i}"))
    for i in range(3):
        corpus.append((Activity.CORRECTIVE, f"beta fillerxb{i}"))
    corpus.append((Activity.CORRECTIVE, "gamma zz1"))
    corpus.append((Activity.CORRECTIVE, "gamma zz2"))
    corpus.append((Activity.PERFECTIVE, "delta"))
    corpus.append((Activity.ADAPTIVE, "epsilon"))
    top = top_k_frequencies(corpus, k=3)
    assert top.per_class[Activity.CORRECTIVE] == ("alpha", "beta", "gamma")


def test_top_k_empty_class():
    with pytest.raises(EmptyCorpus):
        top_k_frequencies([(Activity.CORRECTIVE, "fix")], k=2)


def test_has_keywords_routing_predicate_matches_vector():
    for text in ["fix race condition", "plain chatter only", "", "methods galore"]:
        stems = normalize_message(text)
        assert has_keywords(stems, VOCAB) == bool(keyword_vector(stems, VOCAB).any())
