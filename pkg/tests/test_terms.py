import random

import pytest

from bcidx.exceptions import ArityError, InvalidPositionError, RenamingError, SortError, TermSyntaxError, UnknownSymbolError
from bcidx.terms import (
    Signature, Sort, TermParser, adv, alpha_rename, canonical_compare, canonical_sorted, enc, eq, fst, invert_renaming, ite,
    name, names_of, occurs, pair, parse_term, pk, positions, read_sexprs, render_term, replace_at, subterm_at, substitute,
)


a, b, c = name("a"), name("b"), name("c")


@pytest.mark.parametrize("text", [
    "n.a",
    "(pair n.a n.b)",
    "(enc (pair n.a n.b) (pk n.k) n.r)",
    "(ite (eq n.a n.b) (adv f n.a) n.c)",
    "(dec (adv g) (sk n.k))",
])
def test_render_is_inverse_of_parse(text):
    assert render_term(parse_term(text)) == text


def test_parse_builds_expected_structure():
    t = parse_term("(enc n.m (pk n.k) n.r)")
    assert t == enc(name("m"), pk(name("k")), name("r"))
    assert t.size == 5
    assert names_of(t) == {"m", "k", "r"}


def test_comments_and_whitespace_are_ignored():
    assert parse_term("; a pair\n(pair\n  n.a   n.b)") == pair(a, b)


def test_sorts():
    assert a.sort is Sort.MESSAGE
    assert eq(a, b).sort is Sort.BOOL
    assert adv("g").sort is Sort.BOOL
    assert pair(a, b).sort is Sort.MESSAGE
    assert ite(adv("g"), eq(a, b), adv("h")).sort is Sort.BOOL
    assert ite(adv("g"), a, b).sort is Sort.MESSAGE


def test_if_freeness():
    assert pair(a, b).if_free
    assert not pair(ite(adv("g"), a, b), c).if_free


@pytest.mark.parametrize("text, error", [
    ("(pair n.a)", ArityError),
    ("(ite n.a n.b n.c)", SortError),
    ("(frob n.a)", UnknownSymbolError),
    ("(pair n.a n.b", TermSyntaxError),
    ("(pair n.a n.b))", TermSyntaxError),
    ("n.", TermSyntaxError),
    ("pair", ArityError),
])
def test_malformed_terms_are_rejected(text, error):
    with pytest.raises(error):
        parse_term(text)


def test_adversarial_arity_is_fixed_by_first_use():
    parser = TermParser(infer=True)
    parser.term(read_sexprs("(adv f n.a)")[0])
    assert parser.signature.arity("f") == 1
    with pytest.raises(ArityError):
        parser.term(read_sexprs("(adv f n.a n.b)")[0])


def test_declared_signature_rejects_unknown_symbols():
    sig = Signature(adversarial_symbols={"g": 0})
    assert parse_term("(adv g)", sig) == adv("g")
    with pytest.raises(UnknownSymbolError):
        Signature(adversarial_symbols={"g": 0}).check(adv("h"))


def test_signature_refuses_builtin_names():
    with pytest.raises(ValueError):
        Signature(adversarial_symbols={"pair": 2})


def test_positions_are_preorder():
    t = pair(a, fst(b))
    found = [(p, render_term(s)) for p, s in positions(t)]
    assert found == [
        ((), "(pair n.a (fst n.b))"),
        ((0,), "n.a"),
        ((1,), "(fst n.b)"),
        ((1, 0), "n.b"),
    ]


def test_subterm_and_replace():
    t = pair(a, fst(b))
    assert subterm_at(t, (1, 0)) == b
    assert replace_at(t, (1, 0), c) == pair(a, fst(c))
    assert replace_at(t, (), c) == c
    with pytest.raises(InvalidPositionError):
        subterm_at(t, (2,))
    with pytest.raises(InvalidPositionError):
        replace_at(t, (0, 0), c)


def test_replace_keeps_conditions_boolean():
    with pytest.raises(SortError):
        replace_at(ite(adv("g"), a, b), (0,), a)


def test_occurs_and_substitute():
    t = pair(fst(a), fst(a))
    assert occurs(fst(a), t)
    assert not occurs(b, t)
    assert substitute(t, {fst(a): b}) == pair(b, b)


def test_alpha_rename():
    assert alpha_rename(pair(a, b), {"a": "b", "b": "a"}) == pair(b, a)
    with pytest.raises(RenamingError):
        alpha_rename(pair(a, b), {"a": "c", "b": "c"})


def test_invert_renaming():
    assert invert_renaming({"a": "b", "b": "c"}) == {"b": "a", "c": "b"}
    with pytest.raises(RenamingError):
        invert_renaming({"a": "c", "b": "c"})


def test_canonical_order_is_total_and_ranks_heads():
    terms = [a, adv("g"), enc(a, pk(b), c), pair(a, b), fst(a)]
    ordered = canonical_sorted(terms)
    assert [render_term(t) for t in ordered] == [
        "(fst n.a)", "(pair n.a n.b)", "(enc n.a (pk n.b) n.c)", "(adv g)", "n.a",
    ]
    assert canonical_compare(a, a) == 0
    assert canonical_compare(a, b) == -canonical_compare(b, a) == -1


@pytest.mark.parametrize("seed", range(4))
def test_random_terms_survive_render_and_parse(random_message, seed):
    rng = random.Random(seed)
    checked = 0
    while checked < 50:
        t = random_message(rng, 5)
        if t.size > 60:
            continue
        assert parse_term(render_term(t)) == t
        checked += 1


@pytest.mark.parametrize("seed", range(4))
def test_canonical_compare_is_a_total_order(random_message, seed):
    rng = random.Random(40 + seed)
    for _ in range(100):
        x, y, z = (random_message(rng, 3) for _ in range(3))
        assert canonical_compare(x, y) == -canonical_compare(y, x)
        assert (canonical_compare(x, y) == 0) == (x == y)
        if canonical_compare(x, y) <= 0 and canonical_compare(y, z) <= 0:
            assert canonical_compare(x, z) <= 0
