import random

import pytest

from bcidx.exceptions import NotNormalFormError
from bcidx.rewrite import (
    RewriteRuleId, Strategy, approx_conds, approx_leaves, cofactor, conds_and_leaves, count_steps, decompose, equal_mod_R,
    is_irreducible, normalize, rewrite_step,
)
from bcidx.terms import (
    FALSE, TRUE, CanonicalOrder, adv, dec, enc, eq, fst, ite, name, pair, parse_term, pk, render_term, sk, snd,
)


a, b, c, k, r = (name(x) for x in ("a", "b", "c", "k", "r"))
g, h = adv("g"), adv("h")


def test_fixture_redex_normalizes_to_name(kernel, read_fixture):
    doc = kernel.read_term(read_fixture("redex.term"))
    assert kernel.normalize(doc.term) == a


def test_fixture_conditional_collapses(kernel, read_fixture):
    doc = kernel.read_term(read_fixture("ite.term"))
    assert render_term(kernel.normalize(doc.term)) == "(pair n.a n.b)"


@pytest.mark.parametrize("term, expected", [
    (fst(pair(a, b)), a),
    (snd(pair(a, b)), b),
    (dec(enc(a, pk(k), r), sk(k)), a),
    (eq(a, a), TRUE),
    (ite(TRUE, a, b), a),
    (ite(FALSE, a, b), b),
    (ite(g, a, a), a),
    (ite(g, ite(g, a, b), c), ite(g, a, c)),
    (ite(g, a, ite(g, b, c)), ite(g, a, c)),
])
def test_single_rule_reducts(term, expected):
    assert normalize(term) == expected


def test_decryption_under_the_wrong_key_is_stuck():
    t = dec(enc(a, pk(k), r), sk(b))
    assert normalize(t) == t


def test_conditionals_are_lifted_out_of_functions():
    assert normalize(fst(ite(g, pair(a, b), c))) == ite(g, a, fst(c))


def test_nested_condition_is_flattened():
    t = ite(ite(g, h, FALSE), a, b)
    assert normalize(t) == ite(g, ite(h, a, b), b)


def test_swap_follows_the_conditional_order():
    t = ite(h, ite(g, a, b), c)
    assert normalize(t) == ite(g, ite(h, a, c), ite(h, b, c))

    h_first = CanonicalOrder([h, g])
    assert normalize(t, h_first) == t
    assert is_irreducible(t, h_first)


def test_strategies_agree():
    t = parse_term("(pair (fst (pair n.a n.b)) (ite (adv g) (snd (pair n.a n.c)) (snd (pair n.a n.c))))")
    innermost = normalize(t, strategy=Strategy.INNERMOST)
    outermost, steps = count_steps(t, strategy=Strategy.OUTERMOST)
    assert innermost == outermost == pair(a, c)
    assert steps >= 3


def test_rewrite_step_reports_positions_and_rules():
    t = pair(fst(pair(a, b)), snd(pair(a, b)))
    steps = rewrite_step(t)
    assert ((0,), RewriteRuleId.PROJ_PAIR, pair(a, snd(pair(a, b)))) in steps
    assert ((1,), RewriteRuleId.PROJ_PAIR, pair(fst(pair(a, b)), b)) in steps
    assert len(steps) == 2


def test_normal_forms_are_irreducible():
    t = ite(h, ite(g, fst(pair(a, b)), b), c)
    normal = normalize(t)
    assert rewrite_step(normal) == set()
    assert normalize(normal) == normal


def test_equality_modulo_rewriting():
    assert equal_mod_R(ite(g, pair(a, b), pair(a, b)), fst(pair(pair(a, b), c)))
    assert not equal_mod_R(ite(g, a, b), ite(g, b, a))


def test_rule_groups():
    assert RewriteRuleId.DEC_ENC.group == "R1"
    assert RewriteRuleId.from_str(" Swap-Then ").group == "R4"


def test_decomposition_recomposes():
    t = normalize(ite(h, ite(g, a, b), c))
    parts = decompose(t)
    assert parts.conds == [g, h]
    assert parts.leaves == [a, b, c]
    assert parts.recompose() == t
    assert conds_and_leaves(ite(h, ite(g, a, b), c)) == parts


def test_decompose_refuses_reducible_terms():
    with pytest.raises(NotNormalFormError):
        decompose(fst(pair(a, b)))


def test_cofactor_selects_branches():
    t = ite(g, ite(h, a, c), ite(h, b, c))
    assert cofactor(t, h, True) == ite(g, a, b)
    assert cofactor(t, g, False) == ite(h, b, c)
    assert cofactor(ite(g, a, a), g, True) == a


def test_approximations():
    assert approx_leaves(pair(ite(g, a, b), c)) == {pair(a, c), pair(b, c)}
    assert approx_conds(ite(g, a, ite(h, b, c))) == {g, h}


def _sample(rng, random_message, count, max_size, depth=4):
    terms = []
    while len(terms) < count:
        t = random_message(rng, depth)
        if t.size <= max_size:
            terms.append(t)
    return terms


@pytest.mark.parametrize("seed", range(5))
def test_strategies_reach_the_same_normal_form(random_message, seed):
    rng = random.Random(seed)
    for t in _sample(rng, random_message, 100, 40):
        innermost, inner_steps = count_steps(t, CanonicalOrder(), Strategy.INNERMOST)
        outermost, outer_steps = count_steps(t, CanonicalOrder(), Strategy.OUTERMOST)
        assert innermost == outermost, render_term(t)
        assert max(inner_steps, outer_steps) < 10 ** 6
        assert rewrite_step(innermost, CanonicalOrder()) == set()


@pytest.mark.parametrize("seed", range(4))
def test_conditionals_and_leaves_do_not_depend_on_the_order(random_message, seed):
    rng = random.Random(100 + seed)
    for t in _sample(rng, random_message, 50, 40):
        default = conds_and_leaves(t, CanonicalOrder())
        h_first = conds_and_leaves(t, CanonicalOrder([h, eq(a, b), g]))
        assert set(default.conds) == set(h_first.conds), render_term(t)
        assert set(default.leaves) == set(h_first.leaves), render_term(t)


@pytest.mark.parametrize("seed", range(4))
def test_approximations_shrink_along_rewrite_steps(random_message, seed):
    rng = random.Random(300 + seed)
    order = CanonicalOrder()
    for t in _sample(rng, random_message, 50, 30):
        leaves, conds = approx_leaves(t, order), approx_conds(t, order)
        for _, _, successor in rewrite_step(t, order):
            assert approx_leaves(successor, order) <= leaves, render_term(t)
            assert approx_conds(successor, order) <= conds, render_term(t)


@pytest.mark.parametrize("seed", range(3))
def test_approximations_are_exact_on_normal_forms(random_message, seed):
    rng = random.Random(200 + seed)
    order = CanonicalOrder()
    for t in _sample(rng, random_message, 30, 40):
        normal = normalize(t, order)
        parts = decompose(normal, order)
        assert approx_leaves(normal, order) == set(parts.leaves), render_term(normal)
        assert approx_conds(normal, order) == set(parts.conds), render_term(normal)
