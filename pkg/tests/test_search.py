import random

import pytest
from pydantic import ValidationError

from bcidx.proof import RuleKind
from bcidx.rewrite import normalize
from bcidx.search import (
    SearchBudget, SearchOutcome, candidate_terms, guards_for, insert_guard, refl_renaming, secret_keys,
)
from bcidx.terms import adv, dec, enc, eq, ite, name, pair, pk, render_term, sk
from bcidx.types import Sequent


a, b, k, m, r = (name(x) for x in ("a", "b", "k", "m", "r"))


def test_conditional_introduction_is_found(kernel, read_fixture):
    doc = kernel.read_goal(read_fixture("csintro.goal"))
    result = kernel.search(doc.goal)
    assert result.found
    d = result.derivation
    assert [node.rule.kind for _, node in d.walk()] == [RuleKind.RW, RuleKind.CS, RuleKind.REFL, RuleKind.REFL]
    assert d.height == 3
    assert result.stats.depth == 1
    assert kernel.check(d).accepted


def test_renamed_names_close_by_reflexivity(kernel):
    result = kernel.search(Sequent.of([a], [b]))
    assert result.found
    assert result.derivation.rule.kind is RuleKind.REFL
    assert result.derivation.rule.renaming == [("a", "b")]
    assert result.derivation.node_count == 1


def test_encryption_goal_closes_with_one_cca_instance(kernel, read_fixture):
    doc = kernel.read_goal(read_fixture("cca.goal"))
    result = kernel.search(doc.goal)
    assert result.found
    rule = result.derivation.rule
    assert rule.kind is RuleKind.CCA
    assert rule.structure.keys == ["k"]
    assert rule.structure.renaming == [("a", "c"), ("c", "a")]
    assert kernel.check(result.derivation).accepted


def test_distinguishable_goal_is_not_found(kernel):
    n0 = name("n0")
    budget = SearchBudget(max_depth=2, timeout=30)
    result = kernel.search(Sequent.of([n0], [pair(n0, n0)]), budget=budget)
    assert result.outcome is SearchOutcome.NOT_FOUND
    assert result.derivation is None
    assert not result.found


def test_timeout_is_reported_as_an_outcome(kernel, read_fixture):
    doc = kernel.read_goal(read_fixture("csintro.goal"))
    result = kernel.search(doc.goal, budget=SearchBudget(timeout=1e-9))
    assert result.outcome is SearchOutcome.TIMEOUT
    assert result.derivation is None


@pytest.mark.parametrize("field, value", [
    ("max_depth", 0),
    ("max_candidates", 0),
    ("jobs", 0),
    ("timeout", 0),
    ("max_nested_cs", 0),
])
def test_budget_rejects_non_positive_bounds(field, value):
    with pytest.raises(ValidationError):
        SearchBudget(**{field: value})


def test_candidates_of_a_conditional(kernel):
    pool = kernel.candidates(ite(adv("g"), name("n0"), name("n1")))
    assert pool.render_lines() == ["(adv g)", "n.n0", "n.n1"]
    assert not pool.truncated
    assert [render_term(t) for t in pool.conditionals] == ["(adv g)"]


def test_candidates_include_decryption_guards():
    alpha = enc(m, pk(k), r)
    u = adv("f", alpha)
    pool = candidate_terms(dec(u, sk(k)))
    assert pool.secret_keys == ["k"]
    assert eq(u, alpha) in pool
    assert dec(u, sk(k)) in pool


def test_candidate_pool_cap_truncates():
    t = pair(pair(a, b), pair(b, a))
    pool = candidate_terms(t, max_candidates=2)
    assert pool.truncated
    assert len(pool) == 2


def test_guards_only_for_chosen_keys():
    alpha = enc(m, pk(k), r)
    t = dec(adv("f", alpha), sk(k))
    assert guards_for([t], frozenset({"k"})) == {eq(adv("f", alpha), alpha)}
    assert guards_for([t], frozenset()) == set()


def test_secret_keys():
    assert secret_keys([pair(sk(k), sk(a)), pk(b)]) == ["a", "k"]


def test_refl_renaming():
    assert refl_renaming(Sequent.of([pair(a, b)], [pair(b, a)])) == [("a", "b"), ("b", "a")]
    assert refl_renaming(Sequent.of([pair(a, a)], [pair(a, b)])) is None


def test_insert_guard_wraps_decryptions():
    alpha = enc(m, pk(k), r)
    u = adv("f", alpha)
    guarded = insert_guard(dec(u, sk(k)), eq(u, alpha))
    assert guarded.is_app("ite")
    assert guarded.args[0] == eq(u, alpha)


def test_two_key_derivation_goal_is_found(kernel, read_fixture):
    doc = kernel.read_proof(read_fixture("proof_example.bcp"))
    goal = doc.derivation.conclusion
    result = kernel.search(goal, decls=doc.context.decls, budget=SearchBudget(max_depth=14, timeout=120))
    assert result.found
    assert result.derivation.conclusion == goal
    assert kernel.check(result.derivation, doc.context.decls).accepted


@pytest.mark.parametrize("seed", range(4))
def test_candidate_pool_is_bounded_by_the_normal_form(random_message, seed):
    rng = random.Random(seed)
    checked = 0
    while checked < 25:
        t = random_message(rng, 3)
        size = normalize(t).size
        if size > 16:
            continue
        pool = candidate_terms(t, t)
        assert pool.normal_size == size
        assert len(pool) <= size ** 2 * 2 ** size, render_term(t)
        assert pool.max_term_size <= 2 * size, render_term(t)
        checked += 1
