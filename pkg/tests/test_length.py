import random

import pytest

from bcidx.exceptions import LengthDeclError, TermSyntaxError
from bcidx.length import LengthDecls, LengthExpr, eql, length_of, render_length
from bcidx.terms import adv, dec, enc, eq, ite, name, pair, pk, sk, zero


a, b, k, r, m = (name(x) for x in ("a", "b", "k", "r", "m"))


@pytest.fixture
def block_decls() -> LengthDecls:
    decls = LengthDecls()
    decls.add_equation("m", LengthExpr.of("l_block", 2))
    return decls


def test_fixture_length(kernel, read_fixture):
    doc = kernel.read_term(read_fixture("length.term"))
    assert render_length(kernel.length(doc.term)) == "(+ (* 2 l_eta) (* 1 l_id) (* 1 l_pair))"


def test_names_default_to_the_security_parameter():
    assert length_of(a) == LengthExpr.of("l_eta")
    assert length_of(pair(a, b)).pretty() == "2*l_eta + l_pair"


def test_boolean_terms_have_no_length():
    assert length_of(eq(a, b)) is None
    assert length_of(adv("g")) is None
    assert render_length(None) == "undefined"


def test_conditional_length_needs_agreeing_branches():
    assert length_of(ite(adv("g"), a, b)) == LengthExpr.of("l_eta")
    assert length_of(ite(adv("g"), a, pair(a, b))) is None


def test_encryption_length_counts_blocks(block_decls):
    cipher = enc(m, pk(k), r)
    assert render_length(length_of(cipher, block_decls)) == "(+ (* 2 l_eblock) (* 1 l_enc))"
    assert length_of(enc(a, pk(k), r), block_decls) is None


def test_decryption_of_unknown_cipher(block_decls):
    cipher = adv("f")
    assert length_of(dec(cipher, sk(k)), block_decls) is None
    assert length_of(dec(enc(m, pk(k), r), sk(k)), block_decls) == LengthExpr.of("l_block", 2)


def test_zero_keeps_the_length(block_decls):
    assert length_of(zero(m), block_decls) == length_of(m, block_decls)


def test_eql():
    assert eql(pair(a, b), pair(b, a))
    assert not eql(a, pair(a, b))
    assert not eql(adv("g"), adv("g"))


def test_expressions_add_and_render():
    total = LengthExpr.of("l_eta") + LengthExpr.of("l_pair") + LengthExpr.of("l_eta")
    assert total.render() == "(+ (* 2 l_eta) (* 1 l_pair))"
    assert total.scale(0).render() == "(+)"
    assert LengthExpr().pretty() == "0"


def test_undeclared_constants_are_refused():
    decls = LengthDecls()
    with pytest.raises(LengthDeclError):
        decls.add_equation("a", LengthExpr.of("l_unknown"))


def test_conflicting_equations_are_refused():
    decls = LengthDecls()
    decls.add_equation("a", LengthExpr.of("l_eta"))
    with pytest.raises(LengthDeclError):
        decls.add_equation("a", LengthExpr.of("l_pair"))


def test_preamble_with_undeclared_constant_is_malformed(kernel):
    with pytest.raises(TermSyntaxError):
        kernel.read_term("(decl-len-eq n.a (+ (* 2 l_nope)))\nn.a")


def test_conditional_is_measured_on_its_own_branches():
    g = adv("g")
    stuck = dec(name("c"), sk(k))
    t = ite(g, ite(g, a, stuck), b)
    assert length_of(ite(g, a, stuck)) is None
    assert length_of(t) is None
    assert not eql(t, name("c"))


@pytest.mark.parametrize("seed", range(4))
def test_equal_length_carries_over_to_both_branches(random_message, random_condition, seed):
    rng = random.Random(seed)
    for _ in range(50):
        u, v, t = (random_message(rng, 3) for _ in range(3))
        if rng.random() < 0.3:
            v = ite(random_condition(rng, 1), u, rng.choice((u, v)))
        conditional = ite(random_condition(rng, 2), u, v)
        if eql(conditional, t):
            assert eql(u, t) and eql(v, t)
