import random

import pytest
from pydantic import ValidationError

from bcidx.cca import CallKind, CcaStructure, OracleCall, check_side_conditions, elses, peel_elses
from bcidx.cca.conditions import freshness_violations, key_position_violations, nodec_violations
from bcidx.constants import DiagnosticCategory as Cat
from bcidx.constants import Side
from bcidx.proof import CCA, RuleKind
from bcidx.terms import adv, dec, enc, eq, ite, name, pair, pk, sk, zero
from bcidx.types import Sequent


a, b, k, r = (name(x) for x in ("a", "b", "k", "r"))


def _cca_root(kernel, text):
    doc = kernel.read_proof(text)
    assert doc.derivation.rule.kind is RuleKind.CCA
    return doc


def test_basic_instance_is_accepted(kernel, read_fixture):
    doc = _cca_root(kernel, read_fixture("cca_basic.bcp"))
    verdict = kernel.check(doc.derivation)
    assert verdict.accepted, verdict.describe()


def test_basic_instance_structure(kernel, read_fixture):
    doc = _cca_root(kernel, read_fixture("cca_basic.bcp"))
    struct = doc.derivation.rule.structure
    assert struct.keys == ["k"]
    assert [call.handle for call in struct.enc_calls] == ["e0"]
    assert [call.handle for call in struct.dec_calls] == ["d1"]
    assert kernel.verify_cca(doc.derivation.conclusion, struct).accepted


@pytest.mark.parametrize("fixture, category", [
    ("dropped_guard.bcp", Cat.GUARD),
    ("reused_randomness.bcp", Cat.FRESHNESS),
    ("unequal_lengths.bcp", Cat.LENGTH),
    ("leaked_secret_key.bcp", Cat.KEY_POSITION),
    ("key_in_plaintext.bcp", Cat.NODEC),
])
def test_broken_instances_are_rejected(kernel, read_fixture, fixture, category):
    doc = _cca_root(kernel, read_fixture(f"mutations/{fixture}"))
    verdict = kernel.check(doc.derivation)
    assert not verdict.accepted
    assert category in verdict.categories
    assert verdict.path == []


def test_structure_rejects_duplicates():
    call = OracleCall(kind=CallKind.ENC, handle="e0", left=enc(a, pk(k), r), right=enc(b, pk(k), r))
    with pytest.raises(ValidationError):
        CcaStructure(keys=["k", "k"], calls=[call])
    with pytest.raises(ValidationError):
        CcaStructure(keys=["k"], calls=[call, call])


def test_renaming_maps_right_terms_both_ways():
    struct = CcaStructure(keys=["k"], renaming=[("a", "b"), ("b", "a")])
    assert struct.canonical_right(pair(b, a)) == pair(a, b)
    assert struct.displayed_right(pair(a, r)) == pair(b, r)


def test_structure_renders_in_file_syntax():
    call = OracleCall(kind=CallKind.ENC, handle="e0", left=enc(a, pk(k), r), right=enc(b, pk(k), r))
    struct = CcaStructure(keys=["k"], calls=[call])
    assert struct.render() == ("(cca (keys n.k) (renaming) (calls (enc-call e0 (left (enc n.a (pk n.k) n.r)) "
                               "(right (enc n.b (pk n.k) n.r)))))")


def test_guard_chain_round_trips():
    core = dec(adv("f"), sk(k))
    guards = [eq(adv("f"), adv("c0")), eq(adv("f"), adv("c1"))]
    chained = elses(guards, core)
    assert chained == ite(guards[0], zero(core), ite(guards[1], zero(core), core))
    assert peel_elses(chained) == (guards, core)
    assert peel_elses(core) == ([], core)


def test_key_position_and_nodec_conditions():
    keys = frozenset({"k"})
    assert key_position_violations(dec(adv("f"), sk(k)), keys) == []
    assert key_position_violations(pair(sk(k), a), keys) == [(0,)]
    assert nodec_violations(pk(k), keys) == []
    assert nodec_violations(pair(k, pk(k)), keys) == [(0,)]


def test_randomness_only_as_encryption_randomness():
    assert freshness_violations(enc(a, pk(k), r), {"r"}) == []
    assert freshness_violations(pair(r, enc(a, pk(k), r)), {"r"}) == [(0,)]


def test_cca_rule_renders_its_structure(kernel, read_fixture):
    doc = _cca_root(kernel, read_fixture("cca_basic.bcp"))
    rule = doc.derivation.rule
    assert isinstance(rule, CCA)
    assert rule.render().startswith("(cca (keys n.k)")


def test_weakened_instance_is_completed(kernel, read_fixture):
    doc = _cca_root(kernel, read_fixture("cca_basic.bcp"))
    struct = doc.derivation.rule.structure
    weakened = doc.derivation.conclusion.select([0, 2])
    assert kernel.verify_cca(weakened, struct).accepted
    assert kernel.verify_cca(weakened, struct, require_complete=True).categories == [Cat.STRUCTURE]

    completed, completed_struct = kernel.complete_cca(weakened, struct)
    assert len(completed) == 3
    assert completed.left[:2] == weakened.left
    assert kernel.verify_cca(completed, completed_struct, require_complete=True).accepted
    assert completed.size - weakened.size <= weakened.size ** 2


@pytest.mark.parametrize("seed", range(5))
def test_generated_weakened_instances_are_completed(kernel, random_cca_instance, seed):
    rng = random.Random(seed)
    for _ in range(10):
        seq, struct = random_cca_instance(rng)
        assert kernel.verify_cca(seq, struct, require_complete=True).accepted
        shown = sorted(rng.sample(range(len(seq)), rng.randint(1, len(seq))))
        weakened = seq.select(shown)
        assert kernel.verify_cca(weakened, struct).accepted

        completed, completed_struct = kernel.complete_cca(weakened, struct)
        assert completed.left[:len(weakened)] == weakened.left
        assert kernel.verify_cca(completed, completed_struct, require_complete=True).accepted
        assert completed.size - weakened.size <= weakened.size ** 2


def test_randomness_is_fresh_per_side(kernel):
    first = OracleCall(kind=CallKind.ENC, handle="e0", left=enc(a, pk(k), name("r0")), right=enc(b, pk(k), name("r1")))
    second = OracleCall(kind=CallKind.ENC, handle="e1", left=enc(a, pk(k), name("r1")), right=enc(b, pk(k), name("r2")))
    struct = CcaStructure(keys=["k"], calls=[first, second])
    seq = Sequent.of([pk(k), first.left, second.left], [pk(k), first.right, second.right])
    verdict = kernel.verify_cca(seq, struct)
    assert verdict.accepted, verdict.describe()

    leaked = name("r2")
    seq = Sequent.of([leaked, pk(k), first.left, second.left], [leaked, pk(k), first.right, second.right])
    verdict = kernel.verify_cca(seq, struct)
    assert [(d.category, d.side) for d in verdict.diagnostics] == [(Cat.FRESHNESS, Side.RIGHT)]


def test_side_conditions_over_terms_in_scope(random_cca_instance):
    seq, struct = random_cca_instance(random.Random(3))
    assert check_side_conditions(struct, list(seq.left)) == []
    assert check_side_conditions(struct, list(seq.right), Side.RIGHT) == []

    assert [d.category for d in check_side_conditions(struct, [pair(sk(k), a)])] == [Cat.KEY_POSITION, Cat.NODEC]
    assert [d.category for d in check_side_conditions(struct, [pair(k, a)])] == [Cat.NODEC]
    assert [d.category for d in check_side_conditions(struct, [pair(name("r0"), a)])] == [Cat.FRESHNESS]
