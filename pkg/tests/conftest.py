from pathlib import Path
from random import Random
from typing import Tuple

import pytest

from bcidx import IndistinguishabilityKernel
from bcidx.cca import CallKind, CcaStructure, OracleCall, elses, required_guards
from bcidx.constants import Side
from bcidx.proof import CCA, FA, Derivation, Dup, Perm, Refl, Restr, Rw, Sym
from bcidx.search import SearchBudget
from bcidx.terms import FALSE, TRUE, Term, adv, alpha_rename, dec, enc, eq, fst, ite, name, pair, pk, sk, snd
from bcidx.types import Sequent

FIXTURES = Path(__file__).parent / "fixtures"

NAMES = tuple(name(x) for x in ("a", "b", "c"))
CONDITIONS = (adv("g"), adv("h"))
KEY = name("k")


def _random_condition(rng: Random, depth: int) -> Term:
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        return rng.choice(CONDITIONS)
    if roll < 0.55:
        return rng.choice((TRUE, FALSE))
    return eq(_random_message(rng, depth - 1), _random_message(rng, depth - 1))


def _random_message(rng: Random, depth: int) -> Term:
    if depth <= 0 or rng.random() < 0.25:
        return rng.choice(NAMES)
    shape = rng.choice(("pair", "fst", "snd", "ite", "ite", "enc", "dec", "adv"))
    if shape == "pair":
        return pair(_random_message(rng, depth - 1), _random_message(rng, depth - 1))
    if shape == "fst":
        return fst(_random_message(rng, depth - 1))
    if shape == "snd":
        return snd(_random_message(rng, depth - 1))
    if shape == "enc":
        return enc(_random_message(rng, depth - 1), pk(KEY), name("r"))
    if shape == "dec":
        return dec(_random_message(rng, depth - 1), sk(KEY))
    if shape == "adv":
        return adv("f", _random_message(rng, depth - 1))
    return ite(_random_condition(rng, depth - 1), _random_message(rng, depth - 1), _random_message(rng, depth - 1))


def _random_cca_instance(rng: Random) -> Tuple[Sequent, CcaStructure]:
    """A valid CCA instance: pk(k), one to three encryptions, then guarded decryptions of adversarial functions of them."""
    public = pk(KEY)
    encryptions = []
    for i in range(rng.randint(1, 3)):
        randomness = name(f"r{i}")
        encryptions.append(OracleCall(kind=CallKind.ENC, handle=f"e{i}",
                                      left=enc(rng.choice(NAMES), public, randomness),
                                      right=enc(rng.choice(NAMES), public, randomness)))
    registered = CcaStructure(keys=[KEY.head], calls=encryptions)
    decryptions = []
    for j in range(rng.randint(0, 2)):
        source = rng.choice(encryptions)
        terms = {}
        for side in (Side.LEFT, Side.RIGHT):
            u = adv(f"f{j}", source.term(side))
            terms[side] = elses(required_guards(u, registered, public, side=side), dec(u, sk(KEY)))
        decryptions.append(OracleCall(kind=CallKind.DEC, handle=f"d{j}", left=terms[Side.LEFT],
                                      right=terms[Side.RIGHT]))
    calls = encryptions + decryptions
    seq = Sequent.of([public] + [call.left for call in calls], [public] + [call.right for call in calls])
    return seq, CcaStructure(keys=[KEY.head], calls=calls)


def _random_leaf(rng: Random) -> Derivation:
    if rng.random() < 0.5:
        seq, struct = _random_cca_instance(rng)
        return Derivation(conclusion=seq, rule=CCA(structure=struct))
    idents = [n.head for n in NAMES]
    images = list(idents)
    rng.shuffle(images)
    mu = dict(zip(idents, images))
    left = [rng.choice((rng.choice(NAMES), pair(rng.choice(NAMES), rng.choice(NAMES)))) for _ in range(rng.randint(1, 3))]
    right = [alpha_rename(t, mu) for t in left]
    return Derivation(conclusion=Sequent.of(left, right), rule=Refl(renaming=sorted(mu.items())))


def _extend(rng: Random, d: Derivation) -> Derivation:
    """One forward step below d: the new node concludes from d's conclusion."""
    seq = d.conclusion
    width = len(seq)
    choices = ["dup", "perm", "restr", "sym", "rw"] + (["fa", "fa"] if width >= 2 else [])
    op = rng.choice(choices)
    if op == "fa":
        i = rng.randrange(width - 1)
        left = seq.left[:i] + (pair(seq.left[i], seq.left[i + 1]),) + seq.left[i + 2:]
        right = seq.right[:i] + (pair(seq.right[i], seq.right[i + 1]),) + seq.right[i + 2:]
        conclusion, rule = Sequent.of(left, right), FA(symbol="pair", arg_count=2, index=i)
    elif op == "dup":
        conclusion, rule = Sequent.of(seq.left + seq.left[-1:], seq.right + seq.right[-1:]), Dup()
    elif op == "perm":
        permutation = list(range(width))
        rng.shuffle(permutation)
        conclusion, rule = permuted(seq, permutation), Perm(permutation=permutation)
    elif op == "restr":
        kept = rng.sample(range(width), rng.randint(1, width))
        conclusion, rule = seq.select(kept), Restr(kept=kept)
    elif op == "sym":
        conclusion, rule = seq.swapped(), Sym()
    else:
        side = rng.choice((Side.LEFT, Side.RIGHT))
        i = rng.randrange(width)
        original = seq.side(side)[i]
        conclusion = seq.replace(side, i, fst(pair(original, NAMES[0])))
        rule = Rw(side=side, index=i, replacement=original)
    return Derivation(conclusion=conclusion, rule=rule, premises=[d])


def permuted(seq: Sequent, permutation) -> Sequent:
    """The sequent whose component permutation[j] is component j of seq."""
    left, right = [None] * len(seq), [None] * len(seq)
    for j, target in enumerate(permutation):
        left[target], right[target] = seq.left[j], seq.right[j]
    return Sequent.of(left, right)


def _random_proof(rng: Random, steps: int = 6) -> Derivation:
    d = _random_leaf(rng)
    for _ in range(rng.randint(1, steps)):
        d = _extend(rng, d)
    return d


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def kernel() -> IndistinguishabilityKernel:
    return IndistinguishabilityKernel(budget=SearchBudget(max_depth=4, timeout=30))


@pytest.fixture
def read_fixture(fixtures):
    def _read(relative: str) -> str:
        return (fixtures / relative).read_text(encoding="utf-8")
    return _read


@pytest.fixture
def random_message():
    return _random_message


@pytest.fixture
def random_condition():
    return _random_condition


@pytest.fixture
def random_cca_instance():
    return _random_cca_instance


@pytest.fixture
def random_proof():
    return _random_proof


@pytest.fixture
def permute():
    return permuted
