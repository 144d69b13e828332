from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple
import itertools
import logging

from bcidx.cca.checker import verify_cca_instance
from bcidx.cca.constants import CallKind
from bcidx.cca.guards import decryption_parts, encryption_parts, peel_elses
from bcidx.cca.types import CcaStructure, OracleCall
from bcidx.length.types import LengthDecls
from bcidx.rewrite.engine import default_order
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder
from bcidx.terms.types import Term, subterms
from bcidx.types import Sequent
from .constants import HANDLE_DEC, HANDLE_ENC, MAX_MATCH_KEYS

logger = logging.getLogger(__name__)


def _align_names(s: Term, t: Term, mapping: Dict[str, str]) -> bool:
    if s.is_name and t.is_name:
        known = mapping.setdefault(s.head, t.head)
        return known == t.head
    if s.is_name or t.is_name or s.head != t.head or s.arity != t.arity:
        return False
    return all(_align_names(a, b, mapping) for a, b in zip(s.args, t.args))


def name_alignment(pairs: List[Tuple[Term, Term]]) -> Optional[Dict[str, str]]:
    """The name map sending every left term onto its right partner, if one exists and is injective."""
    mapping: Dict[str, str] = {}
    for s, t in pairs:
        if not _align_names(s, t, mapping):
            return None
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping


def refl_renaming(seq: Sequent) -> Optional[List[Tuple[str, str]]]:
    """Renaming pairs closing seq by reflexivity, or None."""
    mapping = name_alignment(seq.pairs())
    if mapping is None:
        return None
    return sorted((a, b) for a, b in mapping.items() if a != b)


def complete_bijection(mapping: Dict[str, str]) -> List[Tuple[str, str]]:
    """Non-identity pairs of a bijection extending the injective partial map."""
    moved = {a: b for a, b in mapping.items() if a != b}
    fixed = {a for a, b in mapping.items() if a == b}
    free_targets = sorted(set(moved) - set(moved.values()) - fixed)
    dangling = sorted(set(moved.values()) - set(moved) - fixed)
    completed = dict(moved)
    completed.update(zip(dangling, free_targets))
    return sorted(completed.items())


def key_names(seq: Sequent) -> List[str]:
    """Names used as a public or secret key somewhere in the sequent."""
    found: Set[str] = set()
    for t in seq.left + seq.right:
        for s in subterms(t):
            if (s.is_app(tc.PK) or s.is_app(tc.SK)) and s.args[0].is_name:
                found.add(s.args[0].head)
    return sorted(found)


def _enc_call(left: Term, right: Term, keys: FrozenSet[str]) -> bool:
    l_parts, r_parts = encryption_parts(left), encryption_parts(right)
    return l_parts is not None and r_parts is not None and l_parts[1] == r_parts[1] and l_parts[1] in keys


def _dec_core(t: Term) -> Optional[Tuple[List[Term], Term, str]]:
    peeled = peel_elses(t)
    if peeled is None:
        return None
    parts = decryption_parts(peeled[1])
    if parts is None:
        return None
    return peeled[0], parts[0], parts[1]


def _aligned_encryptions(left: Term, right: Term, keys: FrozenSet[str]) -> Iterator[Tuple[Term, Term]]:
    if _enc_call(left, right, keys):
        yield left, right
        return
    if left.is_name or right.is_name or left.head != right.head or left.arity != right.arity:
        return
    for a, b in zip(left.args, right.args):
        yield from _aligned_encryptions(a, b, keys)


def _structure_for(seq: Sequent, keys: FrozenSet[str]) -> Optional[CcaStructure]:
    encs: List[Tuple[Term, Term]] = []
    decs: List[Tuple[Term, Term]] = []
    base: List[Tuple[Term, Term]] = []

    def register(pair: Tuple[Term, Term], into: List[Tuple[Term, Term]]) -> None:
        if pair not in into:
            into.append(pair)

    for left, right in seq.pairs():
        if _enc_call(left, right, keys):
            register((left, right), encs)
            continue
        l_core, r_core = _dec_core(left), _dec_core(right)
        if l_core is not None and r_core is not None and l_core[2] == r_core[2] and l_core[2] in keys:
            register((left, right), decs)
            for pair in _aligned_encryptions(l_core[1], r_core[1], keys):
                register(pair, encs)
            for l_guard, r_guard in zip(l_core[0], r_core[0]):
                if l_guard.is_app(tc.EQ) and r_guard.is_app(tc.EQ):
                    for pair in _aligned_encryptions(l_guard.args[1], r_guard.args[1], keys):
                        register(pair, encs)
            continue
        base.append((left, right))

    if not encs and not decs:
        return None
    mapping = name_alignment(base)
    if mapping is None:
        return None

    calls = [(CallKind.ENC, pair) for pair in encs] + [(CallKind.DEC, pair) for pair in decs]
    calls.sort(key=lambda c: (c[1][0].size + c[1][1].size, c[0] is CallKind.DEC, c[1][0].canonical_key))
    oracle_calls = []
    for index, (kind, (left, right)) in enumerate(calls):
        prefix = HANDLE_ENC if kind is CallKind.ENC else HANDLE_DEC
        oracle_calls.append(OracleCall(kind=kind, handle=f"{prefix}{index}", left=left, right=right))
    return CcaStructure(keys=sorted(keys), renaming=complete_bijection(mapping), calls=oracle_calls)


def cca_leaf_match(seq: Sequent, decls: Optional[LengthDecls] = None,
                   order: Optional[CanonicalOrder] = None) -> Optional[CcaStructure]:
    """
    Reconstruct a CCA instance closing seq, or None.

    Key sets are tried smallest first among the names used as keys. For each, components that
    are encryptions or guarded decryptions under a chosen key become oracle calls, the
    encryptions inside decrypted ciphertexts and guards are registered too, and the remaining
    components are base terms whose name alignment gives the renaming. Calls are ordered by size.
    """
    order = order or default_order()
    names = key_names(seq)[:MAX_MATCH_KEYS]
    for size in range(1, len(names) + 1):
        for subset in itertools.combinations(names, size):
            struct = _structure_for(seq, frozenset(subset))
            if struct is None:
                continue
            verdict = verify_cca_instance(seq, struct, decls, order)
            if verdict.accepted:
                logger.debug(f"CCA leaf matched with keys {list(subset)} and {len(struct.calls)} calls")
                return struct
    return None
