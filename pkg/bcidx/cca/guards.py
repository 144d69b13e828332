from typing import Dict, List, Optional, Set, Tuple
import logging

from bcidx.constants import BLANK_SYMBOL, Side
from bcidx.exceptions import MalformedStructureError
from bcidx.rewrite.engine import default_order, normalize
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, adv, enc, eq, ite, names_of, substitute, subterms, zero
from .constants import HANDLE_PREFIX, CallKind
from .types import CcaStructure, GuardList, OracleCall

logger = logging.getLogger(__name__)

BLANK = adv(BLANK_SYMBOL)


def elses(guards: GuardList, x: Term) -> Term:
    result = x
    for guard in reversed(guards):
        result = ite(guard, zero(x), result)
    return result


def peel_elses(t: Term) -> Optional[Tuple[GuardList, Term]]:
    """Inverse of elses: the guard list and the guarded core, or None if t has another shape."""
    guards: GuardList = []
    branches: List[Term] = []
    current = t
    while current.is_app(tc.ITE) and current.args[1].is_app(tc.ZERO):
        guards.append(current.args[0])
        branches.append(current.args[1])
        current = current.args[2]
    if any(branch.args[0] != current for branch in branches):
        return None
    return guards, current


def decryption_parts(core: Term) -> Optional[Tuple[Term, str]]:
    """(u, n) for a core dec(u, sk(n)) with n a name."""
    if core.is_app(tc.DEC) and core.args[1].is_app(tc.SK) and core.args[1].args[0].is_name:
        return core.args[0], core.args[1].args[0].head
    return None


def encryption_parts(t: Term) -> Optional[Tuple[Term, str, str]]:
    """(m, n, r) for enc(m, pk(n), r) with n and r names."""
    if (t.is_app(tc.ENC) and t.args[1].is_app(tc.PK) and t.args[1].args[0].is_name and t.args[2].is_name):
        return t.args[0], t.args[1].args[0].head, t.args[2].head
    return None


def handle_term(handle: str) -> Term:
    return Term(f"{HANDLE_PREFIX}{handle}")


def is_handle(t: Term) -> bool:
    return not t.is_name and t.head.startswith(HANDLE_PREFIX)


def handles_in(t: Term) -> Set[str]:
    return {s.head[len(HANDLE_PREFIX):] for s in subterms(t) if is_handle(s)}


def abstract_term(t: Term, calls: List[OracleCall], side: Side, kinds: Tuple[CallKind, ...] = (CallKind.ENC, CallKind.DEC),
                  terms: Optional[Dict[str, Term]] = None) -> Term:
    """
    Replace maximal occurrences of registered call terms by their handles.

    `terms` overrides the per-handle terms (used for the canonical right side).
    """
    mapping: Dict[Term, Term] = {}
    for call in calls:
        if call.kind in kinds:
            call_term = terms[call.handle] if terms is not None else call.term(side)
            mapping.setdefault(call_term, handle_term(call.handle))
    return substitute(t, mapping) if mapping else t


def instantiate(t: Term, terms: Dict[str, Term]) -> Term:
    """Replace handles by terms."""
    if is_handle(t):
        return terms[t.head[len(HANDLE_PREFIX):]]
    if not t.args:
        return t
    return t.with_args(tuple(instantiate(a, terms) for a in t.args))


def guard_handles(u: Term, enc_terms: List[Tuple[str, Term]], key: str,
                  order: Optional[CanonicalOrder] = None) -> List[str]:
    """
    Handles of the encryptions under pk(key) that appear directly in u.

    Every registered encryption is blanked out (its plaintext replaced by a reserved
    constant) and the result normalized; an encryption appears directly when its
    randomness survives.
    """
    order = order or default_order()
    mapping: Dict[Term, Term] = {}
    parts: Dict[str, Tuple[str, str]] = {}
    for handle, term in enc_terms:
        found = encryption_parts(term)
        if found is None:
            raise MalformedStructureError(f"Oracle call {handle} is not an encryption enc(m, pk(n), r)")
        _, enc_key, randomness = found
        parts[handle] = (enc_key, randomness)
        mapping.setdefault(term, enc(BLANK, term.args[1], term.args[2]))
    reduced = normalize(substitute(u, mapping), order) if mapping else u
    surviving = names_of(reduced)
    return [handle for handle, (enc_key, randomness) in parts.items()
            if enc_key == key and randomness in surviving]


def required_guards(u: Term, struct: CcaStructure, pk: Term, order: Optional[CanonicalOrder] = None,
                    side: Side = Side.LEFT) -> GuardList:
    """
    Guards eq(u, α) for every registered encryption α under pk that appears directly in u,
    in canonical order.
    """
    if not (pk.is_app(tc.PK) and pk.args[0].is_name):
        raise MalformedStructureError("required_guards expects a public key pk(n)")
    key = pk.args[0].head
    if key not in struct.key_set:
        raise MalformedStructureError(f"Secret key sk(n.{key}) is not in the key set")
    enc_terms = [(call.handle, call.term(side)) for call in struct.enc_calls]
    handles = guard_handles(u, enc_terms, key, order)
    by_handle = dict(enc_terms)
    guards = canonical_sorted(eq(u, by_handle[h]) for h in handles)
    logger.debug(f"Required {len(guards)} guards for decryption under n.{key}")
    return guards
