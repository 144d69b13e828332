from typing import Dict, List, Optional, Set, Tuple
import logging

from bcidx.constants import DUMMY_SYMBOL, DiagnosticCategory, Side
from bcidx.exceptions import RenamingError
from bcidx.length.engine import eql
from bcidx.length.types import LengthDecls
from bcidx.rewrite.engine import default_order
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, adv, alpha_rename, eq, names_of, subterms
from bcidx.types import Diagnostic, Sequent, Verdict
from .conditions import hidden_randomness_diagnostics, key_position_violations, nodec_violations
from .constants import CallKind
from .guards import abstract_term, decryption_parts, encryption_parts, guard_handles, peel_elses
from .types import CcaStructure, OracleCall

logger = logging.getLogger(__name__)

DUMMY = adv(DUMMY_SYMBOL)
RULE_NAME = "cca"


def canonical_calls(struct: CcaStructure) -> List[OracleCall]:
    """The calls with their right terms mapped back through the renaming."""
    inverse = struct.inverse_renaming()
    return [OracleCall.model_construct(kind=call.kind, handle=call.handle, left=call.left,
                                       right=alpha_rename(call.right, inverse) if inverse else call.right)
            for call in struct.calls]


def structure_diagnostics(calls: List[OracleCall], keys: frozenset) -> List[Diagnostic]:
    """Shape checks on the registered calls, independent of the sequent."""
    diagnostics: List[Diagnostic] = []

    def report(message: str) -> None:
        diagnostics.append(Diagnostic(category=DiagnosticCategory.STRUCTURE, message=message))

    randomness: Dict[Side, Set[str]] = {Side.LEFT: set(), Side.RIGHT: set()}
    for call in calls:
        if call.kind is CallKind.ENC:
            left, right = encryption_parts(call.left), encryption_parts(call.right)
            if left is None or right is None:
                report(f"Call {call.handle} is not an encryption enc(m, pk(n), r) on both sides")
                continue
            if left[1] not in keys:
                report(f"Call {call.handle} encrypts under pk(n.{left[1]}) whose secret key is not in the key set")
            if left[1] != right[1]:
                report(f"Call {call.handle} uses different public keys on the two sides")
            for side, parts in ((Side.LEFT, left), (Side.RIGHT, right)):
                if parts[2] in randomness[side]:
                    report(f"Duplicate randomness n.{parts[2]} on the {side.value} side (call {call.handle})")
                randomness[side].add(parts[2])
        else:
            cores = []
            for term in (call.left, call.right):
                peeled = peel_elses(term)
                parts = decryption_parts(peeled[1]) if peeled is not None else None
                cores.append(parts)
            if cores[0] is None or cores[1] is None:
                report(f"Call {call.handle} is not a guarded decryption elses(l, dec(u, sk(n))) on both sides")
                continue
            if cores[0][1] not in keys:
                report(f"Call {call.handle} decrypts with sk(n.{cores[0][1]}) which is not in the key set")
            if cores[0][1] != cores[1][1]:
                report(f"Call {call.handle} uses different secret keys on the two sides")
    return diagnostics


def match_components(left: Tuple[Term, ...], right: Tuple[Term, ...],
                     calls: List[OracleCall]) -> Tuple[Dict[int, str], List[int], List[Diagnostic]]:
    """Assign each component to an oracle call or to the shared base terms."""
    matched: Dict[int, str] = {}
    base: List[int] = []
    used: Set[str] = set()
    diagnostics: List[Diagnostic] = []
    for i, (l_term, r_term) in enumerate(zip(left, right)):
        handle = next((call.handle for call in calls
                       if call.handle not in used and call.left == l_term and call.right == r_term), None)
        if handle is not None:
            matched[i] = handle
            used.add(handle)
        elif l_term == r_term:
            base.append(i)
        else:
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.SCHEMA, component=i,
                message=f"Component {i} is neither a registered oracle call nor a base term shared by both sides"))
    return matched, base, diagnostics


def _has_zero(t: Term) -> bool:
    return any(s.is_app(tc.ZERO) for s in subterms(t))


def _nodec(t: Term, keys: frozenset, side: Side, handle: str, what: str) -> List[Diagnostic]:
    return [Diagnostic(category=DiagnosticCategory.NODEC, side=side, position=list(p),
                       message=f"{what} of call {handle} uses a key name outside pk(.)")
            for p in nodec_violations(t, keys)]


def verify_cca_instance(seq: Sequent, struct: CcaStructure, decls: Optional[LengthDecls] = None,
                        order: Optional[CanonicalOrder] = None, require_complete: bool = False) -> Verdict:
    """
    Replay the oracle calls of struct left and right and check every CCA side condition.

    Components not matching a call must be base terms, identical on both sides once the
    renaming is undone. Registered calls missing from the sequent are accepted (the axiom is
    closed under Restr) unless require_complete is set.

    Args:
        seq: the sequent to justify.
        struct: keys, renaming and the ordered calls.
        decls: length declarations for the EQL check on encryption bodies.
        order: order used for the guard membership test.
        require_complete: demand that every registered call is displayed.

    Returns:
        An accepting verdict, or the diagnostics of the first failing step.
    """
    order = order or default_order()
    decls = decls or LengthDecls()
    keys = struct.key_set
    try:
        inverse = struct.inverse_renaming()
        right = tuple(alpha_rename(t, inverse) for t in seq.right) if inverse else seq.right
        calls = canonical_calls(struct)
    except RenamingError as e:
        return Verdict.reject(DiagnosticCategory.STRUCTURE, f"Invalid renaming: {e}", rule=RULE_NAME)

    diagnostics = structure_diagnostics(calls, keys)
    if diagnostics:
        return Verdict.from_diagnostics(diagnostics, RULE_NAME)

    matched, base, diagnostics = match_components(seq.left, right, calls)
    if diagnostics:
        return Verdict.from_diagnostics(diagnostics, RULE_NAME)
    if require_complete:
        missing = [call.handle for call in calls if call.handle not in matched.values()]
        if missing:
            return Verdict.reject(DiagnosticCategory.STRUCTURE, f"Calls not displayed in the sequent: {missing}",
                                  rule=RULE_NAME)

    for i in base:
        for position in key_position_violations(seq.left[i], keys):
            diagnostics.append(Diagnostic(category=DiagnosticCategory.KEY_POSITION, component=i,
                                          position=list(position), message="Secret key outside decryption position"))
        for position in nodec_violations(seq.left[i], keys):
            diagnostics.append(Diagnostic(category=DiagnosticCategory.NODEC, component=i, position=list(position),
                                          message="Base term uses a key name outside pk(.)"))
    if diagnostics:
        return Verdict.from_diagnostics(diagnostics, RULE_NAME)

    component_of = {handle: i for i, handle in matched.items()}
    phi: Dict[Side, List[Term]] = {Side.LEFT: [seq.left[i] for i in base], Side.RIGHT: [seq.left[i] for i in base]}
    done: List[OracleCall] = []
    randomness: Set[str] = set()

    for call in calls:
        component = component_of.get(call.handle)
        if call.kind is CallKind.ENC:
            diagnostics = _check_encryption(call, done, phi, keys, decls, order)
            randomness.add(encryption_parts(call.left)[2])
            randomness.add(encryption_parts(call.right)[2])
        else:
            diagnostics = _check_decryption(call, done, keys, order)
        if diagnostics:
            for d in diagnostics:
                if d.component is None:
                    d.component = component
            logger.debug(f"CCA replay failed at call {call.handle}")
            return Verdict.from_diagnostics(diagnostics, RULE_NAME)
        done.append(call)
        phi[Side.LEFT].append(call.left)
        phi[Side.RIGHT].append(call.right)

    for side in (Side.LEFT, Side.RIGHT):
        diagnostics.extend(hidden_randomness_diagnostics(phi[side], randomness, side))
    for d in diagnostics:
        d.component = None
    return Verdict.from_diagnostics(diagnostics, RULE_NAME)


def _check_encryption(call: OracleCall, done: List[OracleCall], phi: Dict[Side, List[Term]], keys: frozenset,
                      decls: LengthDecls, order: CanonicalOrder) -> List[Diagnostic]:
    diagnostics: List[Diagnostic] = []
    bodies = {}
    for side in (Side.LEFT, Side.RIGHT):
        body, _, r = encryption_parts(call.term(side))
        bodies[side] = body
        seen_names: Set[str] = set()
        for t in phi[side] + [body]:
            seen_names |= names_of(t)
        if r in seen_names:
            diagnostics.append(Diagnostic(category=DiagnosticCategory.FRESHNESS, side=side,
                                          message=f"Randomness n.{r} of call {call.handle} is not fresh"))
    for side in (Side.LEFT, Side.RIGHT):
        context = abstract_term(bodies[side], done, side, kinds=(CallKind.DEC,))
        diagnostics.extend(_nodec(context, keys, side, call.handle, "Plaintext"))
        if _has_zero(context):
            diagnostics.append(Diagnostic(category=DiagnosticCategory.SIDE_CONDITION, side=side,
                                          message=f"Plaintext of call {call.handle} uses zero outside an oracle call"))
    left_body, right_body = bodies[Side.LEFT], bodies[Side.RIGHT]
    if decls.check_lengths and DUMMY not in (left_body, right_body) and not eql(left_body, right_body, decls, order):
        diagnostics.append(Diagnostic(category=DiagnosticCategory.LENGTH,
                                      message=f"Plaintexts of call {call.handle} do not have equal lengths"))
    return diagnostics


def _check_decryption(call: OracleCall, done: List[OracleCall], keys: frozenset,
                      order: CanonicalOrder) -> List[Diagnostic]:
    diagnostics: List[Diagnostic] = []
    parts = {}
    for side in (Side.LEFT, Side.RIGHT):
        guards, core = peel_elses(call.term(side))
        decrypted, key = decryption_parts(core)
        parts[side] = (guards, decrypted, key)
    contexts = {side: abstract_term(parts[side][1], done, side) for side in (Side.LEFT, Side.RIGHT)}
    if contexts[Side.LEFT] != contexts[Side.RIGHT]:
        diagnostics.append(Diagnostic(
            category=DiagnosticCategory.SIDE_CONDITION,
            message=f"Call {call.handle} decrypts terms that are not the same composition of earlier calls"))
        return diagnostics
    context = contexts[Side.LEFT]
    if not context.if_free or _has_zero(context):
        diagnostics.append(Diagnostic(
            category=DiagnosticCategory.SIDE_CONDITION,
            message=f"Call {call.handle} decrypts a term using ite or zero outside the oracle calls"))
    diagnostics.extend(_nodec(context, keys, Side.LEFT, call.handle, "Ciphertext"))

    key = parts[Side.LEFT][2]
    handles = {}
    for side in (Side.LEFT, Side.RIGHT):
        enc_terms = [(c.handle, c.term(side)) for c in done if c.kind is CallKind.ENC]
        handles[side] = guard_handles(parts[side][1], enc_terms, key, order)
    if set(handles[Side.LEFT]) != set(handles[Side.RIGHT]):
        diagnostics.append(Diagnostic(
            category=DiagnosticCategory.STRUCTURE,
            message=f"Call {call.handle}: encryptions appearing directly differ between the sides"))
    by_handle = {c.handle: c for c in done}
    for side in (Side.LEFT, Side.RIGHT):
        guards, decrypted, _ = parts[side]
        expected = canonical_sorted(eq(decrypted, by_handle[h].term(side)) for h in handles[Side.LEFT])
        if guards != expected:
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.GUARD, side=side,
                message=f"Call {call.handle} carries {len(guards)} guards, expected {len(expected)} "
                        f"(one per encryption under pk(n.{key}) appearing directly in the ciphertext)"))
    return diagnostics
