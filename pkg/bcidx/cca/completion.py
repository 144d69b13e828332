from typing import Dict, List, Optional, Set, Tuple
import logging

from bcidx.constants import Side
from bcidx.exceptions import CompletionError, RenamingError
from bcidx.rewrite.engine import default_order
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, alpha_rename, dec, enc, eq
from bcidx.types import Sequent
from .checker import DUMMY, canonical_calls, match_components, structure_diagnostics
from .constants import CallKind
from .guards import abstract_term, decryption_parts, elses, encryption_parts, guard_handles, handles_in, instantiate, peel_elses
from .types import CcaStructure, OracleCall

logger = logging.getLogger(__name__)


def call_dependencies(calls: List[OracleCall], side: Side) -> Dict[str, Set[str]]:
    """
    Handles each call refers to on one side: the decryptions its plaintext is built from,
    or the earlier calls its ciphertext is built from.
    """
    deps: Dict[str, Set[str]] = {}
    for index, call in enumerate(calls):
        earlier = calls[:index]
        if call.kind is CallKind.ENC:
            body = encryption_parts(call.term(side))[0]
            deps[call.handle] = handles_in(abstract_term(body, earlier, side, kinds=(CallKind.DEC,)))
        else:
            _, core = peel_elses(call.term(side))
            deps[call.handle] = handles_in(abstract_term(decryption_parts(core)[0], earlier, side))
    return deps


def dependency_closure(handles: Set[str], deps: Dict[str, Set[str]]) -> Set[str]:
    closed: Set[str] = set()
    stack = list(handles)
    while stack:
        handle = stack.pop()
        if handle in closed:
            continue
        closed.add(handle)
        stack.extend(deps.get(handle, ()))
    return closed


def _side_term(call: OracleCall, side: Side, keep: bool, earlier: List[OracleCall], current: Dict[str, Term],
               done: List[Tuple[str, Term]], order: CanonicalOrder) -> Term:
    if keep:
        return call.term(side)
    if call.kind is CallKind.ENC:
        original = call.term(side)
        return enc(DUMMY, original.args[1], original.args[2])
    # a decryption read only on the other side: rebuild it over the completed terms
    _, core = peel_elses(call.term(side.other))
    decrypted, key = decryption_parts(core)
    shape = abstract_term(decrypted, earlier, side.other)
    rebuilt = instantiate(shape, current)
    handles = guard_handles(rebuilt, done, key, order)
    guards = canonical_sorted(eq(rebuilt, current[h]) for h in handles)
    return elses(guards, dec(rebuilt, core.args[1]))


def complete_instance(seq: Sequent, struct: CcaStructure,
                      order: Optional[CanonicalOrder] = None) -> Tuple[Sequent, CcaStructure]:
    """
    Extend a CCA instance so that every call it depends on is displayed.

    Calls needed on only one side get a placeholder on the other: an encryption of a reserved
    dummy constant, or the decryption rebuilt over the completed terms. The structure is
    restricted to the needed calls.

    Raises:
        CompletionError: when the sequent does not match the structure.
    """
    order = order or default_order()
    try:
        calls = canonical_calls(struct)
        inverse = struct.inverse_renaming()
        right = tuple(alpha_rename(t, inverse) for t in seq.right) if inverse else seq.right
    except RenamingError as e:
        raise CompletionError(f"Invalid renaming: {e}")
    problems = structure_diagnostics(calls, struct.key_set)
    if problems:
        raise CompletionError(problems[0].message)
    matched, _, problems = match_components(seq.left, right, calls)
    if problems:
        raise CompletionError(problems[0].message)

    displayed = set(matched.values())
    needed = {side: dependency_closure(displayed, call_dependencies(calls, side)) for side in (Side.LEFT, Side.RIGHT)}
    kept = needed[Side.LEFT] | needed[Side.RIGHT]

    current: Dict[Side, Dict[str, Term]] = {Side.LEFT: {}, Side.RIGHT: {}}
    done: Dict[Side, List[Tuple[str, Term]]] = {Side.LEFT: [], Side.RIGHT: []}
    completed: List[OracleCall] = []
    for index, call in enumerate(calls):
        earlier = calls[:index]
        if call.handle not in kept:
            continue
        terms = {}
        for side in (Side.LEFT, Side.RIGHT):
            terms[side] = _side_term(call, side, call.handle in needed[side], earlier, current[side],
                                     done[side], order)
            current[side][call.handle] = terms[side]
            if call.kind is CallKind.ENC:
                done[side].append((call.handle, terms[side]))
        completed.append(OracleCall.model_construct(kind=call.kind, handle=call.handle,
                                                    left=terms[Side.LEFT], right=terms[Side.RIGHT]))

    left, right_terms = list(seq.left), list(seq.right)
    displayed_calls = []
    for call in completed:
        shown = OracleCall.model_construct(kind=call.kind, handle=call.handle, left=call.left,
                                           right=struct.displayed_right(call.right))
        displayed_calls.append(shown)
        if call.handle not in displayed:
            left.append(shown.left)
            right_terms.append(shown.right)
    logger.debug(f"Completed CCA instance with {len(completed) - len(displayed)} extra calls")
    result = CcaStructure.model_construct(keys=list(struct.keys), renaming=list(struct.renaming), calls=displayed_calls)
    return Sequent.of(left, right_terms), result
