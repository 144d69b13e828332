from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple
import logging

from bcidx.constants import DiagnosticCategory, Side
from bcidx.terms import constants as tc
from bcidx.terms.parser import render_term
from bcidx.terms.types import Position, Term, subterm_at
from bcidx.types import Diagnostic
from .guards import abstract_term, encryption_parts
from .types import CcaStructure

logger = logging.getLogger(__name__)


def _walk(t: Term, parent: Optional[Term] = None, index: int = -1,
          position: Position = ()) -> Iterator[Tuple[Term, Optional[Term], int, Position]]:
    yield t, parent, index, position
    for i, a in enumerate(t.args):
        yield from _walk(a, t, i, position + (i,))


def key_position_violations(t: Term, keys: FrozenSet[str]) -> List[Position]:
    """Positions of sk(n), n in keys, that are not the key argument of a decryption."""
    found = []
    for sub, parent, index, position in _walk(t):
        if sub.is_app(tc.SK) and sub.args[0].is_name and sub.args[0].head in keys:
            if parent is None or not parent.is_app(tc.DEC) or index != 1:
                found.append(position)
    return found


def nodec_violations(t: Term, keys: FrozenSet[str]) -> List[Position]:
    """Positions of key names n in keys that occur other than as pk(n)."""
    found = []
    for sub, parent, _, position in _walk(t):
        if sub.is_name and sub.head in keys and (parent is None or not parent.is_app(tc.PK)):
            found.append(position)
    return found


def freshness_violations(t: Term, randomness: Set[str]) -> List[Position]:
    """Positions of randomness names that are not the randomness argument of an encryption."""
    found = []
    for sub, parent, index, position in _walk(t):
        if sub.is_name and sub.head in randomness and (parent is None or not parent.is_app(tc.ENC) or index != 2):
            found.append(position)
    return found


def plaintexts_by_randomness(terms: Iterable[Term], randomness: Set[str]) -> Dict[str, Set[Term]]:
    used: Dict[str, Set[Term]] = {}
    for t in terms:
        for sub, _, _, _ in _walk(t):
            if sub.is_app(tc.ENC) and sub.args[2].is_name and sub.args[2].head in randomness:
                used.setdefault(sub.args[2].head, set()).add(sub.args[0])
    return used


def hidden_randomness_diagnostics(terms: List[Term], randomness: Set[str], side: Side) -> List[Diagnostic]:
    """Randomness must sit only in encryption randomness position, with a single plaintext."""
    diagnostics = []
    for index, t in enumerate(terms):
        for position in freshness_violations(t, randomness):
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.FRESHNESS, side=side, component=index, position=list(position),
                message=f"Randomness n.{subterm_at(t, position).head} appears outside an encryption randomness position"))
    for name, plaintexts in sorted(plaintexts_by_randomness(terms, randomness).items()):
        if len(plaintexts) > 1:
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.HIDDEN_RANDOMNESS, side=side,
                message=f"Randomness n.{name} is used with {len(plaintexts)} distinct plaintexts"))
    return diagnostics


def check_side_conditions(struct: CcaStructure, terms_in_scope: List[Term], side: Side = Side.LEFT) -> List[Diagnostic]:
    """
    Evaluate the syntactic CCA side conditions over terms, against the calls of struct on one side.

    Reports keys outside decryption position, key names used other than in pk(n) once the
    registered calls are abstracted, randomness outside encryption randomness position, and
    randomness shared by two plaintexts.
    """
    keys = struct.key_set
    randomness: Set[str] = set()
    for call in struct.enc_calls:
        parts = encryption_parts(call.term(side))
        if parts is not None:
            randomness.add(parts[2])

    diagnostics: List[Diagnostic] = []
    for index, t in enumerate(terms_in_scope):
        for position in key_position_violations(t, keys):
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.KEY_POSITION, side=side, component=index, position=list(position),
                message=f"Secret key {render_term(subterm_at(t, position))} occurs outside decryption position"))
        abstracted = abstract_term(t, struct.calls, side)
        for position in nodec_violations(abstracted, keys):
            diagnostics.append(Diagnostic(
                category=DiagnosticCategory.NODEC, side=side, component=index,
                message=f"Key name n.{subterm_at(abstracted, position).head} is used outside pk(.) and outside the oracle calls"))
    diagnostics.extend(hidden_randomness_diagnostics(terms_in_scope, randomness, side))
    if diagnostics:
        logger.debug(f"Side conditions found {len(diagnostics)} violations")
    return diagnostics
