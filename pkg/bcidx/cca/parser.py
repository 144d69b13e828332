from typing import List, Tuple
import logging
from pydantic import ValidationError

from bcidx.exceptions import MalformedStructureError, TermSyntaxError
from bcidx.terms.parser import Atom, SExpr, SList, TermParser, expect_ident, expect_name, head_of
from .constants import CALLS_HEAD, CCA_HEAD, KEYS_HEAD, RENAMING_HEAD, CallKind
from .types import CcaStructure, OracleCall

logger = logging.getLogger(__name__)


def _section(node: SExpr, head: str) -> List[SExpr]:
    if head_of(node) != head:
        raise TermSyntaxError(f"Expected ({head} ...)", node.line, node.column)
    return node.items[1:]


def _side_term(node: SExpr, head: str, parser: TermParser):
    items = _section(node, head)
    if len(items) != 1:
        raise TermSyntaxError(f"({head} TERM) takes exactly one term", node.line, node.column)
    return parser.term(items[0])


def _call(node: SExpr, parser: TermParser) -> OracleCall:
    head = head_of(node)
    if head not in (CallKind.ENC.value, CallKind.DEC.value) or len(node.items) != 4:
        raise TermSyntaxError("Expected (enc-call|dec-call HANDLE (left TERM) (right TERM))", node.line, node.column)
    handle = expect_ident(node.items[1], "call handle")
    left = _side_term(node.items[2], "left", parser)
    right = _side_term(node.items[3], "right", parser)
    return OracleCall(kind=CallKind.from_str(head), handle=handle, left=left, right=right)


def _renaming_pair(node: SExpr) -> Tuple[str, str]:
    if not isinstance(node, SList) or len(node.items) != 2:
        raise TermSyntaxError("Renaming pairs are written (n.a n.b)", node.line, node.column)
    return expect_name(node.items[0]), expect_name(node.items[1])


def read_cca_structure(node: SExpr, parser: TermParser) -> CcaStructure:
    """Build a CcaStructure from `(cca (keys n.k…) (renaming (n.a n.b)…) (calls CALL…))`."""
    items = _section(node, CCA_HEAD)
    if len(items) != 3 or isinstance(items[0], Atom):
        raise TermSyntaxError("Expected (cca (keys ...) (renaming ...) (calls ...))", node.line, node.column)
    keys = [expect_name(k) for k in _section(items[0], KEYS_HEAD)]
    renaming = [_renaming_pair(p) for p in _section(items[1], RENAMING_HEAD)]
    calls = [_call(c, parser) for c in _section(items[2], CALLS_HEAD)]
    try:
        structure = CcaStructure(keys=keys, renaming=renaming, calls=calls)
    except ValidationError as e:
        logger.warning(f"Invalid CCA structure at {node.line}:{node.column}: {e}")
        raise MalformedStructureError(f"{node.line}:{node.column}: {e}")
    logger.debug(f"Read CCA structure with {len(keys)} keys and {len(calls)} calls")
    return structure
