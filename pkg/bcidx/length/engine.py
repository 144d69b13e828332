from typing import Dict, Optional
import logging

from bcidx.rewrite.engine import default_order, normalize
from bcidx.terms import constants as tc
from bcidx.terms.constants import Sort
from bcidx.terms.ordering import CanonicalOrder
from bcidx.terms.types import Term
from . import constants as c
from .types import LengthDecls, LengthExpr

logger = logging.getLogger(__name__)


def _leaf_length(t: Term, decls: LengthDecls, memo: Dict[Term, Optional[LengthExpr]]) -> Optional[LengthExpr]:
    if t in memo:
        return memo[t]
    result: Optional[LengthExpr] = None
    if t.is_name:
        result = decls.name_equations.get(t.head, LengthExpr.of(c.L_ETA))
    elif t.head in decls.pads:
        result = decls.pads[t.head]
    elif t.head in decls.zeros:
        result = decls.zeros[t.head]
    elif t.sort is Sort.BOOL:
        result = None
    elif t.head == tc.ITE:
        then_length = _leaf_length(t.args[1], decls, memo)
        else_length = _leaf_length(t.args[2], decls, memo)
        result = then_length if then_length is not None and then_length == else_length else None
    elif t.head == tc.PAIR:
        left, right = (_leaf_length(a, decls, memo) for a in t.args)
        if left is not None and right is not None:
            result = left + right + LengthExpr.of(c.L_PAIR)
    elif t.head == tc.ENC:
        body = _leaf_length(t.args[0], decls, memo)
        blocks = body.multiple_of(c.L_BLOCK) if body is not None else None
        if blocks:
            result = LengthExpr.of(c.L_EBLOCK, blocks) + LengthExpr.of(c.L_ENC)
    elif t.head == tc.DEC:
        cipher = _leaf_length(t.args[0], decls, memo)
        if cipher is not None:
            rest = dict(cipher.coefficients)
            if rest.pop(c.L_ENC, 0) == 1:
                blocks = LengthExpr(coefficients=rest).multiple_of(c.L_EBLOCK)
                if blocks:
                    result = LengthExpr.of(c.L_BLOCK, blocks)
    elif t.head == tc.ZERO:
        result = _leaf_length(t.args[0], decls, memo)
    memo[t] = result
    return result


def _branch_length(t: Term, decls: LengthDecls, order: CanonicalOrder,
                   memo: Dict[Term, Optional[LengthExpr]]) -> Optional[LengthExpr]:
    if t.is_app(tc.ITE):
        then_length = _branch_length(t.args[1], decls, order, memo)
        if then_length is None:
            return None
        return then_length if then_length == _branch_length(t.args[2], decls, order, memo) else None
    return _leaf_length(normalize(t, order), decls, memo)


def length_of(t: Term, decls: Optional[LengthDecls] = None, order: Optional[CanonicalOrder] = None) -> Optional[LengthExpr]:
    """
    Length of t; None stands for Undefined.

    A conditional is defined only when both of its own branches are, with the same length.
    Other terms are measured on their normal form: names default to l_eta unless an equation
    overrides them, pairs add l_pair, and encryption of k blocks yields k·l_eblock + l_enc.
    """
    decls = decls or LengthDecls()
    result = _branch_length(t, decls, order or default_order(), {})
    logger.debug(f"Length of term of size {t.size}: {result.pretty() if result is not None else c.UNDEFINED}")
    return result


def eql(u: Term, v: Term, decls: Optional[LengthDecls] = None, order: Optional[CanonicalOrder] = None) -> bool:
    left = length_of(u, decls, order)
    if left is None:
        return False
    return left == length_of(v, decls, order)


def render_length(expr: Optional[LengthExpr]) -> str:
    return c.UNDEFINED if expr is None else expr.render()
