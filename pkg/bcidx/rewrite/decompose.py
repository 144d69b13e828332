from typing import Dict, FrozenSet, Optional, Set
import itertools
import logging

from bcidx.exceptions import NotNormalFormError
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, ite
from .engine import default_order, is_irreducible, normalize
from .types import IfContext, NormalFormDecomposition

logger = logging.getLogger(__name__)


def _context(t: Term, conds: Set[Term], leaves: Set[Term]) -> IfContext:
    if t.is_app(tc.ITE):
        b, x, y = t.args
        conds.add(b)
        return IfContext(condition=b, then_branch=_context(x, conds, leaves), else_branch=_context(y, conds, leaves))
    leaves.add(t)
    return IfContext(leaf=t)


def decompose(t: Term, order: Optional[CanonicalOrder] = None) -> NormalFormDecomposition:
    """
    Split a normal form into its conditional skeleton, conditionals and leaves.

    Args:
        t: a term in R-normal form.
        order: the order t was normalized under.

    Returns:
        The decomposition; `recompose()` gives back t.
    """
    order = order or default_order()
    if not is_irreducible(t, order):
        raise NotNormalFormError("decompose expects a term in R-normal form")
    conds: Set[Term] = set()
    leaves: Set[Term] = set()
    context = _context(t, conds, leaves)
    return NormalFormDecomposition(context=context, conds=canonical_sorted(conds), leaves=canonical_sorted(leaves))


def conds_and_leaves(t: Term, order: Optional[CanonicalOrder] = None) -> NormalFormDecomposition:
    order = order or default_order()
    return decompose(normalize(t, order), order)


def approx_leaves(t: Term, order: Optional[CanonicalOrder] = None,
                  _memo: Optional[Dict[Term, FrozenSet[Term]]] = None) -> FrozenSet[Term]:
    order = order or default_order()
    memo = _memo if _memo is not None else {}
    cached = memo.get(t)
    if cached is not None:
        return cached
    if t.is_app(tc.ITE):
        result = approx_leaves(t.args[1], order, memo) | approx_leaves(t.args[2], order, memo)
    elif not t.args:
        result = frozenset((t,))
    else:
        choices = [canonical_sorted(approx_leaves(a, order, memo)) for a in t.args]
        result = frozenset(normalize(t.with_args(combo), order) for combo in itertools.product(*choices))
    memo[t] = result
    return result


def approx_conds(t: Term, order: Optional[CanonicalOrder] = None,
                 _memo: Optional[Dict[Term, FrozenSet[Term]]] = None) -> FrozenSet[Term]:
    order = order or default_order()
    memo = _memo if _memo is not None else {}
    cached = memo.get(t)
    if cached is not None:
        return cached
    if t.is_app(tc.ITE):
        b, x, y = t.args
        result = (approx_conds(b, order, memo) | approx_leaves(b, order) | approx_conds(x, order, memo)
                  | approx_conds(y, order, memo))
    else:
        result = frozenset().union(*(approx_conds(a, order, memo) for a in t.args))
    memo[t] = result
    return result


def cofactor(t: Term, b: Term, value: bool) -> Term:
    """Restrict an ite tree to the branch of b selected by value."""
    if not t.is_app(tc.ITE):
        return t
    cond, x, y = t.args
    if cond == b:
        return cofactor(x if value else y, b, value)
    then_part, else_part = cofactor(x, b, value), cofactor(y, b, value)
    if then_part == else_part:
        return then_part
    return ite(cond, then_part, else_part)

