from typing import Dict, Iterator, List, Optional, Set, Tuple
import logging

from bcidx.constants import REWRITE_STEP_BUDGET
from bcidx.exceptions import RewriteBudgetExceeded
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder
from bcidx.terms.types import FALSE, TRUE, Position, Term, ite, positions, replace_at
from .constants import RewriteRuleId, Strategy

logger = logging.getLogger(__name__)

_DEFAULT_ORDER: Optional[CanonicalOrder] = None


def default_order() -> CanonicalOrder:
    """Shared order with the default conditional ordering (and its normal-form cache)."""
    global _DEFAULT_ORDER
    if _DEFAULT_ORDER is None:
        _DEFAULT_ORDER = CanonicalOrder()
    return _DEFAULT_ORDER


def is_irreducible(t: Term, order: CanonicalOrder) -> bool:
    cached = order.irreducible.get(t)
    if cached is not None:
        return cached
    result = all(is_irreducible(a, order) for a in t.args) and _first_root_redex(t, order) is None
    order.irreducible[t] = result
    return result


def cond_greater(b: Term, a: Term, order: CanonicalOrder) -> bool:
    """The conditional order used to orient the swap rules."""
    b_simple = b.if_free and is_irreducible(b, order)
    a_simple = a.if_free and is_irreducible(a, order)
    if b_simple and a_simple:
        return order.user_greater(b, a)
    if not b_simple and not a_simple:
        return order.lpo_greater(b, a)
    return a_simple


def _root_redexes(t: Term, order: CanonicalOrder, first_only: bool = False) -> Iterator[Tuple[RewriteRuleId, Term]]:
    if t.is_name or not t.args:
        return
    head, args = t.head, t.args

    # R1
    if head in (tc.FST, tc.SND) and args[0].is_app(tc.PAIR):
        yield RewriteRuleId.PROJ_PAIR, args[0].args[0 if head == tc.FST else 1]
        if first_only:
            return
    if head == tc.DEC:
        cipher, key = args
        if (cipher.is_app(tc.ENC) and key.is_app(tc.SK) and cipher.args[1].is_app(tc.PK)
                and cipher.args[1].args[0] == key.args[0]):
            yield RewriteRuleId.DEC_ENC, cipher.args[0]
            if first_only:
                return
    if head == tc.EQ and args[0] == args[1]:
        yield RewriteRuleId.EQ_REFL, TRUE
        if first_only:
            return

    if head == tc.ITE:
        b, x, y = args
        # R3
        if b == TRUE:
            yield RewriteRuleId.COND_TRUE, x
            if first_only:
                return
        if b == FALSE:
            yield RewriteRuleId.COND_FALSE, y
            if first_only:
                return
        if x == y:
            yield RewriteRuleId.COND_COLLAPSE, x
            if first_only:
                return
        if x.is_app(tc.ITE) and x.args[0] == b:
            yield RewriteRuleId.ABSORB_THEN, ite(b, x.args[1], y)
            if first_only:
                return
        if y.is_app(tc.ITE) and y.args[0] == b:
            yield RewriteRuleId.ABSORB_ELSE, ite(b, x, y.args[2])
            if first_only:
                return
        # R2
        if b.is_app(tc.ITE):
            inner, a, c = b.args
            yield RewriteRuleId.LIFT_COND, ite(inner, ite(a, x, y), ite(c, x, y))
            if first_only:
                return
        # R4
        if x.is_app(tc.ITE) and x.args[0] != b and cond_greater(b, x.args[0], order):
            a, x1, y1 = x.args
            yield RewriteRuleId.SWAP_THEN, ite(a, ite(b, x1, y), ite(b, y1, y))
            if first_only:
                return
        if y.is_app(tc.ITE) and y.args[0] != b and cond_greater(b, y.args[0], order):
            a, y1, z1 = y.args
            yield RewriteRuleId.SWAP_ELSE, ite(a, ite(b, x, y1), ite(b, x, z1))
            if first_only:
                return
        return

    # R2: lift a conditional out of any other symbol
    for i, arg in enumerate(args):
        if arg.is_app(tc.ITE):
            cond, then_branch, else_branch = arg.args
            left = t.with_args(args[:i] + (then_branch,) + args[i + 1:])
            right = t.with_args(args[:i] + (else_branch,) + args[i + 1:])
            yield RewriteRuleId.LIFT_F, ite(cond, left, right)
            if first_only:
                return


def _first_root_redex(t: Term, order: CanonicalOrder) -> Optional[Tuple[RewriteRuleId, Term]]:
    return next(_root_redexes(t, order, first_only=True), None)


def root_redexes(t: Term, order: CanonicalOrder) -> List[Tuple[RewriteRuleId, Term]]:
    return list(_root_redexes(t, order))


def rewrite_step(t: Term, order: Optional[CanonicalOrder] = None) -> Set[Tuple[Position, RewriteRuleId, Term]]:
    """Every one-step reduct of t, with the redex position and the rule applied."""
    order = order or default_order()
    steps: Set[Tuple[Position, RewriteRuleId, Term]] = set()
    for position, sub in positions(t):
        for rule, reduct in _root_redexes(sub, order):
            steps.add((position, rule, replace_at(t, position, reduct)))
    return steps


class _StepCounter:
    __slots__ = ("steps", "budget")

    def __init__(self, budget: int):
        self.steps = 0
        self.budget = budget

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise RewriteBudgetExceeded(f"Normalization exceeded {self.budget} rewrite steps")


def _innermost(t: Term, order: CanonicalOrder, counter: _StepCounter, cache: Dict[Term, Term]) -> Term:
    cached = cache.get(t)
    if cached is not None:
        return cached
    current = t.with_args(tuple(_innermost(a, order, counter, cache) for a in t.args)) if t.args else t
    while True:
        redex = _first_root_redex(current, order)
        if redex is None:
            break
        counter.tick()
        reduct = redex[1]
        current = reduct.with_args(tuple(_innermost(a, order, counter, cache) for a in reduct.args)) if reduct.args else reduct
    cache[t] = current
    cache[current] = current
    order.irreducible[current] = True
    return current


def _outermost_redex(t: Term, order: CanonicalOrder) -> Optional[Tuple[Position, Term]]:
    """Rightmost redex among the outermost ones (breadth-first, right to left)."""
    level: List[Tuple[Position, Term]] = [((), t)]
    while level:
        for position, sub in reversed(level):
            if order.irreducible.get(sub):
                continue
            redex = _first_root_redex(sub, order)
            if redex is not None:
                return position, redex[1]
        level = [(p + (i,), a) for p, sub in level for i, a in enumerate(sub.args)
                 if not order.irreducible.get(a)]
    return None


def _outermost(t: Term, order: CanonicalOrder, counter: _StepCounter) -> Term:
    current = t
    while True:
        found = _outermost_redex(current, order)
        if found is None:
            return current
        counter.tick()
        position, reduct = found
        current = replace_at(current, position, reduct)


def normalize(t: Term, order: Optional[CanonicalOrder] = None, strategy: Strategy = Strategy.INNERMOST,
              budget: int = REWRITE_STEP_BUDGET) -> Term:
    order = order or default_order()
    counter = _StepCounter(budget)
    if strategy is Strategy.INNERMOST:
        result = _innermost(t, order, counter, order.normal_forms)
    else:
        result = _outermost(t, order, counter)
    if counter.steps:
        logger.debug(f"Normalized term of size {t.size} to size {result.size} in {counter.steps} steps ({strategy})")
    return result


def count_steps(t: Term, order: Optional[CanonicalOrder] = None,
                strategy: Strategy = Strategy.OUTERMOST, budget: int = REWRITE_STEP_BUDGET) -> Tuple[Term, int]:
    """Normalize without the shared cache and report the number of steps taken."""
    order = order or default_order()
    counter = _StepCounter(budget)
    if strategy is Strategy.INNERMOST:
        result = _innermost(t, order, counter, {})
    else:
        result = _outermost(t, order, counter)
    return result, counter.steps


def equal_mod_R(s: Term, t: Term, order: Optional[CanonicalOrder] = None) -> bool:
    if s == t:
        return True
    order = order or default_order()
    return normalize(s, order) == normalize(t, order)
