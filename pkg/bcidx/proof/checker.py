from typing import List, Optional
import logging

from bcidx.cca.checker import verify_cca_instance
from bcidx.constants import DiagnosticCategory as Cat
from bcidx.exceptions import RenamingError
from bcidx.length.types import LengthDecls
from bcidx.rewrite.engine import default_order, equal_mod_R
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder
from bcidx.terms.parser import render_term
from bcidx.terms.types import alpha_rename, invert_renaming
from bcidx.types import Sequent, Verdict
from .types import CCA, CS, FA, Derivation, Dup, Perm, Refl, Restr, Rw, RuleApp, Sym

logger = logging.getLogger(__name__)


def _reject(rule: RuleApp, category: Cat, message: str, **kwargs) -> Verdict:
    return Verdict.reject(category, message, rule=rule.kind.value, **kwargs)


def _expect_premise(rule: RuleApp, premises: List[Sequent], expected: Sequent, index: int = 0) -> Verdict:
    if premises[index] != expected:
        return _reject(rule, Cat.SCHEMA, f"Premise {index} does not match: expected {expected.render()}, "
                                         f"got {premises[index].render()}")
    return Verdict.accept(rule.kind.value)


def _check_refl(rule: Refl, conclusion: Sequent) -> Verdict:
    try:
        mu = dict(rule.renaming)
        invert_renaming(mu)
        renamed = tuple(alpha_rename(t, mu) for t in conclusion.left)
    except RenamingError as e:
        return _reject(rule, Cat.REFL, f"Renaming is not a bijection: {e}")
    for i, (expected, found) in enumerate(zip(renamed, conclusion.right)):
        if expected != found:
            return _reject(rule, Cat.REFL, f"Right component {i} is not the renamed left component", component=i)
    return Verdict.accept(rule.kind.value)


def _check_fa(rule: FA, conclusion: Sequent, premises: List[Sequent]) -> Verdict:
    if rule.symbol == tc.ZERO:
        return _reject(rule, Cat.FA_ZERO, "Function application on zero is not allowed")
    if not 0 <= rule.index < len(conclusion):
        return _reject(rule, Cat.SCHEMA, f"Component index {rule.index} out of range")
    left, right = conclusion.left[rule.index], conclusion.right[rule.index]
    for side, t in (("left", left), ("right", right)):
        if not t.is_app(rule.symbol) or t.arity != rule.arg_count:
            return _reject(rule, Cat.SCHEMA, f"The {side} component {rule.index} is not headed by "
                                             f"{rule.symbol}/{rule.arg_count}", component=rule.index)
    i = rule.index
    expected = Sequent.of(conclusion.left[:i] + left.args + conclusion.left[i + 1:],
                          conclusion.right[:i] + right.args + conclusion.right[i + 1:])
    return _expect_premise(rule, premises, expected)


def _check_dup(rule: Dup, conclusion: Sequent, premises: List[Sequent]) -> Verdict:
    if len(conclusion) < 2:
        return _reject(rule, Cat.SCHEMA, "Dup needs at least two components")
    if conclusion.left[-1] != conclusion.left[-2] or conclusion.right[-1] != conclusion.right[-2]:
        return _reject(rule, Cat.SCHEMA, "The last two components are not a duplicated pair")
    return _expect_premise(rule, premises, conclusion.select(range(len(conclusion) - 1)))


def _check_cs(rule: CS, conclusion: Sequent, premises: List[Sequent]) -> Verdict:
    width = len(conclusion)
    if any(not 0 <= t < width for t in rule.targets):
        return _reject(rule, Cat.SCHEMA, f"CS target out of range: {rule.targets}")
    conditions = {}
    for side, terms in (("left", conclusion.left), ("right", conclusion.right)):
        heads = [terms[t] for t in rule.targets]
        bad = next((t for t, term in zip(rule.targets, heads) if not term.is_app(tc.ITE)), None)
        if bad is not None:
            return _reject(rule, Cat.SCHEMA, f"The {side} target {bad} is not a conditional", component=bad)
        shared = {term.args[0] for term in heads}
        if len(shared) != 1:
            return _reject(rule, Cat.SCHEMA, f"The {side} targets do not share one conditional")
        condition = shared.pop()
        if not condition.if_free:
            return _reject(rule, Cat.CS_CONDITIONAL,
                           f"The {side} conditional {render_term(condition)} contains a conditional")
        conditions[side] = condition
    passengers = rule.passengers(width)
    for branch in (0, 1):
        left = [conclusion.left[w] for w in passengers] + [conditions["left"]]
        left += [conclusion.left[t].args[1 + branch] for t in rule.targets]
        right = [conclusion.right[w] for w in passengers] + [conditions["right"]]
        right += [conclusion.right[t].args[1 + branch] for t in rule.targets]
        verdict = _expect_premise(rule, premises, Sequent.of(left, right), branch)
        if not verdict.accepted:
            return verdict
    return Verdict.accept(rule.kind.value)


def _check_rw(rule: Rw, conclusion: Sequent, premises: List[Sequent], order: CanonicalOrder) -> Verdict:
    if not 0 <= rule.index < len(conclusion):
        return _reject(rule, Cat.SCHEMA, f"Component index {rule.index} out of range")
    original = conclusion.side(rule.side)[rule.index]
    if not equal_mod_R(original, rule.replacement, order):
        return _reject(rule, Cat.REWRITE, f"{render_term(rule.replacement)} is not R-equal to the "
                                          f"{rule.side.value} component {rule.index}", component=rule.index,
                       side=rule.side)
    return _expect_premise(rule, premises, conclusion.replace(rule.side, rule.index, rule.replacement))


def _check_perm(rule: Perm, conclusion: Sequent, premises: List[Sequent]) -> Verdict:
    if sorted(rule.permutation) != list(range(len(conclusion))):
        return _reject(rule, Cat.SCHEMA, f"{rule.permutation} is not a permutation of the {len(conclusion)} components")
    return _expect_premise(rule, premises, conclusion.select(rule.permutation))


def _check_restr(rule: Restr, conclusion: Sequent, premises: List[Sequent]) -> Verdict:
    premise = premises[0]
    if len(set(rule.kept)) != len(rule.kept) or any(not 0 <= k < len(premise) for k in rule.kept):
        return _reject(rule, Cat.SCHEMA, f"Restr indices {rule.kept} are not distinct premise components")
    if premise.select(rule.kept) != conclusion:
        return _reject(rule, Cat.SCHEMA, "Conclusion is not the selected premise components")
    return Verdict.accept(rule.kind.value)


def check_step(rule: RuleApp, conclusion: Sequent, premises: List[Sequent], order: Optional[CanonicalOrder] = None,
               decls: Optional[LengthDecls] = None) -> Verdict:
    """
    Check one rule application against its conclusion and premises.

    Args:
        rule: the rule and its parameters.
        conclusion: the sequent the rule concludes.
        premises: the conclusions of the premise subproofs, in order.
        order: the order R-equality is decided under.
        decls: length declarations for CCA leaves.

    Returns:
        Verdict; on rejection the diagnostics say which part of the schema failed.
    """
    order = order or default_order()
    expected = rule.kind.premise_count
    if len(premises) != expected:
        return _reject(rule, Cat.SCHEMA, f"Rule {rule.kind.value} takes {expected} premises, got {len(premises)}")
    if isinstance(rule, Refl):
        return _check_refl(rule, conclusion)
    if isinstance(rule, FA):
        return _check_fa(rule, conclusion, premises)
    if isinstance(rule, Dup):
        return _check_dup(rule, conclusion, premises)
    if isinstance(rule, CS):
        return _check_cs(rule, conclusion, premises)
    if isinstance(rule, Rw):
        return _check_rw(rule, conclusion, premises, order)
    if isinstance(rule, Perm):
        return _check_perm(rule, conclusion, premises)
    if isinstance(rule, Sym):
        return _expect_premise(rule, premises, conclusion.swapped())
    if isinstance(rule, Restr):
        return _check_restr(rule, conclusion, premises)
    if isinstance(rule, CCA):
        return verify_cca_instance(conclusion, rule.structure, decls, order)
    raise TypeError(f"Unknown rule application {rule!r}")


def check_proof(d: Derivation, order: Optional[CanonicalOrder] = None,
                decls: Optional[LengthDecls] = None) -> Verdict:
    """Check every node depth-first in premise order; report the first failing node with its path."""
    order = order or default_order()
    checked = 0
    for path, node in d.walk():
        verdict = check_step(node.rule, node.conclusion, [p.conclusion for p in node.premises], order, decls)
        checked += 1
        if not verdict.accepted:
            logger.debug(f"Proof rejected at {list(path)} ({node.rule.kind.value}) after {checked} nodes")
            return verdict.model_copy(update={"path": list(path), "rule": node.rule.kind.value})
    logger.debug(f"Proof accepted: {checked} nodes checked")
    return Verdict.accept()
