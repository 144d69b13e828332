from typing import List
import logging

from bcidx.exceptions import InvalidProofError
from .constants import RuleKind
from .types import CCA, CS, FA, Derivation, Dup, Perm, Refl, Restr, Rw, Sym

logger = logging.getLogger(__name__)


def _node(d: Derivation, rule, premises: List[Derivation], keep: List[int]) -> Derivation:
    return Derivation(conclusion=d.conclusion.select(keep), rule=rule, premises=premises)


def _has_restr(d: Derivation) -> bool:
    return any(node.rule.kind is RuleKind.RESTR for _, node in d.walk())


def restrict(d: Derivation, keep: List[int]) -> Derivation:
    """A Restr-free derivation of d's conclusion restricted to `keep`, in that order."""
    ordered = sorted(keep)
    sub = _restrict(d, ordered)
    if keep == ordered:
        return sub
    permutation = [keep.index(k) for k in ordered]
    return Derivation(conclusion=d.conclusion.select(keep), rule=Perm(permutation=permutation), premises=[sub])


def _restrict(d: Derivation, keep: List[int]) -> Derivation:
    rule = d.rule
    width = len(d.conclusion)
    if keep == list(range(width)) and not _has_restr(d):
        return d

    if isinstance(rule, (Refl, CCA)):
        return _node(d, rule, [], keep)

    if isinstance(rule, Sym):
        return _node(d, rule, [_restrict(d.premises[0], keep)], keep)

    if isinstance(rule, Restr):
        return restrict(d.premises[0], [rule.kept[k] for k in keep])

    if isinstance(rule, Perm):
        kept_premise = sorted(j for j, source in enumerate(rule.permutation) if source in keep)
        sub = _restrict(d.premises[0], kept_premise)
        permutation = [keep.index(rule.permutation[j]) for j in kept_premise]
        if permutation == list(range(len(permutation))):
            return sub
        return _node(d, Perm(permutation=permutation), [sub], keep)

    if isinstance(rule, Dup):
        last, prev = width - 1, width - 2
        if last in keep and prev in keep:
            return _node(d, rule, [_restrict(d.premises[0], keep[:-1])], keep)
        if last in keep:
            return _restrict(d.premises[0], keep[:-1] + [prev])
        return _restrict(d.premises[0], keep)

    if isinstance(rule, Rw):
        sub = _restrict(d.premises[0], keep)
        if rule.index not in keep:
            return sub
        return _node(d, rule.model_copy(update={"index": keep.index(rule.index)}), [sub], keep)

    if isinstance(rule, FA):
        i, spread = rule.index, rule.arg_count - 1
        kept_premise = []
        for k in keep:
            if k < i:
                kept_premise.append(k)
            elif k == i:
                kept_premise.extend(range(i, i + rule.arg_count))
            else:
                kept_premise.append(k + spread)
        sub = _restrict(d.premises[0], kept_premise)
        if i not in keep:
            return sub
        return _node(d, rule.model_copy(update={"index": keep.index(i)}), [sub], keep)

    if isinstance(rule, CS):
        passengers = rule.passengers(width)
        kept_passengers = [passengers.index(w) for w in passengers if w in keep]
        kept_targets = [t for t in rule.targets if t in keep]
        if not kept_targets:
            return _restrict(d.premises[0], kept_passengers)
        kept_premise = kept_passengers + [len(passengers)]
        kept_premise += [len(passengers) + 1 + rule.targets.index(t) for t in kept_targets]
        premises = [_restrict(p, kept_premise) for p in d.premises]
        return _node(d, CS(targets=[keep.index(t) for t in kept_targets]), premises, keep)

    raise InvalidProofError(f"Cannot eliminate Restr through rule {rule.kind.value}")


def eliminate_restr(d: Derivation) -> Derivation:
    """
    Remove every Restr node, pushing the restriction towards the leaves.

    Refl and CCA leaves absorb the restriction. FA, Rw and Dup nodes whose component is
    dropped disappear, and a case study keeping none of its targets collapses to its first
    premise. The result proves the same conclusion and is never taller.
    """
    result = _restrict(d, list(range(len(d.conclusion))))
    logger.debug(f"Restr elimination: {d.node_count} nodes (height {d.height}) -> "
                 f"{result.node_count} nodes (height {result.height})")
    return result
