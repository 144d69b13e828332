from typing import Dict, Iterable, List, Optional
import logging

from .types import Term

logger = logging.getLogger(__name__)


def canonical_compare(s: Term, t: Term) -> int:
    """Total order on terms: -1, 0 or 1. Equal iff structurally identical."""
    if s == t:
        return 0
    return -1 if s.canonical_key < t.canonical_key else 1


def canonical_sorted(terms: Iterable[Term]) -> List[Term]:
    return sorted(terms, key=lambda t: t.canonical_key)


def _head_key(t: Term) -> tuple:
    key = t.canonical_key
    return key[0], key[1]


class CanonicalOrder:
    """
    The precedence on symbols and names, the lexicographic path ordering it induces,
    and the user order on if-free conditionals.

    The precedence is fixed (ite strictly minimal). The conditional order defaults to
    canonical_compare; `conditionals` overrides it, earlier entries being smaller and
    unlisted conditionals ranking above all listed ones.
    """

    def __init__(self, conditionals: Optional[List[Term]] = None):
        self._cond_rank: Dict[Term, int] = {}
        for index, cond in enumerate(conditionals or []):
            self._cond_rank.setdefault(cond, index)
        self._lpo_cache: Dict[tuple, bool] = {}
        # Normal-form caches keyed per order; filled by the rewrite engine.
        self.normal_forms: Dict[Term, Term] = {}
        self.irreducible: Dict[Term, bool] = {}
        if self._cond_rank:
            logger.debug(f"Conditional order overridden with {len(self._cond_rank)} entries")

    @property
    def is_default(self) -> bool:
        return not self._cond_rank

    def conditional_key(self, t: Term) -> tuple:
        rank = self._cond_rank.get(t)
        if rank is not None:
            return (0, rank)
        return (1, t.canonical_key)

    def user_greater(self, b: Term, a: Term) -> bool:
        """b ≻_u a on if-free normal conditionals."""
        return b != a and self.conditional_key(b) > self.conditional_key(a)

    def precedence_greater(self, s: Term, t: Term) -> bool:
        return _head_key(s) > _head_key(t)

    def lpo_greater(self, s: Term, t: Term) -> bool:
        if s == t:
            return False
        cache_key = (s, t)
        cached = self._lpo_cache.get(cache_key)
        if cached is not None:
            return cached
        result = self._lpo(s, t)
        self._lpo_cache[cache_key] = result
        return result

    def _lpo(self, s: Term, t: Term) -> bool:
        for si in s.args:
            if si == t or self.lpo_greater(si, t):
                return True
        s_head, t_head = _head_key(s), _head_key(t)
        if s_head > t_head:
            return all(self.lpo_greater(s, tj) for tj in t.args)
        if s_head == t_head:
            if not all(self.lpo_greater(s, tj) for tj in t.args):
                return False
            for si, ti in zip(s.args, t.args):
                if si != ti:
                    return self.lpo_greater(si, ti)
        return False

    @classmethod
    def from_lines(cls, lines: Iterable[str], signature=None) -> "CanonicalOrder":
        """Build an order from an override file: one canonical rendering per line."""
        from .parser import parse_term
        conditionals = []
        for line in lines:
            stripped = line.strip()
            if not stripped or stripped.startswith(";"):
                continue
            conditionals.append(parse_term(stripped, signature))
        return cls(conditionals)
