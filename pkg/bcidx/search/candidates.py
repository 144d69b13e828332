from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union
import itertools
import logging

from bcidx.cca.guards import elses, encryption_parts, guard_handles
from bcidx.constants import DEFAULT_MAX_CANDIDATES
from bcidx.rewrite.decompose import decompose
from bcidx.rewrite.engine import default_order, normalize
from bcidx.rewrite.types import IfContext
from bcidx.terms import constants as tc
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, dec, enc, eq, subterms
from .types import CandidateLayer, CandidateSequence, CandidateSet

logger = logging.getLogger(__name__)

Terms = Union[Term, Sequence[Term]]


def _as_terms(t: Optional[Terms]) -> Tuple[Term, ...]:
    if t is None:
        return ()
    if isinstance(t, Term):
        return (t,)
    return tuple(t)


def _key_name(key: Term, head: str) -> Optional[str]:
    if key.is_app(head) and key.args[0].is_name:
        return key.args[0].head
    return None


def _encryption_key(t: Term) -> Optional[str]:
    parts = encryption_parts(t)
    return parts[1] if parts is not None else None


def secret_keys(terms: Iterable[Term]) -> List[str]:
    """Names n such that sk(n) occurs in one of the terms."""
    found: Set[str] = set()
    for t in terms:
        for s in subterms(t):
            key = _key_name(s, tc.SK)
            if key is not None:
                found.add(key)
    return sorted(found)


def key_subsets(keys: List[str]) -> Iterator[FrozenSet[str]]:
    for size in range(len(keys) + 1):
        yield from (frozenset(k) for k in itertools.combinations(keys, size))


class _Zeta:
    """ζ_K for one key set: variants of a term that stop at some encryptions and unwrap guarded decryptions."""

    def __init__(self, keys: FrozenSet[str], limit: int):
        self.keys = keys
        self.limit = limit
        self.truncated = False
        self._memo: Dict[Term, FrozenSet[Term]] = {}

    def __call__(self, u: Term) -> FrozenSet[Term]:
        cached = self._memo.get(u)
        if cached is not None:
            return cached
        if u.is_app(tc.ZERO) and u.args[0].is_app(tc.DEC) and _key_name(u.args[0].args[1], tc.SK) in self.keys:
            w, key = u.args[0].args
            result = frozenset(dec(v, key) for v in self(w))
        elif _encryption_key(u) in self.keys:
            m, key, r = u.args
            result = frozenset((u,)) | frozenset(enc(v, key, r) for v in self(m))
        elif not u.args:
            result = frozenset((u,))
        else:
            choices = [canonical_sorted(self(a)) for a in u.args]
            combos = itertools.product(*choices)
            capped = list(itertools.islice(combos, self.limit + 1))
            if len(capped) > self.limit:
                self.truncated = True
                capped = capped[:self.limit]
            result = frozenset(u.with_args(combo) for combo in capped)
        self._memo[u] = result
        return result


def guards_for(terms: Iterable[Term], keys: FrozenSet[str]) -> Set[Term]:
    """
    Every guard eq(s, α) a decryption dec(s, sk(n)) among the subterms could need, for n in
    keys and α an encryption under pk(n) inside s.
    """
    found: Set[Term] = set()
    for t in terms:
        for s in subterms(t):
            if not s.is_app(tc.DEC):
                continue
            key = _key_name(s.args[1], tc.SK)
            if key is None or key not in keys:
                continue
            cipher = s.args[0]
            for alpha in subterms(cipher):
                if _encryption_key(alpha) == key:
                    found.add(eq(cipher, alpha))
    return found


def _basic_subterms(terms: Iterable[Term], order: CanonicalOrder) -> Tuple[Set[Term], int]:
    """Subterms of the leaves and conditionals of the normal forms, and the largest normal-form size."""
    found: Set[Term] = set()
    largest = 0
    for t in terms:
        normal = normalize(t, order)
        largest = max(largest, normal.size)
        parts = decompose(normal, order)
        for x in parts.leaves + parts.conds:
            found |= subterms(x)
    return found, largest


def candidate_terms(t: Terms, t2: Optional[Terms] = None, order: Optional[CanonicalOrder] = None,
                    max_candidates: int = DEFAULT_MAX_CANDIDATES) -> CandidateSet:
    """
    The candidate pool of a goal: for every key set K drawn from the secret keys present,
    the ζ_K variants of the basic subterms of both sides, together with the guards they need.

    Args:
        t: the left term (or vector of terms).
        t2: the right term (or vector); may be omitted for a single side.
        order: order used for normal forms.
        max_candidates: stop growing the pool past this many terms.

    Returns:
        CandidateSet in canonical order; `truncated` is set when the cap was hit.
    """
    order = order or default_order()
    terms = _as_terms(t) + _as_terms(t2)
    basic, largest = _basic_subterms(terms, order)
    keys = secret_keys(normalize(x, order) for x in terms)
    pool: Set[Term] = set()
    per_keys: Dict[str, List[Term]] = {}
    truncated = False
    for subset in key_subsets(keys):
        zeta = _Zeta(subset, max_candidates)
        contributed: Set[Term] = set()
        for u in canonical_sorted(basic):
            variants = zeta(u)
            contributed |= variants
            contributed |= guards_for(variants, subset)
        truncated = truncated or zeta.truncated
        per_keys[",".join(sorted(subset))] = canonical_sorted(contributed)
        pool |= contributed
        if len(pool) > max_candidates:
            truncated = True
            break
    ordered = canonical_sorted(pool)
    if truncated:
        ordered = sorted(ordered, key=lambda x: (x.size, x.canonical_key))[:max_candidates]
        ordered = canonical_sorted(ordered)
        logger.warning(f"Candidate pool truncated to {max_candidates} terms")
    logger.debug(f"Candidate pool: {len(ordered)} terms over {len(keys)} secret keys")
    return CandidateSet(terms=ordered, per_keys=per_keys, secret_keys=keys, normal_size=largest,
                        truncated=truncated)


def _distinct_branches(context: IfContext, seen: FrozenSet[Term] = frozenset()) -> bool:
    if context.is_leaf:
        return True
    if context.condition in seen:
        return False
    seen = seen | {context.condition}
    return _distinct_branches(context.then_branch, seen) and _distinct_branches(context.else_branch, seen)


def _fill_encryptions(t: Term, bodies: Dict[Tuple[Term, Term], Term]) -> Term:
    parts = encryption_parts(t)
    if parts is not None and (t.args[1], t.args[2]) in bodies:
        return enc(bodies[(t.args[1], t.args[2])], t.args[1], t.args[2])
    if not t.args:
        return t
    return t.with_args(tuple(_fill_encryptions(a, bodies) for a in t.args))


def _guard_decryptions(t: Term, admitted: List[Tuple[str, Term]], order: CanonicalOrder) -> Term:
    if t.args:
        t = t.with_args(tuple(_guard_decryptions(a, admitted, order) for a in t.args))
    if not t.is_app(tc.DEC):
        return t
    key = _key_name(t.args[1], tc.SK)
    if key is None:
        return t
    by_handle = dict(admitted)
    handles = guard_handles(t.args[0], admitted, key, order)
    guards = canonical_sorted(eq(t.args[0], by_handle[h]) for h in handles)
    return elses(guards, t) if guards else t


def candidate_sequence(t: Terms, t2: Optional[Terms] = None, order: Optional[CanonicalOrder] = None,
                       max_candidates: int = DEFAULT_MAX_CANDIDATES, max_layers: Optional[int] = None,
                       base: Optional[CandidateSet] = None) -> CandidateSequence:
    """
    Grow the candidate pool layer by layer with the encryptions a proof may register.

    Layer 0 is the candidate pool. Each further layer admits the encryptions of the goal's
    normal forms whose randomness is not yet taken and whose plaintext is built from the
    previous layer without repeating a conditional along a branch, then adds the pool terms
    with those plaintexts filled in and their decryptions guarded against the admitted
    encryptions. Growth stops at a fixpoint, after `max_layers` layers, or at `max_candidates` terms.
    """
    order = order or default_order()
    base = base or candidate_terms(t, t2, order, max_candidates)
    max_layers = max_layers if max_layers is not None else len(base) + 1
    terms = _as_terms(t) + _as_terms(t2)
    encryptions = canonical_sorted({s for x in terms for s in subterms(normalize(x, order))
                                    if encryption_parts(s) is not None})

    basic: Set[Term] = set(base.terms)
    admitted: List[Term] = []
    layers = [CandidateLayer(basic=list(base.terms), encryptions=[])]
    for _ in range(max_layers):
        taken = {encryption_parts(a)[2] for a in admitted}
        grown = list(admitted)
        for alpha in encryptions:
            m, _, r = encryption_parts(alpha)
            if alpha in grown or r in taken:
                continue
            parts = decompose(normalize(m, order), order)
            if not set(parts.leaves + parts.conds) <= basic or not _distinct_branches(parts.context):
                continue
            grown.append(alpha)
            taken.add(r)
        bodies = {(a.args[1], a.args[2]): a.args[0] for a in grown}
        handles = [(f"a{i}", a) for i, a in enumerate(grown)]
        extended = set(basic)
        for beta in base.terms:
            filled = _fill_encryptions(beta, bodies)
            extended.add(filled)
            extended.add(_guard_decryptions(filled, handles, order))
            if len(extended) >= max_candidates:
                break
        if grown == admitted and extended == basic:
            break
        admitted, basic = grown, extended
        layers.append(CandidateLayer(basic=canonical_sorted(basic), encryptions=list(admitted)))
        if len(basic) >= max_candidates:
            logger.warning(f"Candidate sequence stopped at {len(basic)} terms after {len(layers)} layers")
            break
    logger.debug(f"Candidate sequence: {len(layers)} layers, {len(admitted)} admitted encryptions")
    return CandidateSequence(layers=layers)
