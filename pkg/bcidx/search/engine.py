from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple
import logging
import threading
import time

from bcidx.cca.guards import elses, encryption_parts, peel_elses
from bcidx.constants import Side
from bcidx.exceptions import InvalidProofError, SearchTimeout
from bcidx.length.types import LengthDecls
from bcidx.proof.checker import check_proof
from bcidx.proof.types import CCA, CS, FA, Derivation, Dup, Perm, Refl, RuleApp, Rw
from bcidx.rewrite.decompose import cofactor
from bcidx.rewrite.engine import default_order, normalize
from bcidx.terms import constants as tc
from bcidx.terms.constants import Sort
from bcidx.terms.ordering import CanonicalOrder, canonical_sorted
from bcidx.terms.types import Term, dec, name, sk, subterms
from bcidx.types import Sequent
from .candidates import candidate_sequence, candidate_terms
from .constants import Phase, SearchOutcome
from .matching import cca_leaf_match, refl_renaming
from .types import CandidateSet, SearchBudget, SearchResult, SearchStats, SplitBox

logger = logging.getLogger(__name__)

Rewrite = Tuple[Side, int, Term]
Step = Tuple[Sequent, RuleApp]


def insert_guard(t: Term, guard: Term) -> Term:
    """
    Add `guard` = eq(u, α) to every decryption dec(u, sk(n)) in t, α being under pk(n).
    Decryptions already guarded get the guard merged into their sorted guard list.
    """
    if not guard.is_app(tc.EQ):
        return t
    u, alpha = guard.args
    parts = encryption_parts(alpha)
    if parts is None:
        return t
    target = dec(u, sk(name(parts[1])))

    def walk(s: Term) -> Term:
        if s == target:
            return elses([guard], target)
        if s.is_app(tc.ITE):
            peeled = peel_elses(s)
            if peeled is not None and peeled[1] == target:
                if guard in peeled[0]:
                    return s
                return elses(canonical_sorted(set(peeled[0]) | {guard}), target)
        if not s.args:
            return s
        return s.with_args(tuple(walk(a) for a in s.args))

    return walk(t)


def _root_conditions(terms: Tuple[Term, ...]) -> List[Term]:
    found: List[Term] = []
    for t in terms:
        if t.is_app(tc.ITE) and t.args[0] not in found:
            found.append(t.args[0])
    return found


def _wrap(steps: List[Step], premise: Derivation) -> Derivation:
    result = premise
    for conclusion, rule in reversed(steps):
        result = Derivation(conclusion=conclusion, rule=rule, premises=[result])
    return result


def _rewrite_steps(seq: Sequent, rewrites: List[Rewrite]) -> Tuple[Sequent, List[Step]]:
    steps: List[Step] = []
    current = seq
    for side, index, replacement in rewrites:
        steps.append((current, Rw(side=side, index=index, replacement=replacement)))
        current = current.replace(side, index, replacement)
    return current, steps


def cs_premises(seq: Sequent, targets: List[int]) -> Tuple[Sequent, Sequent]:
    """The two premises of a case study on ite-headed targets sharing one conditional per side."""
    passengers = [i for i in range(len(seq)) if i not in targets]
    premises = []
    for branch in (1, 2):
        left = [seq.left[w] for w in passengers] + [seq.left[targets[0]].args[0]]
        left += [seq.left[t].args[branch] for t in targets]
        right = [seq.right[w] for w in passengers] + [seq.right[targets[0]].args[0]]
        right += [seq.right[t].args[branch] for t in targets]
        premises.append(Sequent.of(left, right))
    return premises[0], premises[1]


class ProofSearch:
    """
    Bounded backward search for a derivation of one goal.

    Iterative deepening over the number of case studies and function applications on a
    branch. Every node first tries to close by reflexivity or a CCA instance, then tidies
    (drops matching constants, merges duplicated components), then expands: case studies
    while the node is still in the case-study phase, function applications afterwards.
    Conditionals introduced by a case study come from the candidate pool. Failed nodes are
    remembered with the depth they failed at.
    """

    def __init__(self, goal: Sequent, budget: Optional[SearchBudget] = None,
                 order: Optional[CanonicalOrder] = None, decls: Optional[LengthDecls] = None):
        self.goal = goal
        self.budget = budget or SearchBudget()
        self.order = order or default_order()
        self.decls = decls or LengthDecls()
        self.stats = SearchStats()
        self.candidates: Optional[CandidateSet] = None
        self._pool: FrozenSet[Term] = frozenset()
        self._introducible: List[Term] = []
        self._memo: Dict[tuple, int] = {}
        self._closed: Dict[tuple, Optional[Derivation]] = {}
        self._boxes: Dict[Tuple[Term, Term], Optional[SplitBox]] = {}
        self._lock = threading.Lock()
        self._deadline = 0.0
        self._executor: Optional[ThreadPoolExecutor] = None

    def _count(self, field: str, amount: int = 1) -> None:
        with self._lock:
            setattr(self.stats, field, getattr(self.stats, field) + amount)

    def _check_deadline(self) -> None:
        if time.monotonic() > self._deadline:
            raise SearchTimeout(f"Search exceeded {self.budget.timeout}s after expanding {self.stats.expanded} nodes")

    # --- leaves and bookkeeping
    def _close(self, seq: Sequent) -> Optional[Derivation]:
        key = (seq.left, seq.right)
        if key in self._closed:
            return self._closed[key]
        result = None
        renaming = refl_renaming(seq)
        if renaming is not None:
            result = Derivation(conclusion=seq, rule=Refl(renaming=renaming), premises=[])
        elif any(s.is_app(tc.PK) or s.is_app(tc.SK) for t in seq.left for s in subterms(t)):
            self._count("cca_attempts")
            structure = cca_leaf_match(seq, self.decls, self.order)
            if structure is not None:
                result = Derivation(conclusion=seq, rule=CCA(structure=structure), premises=[])
        with self._lock:
            self._closed[key] = result
        return result

    def _tidy(self, seq: Sequent) -> Tuple[Sequent, List[Step]]:
        steps: List[Step] = []
        current = seq
        while True:
            constant = next((i for i, (l, r) in enumerate(current.pairs())
                             if not l.is_name and not r.is_name and l.arity == 0 and l == r), None)
            if constant is not None:
                steps.append((current, FA(symbol=current.left[constant].head, arg_count=0, index=constant)))
                current = current.select(i for i in range(len(current)) if i != constant)
                continue
            pairs = current.pairs()
            duplicate = next(((j, k) for k in range(len(pairs)) for j in range(k) if pairs[j] == pairs[k]), None)
            if duplicate is None:
                return current, steps
            j, k = duplicate
            permutation = [i for i in range(len(current)) if i not in (j, k)] + [j, k]
            if permutation != list(range(len(current))):
                steps.append((current, Perm(permutation=permutation)))
                current = current.select(permutation)
            steps.append((current, Dup()))
            current = current.select(range(len(current) - 1))

    # --- case studies
    def _box(self, t: Term, condition: Term) -> Optional[SplitBox]:
        key = (t, condition)
        if key in self._boxes:
            return self._boxes[key]
        then_view = cofactor(t, condition, True)
        plain = cofactor(t, condition, False)
        result = None
        for else_view in dict.fromkeys((insert_guard(plain, condition), plain)):
            box = SplitBox(condition, t, then_view, else_view)
            if box.well_formed(self.order):
                result = box
                break
        with self._lock:
            self._boxes[key] = result
        return result

    def _side_conditionals(self, seq: Sequent, side: Side) -> List[Term]:
        own = seq.side(side)
        present: Set[Term] = set()
        for t in own:
            present |= subterms(t)
        inner = {s.args[0] for s in present if s.is_app(tc.ITE)}
        found = _root_conditions(own)
        found += [c for c in _root_conditions(seq.side(side.other)) if c in self._pool and c not in found]
        for c in self._introducible:
            if c in found:
                continue
            if c in inner:
                found.append(c)
                continue
            if c.is_app(tc.EQ):
                parts = encryption_parts(c.args[1])
                if parts is not None and dec(c.args[0], sk(name(parts[1]))) in present:
                    found.append(c)
        return [c for c in found if c.if_free]

    def _splits(self, seq: Sequent) -> Iterator[Tuple[List[int], List[Rewrite]]]:
        left_conditions = self._side_conditionals(seq, Side.LEFT)
        right_conditions = self._side_conditionals(seq, Side.RIGHT)
        tried = 0
        for c_left in left_conditions:
            for c_right in right_conditions:
                tried += 1
                if tried > self.budget.max_candidates:
                    return
                targets: List[int] = []
                rewrites: List[Rewrite] = []
                for i, (l, r) in enumerate(seq.pairs()):
                    left_box, right_box = self._box(l, c_left), self._box(r, c_right)
                    if left_box is None or right_box is None or not (left_box.splits or right_box.splits):
                        continue
                    targets.append(i)
                    for side, box in ((Side.LEFT, left_box), (Side.RIGHT, right_box)):
                        erased = box.erase()
                        if erased != box.original:
                            rewrites.append((side, i, erased))
                if targets:
                    yield targets, rewrites

    def _case_study(self, seq: Sequent, depth: int, nested: int, top: bool) -> Optional[Derivation]:
        for targets, rewrites in self._splits(seq):
            split, steps = _rewrite_steps(seq, rewrites)
            premises = cs_premises(split, targets)
            if top and self._executor is not None:
                futures = [self._executor.submit(self._prove, p, Phase.CASE_STUDY, depth - 1, nested - 1)
                           for p in premises]
                subproofs = [f.result() for f in futures]
            else:
                subproofs = []
                for p in premises:
                    sub = self._prove(p, Phase.CASE_STUDY, depth - 1, nested - 1)
                    if sub is None:
                        break
                    subproofs.append(sub)
            if len(subproofs) == 2 and all(s is not None for s in subproofs):
                node = Derivation(conclusion=split, rule=CS(targets=targets), premises=subproofs)
                return _wrap(steps, node)
        return None

    # --- function application
    def _application(self, seq: Sequent, depth: int, nested: int) -> Optional[Derivation]:
        moves = [i for i, (l, r) in enumerate(seq.pairs())
                 if not l.is_name and not r.is_name and l.head == r.head and l.arity == r.arity
                 and l.arity > 0 and l != r and not l.is_app(tc.ZERO)]
        moves.sort(key=lambda i: (not seq.left[i].is_app(tc.ITE), i))
        for i in moves:
            l, r = seq.left[i], seq.right[i]
            premise = Sequent.of(seq.left[:i] + l.args + seq.left[i + 1:], seq.right[:i] + r.args + seq.right[i + 1:])
            sub = self._prove(premise, Phase.APPLICATION, depth - 1, nested)
            if sub is not None:
                return Derivation(conclusion=seq, rule=FA(symbol=l.head, arg_count=l.arity, index=i), premises=[sub])
        return None

    # --- driver
    def _prove(self, seq: Sequent, phase: Phase, depth: int, nested: int, top: bool = False) -> Optional[Derivation]:
        self._check_deadline()
        closed = self._close(seq)
        if closed is not None:
            return closed
        tidy, steps = self._tidy(seq)
        if steps:
            sub = self._prove(tidy, phase, depth, nested, top)
            return _wrap(steps, sub) if sub is not None else None
        if depth <= 0:
            return None

        key = (seq.left, seq.right, phase, nested)
        with self._lock:
            failed = self._memo.get(key)
        if failed is not None and failed >= depth:
            self._count("memo_hits")
            return None
        self._count("expanded")
        logger.debug(f"Expanding {len(seq)} components ({phase}, depth {depth}, {nested} case studies left)")

        result = None
        if phase is Phase.CASE_STUDY:
            if nested > 0:
                result = self._case_study(seq, depth, nested, top)
            if result is None:
                result = self._application(seq, depth, nested)
        else:
            result = self._application(seq, depth, nested)
        if result is None:
            with self._lock:
                self._memo[key] = max(depth, self._memo.get(key, -1))
        return result

    def _prepare(self) -> int:
        self.candidates = candidate_terms(self.goal.left, self.goal.right, self.order, self.budget.max_candidates)
        nested = self.budget.max_nested_cs or len(self.candidates) + 1
        sequence = candidate_sequence(self.goal.left, self.goal.right, self.order, self.budget.max_candidates,
                                      max_layers=nested, base=self.candidates)
        pool = set(self.candidates.terms) | set(sequence.saturated)
        self._pool = frozenset(pool)
        self._introducible = canonical_sorted(t for t in pool if t.if_free and t.sort is Sort.BOOL)
        self.stats.candidates = len(pool)
        self.stats.max_nested_cs = nested
        return nested

    def run(self) -> SearchResult:
        """
        Run the search.

        Returns:
            SearchResult: FOUND with a checked derivation, or NOT_FOUND once the depth bound is exhausted.

        Raises:
            SearchTimeout: when the time budget runs out first.
        """
        start = time.monotonic()
        self._deadline = start + self.budget.timeout
        nested = self._prepare()

        rewrites: List[Rewrite] = []
        for side in (Side.LEFT, Side.RIGHT):
            for i, t in enumerate(self.goal.side(side)):
                normal = normalize(t, self.order)
                if normal != t:
                    rewrites.append((side, i, normal))
        normal_goal, steps = _rewrite_steps(self.goal, rewrites)

        derivation = None
        pool = ThreadPoolExecutor(max_workers=self.budget.jobs) if self.budget.jobs > 1 else nullcontext()
        try:
            with pool as executor:
                self._executor = executor
                for depth in range(self.budget.max_depth + 1):
                    self.stats.depth = depth
                    found = self._prove(normal_goal, Phase.CASE_STUDY, depth, nested, top=True)
                    if found is not None:
                        derivation = _wrap(steps, found)
                        break
        finally:
            self._executor = None
            self.stats.elapsed = time.monotonic() - start

        if derivation is None:
            logger.info(f"No derivation within depth {self.budget.max_depth} "
                        f"({self.stats.expanded} nodes expanded, {self.stats.memo_hits} memo hits)")
            return SearchResult(outcome=SearchOutcome.NOT_FOUND, stats=self.stats)
        verdict = check_proof(derivation, self.order, self.decls)
        if not verdict.accepted:
            raise InvalidProofError(f"Search produced a derivation the checker rejects: {verdict.describe()}")
        logger.info(f"Found a derivation of height {derivation.height} with {derivation.node_count} nodes "
                    f"at depth {self.stats.depth} in {self.stats.elapsed:.2f}s")
        return SearchResult(outcome=SearchOutcome.FOUND, derivation=derivation, stats=self.stats)


def search(goal: Sequent, budget: Optional[SearchBudget] = None, order: Optional[CanonicalOrder] = None,
           decls: Optional[LengthDecls] = None) -> SearchResult:
    return ProofSearch(goal, budget, order, decls).run()
