from pathlib import Path
from typing import Iterable, Optional, Tuple, Union
import logging

from .base import GoalReader, Source, TermReader
from .cca import complete_instance, verify_cca_instance
from .cca.types import CcaStructure
from .exceptions import InvalidProofError, SearchTimeout
from .length import LengthDecls, LengthExpr, length_of
from .proof import ProofDocument, ProofReader, ProofStats, check_proof, eliminate_restr, proof_stats
from .proof.types import Derivation
from .rewrite import Strategy, default_order, normalize
from .search import CandidateSet, SearchBudget, SearchOutcome, SearchResult, SearchStats, candidate_terms
from .search import search as run_search
from .terms import CanonicalOrder, Term
from .types import GoalDocument, ParseContext, Sequent, TermDocument, Verdict

logger = logging.getLogger(__name__)

Terms = Union[Term, Iterable[Term]]


class IndistinguishabilityKernel:
    """
    Entry point for checking and searching indistinguishability proofs.

    Holds the canonical order (and with it the normal-form caches), the search budget and
    the declarations of the last input read. Every operation accepts explicit declarations;
    without them it falls back to those of the last input.

        kernel = IndistinguishabilityKernel()
        doc = kernel.read_proof(Path("proof.bcp").read_text())
        verdict = kernel.check(doc.derivation)
    """

    def __init__(
        self,
        order: Optional[CanonicalOrder] = None,
        budget: Optional[SearchBudget] = None,
        strategy: Strategy = Strategy.INNERMOST,
    ):
        self._order = order
        self._budget = budget or SearchBudget()
        self._strategy = strategy
        self._context: Optional[ParseContext] = None
        logger.debug("An IndistinguishabilityKernel instance has been created.")

    @property
    def order(self) -> CanonicalOrder:
        if self._order is None:
            self._order = default_order()
        return self._order

    @property
    def budget(self) -> SearchBudget:
        return self._budget

    @property
    def context(self) -> ParseContext:
        """Declarations of the last input read."""
        if self._context is None:
            raise RuntimeError("No input has been read yet. Call one of the read_* methods first.")
        return self._context

    def _decls(self, decls: Optional[LengthDecls]) -> LengthDecls:
        if decls is not None:
            return decls
        return self._context.decls if self._context is not None else LengthDecls()

    def load_order(self, path: Union[str, Path]) -> CanonicalOrder:
        """Replace the conditional order with the one listed in an order file."""
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        self._order = CanonicalOrder.from_lines(lines)
        logger.info(f"Loaded conditional order from {path}")
        return self._order

    # --- reading
    def read_term(self, text: Source) -> TermDocument:
        doc = TermReader().read(text)
        self._context = doc.context
        return doc

    def read_goal(self, text: Source) -> GoalDocument:
        doc = GoalReader().read(text)
        self._context = doc.context
        return doc

    def read_proof(self, text: Source) -> ProofDocument:
        doc = ProofReader().read(text)
        self._context = doc.context
        return doc

    # --- terms
    def normalize(self, t: Term) -> Term:
        return normalize(t, self.order, self._strategy)

    def length(self, t: Term, decls: Optional[LengthDecls] = None) -> Optional[LengthExpr]:
        return length_of(t, self._decls(decls), self.order)

    def candidates(self, left: Terms, right: Optional[Terms] = None) -> CandidateSet:
        left = (left,) if isinstance(left, Term) else tuple(left)
        right = () if right is None else ((right,) if isinstance(right, Term) else tuple(right))
        result = candidate_terms(left, right, self.order, self._budget.max_candidates)
        logger.info(f"Candidate pool has {len(result)} terms")
        return result

    # --- proofs
    def check(self, d: Derivation, decls: Optional[LengthDecls] = None) -> Verdict:
        verdict = check_proof(d, self.order, self._decls(decls))
        if verdict.accepted:
            logger.info(f"Proof accepted ({d.node_count} nodes)")
        else:
            logger.warning(f"Proof rejected at path {verdict.path}")
        return verdict

    def eliminate_restr(self, d: Derivation, decls: Optional[LengthDecls] = None) -> Derivation:
        """Remove every Restr node from a valid proof."""
        verdict = check_proof(d, self.order, self._decls(decls))
        if not verdict.accepted:
            raise InvalidProofError(f"Cannot eliminate Restr from an invalid proof: {verdict.describe()}")
        return eliminate_restr(d)

    def stats(self, d: Derivation) -> ProofStats:
        return proof_stats(d)

    def verify_cca(self, seq: Sequent, struct: CcaStructure, decls: Optional[LengthDecls] = None,
                   require_complete: bool = False) -> Verdict:
        return verify_cca_instance(seq, struct, self._decls(decls), self.order, require_complete)

    def complete_cca(self, seq: Sequent, struct: CcaStructure) -> Tuple[Sequent, CcaStructure]:
        return complete_instance(seq, struct, self.order)

    def search(self, goal: Sequent, decls: Optional[LengthDecls] = None,
               budget: Optional[SearchBudget] = None) -> SearchResult:
        """Search for a derivation; a timeout is reported as a TIMEOUT outcome instead of raised."""
        budget = budget or self._budget
        try:
            return run_search(goal, budget, self.order, self._decls(decls))
        except SearchTimeout as e:
            logger.warning(f"{e}")
            return SearchResult(outcome=SearchOutcome.TIMEOUT, stats=SearchStats(elapsed=budget.timeout))

