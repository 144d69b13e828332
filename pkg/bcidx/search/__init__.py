from .candidates import candidate_sequence, candidate_terms, guards_for, secret_keys
from .constants import Phase, SearchOutcome
from .engine import ProofSearch, insert_guard, search
from .matching import cca_leaf_match, refl_renaming
from .types import CandidateLayer, CandidateSequence, CandidateSet, SearchBudget, SearchResult, SearchStats, SplitBox

__all__ = [
    'CandidateLayer',
    'CandidateSequence',
    'CandidateSet',
    'Phase',
    'ProofSearch',
    'SearchBudget',
    'SearchOutcome',
    'SearchResult',
    'SearchStats',
    'SplitBox',
    'candidate_sequence',
    'candidate_terms',
    'cca_leaf_match',
    'guards_for',
    'insert_guard',
    'refl_renaming',
    'search',
    'secret_keys',
]
