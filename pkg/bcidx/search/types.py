from typing import Dict, List, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator

from bcidx.constants import DEFAULT_JOBS, DEFAULT_MAX_CANDIDATES, DEFAULT_MAX_DEPTH, DEFAULT_TIMEOUT
from bcidx.proof.types import Derivation
from bcidx.rewrite.engine import equal_mod_R
from bcidx.terms.constants import Sort
from bcidx.terms.ordering import CanonicalOrder
from bcidx.terms.parser import render_term
from bcidx.terms.types import Term, ite
from .constants import SearchOutcome


class SearchBudget(BaseModel):
    """Bounds on one search run. `max_nested_cs` defaults to the candidate-pool size plus one."""
    max_depth: int = DEFAULT_MAX_DEPTH
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    timeout: float = DEFAULT_TIMEOUT
    max_nested_cs: Optional[int] = None
    jobs: int = DEFAULT_JOBS

    @field_validator("max_depth", "max_candidates", "jobs")
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("timeout")
    def validate_timeout(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("timeout must be positive")
        return v

    @field_validator("max_nested_cs")
    def validate_nested(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("max_nested_cs must be a positive integer")
        return v


class CandidateSet(BaseModel):
    """The pool of terms a proof of a goal may introduce, with the subset contributed per key set."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    terms: List[Term] = Field(default_factory=list)
    per_keys: Dict[str, List[Term]] = Field(default_factory=dict)
    secret_keys: List[str] = Field(default_factory=list)
    normal_size: int = 0
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, t: Term) -> bool:
        return t in self.term_set

    @property
    def term_set(self) -> frozenset:
        return frozenset(self.terms)

    @property
    def max_term_size(self) -> int:
        return max((t.size for t in self.terms), default=0)

    @property
    def conditionals(self) -> List[Term]:
        """If-free Bool members: the conditionals a case study may introduce."""
        return [t for t in self.terms if t.if_free and t.sort is Sort.BOOL]

    def render_lines(self) -> List[str]:
        return [render_term(t) for t in self.terms]


class CandidateLayer(BaseModel):
    """Basic terms and admitted encryptions at one nesting depth."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    basic: List[Term] = Field(default_factory=list)
    encryptions: List[Term] = Field(default_factory=list)


class CandidateSequence(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    layers: List[CandidateLayer] = Field(default_factory=list)

    @property
    def saturated(self) -> List[Term]:
        return self.layers[-1].basic if self.layers else []

    @property
    def depth(self) -> int:
        return len(self.layers)


class SplitBox:
    """
    A component rewritten around an introduced conditional: `original` shown as
    ite(condition, then_view, else_view). The views may carry extra decryption guards.
    """
    __slots__ = ("condition", "original", "then_view", "else_view")

    def __init__(self, condition: Term, original: Term, then_view: Term, else_view: Term):
        self.condition = condition
        self.original = original
        self.then_view = then_view
        self.else_view = else_view

    @property
    def splits(self) -> bool:
        return self.then_view != self.else_view

    def erase(self) -> Term:
        return ite(self.condition, self.then_view, self.else_view)

    def well_formed(self, order: CanonicalOrder) -> bool:
        return equal_mod_R(self.erase(), self.original, order)


class SearchStats(BaseModel):
    expanded: int = 0
    memo_hits: int = 0
    cca_attempts: int = 0
    candidates: int = 0
    max_nested_cs: int = 0
    depth: int = 0
    elapsed: float = 0.0


class SearchResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    outcome: SearchOutcome
    derivation: Optional[Derivation] = None
    stats: SearchStats = Field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.outcome is SearchOutcome.FOUND
