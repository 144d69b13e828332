from typing import Dict, Iterable, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator

from bcidx import constants as c
from bcidx.constants import RESERVED_SYMBOLS, DiagnosticCategory, Side
from bcidx.length.constants import BUILTIN_LENGTH_CONSTANTS
from bcidx.length.types import LengthDecls
from bcidx.terms.parser import render_term
from bcidx.terms.types import Signature, Term, term_list_size


class Diagnostic(BaseModel):
    """One reason a check failed."""
    category: DiagnosticCategory
    message: str
    component: Optional[int] = None
    side: Optional[Side] = None
    position: Optional[List[int]] = None

    def describe(self) -> str:
        where = []
        if self.side is not None:
            where.append(self.side.value)
        if self.component is not None:
            where.append(f"component {self.component}")
        if self.position is not None:
            where.append(f"position {self.position}")
        suffix = f" ({', '.join(where)})" if where else ""
        return f"[{self.category.value}] {self.message}{suffix}"


class Verdict(BaseModel):
    """Outcome of a check; `path` locates the failing node (premise indices from the root)."""
    accepted: bool
    diagnostics: List[Diagnostic] = Field(default_factory=list)
    path: List[int] = Field(default_factory=list)
    rule: Optional[str] = None

    @classmethod
    def accept(cls, rule: Optional[str] = None) -> "Verdict":
        return cls(accepted=True, rule=rule)

    @classmethod
    def reject(cls, category: DiagnosticCategory, message: str, rule: Optional[str] = None, **kwargs) -> "Verdict":
        return cls(accepted=False, diagnostics=[Diagnostic(category=category, message=message, **kwargs)], rule=rule)

    @classmethod
    def from_diagnostics(cls, diagnostics: Iterable[Diagnostic], rule: Optional[str] = None) -> "Verdict":
        found = list(diagnostics)
        return cls(accepted=not found, diagnostics=found, rule=rule)

    @property
    def categories(self) -> List[DiagnosticCategory]:
        return [d.category for d in self.diagnostics]

    def describe(self) -> str:
        if self.accepted:
            return "accept"
        lines = [f"reject at path {self.path}" + (f" ({self.rule})" if self.rule else "")]
        lines.extend(f"  {d.describe()}" for d in self.diagnostics)
        return "\n".join(lines)


class Sequent(BaseModel):
    """The formula u⃗ ∼ v⃗: two term vectors of equal length."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    left: Tuple[Term, ...]
    right: Tuple[Term, ...]

    @model_validator(mode="after")
    def check_lengths(self) -> "Sequent":
        if len(self.left) != len(self.right):
            raise ValueError(f"Sequent sides differ in length: {len(self.left)} vs {len(self.right)}")
        return self

    @classmethod
    def of(cls, left: Iterable[Term], right: Iterable[Term]) -> "Sequent":
        left, right = tuple(left), tuple(right)
        if len(left) != len(right):
            raise ValueError(f"Sequent sides differ in length: {len(left)} vs {len(right)}")
        return cls.model_construct(left=left, right=right)

    def __len__(self) -> int:
        return len(self.left)

    def side(self, side: Side) -> Tuple[Term, ...]:
        return self.left if side is Side.LEFT else self.right

    def pairs(self) -> List[Tuple[Term, Term]]:
        return list(zip(self.left, self.right))

    def swapped(self) -> "Sequent":
        return Sequent.of(self.right, self.left)

    def select(self, indices: Iterable[int]) -> "Sequent":
        indices = list(indices)
        return Sequent.of((self.left[i] for i in indices), (self.right[i] for i in indices))

    def replace(self, side: Side, index: int, term: Term) -> "Sequent":
        terms = list(self.side(side))
        terms[index] = term
        return Sequent.of(terms, self.right) if side is Side.LEFT else Sequent.of(self.left, terms)

    @property
    def size(self) -> int:
        return term_list_size(list(self.left)) + term_list_size(list(self.right))

    def render(self) -> str:
        left = " ".join(render_term(t) for t in self.left)
        right = " ".join(render_term(t) for t in self.right)
        return f"(left {left}) (right {right})".replace("(left )", "(left)").replace("(right )", "(right)")


class ParseContext(BaseModel):
    """Everything an input file's preamble declares: symbols, length facts and abbreviations."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    signature: Signature = Field(default_factory=Signature)
    decls: LengthDecls = Field(default_factory=LengthDecls)
    abbreviations: Dict[str, Term] = Field(default_factory=dict)

    @property
    def declared_symbols(self) -> Dict[str, int]:
        return {ident: arity for ident, arity in self.signature.adversarial_symbols.items()
                if ident not in RESERVED_SYMBOLS}

    def render_preamble(self) -> List[str]:
        """Declaration lines that rebuild this context; abbreviations are always expanded on output."""
        lines = [f"({c.DECL_ADV} {ident} {arity})" for ident, arity in sorted(self.declared_symbols.items())]
        lines.extend(f"({c.DECL_LEN_CONST} {ident})" for ident in sorted(self.decls.constants)
                     if ident not in BUILTIN_LENGTH_CONSTANTS)
        lines.extend(f"({c.DECL_LEN_EQ} n.{ident} {expr.render()})"
                     for ident, expr in sorted(self.decls.name_equations.items()))
        lines.extend(f"({c.DECL_PAD} {ident} {expr.render()})" for ident, expr in sorted(self.decls.pads.items()))
        lines.extend(f"({c.DECL_ZEROS} {ident} {expr.render()})" for ident, expr in sorted(self.decls.zeros.items()))
        if not self.decls.check_lengths:
            lines.append(f"({c.DECL_LEN_CHECK} {c.SWITCH_OFF})")
        return lines


class TermDocument(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    term: Term
    context: ParseContext


class GoalDocument(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    goal: Sequent
    context: ParseContext

    def render(self) -> str:
        lines = self.context.render_preamble()
        lines.append(f"({c.GOAL_HEAD} {self.goal.render()})")
        return "\n".join(lines) + "\n"
