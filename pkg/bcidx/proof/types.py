from typing import Annotated, Dict, Iterator, List, Literal, Tuple, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bcidx.cca.types import CcaStructure
from bcidx.constants import Side
from bcidx.terms.parser import render_term
from bcidx.terms.types import Term
from bcidx.types import ParseContext, Sequent
from .constants import CONCL_HEAD, RENAMING_HEAD, RULE_HEAD, TARGETS_HEAD, RuleKind


class _Rule(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class Refl(_Rule):
    kind: Literal[RuleKind.REFL] = RuleKind.REFL
    renaming: List[Tuple[str, str]] = Field(default_factory=list)

    def render(self) -> str:
        pairs = " ".join(f"(n.{a} n.{b})" for a, b in self.renaming)
        return f"(refl ({RENAMING_HEAD}{' ' + pairs if pairs else ''}))"


class FA(_Rule):
    """Function application: peel `symbol` (with `arg_count` arguments) off component `index`."""
    kind: Literal[RuleKind.FA] = RuleKind.FA
    symbol: str
    arg_count: int
    index: int

    def render(self) -> str:
        return f"(fa {self.symbol} {self.arg_count} {self.index})"


class Dup(_Rule):
    kind: Literal[RuleKind.DUP] = RuleKind.DUP

    def render(self) -> str:
        return "dup"


class CS(_Rule):
    """Case study on the listed ite-headed components; the others ride along as passengers."""
    kind: Literal[RuleKind.CS] = RuleKind.CS
    targets: List[int]

    @field_validator("targets")
    def validate_targets(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("CS needs at least one target")
        if len(set(v)) != len(v):
            raise ValueError("CS targets must be distinct")
        return v

    def passengers(self, width: int) -> List[int]:
        return [i for i in range(width) if i not in self.targets]

    def render(self) -> str:
        return f"(cs ({TARGETS_HEAD} {' '.join(str(i) for i in self.targets)}))"


class Rw(_Rule):
    kind: Literal[RuleKind.RW] = RuleKind.RW
    side: Side
    index: int
    replacement: Term

    def render(self) -> str:
        return f"(rw {self.side.value} {self.index} {render_term(self.replacement)})"


class Perm(_Rule):
    """Premise component j is conclusion component permutation[j]."""
    kind: Literal[RuleKind.PERM] = RuleKind.PERM
    permutation: List[int]

    def render(self) -> str:
        return f"(perm {' '.join(str(i) for i in self.permutation)})".replace(" )", ")")


class Sym(_Rule):
    kind: Literal[RuleKind.SYM] = RuleKind.SYM

    def render(self) -> str:
        return "sym"


class Restr(_Rule):
    """Conclusion component j is premise component kept[j]."""
    kind: Literal[RuleKind.RESTR] = RuleKind.RESTR
    kept: List[int]

    def render(self) -> str:
        return f"(restr {' '.join(str(i) for i in self.kept)})".replace(" )", ")")


class CCA(_Rule):
    kind: Literal[RuleKind.CCA] = RuleKind.CCA
    structure: CcaStructure

    def render(self) -> str:
        return self.structure.render()


RuleApp = Annotated[Union[Refl, FA, Dup, CS, Rw, Perm, Sym, Restr, CCA], Field(discriminator="kind")]


class Derivation(BaseModel):
    """A proof tree node: the conclusion, the rule applied and the premise subtrees."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    conclusion: Sequent
    rule: RuleApp
    premises: List["Derivation"] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_premise_count(self) -> "Derivation":
        expected = self.rule.kind.premise_count
        if len(self.premises) != expected:
            raise ValueError(f"Rule {self.rule.kind.value} takes {expected} premises, got {len(self.premises)}")
        return self

    @property
    def height(self) -> int:
        return 1 + max((p.height for p in self.premises), default=0)

    @property
    def node_count(self) -> int:
        return 1 + sum(p.node_count for p in self.premises)

    def walk(self, path: Tuple[int, ...] = ()) -> Iterator[Tuple[Tuple[int, ...], "Derivation"]]:
        """Pre-order traversal, premises in order, with the path of premise indices."""
        yield path, self
        for i, premise in enumerate(self.premises):
            yield from premise.walk(path + (i,))

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        head = f"{pad}({RULE_HEAD} {self.rule.render()} ({CONCL_HEAD} {self.conclusion.render()})"
        if not self.premises:
            return head + ")"
        body = "\n".join(p.render(indent + 1) for p in self.premises)
        return f"{head}\n{body})"


Derivation.model_rebuild()


class ProofDocument(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    derivation: Derivation
    context: ParseContext

    def render(self) -> str:
        lines = self.context.render_preamble()
        lines.append(self.derivation.render())
        return "\n".join(lines) + "\n"


class ProofStats(BaseModel):
    height: int
    node_count: int
    rules: Dict[str, int] = Field(default_factory=dict)
