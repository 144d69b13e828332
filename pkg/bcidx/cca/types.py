from typing import Dict, List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bcidx.constants import Side
from bcidx.terms.parser import render_term
from bcidx.terms.types import Term, alpha_rename, invert_renaming
from .constants import CallKind

GuardList = List[Term]


class OracleCall(BaseModel):
    """One registered oracle query, with its left and right terms as displayed in the sequent."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: CallKind
    handle: str
    left: Term
    right: Term

    def term(self, side: Side) -> Term:
        return self.left if side is Side.LEFT else self.right

    def render(self) -> str:
        return f"({self.kind.value} {self.handle} (left {render_term(self.left)}) (right {render_term(self.right)}))"


class CcaStructure(BaseModel):
    """
    Keys, renaming and the ordered oracle calls of one CCA instance.

    `keys` holds the names n such that sk(n) is in K. `renaming` pairs (a, b) say that
    the right side was obtained from the canonical instance by renaming a to b.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    keys: List[str] = Field(default_factory=list)
    renaming: List[Tuple[str, str]] = Field(default_factory=list)
    calls: List[OracleCall] = Field(default_factory=list)

    @field_validator("keys")
    def validate_keys(cls, v: List[str]) -> List[str]:
        if len(set(v)) != len(v):
            raise ValueError("Duplicate key in CCA structure")
        return v

    @model_validator(mode="after")
    def validate_handles(self) -> "CcaStructure":
        handles = [call.handle for call in self.calls]
        if len(set(handles)) != len(handles):
            raise ValueError("Duplicate oracle-call handle in CCA structure")
        return self

    @property
    def key_set(self) -> frozenset:
        return frozenset(self.keys)

    @property
    def enc_calls(self) -> List[OracleCall]:
        return [call for call in self.calls if call.kind is CallKind.ENC]

    @property
    def dec_calls(self) -> List[OracleCall]:
        return [call for call in self.calls if call.kind is CallKind.DEC]

    @property
    def renaming_map(self) -> Dict[str, str]:
        return dict(self.renaming)

    def inverse_renaming(self) -> Dict[str, str]:
        return invert_renaming(self.renaming_map)

    def call(self, handle: str) -> Optional[OracleCall]:
        return next((c for c in self.calls if c.handle == handle), None)

    def canonical_right(self, t: Term) -> Term:
        """Undo the renaming on a right-side term."""
        return alpha_rename(t, self.inverse_renaming()) if self.renaming else t

    def displayed_right(self, t: Term) -> Term:
        return alpha_rename(t, self.renaming_map) if self.renaming else t

    def prefix(self, count: int) -> "CcaStructure":
        return CcaStructure.model_construct(keys=self.keys, renaming=self.renaming, calls=self.calls[:count])

    def render(self) -> str:
        keys = " ".join(f"n.{k}" for k in self.keys)
        renaming = " ".join(f"(n.{a} n.{b})" for a, b in self.renaming)
        calls = " ".join(call.render() for call in self.calls)
        return f"(cca (keys {keys}) (renaming {renaming}) (calls {calls}))".replace(" )", ")")
