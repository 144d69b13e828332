from typing import FrozenSet, List, Optional
from pydantic import BaseModel, ConfigDict

from bcidx.terms.types import Term, ite


class IfContext(BaseModel):
    """A node of the conditional skeleton of a normal form: either a test or a leaf slot."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    condition: Optional[Term] = None
    then_branch: Optional["IfContext"] = None
    else_branch: Optional["IfContext"] = None
    leaf: Optional[Term] = None

    @property
    def is_leaf(self) -> bool:
        return self.condition is None

    def recompose(self) -> Term:
        if self.is_leaf:
            return self.leaf
        return ite(self.condition, self.then_branch.recompose(), self.else_branch.recompose())


class NormalFormDecomposition(BaseModel):
    """Conditionals and leaves of a normal form, both in canonical order."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    context: IfContext
    conds: List[Term]
    leaves: List[Term]

    @property
    def cond_set(self) -> FrozenSet[Term]:
        return frozenset(self.conds)

    @property
    def leaf_set(self) -> FrozenSet[Term]:
        return frozenset(self.leaves)

    def recompose(self) -> Term:
        return self.context.recompose()


IfContext.model_rebuild()
