from typing import Dict, Optional, Set
import logging
from pydantic import BaseModel, ConfigDict, Field, field_validator

from bcidx.exceptions import LengthDeclError, TermSyntaxError
from bcidx.terms.parser import Atom, SExpr, expect_ident, expect_int
from . import constants as c

logger = logging.getLogger(__name__)


class LengthExpr(BaseModel):
    """A formal sum of length constants with positive integer coefficients."""
    model_config = ConfigDict(frozen=True)

    coefficients: Dict[str, int] = Field(default_factory=dict)

    @field_validator("coefficients", mode="before")
    def drop_zero_coefficients(cls, v: Dict[str, int]) -> Dict[str, int]:
        cleaned = {}
        for ident, k in dict(v).items():
            if k < 0:
                raise ValueError(f"Negative coefficient for {ident}")
            if k:
                cleaned[ident] = k
        return dict(sorted(cleaned.items()))

    def __hash__(self) -> int:
        return hash(frozenset(self.coefficients.items()))

    @classmethod
    def of(cls, ident: str, k: int = 1) -> "LengthExpr":
        return cls(coefficients={ident: k})

    def __add__(self, other: "LengthExpr") -> "LengthExpr":
        merged = dict(self.coefficients)
        for ident, k in other.coefficients.items():
            merged[ident] = merged.get(ident, 0) + k
        return LengthExpr(coefficients=merged)

    def scale(self, k: int) -> "LengthExpr":
        return LengthExpr(coefficients={ident: k * v for ident, v in self.coefficients.items()})

    def multiple_of(self, ident: str) -> Optional[int]:
        """k if this expression is exactly k·ident with k ≥ 1."""
        if set(self.coefficients) == {ident}:
            return self.coefficients[ident]
        return None

    def render(self) -> str:
        parts = " ".join(f"(* {k} {ident})" for ident, k in self.coefficients.items())
        return f"({c.SUM_HEAD} {parts})" if parts else f"({c.SUM_HEAD})"

    def pretty(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(ident if k == 1 else f"{k}*{ident}" for ident, k in self.coefficients.items())

    @classmethod
    def from_sexpr(cls, node: SExpr) -> "LengthExpr":
        if isinstance(node, Atom):
            return cls.of(expect_ident(node, "length constant"))
        head = node.items[0].value if node.items and isinstance(node.items[0], Atom) else None
        if head == c.PRODUCT_HEAD:
            if len(node.items) != 3:
                raise TermSyntaxError("Expected (* K IDENT)", node.line, node.column)
            return cls.of(expect_ident(node.items[2], "length constant"), expect_int(node.items[1], "coefficient"))
        if head == c.SUM_HEAD:
            total = cls()
            for item in node.items[1:]:
                total = total + cls.from_sexpr(item)
            return total
        raise TermSyntaxError("Expected a length expression (+ (* K IDENT)...)", node.line, node.column)


class LengthDecls(BaseModel):
    """Length constants, per-name equations and the lengths of declared pad and zero symbols."""

    constants: Set[str] = Field(default_factory=lambda: set(c.BUILTIN_LENGTH_CONSTANTS))
    name_equations: Dict[str, LengthExpr] = Field(default_factory=dict)
    pads: Dict[str, LengthExpr] = Field(default_factory=dict)
    zeros: Dict[str, LengthExpr] = Field(default_factory=dict)
    check_lengths: bool = True

    def declare_constant(self, ident: str) -> None:
        self.constants.add(ident)
        logger.debug(f"Declared length constant {ident}")

    def _validate(self, expr: LengthExpr) -> LengthExpr:
        unknown = set(expr.coefficients) - self.constants
        if unknown:
            raise LengthDeclError(f"Undeclared length constants: {sorted(unknown)}")
        return expr

    def add_equation(self, name: str, expr: LengthExpr) -> None:
        expr = self._validate(expr)
        known = self.name_equations.get(name)
        if known is not None and known != expr:
            raise LengthDeclError(f"Conflicting length equations for n.{name}: {known.pretty()} and {expr.pretty()}")
        self.name_equations[name] = expr

    def declare_pad(self, symbol: str, expr: LengthExpr) -> None:
        self.pads[symbol] = self._validate(expr)

    def declare_zeros(self, symbol: str, expr: LengthExpr) -> None:
        self.zeros[symbol] = self._validate(expr)

    def check_consistency(self) -> None:
        for expr in list(self.name_equations.values()) + list(self.pads.values()) + list(self.zeros.values()):
            self._validate(expr)
