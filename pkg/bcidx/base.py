from typing import List, Optional, Tuple, Union
import logging
from pydantic import ValidationError

from bcidx import constants as c
from bcidx.exceptions import LengthDeclError, TermSyntaxError
from bcidx.length.types import LengthExpr
from bcidx.terms.parser import Atom, SExpr, SList, TermParser, expect_ident, expect_int, expect_name, head_of, read_sexprs
from bcidx.terms.types import Term
from .types import GoalDocument, ParseContext, Sequent, TermDocument

logger = logging.getLogger(__name__)

Source = Union[str, bytes]


class BaseReader:
    """Base class for bcidx input readers: declaration preamble plus shared s-expression helpers."""

    def __init__(self, context: Optional[ParseContext] = None):
        self.context = context if context is not None else ParseContext()
        self.parser: Optional[TermParser] = None

    def _read_forms(self, text: Source) -> List[SExpr]:
        """Read every form, consume the preamble and return the remaining body forms."""
        forms = read_sexprs(text)
        declares = any(head_of(f) == c.DECL_ADV for f in forms) or bool(self.context.declared_symbols)
        self.parser = TermParser(self.context.signature, self.context.abbreviations, infer=not declares)
        body = []
        for form in forms:
            if not self._apply_declaration(form):
                body.append(form)
        return body

    def _apply_declaration(self, node: SExpr) -> bool:
        head = head_of(node)
        decls = self.context.decls
        try:
            if head == c.DECL_ADV:
                ident, arity = self._expect_args(node, 2)
                self.context.signature.declare(expect_ident(ident, "symbol"), expect_int(arity, "arity"))
            elif head == c.DECL_LEN_CONST:
                (ident,) = self._expect_args(node, 1)
                decls.declare_constant(expect_ident(ident, "length constant"))
            elif head == c.DECL_LEN_EQ:
                ident, expr = self._expect_args(node, 2)
                decls.add_equation(expect_name(ident), LengthExpr.from_sexpr(expr))
            elif head == c.DECL_PAD:
                ident, expr = self._expect_args(node, 2)
                symbol = expect_ident(ident, "pad symbol")
                self.context.signature.declare(symbol, 1)
                decls.declare_pad(symbol, LengthExpr.from_sexpr(expr))
            elif head == c.DECL_ZEROS:
                ident, expr = self._expect_args(node, 2)
                symbol = expect_ident(ident, "zeros constant")
                self.context.signature.declare(symbol, 0)
                decls.declare_zeros(symbol, LengthExpr.from_sexpr(expr))
            elif head == c.DECL_LEN_CHECK:
                (switch,) = self._expect_args(node, 1)
                if not isinstance(switch, Atom) or switch.value not in (c.SWITCH_ON, c.SWITCH_OFF):
                    raise TermSyntaxError("Expected on or off", switch.line, switch.column)
                decls.check_lengths = switch.value == c.SWITCH_ON
            elif head == c.DEF_HEAD:
                ident, body = self._expect_args(node, 2)
                key = expect_ident(ident, "abbreviation")
                if key in self.context.abbreviations:
                    raise TermSyntaxError(f"Abbreviation ${key} defined twice", node.line, node.column)
                self.context.abbreviations[key] = self.parser.term(body)
            else:
                return False
        except LengthDeclError as e:
            raise TermSyntaxError(str(e), node.line, node.column)
        except ValidationError as e:
            logger.warning(f"Invalid declaration at {node.line}:{node.column}: {e}")
            raise TermSyntaxError(f"Invalid declaration: {e}", node.line, node.column)
        logger.debug(f"Applied preamble declaration {head}")
        return True

    def _expect_args(self, node: SExpr, count: int) -> List[SExpr]:
        if not isinstance(node, SList) or len(node.items) != count + 1:
            raise TermSyntaxError(f"({head_of(node)} ...) takes {count} arguments", node.line, node.column)
        return node.items[1:]

    def _expect_section(self, node: SExpr, head: str) -> List[SExpr]:
        if head_of(node) != head:
            raise TermSyntaxError(f"Expected ({head} ...)", node.line, node.column)
        return node.items[1:]

    def _terms(self, nodes: List[SExpr]) -> Tuple[Term, ...]:
        return tuple(self.parser.term(n) for n in nodes)

    def _sequent(self, left: SExpr, right: SExpr) -> Sequent:
        """Sequent from `(left term*) (right term*)`."""
        left_terms = self._terms(self._expect_section(left, c.LEFT_HEAD))
        right_terms = self._terms(self._expect_section(right, c.RIGHT_HEAD))
        if len(left_terms) != len(right_terms):
            raise TermSyntaxError(f"Sequent sides differ in length: {len(left_terms)} vs {len(right_terms)}",
                                  left.line, left.column)
        return Sequent.of(left_terms, right_terms)

    def _single_body(self, body: List[SExpr], what: str) -> SExpr:
        if len(body) != 1:
            raise TermSyntaxError(f"Expected exactly one {what} after the declarations, found {len(body)}")
        return body[0]


class TermReader(BaseReader):
    """Reads `.term` files: a preamble followed by one term."""

    def read(self, text: Source) -> TermDocument:
        node = self._single_body(self._read_forms(text), "term")
        return TermDocument(term=self.parser.term(node), context=self.context)


class GoalReader(BaseReader):
    """Reads `.goal` files: a preamble followed by `(goal (left term*) (right term*))`."""

    def read(self, text: Source) -> GoalDocument:
        node = self._single_body(self._read_forms(text), "goal")
        items = self._expect_section(node, c.GOAL_HEAD)
        if len(items) != 2:
            raise TermSyntaxError("Expected (goal (left ...) (right ...))", node.line, node.column)
        goal = self._sequent(*items)
        logger.debug(f"Read goal with {len(goal)} components")
        return GoalDocument(goal=goal, context=self.context)
