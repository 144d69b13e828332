from typing import Dict, List, NamedTuple, Optional, Union
import logging

from bcidx.exceptions import ArityError, SortError, TermSyntaxError, UnknownSymbolError
from . import constants as c
from .constants import Sort
from .types import FALSE, TRUE, Signature, Term, name

logger = logging.getLogger(__name__)


class Atom(NamedTuple):
    value: str
    line: int
    column: int


class SList(NamedTuple):
    items: List["SExpr"]
    line: int
    column: int


SExpr = Union[Atom, SList]


def read_sexprs(text: Union[str, bytes]) -> List[SExpr]:
    """Read every top-level s-expression. `;` starts a comment running to end of line."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise TermSyntaxError(f"Input is not valid UTF-8: {e}")

    forms: List[SExpr] = []
    stack: List[SList] = []
    line, column = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, column = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            column += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            stack.append(SList([], line, column))
            i += 1
            column += 1
            continue
        if ch == ")":
            if not stack:
                raise TermSyntaxError("Unbalanced ')'", line, column)
            done = stack.pop()
            (stack[-1].items if stack else forms).append(done)
            i += 1
            column += 1
            continue
        start, start_column = i, column
        while i < n and not text[i].isspace() and text[i] not in "();":
            i += 1
            column += 1
        atom = Atom(text[start:i], line, start_column)
        (stack[-1].items if stack else forms).append(atom)
    if stack:
        unclosed = stack[-1]
        raise TermSyntaxError("Unclosed '('", unclosed.line, unclosed.column)
    return forms


def expect_ident(node: SExpr, what: str = "identifier") -> str:
    if not isinstance(node, Atom) or not c.IDENT_PATTERN.fullmatch(node.value):
        line, column = node.line, node.column
        raise TermSyntaxError(f"Expected {what}", line, column)
    return node.value


def expect_int(node: SExpr, what: str = "integer") -> int:
    if not isinstance(node, Atom) or not node.value.isdigit():
        raise TermSyntaxError(f"Expected {what}", node.line, node.column)
    return int(node.value)


def expect_name(node: SExpr) -> str:
    if isinstance(node, Atom) and node.value.startswith(c.NAME_PREFIX):
        ident = node.value[len(c.NAME_PREFIX):]
        if c.IDENT_PATTERN.fullmatch(ident):
            return ident
    raise TermSyntaxError("Expected a name n.IDENT", node.line, node.column)


def head_of(node: SExpr) -> Optional[str]:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Atom):
        return node.items[0].value
    return None


class TermParser:
    """
    Builds sort- and arity-checked terms from s-expressions.

    Without a signature, adversarial symbols are declared on first use with the
    arity they are used at.
    """

    def __init__(self, signature: Optional[Signature] = None, abbreviations: Optional[Dict[str, Term]] = None,
                 infer: Optional[bool] = None):
        self._infer = signature is None if infer is None else infer
        self.signature = signature if signature is not None else Signature()
        self.abbreviations = abbreviations if abbreviations is not None else {}

    def term(self, node: SExpr) -> Term:
        if isinstance(node, Atom):
            return self._atom(node)
        if not node.items:
            raise TermSyntaxError("Empty application", node.line, node.column)
        head = node.items[0]
        if not isinstance(head, Atom):
            raise TermSyntaxError("Application head must be a symbol", head.line, head.column)
        if head.value == c.ADV:
            if len(node.items) < 2:
                raise TermSyntaxError("adv needs a symbol", node.line, node.column)
            symbol = expect_ident(node.items[1], "adversarial symbol")
            children = node.items[2:]
            known = self.signature.arity(symbol)
            if known is None and self._infer and symbol not in c.BUILTIN_ARITIES:
                self.signature.declare(symbol, len(children))
                known = len(children)
            if known is None or symbol in c.BUILTIN_ARITIES:
                raise UnknownSymbolError(f"Unknown adversarial symbol {symbol}", head.line, head.column)
        else:
            symbol = head.value
            children = node.items[1:]
            known = c.BUILTIN_ARITIES.get(symbol)
            if known is None:
                raise UnknownSymbolError(f"Unknown symbol {symbol}", head.line, head.column)
        if known != len(children):
            raise ArityError(f"{symbol} expects {known} arguments, got {len(children)}", head.line, head.column)
        args = tuple(self.term(child) for child in children)
        if symbol == c.ITE and args[0].sort is not Sort.BOOL:
            raise SortError("The condition of ite must be Bool-sorted", children[0].line, children[0].column)
        return Term(symbol, args)

    def _atom(self, node: Atom) -> Term:
        value = node.value
        if value == c.TRUE:
            return TRUE
        if value == c.FALSE:
            return FALSE
        if value.startswith(c.NAME_PREFIX):
            return name(expect_name(node))
        if value.startswith(c.ABBREVIATION_PREFIX):
            key = value[len(c.ABBREVIATION_PREFIX):]
            if key not in self.abbreviations:
                raise UnknownSymbolError(f"Unknown abbreviation {value}", node.line, node.column)
            return self.abbreviations[key]
        if value in c.BUILTIN_ARITIES:
            raise ArityError(f"{value} must be applied to {c.BUILTIN_ARITIES[value]} arguments",
                             node.line, node.column)
        raise UnknownSymbolError(f"Unexpected atom {value}", node.line, node.column)


def parse_term(text: Union[str, bytes], sig: Optional[Signature] = None) -> Term:
    forms = read_sexprs(text)
    if len(forms) != 1:
        raise TermSyntaxError(f"Expected exactly one term, found {len(forms)}")
    return TermParser(sig).term(forms[0])


def render_term(t: Term) -> str:
    if t.is_name:
        return f"{c.NAME_PREFIX}{t.head}"
    if t.head in (c.TRUE, c.FALSE):
        return t.head
    parts = [t.head] if t.is_builtin else [c.ADV, t.head]
    parts.extend(render_term(a) for a in t.args)
    return "(" + " ".join(parts) + ")"
