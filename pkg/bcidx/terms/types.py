from typing import Dict, Iterator, List, Mapping, Optional, Set, Tuple
import logging
from pydantic import BaseModel, Field, field_validator

from bcidx.constants import RESERVED_SYMBOLS
from bcidx.exceptions import ArityError, InvalidPositionError, RenamingError, SortError, UnknownSymbolError
from . import constants as c
from .constants import Sort

logger = logging.getLogger(__name__)

Position = Tuple[int, ...]


class Term:
    """
    Immutable ground term: a name, or a symbol applied to child terms.

    Structural data (hash, size, if-freeness, sort) is computed once at construction,
    so terms can be used freely as dict keys and set members.
    """
    __slots__ = ("head", "args", "is_name", "size", "if_free", "sort", "_hash", "_key")

    def __init__(self, head: str, args: Tuple["Term", ...] = (), is_name: bool = False):
        self.head = head
        self.args = args
        self.is_name = is_name
        self.size = 1 + sum(a.size for a in args)
        self.if_free = head != c.ITE and all(a.if_free for a in args) if not is_name else True
        if is_name:
            self.sort = Sort.MESSAGE
        elif head in (c.EQ, c.TRUE, c.FALSE) or head not in c.BUILTIN_ARITIES:
            # adversarial results may stand in conditional slots as well as message slots
            self.sort = Sort.BOOL
        elif head == c.ITE and args[1].sort is Sort.BOOL and args[2].sort is Sort.BOOL:
            self.sort = Sort.BOOL
        else:
            self.sort = Sort.MESSAGE
        self._hash = hash((head, is_name, args))
        self._key = None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return self.head == other.head and self.is_name == other.is_name and self.args == other.args

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        from .parser import render_term
        return f"Term({render_term(self)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def is_builtin(self) -> bool:
        return not self.is_name and self.head in c.BUILTIN_ARITIES

    @property
    def is_adversarial(self) -> bool:
        return not self.is_name and self.head not in c.BUILTIN_ARITIES

    def is_app(self, symbol: str) -> bool:
        return not self.is_name and self.head == symbol

    @property
    def canonical_key(self) -> tuple:
        """Key realizing the canonical total order; computed lazily and cached."""
        if self._key is None:
            if self.is_name:
                rank = c.NAME_RANK
            elif self.head in c.BUILTIN_RANKS:
                rank = c.BUILTIN_RANKS[self.head]
            else:
                rank = c.ADVERSARIAL_RANK
            self._key = (rank, self.head, tuple(a.canonical_key for a in self.args))
        return self._key

    def with_args(self, args: Tuple["Term", ...]) -> "Term":
        if args == self.args:
            return self
        return Term(self.head, args, self.is_name)


# --- Constructors
def name(ident: str) -> Term:
    return Term(ident, (), True)


def adv(symbol: str, *args: Term) -> Term:
    return Term(symbol, tuple(args))


def pair(a: Term, b: Term) -> Term:
    return Term(c.PAIR, (a, b))


def fst(a: Term) -> Term:
    return Term(c.FST, (a,))


def snd(a: Term) -> Term:
    return Term(c.SND, (a,))


def pk(a: Term) -> Term:
    return Term(c.PK, (a,))


def sk(a: Term) -> Term:
    return Term(c.SK, (a,))


def enc(m: Term, key: Term, r: Term) -> Term:
    return Term(c.ENC, (m, key, r))


def dec(m: Term, key: Term) -> Term:
    return Term(c.DEC, (m, key))


def ite(b: Term, x: Term, y: Term) -> Term:
    return Term(c.ITE, (b, x, y))


def zero(a: Term) -> Term:
    return Term(c.ZERO, (a,))


def eq(a: Term, b: Term) -> Term:
    return Term(c.EQ, (a, b))


TRUE = Term(c.TRUE)
FALSE = Term(c.FALSE)


# --- Structural helpers
def is_if_free(t: Term) -> bool:
    return t.if_free


def subterm_at(t: Term, p: Position) -> Term:
    current = t
    for depth, index in enumerate(p):
        if index < 0 or index >= current.arity:
            raise InvalidPositionError(f"Position {list(p)} is invalid: index {index} at depth {depth} "
                                       f"exceeds arity {current.arity}")
        current = current.args[index]
    return current


def replace_at(t: Term, p: Position, s: Term) -> Term:
    if not p:
        return s
    index = p[0]
    if index < 0 or index >= t.arity:
        raise InvalidPositionError(f"Position {list(p)} is invalid at symbol {t.head}")
    if len(p) == 1 and t.is_app(c.ITE) and index == 0 and s.sort is not Sort.BOOL:
        raise SortError(f"Cannot place a {s.sort} term in a conditional slot")
    args = list(t.args)
    args[index] = replace_at(args[index], p[1:], s)
    return t.with_args(tuple(args))


def positions(t: Term, prefix: Position = ()) -> Iterator[Tuple[Position, Term]]:
    """Pre-order enumeration of (position, subterm) pairs."""
    yield prefix, t
    for i, a in enumerate(t.args):
        yield from positions(a, prefix + (i,))


def subterms(t: Term) -> Set[Term]:
    seen: Set[Term] = set()
    stack = [t]
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        stack.extend(current.args)
    return seen


def names_of(t: Term) -> Set[str]:
    return {s.head for s in subterms(t) if s.is_name}


def occurs(needle: Term, haystack: Term) -> bool:
    if needle == haystack:
        return True
    if haystack.size <= needle.size:
        return False
    return any(occurs(needle, a) for a in haystack.args)


def substitute(t: Term, mapping: Mapping[Term, Term]) -> Term:
    """Replace maximal occurrences of the mapping's keys, top-down."""
    if t in mapping:
        return mapping[t]
    if not t.args:
        return t
    return t.with_args(tuple(substitute(a, mapping) for a in t.args))


def alpha_rename(t: Term, mu: Mapping[str, str]) -> Term:
    involved = names_of(t)
    images = [mu.get(n, n) for n in involved]
    if len(set(images)) != len(images):
        raise RenamingError(f"Renaming is not injective on the names {sorted(involved)}")
    return _rename(t, mu)


def _rename(t: Term, mu: Mapping[str, str]) -> Term:
    if t.is_name:
        target = mu.get(t.head)
        return t if target is None or target == t.head else name(target)
    if not t.args:
        return t
    return t.with_args(tuple(_rename(a, mu) for a in t.args))


def invert_renaming(mu: Mapping[str, str]) -> Dict[str, str]:
    inverse: Dict[str, str] = {}
    for source, target in mu.items():
        if target in inverse:
            raise RenamingError(f"Renaming maps both {inverse[target]} and {source} to {target}")
        inverse[target] = source
    return inverse


class Signature(BaseModel):
    """Adversarial symbols and their arities; builtins are fixed."""
    adversarial_symbols: Dict[str, int] = Field(default_factory=lambda: dict(RESERVED_SYMBOLS))

    @field_validator("adversarial_symbols")
    def validate_symbols(cls, v: Dict[str, int]) -> Dict[str, int]:
        for ident, arity in v.items():
            if ident in c.BUILTIN_ARITIES or ident == c.ADV:
                raise ValueError(f"Adversarial symbol {ident} clashes with a builtin")
            if arity < 0:
                raise ValueError(f"Negative arity for {ident}")
        merged = dict(RESERVED_SYMBOLS)
        merged.update(v)
        return merged

    def declare(self, ident: str, arity: int) -> None:
        if ident in c.BUILTIN_ARITIES or ident == c.ADV:
            raise UnknownSymbolError(f"Cannot redeclare builtin symbol {ident}")
        known = self.adversarial_symbols.get(ident)
        if known is not None and known != arity:
            raise ArityError(f"Symbol {ident} already declared with arity {known}")
        self.adversarial_symbols[ident] = arity
        logger.debug(f"Declared adversarial symbol {ident}/{arity}")

    def arity(self, symbol: str) -> Optional[int]:
        if symbol in c.BUILTIN_ARITIES:
            return c.BUILTIN_ARITIES[symbol]
        return self.adversarial_symbols.get(symbol)

    def check(self, t: Term) -> None:
        """Raise if t is not arity- and sort-correct under this signature."""
        if t.is_name:
            return
        expected = self.arity(t.head)
        if expected is None:
            raise UnknownSymbolError(f"Unknown symbol {t.head}")
        if expected != t.arity:
            raise ArityError(f"Symbol {t.head} expects {expected} arguments, got {t.arity}")
        if t.head == c.ITE and t.args[0].sort is not Sort.BOOL:
            raise SortError("The condition of ite must be Bool-sorted")
        for a in t.args:
            self.check(a)


def term_list_size(terms: List[Term]) -> int:
    return sum(t.size for t in terms)
