from .constants import Sort
from .types import (
    FALSE, TRUE, Position, Signature, Term, adv, alpha_rename, dec, enc, eq, fst, invert_renaming,
    is_if_free, ite, name, names_of, occurs, pair, pk, positions, replace_at, sk, snd, substitute,
    subterm_at, subterms, zero,
)
from .ordering import CanonicalOrder, canonical_compare, canonical_sorted
from .parser import Atom, SExpr, SList, TermParser, parse_term, read_sexprs, render_term

__all__ = [
    "Sort", "Term", "Signature", "Position", "CanonicalOrder",
    "TRUE", "FALSE", "adv", "dec", "enc", "eq", "fst", "ite", "name", "pair", "pk", "sk", "snd", "zero",
    "alpha_rename", "invert_renaming", "is_if_free", "names_of", "occurs", "positions", "replace_at",
    "substitute", "subterm_at", "subterms",
    "canonical_compare", "canonical_sorted",
    "Atom", "SList", "SExpr", "TermParser", "parse_term", "read_sexprs", "render_term",
]
