from .types import LengthDecls, LengthExpr
from .engine import eql, length_of, render_length

__all__ = ["LengthDecls", "LengthExpr", "eql", "length_of", "render_length"]
