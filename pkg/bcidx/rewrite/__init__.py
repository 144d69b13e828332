from .constants import RewriteRuleId, Strategy
from .types import IfContext, NormalFormDecomposition
from .engine import (
    cond_greater, count_steps, default_order, equal_mod_R, is_irreducible, normalize, rewrite_step, root_redexes,
)
from .decompose import approx_conds, approx_leaves, cofactor, conds_and_leaves, decompose

__all__ = [
    "RewriteRuleId", "Strategy", "IfContext", "NormalFormDecomposition",
    "cond_greater", "count_steps", "default_order", "equal_mod_R", "is_irreducible", "normalize", "rewrite_step",
    "root_redexes", "approx_conds", "approx_leaves", "cofactor", "conds_and_leaves", "decompose",
]
