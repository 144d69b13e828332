from .constants import RuleKind
from .types import CCA, CS, FA, Derivation, Dup, Perm, ProofDocument, ProofStats, Refl, Restr, Rw, RuleApp, Sym
from .parser import ProofReader, read_proof, render_proof
from .checker import check_proof, check_step
from .restr import eliminate_restr, restrict
from .stats import proof_stats

__all__ = [
    'RuleKind',
    'RuleApp',
    'Refl',
    'FA',
    'Dup',
    'CS',
    'Rw',
    'Perm',
    'Sym',
    'Restr',
    'CCA',
    'Derivation',
    'ProofDocument',
    'ProofStats',
    'ProofReader',
    'read_proof',
    'render_proof',
    'check_step',
    'check_proof',
    'eliminate_restr',
    'restrict',
    'proof_stats',
]
