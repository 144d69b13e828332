from collections import Counter

from .types import Derivation, ProofStats


def proof_stats(d: Derivation) -> ProofStats:
    """Height (a leaf has height 1), node count and a histogram of rule kinds."""
    histogram = Counter(node.rule.kind.value for _, node in d.walk())
    return ProofStats(height=d.height, node_count=d.node_count, rules=dict(sorted(histogram.items())))
