"""Hurwitz systems of permutations, braid moves, orbit counting and reductions."""
from .permutation import Partition, Permutation, SubgroupAnalysis, analyze_subgroup
from .system import HurwitzSystem, SystemFilter, class_key, validate
from .braid import BraidGenerator, apply_move, apply_word, word_inverse

__version__ = "0.1.0"

__all__ = [
    "Partition",
    "Permutation",
    "SubgroupAnalysis",
    "analyze_subgroup",
    "HurwitzSystem",
    "SystemFilter",
    "class_key",
    "validate",
    "BraidGenerator",
    "apply_move",
    "apply_word",
    "word_inverse",
]
