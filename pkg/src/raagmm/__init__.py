"""Symmetric automorphisms of right-angled Artin groups: words, Whitehead
posets, reductivity and the homology of the associated complexes."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, InputError, JoinUndefined, PreconditionError, RaagmmError, ValidityError
from .graph import ComponentClass, SimplicialGraph, parse_graph
from .words import (
    Decision, PartialConjugation, SymmetricAutomorphism, Verdict, apply, cyclic_length,
    cyclic_reduce, format_word, images, invert, is_conjugate, is_inner,
    make_partial_conjugation, multiply, parse_word, reduce,
)
from .whitehead import (
    BasedPartition, VertexType, WhiteheadPoset, compatible, crossings, disjoin,
    enumerate_partitions, enumerate_whitehead_poset, innermost_set, join_vtypes,
    make_partition, make_vtype, parse_partition, rank, refine,
)
from .reductivity import (
    Reductivity, WordSet, find_strictly_reductive, height, partition_reductivity, red,
    red_via_day, vertex_reductivity,
)
from .complex import (
    FinitePoset, HomologyResult, MMBall, OrderComplex, cohomological_dimension, homology,
    mm_ball, order_complex, stabilizer_rank, whitehead_zero,
)

__all__ = [
    "BudgetExceeded",
    "InputError",
    "JoinUndefined",
    "PreconditionError",
    "RaagmmError",
    "ValidityError",
    "ComponentClass",
    "SimplicialGraph",
    "parse_graph",
    "Decision",
    "PartialConjugation",
    "SymmetricAutomorphism",
    "Verdict",
    "apply",
    "cyclic_length",
    "cyclic_reduce",
    "format_word",
    "images",
    "invert",
    "is_conjugate",
    "is_inner",
    "make_partial_conjugation",
    "multiply",
    "parse_word",
    "reduce",
    "BasedPartition",
    "VertexType",
    "WhiteheadPoset",
    "compatible",
    "crossings",
    "disjoin",
    "enumerate_partitions",
    "enumerate_whitehead_poset",
    "innermost_set",
    "join_vtypes",
    "make_partition",
    "make_vtype",
    "parse_partition",
    "rank",
    "refine",
    "Reductivity",
    "WordSet",
    "find_strictly_reductive",
    "height",
    "partition_reductivity",
    "red",
    "red_via_day",
    "vertex_reductivity",
    "FinitePoset",
    "HomologyResult",
    "MMBall",
    "OrderComplex",
    "cohomological_dimension",
    "homology",
    "mm_ball",
    "order_complex",
    "stabilizer_rank",
    "whitehead_zero",
]
