"""Subgroup intersections and ranks in free groups and F_n x A products."""

from .abelian import (
    AbElement,
    AbGroup,
    AbSubgroup,
    QmodZElement,
    TorsionElement,
    embed_ambient,
)
from .product import (
    GeneratorPair,
    ProductSubgroup,
    WitnessReport,
    check_hanna_neumann,
    check_kp_bound,
    normalize,
    p_intersect,
    p_membership,
    p_rank,
    witness,
)
from .stallings import SubgroupGraph, from_generators, membership, pullback, rank
from .words import Alphabet, Word

__all__ = [
    "AbElement",
    "AbGroup",
    "AbSubgroup",
    "Alphabet",
    "GeneratorPair",
    "ProductSubgroup",
    "QmodZElement",
    "SubgroupGraph",
    "TorsionElement",
    "Word",
    "WitnessReport",
    "check_hanna_neumann",
    "check_kp_bound",
    "embed_ambient",
    "from_generators",
    "membership",
    "normalize",
    "p_intersect",
    "p_membership",
    "p_rank",
    "pullback",
    "rank",
    "witness",
]
