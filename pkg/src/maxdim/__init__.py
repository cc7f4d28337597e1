"""Exact computation of m(G), i(G) and MaxDim(G) for small finite groups."""

__version__ = "0.1.0"

from .catalog import CorpusFilter, build_fieldmod, corpus, export, import_perm
from .constructors import SpecError, construct
from .gqp import (
    GqpGroup,
    SymbolicSubgroup,
    conj_meet,
    delta,
    invariants_gqp,
    md_gqp,
    sym_contains,
    sym_equal,
    sym_intersect,
    sym_order,
)
from .group import CapExceeded, FiniteGroup, GroupError, Subgroup, closure, conjugate, intersect
from .invariants import (
    GPFamily,
    compute_invariants,
    i_bruteforce,
    is_general_position,
    is_irredundant,
    lemma22_check,
    lemma24_check,
    m_bruteforce,
    m_soluble,
    md_search,
)
from .lattice import (
    all_subgroups,
    chief_series,
    frattini,
    maximal_subgroups,
    minimal_normal_subgroups,
    quotient,
)
from .structure import derived_subgroup, fitting_length, is_nilpotent, is_soluble

__all__ = [
    "CapExceeded", "CorpusFilter", "FiniteGroup", "GPFamily", "GqpGroup", "GroupError",
    "SpecError", "Subgroup", "SymbolicSubgroup", "all_subgroups", "build_fieldmod",
    "chief_series", "closure", "compute_invariants", "conj_meet", "conjugate", "construct",
    "corpus", "delta", "derived_subgroup", "export", "fitting_length", "frattini",
    "i_bruteforce", "import_perm", "intersect", "invariants_gqp", "is_general_position",
    "is_irredundant", "is_nilpotent", "is_soluble", "lemma22_check", "lemma24_check",
    "m_bruteforce", "m_soluble", "maximal_subgroups", "md_gqp", "md_search",
    "minimal_normal_subgroups", "quotient", "sym_contains", "sym_equal", "sym_intersect",
    "sym_order",
]
