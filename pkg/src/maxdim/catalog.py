"""A constructive corpus of small groups, plus permutation JSON import/export.

The corpus is not a census of isomorphism types.  It lists constructions
(deduplicated by spec string) and every filter predicate is evaluated on
the built group.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterator

from .constructors import construct, fieldmod_group, load_perm_json
from .fields import is_prime, least_root_of_unity, prime_factors
from .group import FiniteGroup
from .lattice import chief_series
from .structure import derived_subgroup, is_nilpotent_subgroup, is_soluble

CORPUS_CAP = 512
# elementary abelian 2-groups of rank 6 and up have tens of thousands of subgroups
ABELIAN_MAX_RANK = int(os.environ.get("MAXDIM_ABELIAN_MAX_RANK", 4))

PREDICATES = ("soluble", "abelian", "derived_nilpotent", "supersoluble_known")

NONABELIAN_BASES = [
    "sym:3", "dihedral:4", "quaternion:8", "alt:4", "dihedral:5",
    "semidirect:7,3,2", "heisenberg:3", "sym:4",
]
COFACTORS = ["cyclic:2", "cyclic:3", "cyclic:4", "abelian:2,2", "cyclic:5", "sym:3"]
FIELDMODS = [(2, 2, 1), (2, 2, 2), (2, 2, 3), (3, 1, 1), (3, 1, 2), (3, 1, 3), (3, 2, 1),
             (5, 1, 1), (5, 1, 2), (7, 1, 1), (2, 3, 1), (11, 1, 1), (13, 1, 1)]


@dataclass
class CorpusFilter:
    max_order: int = 200
    predicates: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        self.predicates = frozenset(self.predicates)
        unknown = self.predicates - set(PREDICATES)
        if unknown:
            raise ValueError(f"unknown predicates {sorted(unknown)}")
        if self.max_order > CORPUS_CAP:
            raise ValueError(f"max_order above corpus cap {CORPUS_CAP}")


def _invariant_factor_lists(limit: int, max_rank: int):
    """Non-cyclic abelian types d1 | d2 | ... | dk (k >= 2) with product <= limit."""
    out = []

    def rec(prefix, prod):
        if len(prefix) >= 2:
            out.append(tuple(prefix))
        if len(prefix) == max_rank:
            return
        step = prefix[-1] if prefix else 1
        d = step if prefix else 2
        while prod * d <= limit:
            rec(prefix + [d], prod * d)
            d += step

    rec([], 1)
    return sorted(out, key=lambda t: (abs_order(t), t))


def abs_order(t) -> int:
    out = 1
    for x in t:
        out *= x
    return out


def _order_of(spec: str) -> int:
    return _built(spec).order


@lru_cache(maxsize=None)
def _built(spec: str) -> FiniteGroup:
    return construct(spec)


def corpus_specs(max_order: int = 200) -> list[str]:
    """Corpus construction specs with order <= ``max_order``, in a fixed order."""
    if max_order > CORPUS_CAP:
        raise ValueError(f"max_order above corpus cap {CORPUS_CAP}")
    specs: list[str] = []
    specs += [f"cyclic:{n}" for n in range(1, max_order + 1)]
    specs += ["abelian:" + ",".join(map(str, t))
              for t in _invariant_factor_lists(max_order, ABELIAN_MAX_RANK)]
    specs += [f"dihedral:{n}" for n in range(3, max_order // 2 + 1)]
    n = 8
    while n <= max_order:
        specs.append(f"quaternion:{n}")
        n *= 2
    specs += [s for s, o in (("sym:3", 6), ("alt:4", 12), ("sym:4", 24)) if o <= max_order]
    for p in (3, 5):
        if p**3 <= max_order:
            specs.append(f"heisenberg:{p}")
            specs.append(f"semidirect:{p * p},{p},{1 + p}")
    for q in range(3, max_order + 1):
        if not is_prime(q):
            continue
        for p in sorted(set(prime_factors(q - 1))):
            if p * q <= max_order:
                specs.append(f"semidirect:{q},{p},{least_root_of_unity(p, q)}")
    for p, f, dim in FIELDMODS:
        if (p**f) ** dim * (p**f - 1) <= max_order:
            specs.append(f"fieldmod:{p}^{f},{dim}" if f > 1 else f"fieldmod:{p},{dim}")
    for p, q in ((2, 3), (2, 5)):
        if q**p * p ** (p + 1) <= max_order:
            specs.append(f"gqp:{p},{q}")
    seen_pairs = set()
    for a in NONABELIAN_BASES:
        for b in COFACTORS:
            key = tuple(sorted((a, b)))
            if key in seen_pairs or a == b and a != "sym:3":
                continue
            seen_pairs.add(key)
            spec = f"direct({a},{b})"
            if _order_of(a) * _order_of(b) <= max_order:
                specs.append(spec)
    return list(dict.fromkeys(specs))


def is_abelian(G: FiniteGroup) -> bool:
    gg = G.gen_idx
    return all(G.mul_idx(a, b) == G.mul_idx(b, a) for a in gg for b in gg)


def derived_is_nilpotent(G: FiniteGroup) -> bool:
    return is_nilpotent_subgroup(derived_subgroup(G))


def is_supersoluble(G: FiniteGroup) -> bool:
    """Soluble with every chief factor of prime order."""
    if not is_soluble(G):
        return False
    return all(is_prime(f.order) for f in chief_series(G).factors)


def satisfies(G: FiniteGroup, predicates) -> bool:
    for pred in predicates:
        if pred == "soluble" and not is_soluble(G):
            return False
        if pred == "abelian" and not is_abelian(G):
            return False
        if pred == "derived_nilpotent" and not derived_is_nilpotent(G):
            return False
        if pred == "supersoluble_known" and not is_supersoluble(G):
            return False
    return True


def corpus(flt: CorpusFilter | None = None, **kwargs) -> Iterator[FiniteGroup]:
    """Stream corpus groups passing every predicate of the filter."""
    flt = flt or CorpusFilter(**kwargs)
    for spec in corpus_specs(flt.max_order):
        G = construct(spec)
        if satisfies(G, flt.predicates):
            yield G


def build_fieldmod(p: int, f: int, n: int) -> FiniteGroup:
    return fieldmod_group(p, f, n)


def import_perm(path) -> FiniteGroup:
    return load_perm_json(path)


def export(G: FiniteGroup, path) -> None:
    """Write G as a permutation group: its own permutations, else the right regular action."""
    if G.meta.get("kind") == "perm":
        degree = G.meta["degree"]
        gens = [[x + 1 for x in g] for g in G.generators]
    else:
        degree = G.order
        gens = [[G.rtab(g)[i] + 1 for i in range(G.order)] for g in G.gen_idx]
    Path(path).write_text(json.dumps({"degree": degree, "generators": gens}))


def corpus_listing(flt: CorpusFilter) -> Iterator[str]:
    """JSON lines describing the filtered corpus."""
    for G in corpus(flt):
        yield json.dumps({"spec": G.spec, "order": G.order})
