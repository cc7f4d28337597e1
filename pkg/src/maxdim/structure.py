"""Derived and lower central series, solubility, nilpotency, Fitting length."""

from __future__ import annotations

from .group import FiniteGroup, GroupError, Subgroup, normal_closure
from .lattice import class_closures, quotient


def commutator_subgroup(A: Subgroup, B: Subgroup) -> Subgroup:
    """[A, B] for A, B normal in the parent: normal closure of generator commutators."""
    G = A.group
    return normal_closure(G, [G.comm_idx(a, b) for a in A.gens for b in B.gens])


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    W = G.whole
    return commutator_subgroup(W, W)


def derived_series(G: FiniteGroup) -> list[Subgroup]:
    """G, G', G'', ... until it stabilises."""
    series = [G.whole]
    while True:
        D = commutator_subgroup(series[-1], series[-1])
        if D == series[-1]:
            return series
        series.append(D)


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    W = G.whole
    series = [W]
    while True:
        D = commutator_subgroup(series[-1], W)
        if D == series[-1]:
            return series
        series.append(D)


def is_soluble(G: FiniteGroup) -> bool:
    return derived_series(G)[-1].order == 1


def is_nilpotent(G: FiniteGroup) -> bool:
    return lower_central_series(G)[-1].order == 1


def subgroup_as_group(S: Subgroup) -> FiniteGroup:
    """A subgroup of an enumerated group as a group in its own right."""
    G = S.group
    return FiniteGroup(
        f"{G.spec}[{S.order}]", G.identity, [G.elements[g] for g in S.gens],
        G.mul, G.inv, order=S.order, enum_cap=G.enum_cap, fmt=G.fmt,
    )


def is_nilpotent_subgroup(S: Subgroup) -> bool:
    return is_nilpotent(subgroup_as_group(S))


def fitting_subgroup(G: FiniteGroup) -> Subgroup:
    """Largest nilpotent normal subgroup.

    An element lies in it exactly when its normal closure is nilpotent, so
    it is the join of the nilpotent conjugacy-class closures.
    """
    out = G.trivial
    for N in class_closures(G):
        if N <= out:
            continue
        if is_nilpotent_subgroup(N):
            out = normal_closure(G, list(out.gens) + list(N.gens))
    return out


def fitting_length(G: FiniteGroup) -> int:
    """Length of the upper Fitting series, via iterated Fitting quotients."""
    if not is_soluble(G):
        raise GroupError(f"{G.spec} is not soluble")
    length = 0
    Q = G
    while Q.order > 1:
        F = fitting_subgroup(Q)
        length += 1
        if F.order == Q.order:
            break
        Q = quotient(Q, F)
    return length
