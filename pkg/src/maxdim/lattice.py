"""Subgroup lattice operations on enumerated groups."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from itertools import product

from .fields import prime_factors
from .group import (
    CapExceeded,
    FiniteGroup,
    GroupError,
    Subgroup,
    closure,
    conjugate,
    intersect,
    is_normal,
    iter_bits,
    join,
    normal_closure,
)

SUBGROUPS_CAP = int(os.environ.get("MAXDIM_SUBGROUPS_CAP", 200))
LATTICE_CAP = int(os.environ.get("MAXDIM_LATTICE_CAP", 20_000))


def _cached(G: FiniteGroup, key: str, build):
    cache = G.meta.setdefault("_cache", {})
    if key not in cache:
        with G._lock:
            if key not in cache:
                cache[key] = build()
    return cache[key]


def canonical(subgroups) -> list[Subgroup]:
    """Sort subgroups by their member bit vector, read as sorted index tuples."""
    return sorted(subgroups, key=lambda S: S.key)


def cyclic_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All cyclic subgroups, each with its least-index generator as ``gens``."""
    def build():
        seen: dict[int, Subgroup] = {}
        for i in range(G.order):
            C = closure(G, [i])
            seen.setdefault(C.bits, C)
        return canonical(seen.values())

    return _cached(G, "cyclic", build)


def all_subgroups(G: FiniteGroup, cap: int | None = None) -> list[Subgroup]:
    """Every subgroup of ``G``, canonically ordered.

    Seeds with the cyclic subgroups and repeatedly closes each new subgroup
    with one extra cyclic generator until nothing new appears.
    """
    cap = SUBGROUPS_CAP if cap is None else cap
    if G.order > cap:
        raise CapExceeded(f"{G.spec}: all_subgroups refused above order {cap}")

    def build():
        cyc = cyclic_subgroups(G)
        reps = [C.gens[0] for C in cyc if C.gens]
        seen = {C.bits: C for C in cyc}
        frontier = [C for C in cyc if C.bits != 1]
        while frontier:
            new = []
            for S in frontier:
                for g in reps:
                    if (S.bits >> g) & 1:
                        continue
                    T = closure(G, [g], start=S)
                    if T.bits not in seen:
                        seen[T.bits] = T
                        new.append(T)
            frontier = new
        return canonical(seen.values())

    return _cached(G, "all", build)


def is_prime_power(n: int) -> bool:
    return n > 1 and len(set(prime_factors(n))) == 1


def pgroup_frattini(G: FiniteGroup) -> Subgroup:
    """Frattini subgroup of a p-group as G' G^p."""
    p = prime_factors(G.order)[0]
    gg = G.gen_idx
    comms = [G.comm_idx(a, b) for a in gg for b in gg]
    D = normal_closure(G, comms)
    powers = set()
    for x in range(G.order):
        y = x
        for _ in range(p - 1):
            y = G.mul_idx(y, x)
        powers.add(y)
    return closure(G, sorted(powers), start=D)


def pgroup_maximal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Maximal subgroups of a p-group: preimages of hyperplanes of G/Phi(G)."""
    p = prime_factors(G.order)[0]
    F = pgroup_frattini(G)
    basis: list[int] = []
    cur = F
    for g in G.gen_idx:
        if not (cur.bits >> g) & 1:
            basis.append(g)
            cur = closure(G, [g], start=cur)
    d = len(basis)
    coords: list = [None] * G.order
    coords[0] = (0,) * d
    queue = [0]
    tabs = [G.rtab(g) for g in basis]
    for x in queue:
        cx = coords[x]
        for i, t in enumerate(tabs):
            y = t[x]
            if coords[y] is None:
                c = list(cx)
                c[i] = (c[i] + 1) % p
                coords[y] = tuple(c)
                queue.append(y)
    out = []
    for alpha in product(range(p), repeat=d):
        nz = [a for a in alpha if a]
        if not nz or nz[0] != 1:
            continue
        bits = 0
        for x, c in enumerate(coords):
            if sum(a * b for a, b in zip(alpha, c)) % p == 0:
                bits |= 1 << x
        out.append(Subgroup(G, bits))
    return canonical(out)


def maximal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Maximal subgroups of ``G``, canonically ordered.

    Generic route: maximal elements of :func:`all_subgroups` (order up to
    the subgroups cap).  p-groups up to the lattice cap go through the
    Frattini quotient instead.
    """
    def build():
        if G.order == 1:
            return []
        if G.order <= SUBGROUPS_CAP:
            subs = sorted(all_subgroups(G), key=lambda S: -S.order)
            found: list[Subgroup] = []
            for S in subs:
                if S.order == G.order:
                    continue
                if not any(S <= M for M in found):
                    found.append(S)
            return canonical(found)
        if is_prime_power(G.order) and G.order <= LATTICE_CAP:
            return pgroup_maximal_subgroups(G)
        raise CapExceeded(f"{G.spec}: generic maximal subgroups refused at order {G.order}")

    return _cached(G, "maximal", build)


def frattini(G: FiniteGroup) -> Subgroup:
    out = G.whole
    for M in maximal_subgroups(G):
        out = intersect(out, M)
    return out


def conjugacy_classes(G: FiniteGroup) -> list[list[int]]:
    def build():
        seen = [False] * G.order
        gens = G.gen_idx
        classes = []
        for x in range(G.order):
            if seen[x]:
                continue
            orbit = [x]
            seen[x] = True
            for y in orbit:
                for g in gens:
                    z = G.conj_idx(y, g)
                    if not seen[z]:
                        seen[z] = True
                        orbit.append(z)
            classes.append(sorted(orbit))
        return classes

    return _cached(G, "classes", build)


def class_closures(G: FiniteGroup) -> list[Subgroup]:
    """Distinct normal closures of single conjugacy classes."""
    def build():
        out: dict[int, Subgroup] = {}
        for cls in conjugacy_classes(G):
            N = normal_closure(G, [cls[0]])
            out.setdefault(N.bits, N)
        return canonical(out.values())

    return _cached(G, "class_closures", build)


def normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, by closing joins of conjugacy-class closures."""
    def build():
        seeds = class_closures(G)
        seen = {N.bits: N for N in seeds}
        frontier = list(seeds)
        while frontier:
            new = []
            for N in frontier:
                for C in seeds:
                    if C <= N:
                        continue
                    J = join(N, C)
                    if J.bits not in seen:
                        seen[J.bits] = J
                        new.append(J)
            frontier = new
        return canonical(seen.values())

    return _cached(G, "normal", build)


def minimal_normal_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Minimal normal subgroups; each is the normal closure of any of its non-identity elements."""
    cands = [N for N in class_closures(G) if N.bits != 1]
    return [N for N in cands if not any(C < N for C in cands)]


class QuotientGroup(FiniteGroup):
    """G/N with cosets labelled by their least member index."""

    def __init__(self, G: FiniteGroup, N: Subgroup):
        if N.group is not G:
            raise GroupError("kernel is not a subgroup of this group")
        if not is_normal(N):
            raise GroupError("quotient by a non-normal subgroup")
        labels = [-1] * G.order
        members = N.members
        for x in range(G.order):
            if labels[x] >= 0:
                continue
            for n in members:
                labels[G.mul_idx(x, n)] = x
        self.parent, self.kernel, self.labels = G, N, labels
        gens = sorted({labels[g] for g in G.gen_idx} - {0})

        def mul(a, b):
            return labels[G.mul_idx(a, b)]

        def inv(a):
            return labels[G.inv_idx[a]]

        super().__init__(f"{G.spec}/<{N.order}>", 0, gens, mul, inv,
                         order=G.order // N.order, enum_cap=G.enum_cap)

    def project(self, x: int) -> int:
        """Quotient index of the coset of parent element ``x``."""
        return self.index[self.labels[x]]

    def lift(self, S: Subgroup) -> Subgroup:
        """Full preimage in the parent of a subgroup of the quotient."""
        wanted = {self.elements[i] for i in iter_bits(S.bits)}
        bits = 0
        for x, lab in enumerate(self.labels):
            if lab in wanted:
                bits |= 1 << x
        return Subgroup(self.parent, bits)

    def image(self, A: Subgroup) -> Subgroup:
        bits = 0
        for x in iter_bits(A.bits):
            bits |= 1 << self.project(x)
        return Subgroup(self, bits)


def quotient(G: FiniteGroup, N: Subgroup) -> QuotientGroup:
    return QuotientGroup(G, N)


@dataclass
class ChiefFactor:
    upper: Subgroup
    lower: Subgroup
    complemented: bool
    complement: Subgroup | None = None

    @property
    def order(self) -> int:
        return self.upper.order // self.lower.order


@dataclass
class ChiefSeries:
    """Normal series ``G = chain[0] > ... > chain[-1] = 1`` with flagged factors."""

    group: FiniteGroup
    chain: list[Subgroup]
    factors: list[ChiefFactor] = field(default_factory=list)

    @property
    def complemented_count(self) -> int:
        return sum(f.complemented for f in self.factors)

    def summary(self) -> list[tuple[int, bool]]:
        return [(f.order, f.complemented) for f in self.factors]


def find_complement(G: FiniteGroup, N: Subgroup, M: Subgroup) -> Subgroup | None:
    """A subgroup U with M <= U, U meet N = M and UN = G, or None."""
    target = G.order * M.order // N.order
    for U in all_subgroups(G):
        if U.order == target and M <= U and (U.bits & N.bits) == M.bits:
            return U
    return None


def chief_series(G: FiniteGroup, rng: random.Random | None = None) -> ChiefSeries:
    """Chief series built from the bottom by minimal normal subgroups of quotients.

    Ties go to the lexicographically least candidate unless ``rng`` is given,
    in which case one is drawn at random.  Complement search needs
    :func:`all_subgroups` of ``G`` and so obeys its cap.
    """
    if G.order > SUBGROUPS_CAP:
        raise CapExceeded(f"{G.spec}: chief series complement search refused at order {G.order}")
    up = [G.trivial]
    M = G.trivial
    while M.order < G.order:
        if M.order == 1:
            cands = minimal_normal_subgroups(G)
        else:
            Q = quotient(G, M)
            cands = canonical(Q.lift(N) for N in minimal_normal_subgroups(Q))
        N = rng.choice(cands) if rng is not None else cands[0]
        up.append(N)
        M = N
    chain = up[::-1]
    factors = []
    for upper, lower in zip(chain, chain[1:]):
        U = find_complement(G, upper, lower)
        factors.append(ChiefFactor(upper, lower, U is not None, U))
    return ChiefSeries(G, chain, factors)


def to_dot(G: FiniteGroup, cap: int = 100) -> str:
    """Hasse diagram of the subgroup lattice in Graphviz DOT."""
    if G.order > cap:
        raise CapExceeded(f"{G.spec}: DOT export refused above order {cap}")
    subs = all_subgroups(G)
    lines = ["digraph lattice {", "  rankdir=BT;"]
    for i, S in enumerate(subs):
        lines.append(f'  s{i} [label="{S.order}"];')
    for i, A in enumerate(subs):
        for j, B in enumerate(subs):
            if A < B and not any(A < C < B for C in subs):
                lines.append(f"  s{i} -> s{j};")
    lines.append("}")
    return "\n".join(lines)


__all__ = [
    "ChiefFactor",
    "ChiefSeries",
    "QuotientGroup",
    "all_subgroups",
    "canonical",
    "chief_series",
    "class_closures",
    "closure",
    "conjugacy_classes",
    "conjugate",
    "cyclic_subgroups",
    "find_complement",
    "frattini",
    "intersect",
    "maximal_subgroups",
    "minimal_normal_subgroups",
    "normal_subgroups",
    "pgroup_frattini",
    "quotient",
    "to_dot",
]
