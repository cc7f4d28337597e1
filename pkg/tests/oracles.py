"""Naive reference computations on payload sets, independent of the bit-vector code."""

from itertools import combinations


def elements(G):
    seen = {G.identity}
    queue = [G.identity]
    for x in queue:
        for g in G.generators:
            for y in (G.mul(x, g), G.mul(g, x)):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen


def span(G, gens):
    """Closure under products of both orders; no tables, no indices."""
    seen = {G.identity} | set(gens)
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                for c in (G.mul(a, b), G.mul(b, a)):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return frozenset(seen)


def subgroups(G):
    """All subgroups by repeatedly joining with single elements."""
    els = list(elements(G))
    layer = {span(G, [x]) for x in els}
    found = set(layer)
    while layer:
        nxt = set()
        for S in layer:
            for x in els:
                if x not in S:
                    T = span(G, list(S) + [x])
                    if T not in found:
                        found.add(T)
                        nxt.add(T)
        layer = nxt
    return found


def maximal(G):
    whole = frozenset(elements(G))
    subs = [S for S in subgroups(G) if S != whole]
    return [S for S in subs if not any(S < T for T in subs)]


def commutator_closure(G):
    els = list(elements(G))
    comms = {G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b)) for a in els for b in els}
    return span(G, list(comms))


def gp_by_subsets(family, whole):
    meets = set()
    k = len(family)
    for r in range(k + 1):
        for idx in combinations(range(k), r):
            M = frozenset(whole)
            for i in idx:
                M = M & family[i]
            if M in meets:
                return False
            meets.add(M)
    return True


def md_naive(G):
    whole = frozenset(elements(G))
    mx = maximal(G)
    best = 0
    for r in range(1, len(mx) + 1):
        if any(gp_by_subsets(list(c), whole) for c in combinations(mx, r)):
            best = r
        else:
            break
    return best


def m_naive(G):
    """Longest irredundant generating sequence, by sets of cyclic subgroups."""
    whole = frozenset(elements(G))
    gens = {}
    for x in whole:
        gens.setdefault(span(G, [x]), x)
    reps = list(gens.values())
    # an irredundant generating sequence gives a strict subgroup chain
    n, omega, d = len(whole), 0, 2
    while n > 1:
        while n % d == 0:
            n //= d
            omega += 1
        d += 1
    best = 0
    for r in range(1, omega + 1):
        hit = False
        for c in combinations(reps, r):
            if span(G, c) != whole:
                continue
            if all(span(G, c[:i] + c[i + 1:]) != whole for i in range(r)):
                hit = True
                break
        if hit:
            best = r
    return best
