"""m(G), i(G) and MaxDim(G) with certificates, plus the general-position harnesses.

Conventions: the trivial group has m = md = i = 0.  A family of subgroups is
in general position when dropping any member strictly enlarges the
intersection, the empty intersection being the ambient group.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .fields import big_omega
from .group import (
    CapExceeded,
    FiniteGroup,
    GroupError,
    Subgroup,
    closure,
    conjugate,
    iter_bits,
)
from .lattice import (
    SUBGROUPS_CAP,
    all_subgroups,
    chief_series,
    cyclic_subgroups,
    frattini,
    maximal_subgroups,
)
from .structure import is_soluble

BRUTE_CAP = 500


@dataclass
class IrredundantSequence:
    elements: list
    generates_parent: bool


@dataclass
class GPFamily:
    """Subgroups in general position with one witness per member.

    ``witnesses[i]`` lies in the meet of all members but the i-th and not in
    the meet of all members.
    """

    subgroups: list
    witnesses: list
    labels: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.subgroups)


@dataclass
class Value:
    value: int | None
    status: str  # exact | lower_bound | fail | skipped
    certificate: object = None
    elapsed_ms: float = 0.0


@dataclass
class SearchResult:
    value: int
    status: str
    witness: list
    nodes: int = 0
    elapsed: float = 0.0


# general position


def _whole_like(S):
    if isinstance(S, Subgroup):
        return S.group.whole
    return S.gqp.full_v(S.gqp.H_bits)


def _meet(items, whole):
    out = whole
    for S in items:
        out = out & S
    return out


def gp_witnesses(family: list, ambient=None) -> list:
    whole = ambient if ambient is not None else _whole_like(family[0])
    full = _meet(family, whole)
    out = []
    for i in range(len(family)):
        L = _meet(family[:i] + family[i + 1:], whole)
        out.append(L.witness_outside(full))
    return out


def _check_parents(family):
    first = family[0]
    for S in family[1:]:
        same = (S.group is first.group) if isinstance(first, Subgroup) else (S.gqp is first.gqp)
        if not same or type(S) is not type(first):
            raise GroupError("family members have different parents")


def is_general_position(family: list, ambient=None) -> tuple[bool, GPFamily | None]:
    """Leave-one-out test: each meet of all-but-one strictly contains the full meet.

    Works for dense and symbolic subgroups alike.  Returns the certified
    family when the answer is yes.
    """
    if not family:
        raise ValueError("empty family")
    _check_parents(family)
    whole = ambient if ambient is not None else _whole_like(family[0])
    full = _meet(family, whole)
    witnesses = []
    for i in range(len(family)):
        L = _meet(family[:i] + family[i + 1:], whole)
        if L.order == full.order:
            return False, None
        witnesses.append(L.witness_outside(full))
    return True, GPFamily(list(family), witnesses)


def subset_meets_distinct(family: list, ambient=None) -> bool:
    """Independent test: all 2^k subset intersections are pairwise different."""
    if not family:
        raise ValueError("empty family")
    if len(family) > 12:
        raise CapExceeded("subset test limited to 12 members")
    _check_parents(family)
    whole = ambient if ambient is not None else _whole_like(family[0])
    seen = set()
    k = len(family)
    for mask in range(1 << k):
        M = whole
        for i in range(k):
            if (mask >> i) & 1:
                M = M & family[i]
        key = M.bits if isinstance(M, Subgroup) else M
        if key in seen:
            return False
        seen.add(key)
    return True


def gp_search(cands: list, whole, bound=None, allowed=None, deadline=None):
    """Largest general-position family drawn from ``cands`` (in list order).

    Families are strictly increasing index sequences.  Every extension must
    shrink the running meet and keep the family in general position; a
    subfamily of a general-position family is again in general position, so
    checking each prefix is enough.  ``bound(meet)`` caps how many further
    members can follow (default: Omega of the meet's order).  ``allowed``
    may veto an index given the chosen prefix.

    Returns ``(indices, nodes, timed_out)``.
    """
    if bound is None:
        cache: dict[int, int] = {}

        def bound(M):
            n = M.order
            r = cache.get(n)
            if r is None:
                r = cache[n] = big_omega(n)
            return r

    best: list[int] = []
    nodes = 0
    work = 0  # candidates examined; the clock is read every 64 of them
    timed_out = False

    def dfs(chosen, loo, meet, first):
        nonlocal best, nodes, work, timed_out
        nodes += 1
        if len(chosen) > len(best):
            best = list(chosen)
        d = len(chosen) + 1
        for idx in range(first, len(cands)):
            work += 1
            if deadline is not None and work % 64 == 0 and time.monotonic() > deadline:
                timed_out = True
                return
            if allowed is not None and not allowed(idx, chosen):
                continue
            A = cands[idx]
            new_meet = meet & A
            if new_meet.order == meet.order:
                continue
            if d + bound(new_meet) <= len(best):
                continue
            new_loo = [L & A for L in loo]
            if any(L.order == new_meet.order for L in new_loo):
                continue
            new_loo.append(meet)
            chosen.append(idx)
            dfs(chosen, new_loo, new_meet, idx + 1)
            chosen.pop()
            if timed_out:
                return

    dfs([], [], whole, 0)
    return best, nodes, timed_out


def md_search(G: FiniteGroup, timeout: float | None = None, maximal: list | None = None) -> SearchResult:
    """MaxDim(G): largest general-position family of maximal subgroups."""
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    if G.order == 1:
        return SearchResult(0, "exact", [], 0, 0.0)
    cands = maximal if maximal is not None else maximal_subgroups(G)
    best, nodes, timed_out = gp_search(cands, G.whole, deadline=deadline)
    fam = [cands[i] for i in best]
    return SearchResult(len(fam), "lower_bound" if timed_out else "exact", fam, nodes,
                        time.monotonic() - start)


def _upper_covers(subs: list) -> list[list[int]]:
    """For each subgroup, the indices of its minimal proper overgroups."""
    covers = []
    for S in subs:
        above = [j for j, C in enumerate(subs) if C.order > S.order and S <= C]
        covers.append([j for j in above
                       if not any(subs[k].order < subs[j].order and subs[k] <= subs[j]
                                  for k in above)])
    return covers


def largest_gp_family(G: FiniteGroup, ambient: Subgroup | None = None,
                      deadline: float | None = None, irreducible: bool = True) -> SearchResult:
    """Largest general-position family of arbitrary proper subgroups of ``ambient``.

    If members A_1..A_r are in general position, the traces of A_{d+1}..A_r on
    the meet T of A_1..A_d are in general position inside T.  So the best
    family inside T bounds what can follow; those values are memoised per
    subgroup and computed recursively on demand.

    With ``irreducible`` the members inside T are restricted to subgroups with
    exactly one upper cover below T.  Nothing is lost: pick x_i in the meet of
    the other members but outside A_i, and enlarge A_i to a subgroup of T
    maximal among those avoiding x_i.  The x_j still witness general position,
    and a subgroup maximal with respect to avoiding an element has a unique
    upper cover.
    """
    start = time.monotonic()
    subs = all_subgroups(G)
    covers = _upper_covers(subs) if irreducible else None
    memo: dict[int, tuple[list, bool]] = {}

    def solve(T: Subgroup):
        hit = memo.get(T.bits)
        if hit is not None:
            return hit
        if T.order == 1:
            memo[T.bits] = ([], False)
            return memo[T.bits]
        if covers is None:
            cands = [S for S in subs if S.bits != T.bits and S <= T]
        else:
            cands = [S for S, cv in zip(subs, covers) if S.bits != T.bits and S <= T
                     and sum(1 for j in cv if subs[j] <= T) == 1]

        def bound(M):
            return len(solve(M)[0])

        best, _, timed_out = gp_search(cands, T, bound=bound, deadline=deadline)
        memo[T.bits] = ([cands[i] for i in best], timed_out)
        return memo[T.bits]

    top = ambient if ambient is not None else G.whole
    fam, timed_out = solve(top)
    timed_out = timed_out or any(t for _, t in memo.values())
    return SearchResult(len(fam), "lower_bound" if timed_out else "exact", fam, len(memo),
                        time.monotonic() - start)


# irredundant sequences and m


def is_irredundant(G: FiniteGroup, seq: list) -> bool:
    """Every element lies outside the subgroup generated by the others."""
    idx = [G.idx(g) for g in seq]
    whole = closure(G, idx)
    for i in range(len(idx)):
        rest = closure(G, idx[:i] + idx[i + 1:])
        if rest.bits == whole.bits:
            return False
    return True


def m_bruteforce(G: FiniteGroup, target: Subgroup | None = None,
                 timeout: float | None = None, brute_cap: int = BRUTE_CAP) -> SearchResult:
    """Longest irredundant sequence generating ``target`` (default G).

    Candidates are one generator per cyclic subgroup (swapping a generator
    for another generator of the same cyclic subgroup changes no closure).
    For a partial sequence with closure C and leave-one-out closures L_h, a
    new element g keeps it irredundant iff g is outside C and
    <L_h, g> != <C, g> for every h.  So what can follow depends only on the
    state (C, {L_h}), and a state is expanded at most once: its first
    expansion already found every completion beating the best length known
    then, and that length only grows.

    Depth + Omega(|target : C|) bounds every extension (a strict chain).
    For the whole group the chain is taken modulo the Frattini subgroup: an
    irredundant generating sequence stays one in G/Phi(G), and elements of
    Phi(G) never occur in it.

    Irredundancy does not depend on the order, and conjugating a sequence
    keeps it irredundant and generating.  So with the classes of cyclic
    subgroups in a fixed order, the member from the earliest class can be
    taken to be that class's representative, and earlier classes are left
    out of its branch (a branch whose pool cannot generate is skipped).
    """
    if G.order > brute_cap:
        raise CapExceeded(f"{G.spec}: m brute force refused above order {brute_cap}")
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    T = target if target is not None else G.whole
    phi = None
    if T.order == G.order and G.order > 1:
        try:
            phi = frattini(G)
        except CapExceeded:
            phi = None
    cyc = [C for C in cyclic_subgroups(G)
           if C.gens and C <= T and (phi is None or not C <= phi)]
    cands = [C.gens[0] for C in cyc]
    tord = T.order
    lifted: dict[int, int] = {}

    def room(S: Subgroup) -> int:
        # how many more members an irredundant sequence through S can have
        if phi is None:
            return big_omega(tord // S.order)
        r = lifted.get(S.bits)
        if r is None:
            r = lifted[S.bits] = big_omega(tord // closure(G, phi.gens, start=S).order)
        return r

    joins: dict = {}

    def join(S: Subgroup, g: int) -> Subgroup:
        key = (S.bits, g)
        J = joins.get(key)
        if J is None:
            J = joins[key] = closure(G, [g], start=S)
        return J

    best: list[int] | None = None
    seen: set = set()
    nodes = 0
    timed_out = False

    def dfs(chosen, cur, loo, pool):
        nonlocal best, nodes, timed_out
        nodes += 1
        if deadline is not None and nodes % 256 == 0 and time.monotonic() > deadline:
            timed_out = True
            return
        if cur.bits == T.bits:
            if best is None or len(chosen) > len(best):
                best = list(chosen)
            return
        d = len(chosen) + 1
        for g in pool:
            if (cur.bits >> g) & 1:
                continue
            new_cur = join(cur, g)
            if best is not None and d + room(new_cur) <= len(best):
                continue
            new_loo = []
            for L in loo:
                L2 = join(L, g)
                if L2.bits == new_cur.bits:
                    break
                new_loo.append(L2)
            else:
                new_loo.append(cur)
                key = (new_cur.bits, frozenset(L.bits for L in new_loo))
                if key in seen:
                    continue
                seen.add(key)
                chosen.append(g)
                dfs(chosen, new_cur, new_loo, pool)
                chosen.pop()
                if timed_out:
                    return

    if T.order < G.order:
        dfs([], G.trivial, [], cands)
    else:
        # a shared seen set stays sound: later branches have smaller pools
        for k, (rep, pool) in enumerate(_class_pools(G, cyc)):
            if closure(G, pool).bits != T.bits:
                continue
            if best is not None and 1 + room(join(G.trivial, rep)) <= len(best):
                continue
            seen.add((join(G.trivial, rep).bits, frozenset([1])))
            dfs([rep], join(G.trivial, rep), [G.trivial], pool)
            if timed_out:
                break
    best = best or []
    seq = [G.elements[i] for i in best]
    return SearchResult(len(best), "lower_bound" if timed_out else "exact", seq, nodes,
                        time.monotonic() - start)


def _class_pools(G: FiniteGroup, cyc: list[Subgroup]) -> list:
    """(representative, pool) per conjugacy class of the given cyclic subgroups.

    Classes of larger element order come first, so a branch that needs
    elements from an earlier class is cut by the generation test.
    """
    where = {C.bits: i for i, C in enumerate(cyc)}
    cls = [-1] * len(cyc)
    classes = []
    for i, C in enumerate(cyc):
        if cls[i] >= 0:
            continue
        cls[i] = len(classes)
        orbit = [C]
        for X in orbit:
            for g in G.gen_idx:
                Y = conjugate(X, g)
                j = where.get(Y.bits)
                if j is not None and cls[j] < 0:
                    cls[j] = cls[i]
                    orbit.append(Y)
        classes.append([cyc[where[X.bits]] for X in orbit])
    order = sorted(range(len(classes)),
                   key=lambda c: (-classes[c][0].order, len(classes[c]), c))
    out = []
    for pos, c in enumerate(order):
        pool = [X.gens[0] for d in order[pos:] for X in classes[d]]
        out.append((classes[c][0].gens[0], pool))
    return out


def m_soluble(G: FiniteGroup) -> int:
    """Number of complemented factors in a chief series (soluble groups only).

    G_{q,p} above the subgroup cap goes through its structured chief series.
    """
    gq = G.meta.get("gqp")
    if gq is not None and G.order > SUBGROUPS_CAP:
        from .gqp import m_gqp

        return m_gqp(gq).m
    if not is_soluble(G):
        raise GroupError(f"{G.spec} is not soluble")
    return chief_series(G).complemented_count


def conjugacy_class_reps(G: FiniteGroup, subs: list[Subgroup]) -> list[Subgroup]:
    seen: set[int] = set()
    reps = []
    for S in subs:
        if S.bits in seen:
            continue
        reps.append(S)
        orbit = [S]
        seen.add(S.bits)
        for X in orbit:
            for g in G.gen_idx:
                Y = conjugate(X, g)
                if Y.bits not in seen:
                    seen.add(Y.bits)
                    orbit.append(Y)
    return reps


def i_bruteforce(G: FiniteGroup, timeout: float | None = None) -> SearchResult:
    """max m(H) over subgroups H, one subgroup per conjugacy class."""
    start = time.monotonic()
    deadline = None if timeout is None else start + timeout
    reps = conjugacy_class_reps(G, all_subgroups(G))
    reps.sort(key=lambda S: (-S.order, S.key))
    best = SearchResult(0, "exact", [])
    status = "exact"
    for S in reps:
        if big_omega(S.order) <= best.value:
            continue
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        r = m_bruteforce(G, target=S, timeout=left)
        if r.status != "exact":
            status = "lower_bound"
        if r.value > best.value:
            best = r
    return SearchResult(best.value, status, best.witness, 0, time.monotonic() - start)


# general-position families beyond maximal subgroups


@dataclass
class AbelianFamilyReport:
    group: str
    largest_family: int
    m: int
    family: list
    ok: bool
    status: str


def lemma24_check(H: FiniteGroup, timeout: float | None = None) -> AbelianFamilyReport:
    """Largest general-position family of subgroups of an abelian group versus m(H)."""
    gg = H.gen_idx
    if any(H.mul_idx(a, b) != H.mul_idx(b, a) for a in gg for b in gg):
        raise GroupError(f"{H.spec} is not abelian")
    deadline = None if timeout is None else time.monotonic() + timeout
    fam = largest_gp_family(H, deadline=deadline)
    m = m_bruteforce(H).value
    if fam.witness:
        ok_gp, _ = is_general_position(fam.witness)
        if not ok_gp:
            raise AssertionError("search returned a family not in general position")
    return AbelianFamilyReport(H.spec, fam.value, m, fam.witness, fam.value <= m, fam.status)


@dataclass
class SupplementFamilyReport:
    group: str
    dim: int
    supplements: int
    families_checked: int
    largest: int
    shape_violations: list = field(default_factory=list)
    top_violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.shape_violations
            and not self.top_violations
            and self.largest <= self.dim + 1
        )


def lemma22_check(G: FiniteGroup) -> SupplementFamilyReport:
    """Check intersections of general-position families of V-supplements in V x| <h>.

    For every such family of size up to dim + 2: the meet is W x| K with W an
    F-subspace and K trivial or a conjugate of <h>; the size is at most
    dim + 1; and at size dim + 1 some all-but-one meet is a conjugate of <h>
    while the full meet is trivial.
    """
    if G.meta.get("kind") != "fieldmod":
        raise GroupError("lemma22_check needs a fieldmod group")
    act, dim = G.meta["act"], G.meta["dim"]
    F = G.meta["field"]
    h_order = F.size - 1
    el, ix = G.elements, G.index
    V = 0
    for i, x in enumerate(el):
        if x[1] == 0:
            V |= 1 << i
    sup = [M for M in maximal_subgroups(G) if V & ~M.bits]

    def conj_h_generator(v):
        # (v - v^h, h) generates H^v
        vh = act(v, 1 % h_order)
        return ix[(tuple(F.sub(a, b) for a, b in zip(v, vh)), 1 % h_order)]

    vectors = [x[0] for x in el if x[1] == 0]
    conj_gens = [conj_h_generator(v) for v in vectors]

    def is_conj_h(T: Subgroup) -> bool:
        return T.order == h_order and any((T.bits >> g) & 1 for g in conj_gens)

    def shape_ok(T: Subgroup) -> bool:
        W = T.bits & V
        for i in iter_bits(W):
            v = el[i][0]
            if not (W >> ix[(act(v, 1 % h_order), 0)]) & 1:
                return False
        w_order = W.bit_count()
        if T.order == w_order:
            return True
        if T.order != w_order * h_order:
            return False
        return any((T.bits >> g) & 1 for g in conj_gens)

    report = SupplementFamilyReport(G.spec, dim, len(sup), 0, 0)
    whole = G.whole

    def dfs(chosen, loo, meet, first):
        report.families_checked += 1
        r = len(chosen)
        report.largest = max(report.largest, r)
        if r and not shape_ok(meet):
            report.shape_violations.append([sup.index(M) for M in chosen])
        if r == dim + 1:
            tops = any(is_conj_h(L) for L in loo)
            if not (tops and meet.order == 1):
                report.top_violations.append([sup.index(M) for M in chosen])
        if r == dim + 2:
            return
        for k in range(first, len(sup)):
            A = sup[k]
            new_meet = meet & A
            if new_meet.order == meet.order:
                continue
            new_loo = [L & A for L in loo]
            if any(L.order == new_meet.order for L in new_loo):
                continue
            new_loo.append(meet)
            chosen.append(A)
            dfs(chosen, new_loo, new_meet, k + 1)
            chosen.pop()

    dfs([], [], whole, 0)
    return report


# reports


@dataclass
class InvariantReport:
    spec: str
    order: int
    m: Value | None = None
    md: Value | None = None
    i: Value | None = None

    def chain_ok(self) -> bool | None:
        vals = [self.m, self.md, self.i]
        if any(v is None or v.status != "exact" for v in vals):
            return None
        return self.m.value <= self.md.value <= self.i.value


def compute_invariants(G: FiniteGroup, which=("m", "md", "i"), mode: str = "brute",
                       timeout: float | None = None) -> InvariantReport:
    rep = InvariantReport(G.spec, G.order)
    fmt = G.fmt
    if "m" in which:
        t = time.monotonic()
        if mode == "chief":
            rep.m = Value(m_soluble(G), "exact", {"route": "chief_series"})
        else:
            r = m_bruteforce(G, timeout=timeout)
            rep.m = Value(r.value, r.status, {"sequence": [fmt(x) for x in r.witness]})
        rep.m.elapsed_ms = 1000 * (time.monotonic() - t)
    if "md" in which:
        t = time.monotonic()
        r = md_search(G, timeout=timeout)
        cert = {"family": [S.serialize() for S in r.witness]}
        if r.witness:
            cert["witnesses"] = [fmt(x) for x in gp_witnesses(r.witness)]
        rep.md = Value(r.value, r.status, cert)
        rep.md.elapsed_ms = 1000 * (time.monotonic() - t)
    if "i" in which:
        t = time.monotonic()
        r = i_bruteforce(G, timeout=timeout)
        rep.i = Value(r.value, r.status, {"sequence": [fmt(x) for x in r.witness]})
        rep.i.elapsed_ms = 1000 * (time.monotonic() - t)
    return rep
