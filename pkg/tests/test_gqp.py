import random
from itertools import combinations

import pytest

from maxdim.constructors import SpecError
from maxdim.gqp import (
    GqpGroup,
    base_subgroup_series,
    conj_meet,
    delta,
    invariants_gqp,
    m_gqp,
    md_gqp,
    nullspace,
    sym_contains,
    sym_equal,
    sym_intersect,
    sym_order,
    to_dense,
    v_is_irreducible,
)
from maxdim.invariants import is_general_position, subset_meets_distinct
from maxdim.lattice import maximal_subgroups


@pytest.fixture(scope="module")
def g23():
    gq = GqpGroup(2, 3)
    return gq, gq.as_finite_group()


def test_parameters():
    gq = GqpGroup(3, 7)
    assert gq.c == 2 and pow(gq.c, 3, 7) == 1
    assert gq.H.order == 81 and len(gq.h_maximal) == 4
    assert GqpGroup(5, 11).c == 3
    assert GqpGroup(2, 3).c == 2
    for bad in ((3, 5), (4, 5), (2, 9)):
        with pytest.raises(SpecError):
            GqpGroup(*bad)


def test_action_examples():
    gq = GqpGroup(2, 3)
    assert gq.action((1, 2), gq.h_identity) == (1, 2)
    # c in the first coordinate, 1 in the second, then the flip
    assert gq.action((1, 0), ((1, 0), 1)) == (0, 2)


@pytest.mark.parametrize("p,q", [(2, 3), (3, 7), (5, 11)])
def test_action_is_linear_right_action(p, q):
    gq = GqpGroup(p, q)
    rnd = random.Random(p * q)
    H = gq.H.elements
    n = 10_000 if p < 5 else 2_000
    for _ in range(n):
        v = tuple(rnd.randrange(q) for _ in range(p))
        w = tuple(rnd.randrange(q) for _ in range(p))
        h1, h2 = rnd.choice(H), rnd.choice(H)
        a = rnd.randrange(q)
        assert gq.action(v, gq.h_mul(h1, h2)) == gq.action(gq.action(v, h1), h2)
        lhs = gq.action(tuple((a * x + y) % q for x, y in zip(v, w)), h1)
        rhs = tuple((a * x + y) % q for x, y in zip(gq.action(v, h1), gq.action(w, h1)))
        assert lhs == rhs


@pytest.mark.parametrize("p,q", [(2, 3), (3, 7), (5, 11)])
def test_orbit_of_e1_spans(p, q):
    gq = GqpGroup(p, q)
    orbit = {gq.action(gq.unit(0), h) for h in gq.H.elements}
    assert nullspace([list(w) for w in orbit], p, q) == []
    assert v_is_irreducible(gq)


@pytest.mark.parametrize("p,q", [(2, 3), (3, 7), (5, 11)])
def test_centralizer_matches_scan(p, q):
    gq = GqpGroup(p, q)
    vs = [tuple(v) for v in gq.vectors()]
    if p == 5:
        vs = random.Random(5).sample(vs, 150) + [(0,) * 5, (1, 1, 1, 1, 1), (1, 3, 9, 5, 4)]
    for d in vs:
        scan = 0
        for i, h in enumerate(gq.H.elements):
            if gq.action(d, h) == d:
                scan |= 1 << i
        assert gq.centralizer(d) == scan, d


def test_irreducibility_exhaustive_small():
    assert v_is_irreducible(GqpGroup(2, 3))
    assert v_is_irreducible(GqpGroup(3, 7))


def test_group_multiplication_semidirect(g23):
    gq, G = g23
    rnd = random.Random(1)
    for _ in range(500):
        x, y, z = (rnd.choice(G.elements) for _ in range(3))
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, G.inv(x)) == G.identity


def test_delta_examples():
    assert delta((0, 0), (1, 0)) == {2}
    assert delta((0, 0, 0), (1, 1, 1)) == set()
    assert delta((1, 2, 3), (1, 5, 3)) == {1, 3}
    with pytest.raises(ValueError):
        delta((1, 1), (1, 1))


def test_conj_meet_examples():
    gq = GqpGroup(2, 3)
    assert conj_meet(gq, [(1, 2)]).order == 8
    assert conj_meet(gq, [(0, 0), (1, 0)]).order == 2
    gq = GqpGroup(3, 7)
    assert conj_meet(gq, [(0, 0, 0)]).order == 81
    assert conj_meet(gq, [(0, 0, 0), (1, 0, 0)]).order == 9


def _pair_rule(gq, v1, v2):
    n = conj_meet(gq, [v1, v2]).order
    d = delta(v1, v2)
    return n == gq.p ** len(d) if d else n <= gq.p


def test_pair_meets_random_p5():
    gq = GqpGroup(5, 11)
    rnd = random.Random(5)
    for _ in range(1000):
        v1 = tuple(rnd.randrange(11) for _ in range(5))
        v2 = tuple(rnd.randrange(11) for _ in range(5))
        if rnd.random() < 0.5:  # force some agreement
            k = rnd.randrange(1, 5)
            v2 = v1[:k] + v2[k:]
        if v1 != v2:
            assert _pair_rule(gq, v1, v2)


def test_conj_meet_matches_dense(g23):
    gq, G = g23
    rnd = random.Random(3)
    vs = [tuple(v) for v in gq.vectors()]
    for _ in range(200):
        pick = rnd.sample(vs, rnd.randint(1, 4))
        dense = G.whole
        for v in pick:
            dense = dense & to_dense(gq.conj_H(v), G)
        assert to_dense(conj_meet(gq, pick), G) == dense


def test_symbolic_examples(g23):
    gq, G = g23
    whole = gq.full_v(gq.H_bits)
    A = gq.affine((1, 0), gq.centralizer((1, 1)))
    assert sym_intersect(whole, A) == A
    K = gq.centralizer((1, 1))
    d = (1, 1)  # fixed by K
    assert sym_equal(gq.affine((0, 0), K), gq.affine(d, K))
    assert set(gq.affine((0, 0), K).elements()) == set(gq.affine(d, K).elements())
    fam = gq.lemma33_family()
    meet = fam.subgroups[0]
    for S in fam.subgroups[1:]:
        meet = meet & S
    # e_1 and e_2 agree nowhere, so the meet has order at most p
    dense = to_dense(fam.subgroups[0], G) & to_dense(fam.subgroups[1], G)
    assert sym_order(meet) == dense.order == 2
    gq3 = GqpGroup(3, 7)
    fam3 = gq3.lemma33_family().subgroups
    assert sym_order(fam3[0] & fam3[1] & fam3[2]) == 1


def test_canonical_form_is_set_equality(g23):
    gq, G = g23
    subs = [gq.H_bits] + [X.bits for X in gq.h_maximal] + [gq.centralizer(d) for d in gq.vectors()]
    seen = {}
    for K in set(subs):
        for v in gq.vectors():
            S = gq.affine(v, K)
            key = frozenset(S.elements())
            if key in seen:
                assert seen[key] == S
            seen[key] = S
            assert sym_order(S) == len(key)


def test_symbolic_membership(g23):
    gq, G = g23
    mx = gq.maximal_subgroups_structural()
    for S in mx:
        dense = to_dense(S, G)
        for i, g in enumerate(G.elements):
            assert sym_contains(S, g) == (i in dense)


def test_structural_maximal_counts():
    gq = GqpGroup(2, 3)
    assert len(gq.maximal_subgroups_structural()) == 12
    assert GqpGroup(3, 7).count_maximal_subgroups() == 347
    assert len(GqpGroup(3, 7).maximal_subgroups_structural()) == 347
    assert GqpGroup(5, 11).count_maximal_subgroups() == 161_057


def test_structural_maximal_match_generic(g23):
    gq, G = g23
    structural = {to_dense(S, G).bits for S in gq.maximal_subgroups_structural()}
    assert structural == {M.bits for M in maximal_subgroups(G)}


@pytest.mark.parametrize("p,q", [(2, 3), (3, 7)])
def test_complements_pairwise_distinct(p, q):
    gq = GqpGroup(p, q)
    reps = {gq.conj_H(v) for v in gq.vectors()}
    assert len(reps) == q**p
    # no nonzero vector is fixed by all of H
    assert gq.fixed_space(gq.H_bits) == []


@pytest.mark.parametrize("p,q,size", [(2, 3, 2), (3, 7, 3), (5, 11, 5)])
def test_coordinate_family(p, q, size):
    gq = GqpGroup(p, q)
    fam = gq.lemma33_family()
    assert len(fam) == size
    assert is_general_position(fam.subgroups)[0]
    assert subset_meets_distinct(fam.subgroups)
    for i, w in enumerate(fam.witnesses):
        for j, S in enumerate(fam.subgroups):
            assert sym_contains(S, w) == (i != j)


def test_md_gqp_examples():
    for p, q in ((2, 3), (3, 7), (3, 13)):
        r = md_gqp(GqpGroup(p, q), budget=300)
        assert (r.value, r.status) == (3, "exact"), (p, q)
        assert is_general_position(r.family)[0]


def test_md_gqp_symmetry_free_agrees():
    assert md_gqp(GqpGroup(2, 3), symmetry=False).value == 3
    assert md_gqp(GqpGroup(3, 7), symmetry=False, budget=600).value == 3


def test_md_gqp_budget_gives_lower_bound():
    r = md_gqp(GqpGroup(5, 11), budget=0.5)
    assert r.status == "lower_bound"
    assert is_general_position(r.family)[0] if r.family else True


def test_m_gqp_and_base_series():
    r = m_gqp(GqpGroup(3, 7))
    assert r.m == 3 and r.v_factor_complemented and r.h_part == 2
    r5 = m_gqp(GqpGroup(5, 11))
    assert r5.m == 3 and r5.h_route.startswith("log")
    b = base_subgroup_series(GqpGroup(2, 3))
    assert b.m == 4 and b.checked_by_enumeration
    assert b.factor_orders == [3, 3, 2, 2]


def test_invariants_gqp_reports():
    r = invariants_gqp(GqpGroup(2, 3))
    assert (r.m, r.md, r.i) == (3, 3, 4)
    assert (r.m_status, r.md_status, r.i_status) == ("exact",) * 3
    r = invariants_gqp(GqpGroup(3, 7))
    assert (r.m, r.md, r.i) == (3, 3, 6)
    assert (r.md_status, r.i_status) == ("exact", "lower_bound")
    r = invariants_gqp(GqpGroup(5, 11))
    assert (r.m, r.md) == (3, 5) and r.md_status == "lower_bound"


def test_symbolic_pairs_match_dense(g23):
    gq, G = g23
    mx = gq.maximal_subgroups_structural()
    dense = [to_dense(S, G) for S in mx]
    for (a, A), (b, B) in combinations(list(zip(mx, dense)), 2):
        M = sym_intersect(a, b)
        assert to_dense(M, G) == (A & B)
        assert sym_order(M) == (A & B).order
        assert sym_equal(a, b) == (A == B)
