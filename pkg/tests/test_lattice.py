import random
from math import prod

import pytest

import oracles
from maxdim.catalog import corpus_specs
from maxdim.constructors import construct, cycle
from maxdim.gqp import GqpGroup
from maxdim.group import CapExceeded, GroupError, closure, conjugate, intersect, is_normal
from maxdim.lattice import (
    all_subgroups,
    chief_series,
    frattini,
    maximal_subgroups,
    minimal_normal_subgroups,
    normal_subgroups,
    quotient,
    to_dot,
)
from maxdim.structure import is_soluble

ORACLE_SPECS = ["cyclic:12", "abelian:2,2", "abelian:2,4", "sym:3", "dihedral:4", "dihedral:6",
                "quaternion:8", "alt:4", "sym:4", "semidirect:7,3,2", "fieldmod:2^2,1",
                "fieldmod:3,2", "heisenberg:3", "direct(sym:3,cyclic:3)"]


def is_prime_power(n):
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def test_closure_examples():
    S3 = construct("sym:3")
    assert closure(S3, []).order == 1
    assert S3.subgroup([cycle(3, 1, 2), cycle(3, 1, 2, 3)]).order == 6
    V = construct("abelian:2,2")
    assert V.subgroup([(1, 0)]).order == 2


def test_intersect_conjugate_basics():
    S4 = construct("sym:4")
    A = S4.subgroup([cycle(4, 1, 2, 3)])
    assert intersect(A, A) == A
    assert conjugate(A, 0) == A
    B = construct("sym:3").whole
    with pytest.raises(GroupError):
        intersect(A, B)


def test_point_stabiliser_complement_meets_conjugate():
    gq = GqpGroup(2, 3)
    G = gq.as_finite_group()
    H = G.subgroup([(gq.zero, h) for h in gq.H.generators])
    assert H.order == 8
    e1 = G.idx((gq.unit(0), gq.h_identity))
    assert intersect(H, conjugate(H, e1)).order == 2


def test_maximal_examples():
    C12 = construct("cyclic:12")
    assert sorted(M.order for M in maximal_subgroups(C12)) == [4, 6]
    assert [M.order for M in maximal_subgroups(construct("abelian:2,2"))] == [2, 2, 2]
    G = construct("gqp:2,3")
    assert len(maximal_subgroups(G)) == 12


def test_all_subgroups_examples():
    assert len(all_subgroups(construct("cyclic:5"))) == 2
    assert len(all_subgroups(construct("sym:3"))) == 6
    assert len(all_subgroups(construct("abelian:2,2"))) == 5
    with pytest.raises(CapExceeded):
        all_subgroups(construct("cyclic:201"))


@pytest.mark.parametrize("spec", ORACLE_SPECS)
def test_all_subgroups_match_oracle(spec):
    G = construct(spec)
    subs = all_subgroups(G)
    assert len({S.bits for S in subs}) == len(subs)
    assert {frozenset(S.payloads()) for S in subs} == oracles.subgroups(G)
    for S in subs:
        assert G.order % S.order == 0


@pytest.mark.parametrize("spec", ORACLE_SPECS)
def test_maximal_match_oracle(spec):
    G = construct(spec)
    assert {frozenset(M.payloads()) for M in maximal_subgroups(G)} == set(oracles.maximal(G))


def test_maximal_against_lattice_up_to_100():
    for spec in corpus_specs(100):
        G = construct(spec)
        if G.order == 1:
            continue
        subs = [S for S in all_subgroups(G) if S.order < G.order]
        expect = {S.bits for S in subs if not any(S < T for T in subs)}
        assert {M.bits for M in maximal_subgroups(G)} == expect, spec


def test_frattini_examples():
    assert frattini(construct("abelian:2,2")).order == 1
    assert frattini(construct("dihedral:4")).order == 2
    gq = GqpGroup(3, 7)
    F = frattini(gq.H)
    assert F.order == 9
    expect = {x for x in gq.H.elements if x[1] == 0 and sum(x[0]) % 3 == 0}
    assert set(F.payloads()) == expect


@pytest.mark.parametrize("spec", [s for s in corpus_specs(48)][::3])
def test_frattini_elements_are_non_generators(spec):
    G = construct(spec)
    F = frattini(G)
    rnd = random.Random(spec)
    for _ in range(20):
        gens = rnd.sample(range(G.order), min(G.order, 4))
        gens += [x for x in F.members if x not in gens][:1]
        if closure(G, gens).order != G.order:
            continue
        for x in F.members:
            if x in gens:
                rest = [g for g in gens if g != x]
                assert closure(G, rest).order == G.order


def test_minimal_normal_and_quotient():
    S3 = construct("sym:3")
    mn = minimal_normal_subgroups(S3)
    assert [N.order for N in mn] == [3]
    Q = quotient(S3, mn[0])
    assert Q.order == 2
    assert len(minimal_normal_subgroups(construct("abelian:2,2"))) == 3
    with pytest.raises(GroupError):
        quotient(S3, S3.subgroup([cycle(3, 1, 2)]))


def test_quotient_is_homomorphic_image():
    G = construct("sym:4")
    N = [N for N in normal_subgroups(G) if N.order == 4][0]
    Q = quotient(G, N)
    assert Q.order == 6
    for a in range(G.order):
        for b in range(0, G.order, 5):
            assert Q.project(G.mul_idx(a, b)) == Q.mul_idx(Q.project(a), Q.project(b))


def test_chief_series_examples():
    assert chief_series(construct("cyclic:4")).summary() == [(2, True), (2, False)]
    cs = chief_series(construct("sym:4"))
    assert cs.complemented_count == 3
    assert sorted(f.order for f in cs.factors) == [2, 3, 4]
    assert chief_series(construct("gqp:2,3")).complemented_count == 3


def _check_chief(G, cs):
    assert cs.chain[0].order == G.order and cs.chain[-1].order == 1
    assert prod(f.order for f in cs.factors) == G.order
    normals = normal_subgroups(G)
    for upper, lower in zip(cs.chain, cs.chain[1:]):
        assert is_normal(upper) and lower < upper
        assert not any(lower < N < upper for N in normals)
    if is_soluble(G):
        assert all(is_prime_power(f.order) for f in cs.factors)
    for f in cs.factors:
        if f.complemented:
            U = f.complement
            assert f.lower <= U and (U & f.upper) == f.lower
            assert U.order * f.upper.order == G.order * f.lower.order


def test_chief_series_properties_and_tie_break_independence():
    for spec in corpus_specs(100):
        G = construct(spec)
        cs = chief_series(G)
        _check_chief(G, cs)
        rnd = random.Random(spec)
        for _ in range(2):
            other = chief_series(G, rng=rnd)
            _check_chief(G, other)
            assert other.complemented_count == cs.complemented_count, spec


def test_to_dot():
    dot = to_dot(construct("sym:3"))
    assert dot.startswith("digraph") and dot.count("label") == 6
    with pytest.raises(CapExceeded):
        to_dot(construct("sym:5"))
