from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkzherm.fan import (
    IncompleteEnumeration,
    NonGenericDirection,
    Zonotope,
    adjacency_graph,
    check_wall_characterization,
    cotriangulation_for_direction,
    enumerate_chambers,
    enumerate_cotriangles,
    enumerate_tau,
    extreme_rays,
    primitive,
    wall_cotriangles,
    zonotope_contains,
    zonotope_witness,
)
from gkzherm.ratlin import build_system
from conftest import B_2F1, B_F4, HALF
from oracles import brute_cotriangles, brute_cotriangulation, in_open_zonotope

B3 = [[1, 0, 0, -1, 1, -1], [0, 1, 0, -1, -1, 1], [0, 0, 1, 1, -1, -1]]


def test_cotriangles_match_brute_force():
    for B in (B_2F1, B_F4, B3):
        got = {c.indices: c.delta for c in enumerate_cotriangles(B)}
        assert got == brute_cotriangles(B)


def test_2f1_chambers(fan_2f1):
    chambers, graph = fan_2f1
    assert [c.key for c in chambers] == [((0,), (1,)), ((2,), (3,))]
    assert graph.edges == [(0, 1)]
    assert [c.cotriangulation.rank for c in chambers] == [2, 2]


def test_f4_chambers(fan_f4):
    chambers, graph = fan_f4
    keys = [c.key for c in chambers]
    assert keys == [
        ((0, 2), (0, 4), (1, 2), (1, 4)),
        ((0, 3), (0, 5), (1, 3), (1, 5)),
        ((2, 3), (2, 5), (3, 4), (4, 5)),
    ]
    assert graph.edges == [(0, 1), (0, 2), (1, 2)]
    assert all(len(graph.path(i, j)) == 2 for i in range(3) for j in range(3) if i != j)
    assert {c.cotriangulation.rank for c in chambers} == {4}


@pytest.mark.parametrize("B", [B_2F1, B_F4, B3])
def test_chambers_against_sampling_oracle(B):
    chambers = enumerate_chambers(B)
    keys = {c.key for c in chambers}
    d = len(B)
    rng = random.Random(7)
    seen = set()
    for _ in range(300):
        rho = [Fraction(rng.randint(-50, 50)) for _ in range(d)]
        try:
            cotriangulation_for_direction(B, rho)
        except NonGenericDirection:
            continue
        if any(rho):
            seen.add(brute_cotriangulation(B, rho))
    assert seen <= keys
    for ch in chambers:
        assert brute_cotriangulation(B, ch.witness) == ch.key
        assert ch.contains(ch.witness)


def test_rank_identity_every_chamber():
    for B in (B_F4, B3):
        ranks = {c.cotriangulation.rank for c in enumerate_chambers(B)}
        assert len(ranks) == 1


def test_d3_enumeration_is_seed_independent():
    a = enumerate_chambers(B3, seed=0)
    b = enumerate_chambers(B3, seed=12345)
    assert [c.key for c in a] == [c.key for c in b]
    assert [c.witness for c in a] == [c.witness for c in b]
    g = adjacency_graph(B3, a)
    assert g.is_connected()


def test_walls(fan_f4):
    chambers, graph = fan_f4
    for i, j in graph.edges:
        w = graph.wall(i, j)
        I, J = chambers[i].cotriangulation, chambers[j].cotriangulation
        assert check_wall_characterization(B_F4, w, I, J)
        ci, cj = wall_cotriangles(I, J)
        assert ci and cj
        assert chambers[i].contains(w.point, closed=True) and chambers[j].contains(w.point, closed=True)
        assert not chambers[i].contains(w.point)


def test_non_generic_direction():
    with pytest.raises(NonGenericDirection):
        cotriangulation_for_direction(B_F4, (1, 0))
    with pytest.raises(NonGenericDirection):
        cotriangulation_for_direction(B_2F1, (0,))


def test_incomplete_enumeration_detected(fan_f4):
    chambers, _ = fan_f4
    with pytest.raises(IncompleteEnumeration):
        adjacency_graph(B_F4, chambers[:2])


def test_extreme_rays_quadrant():
    assert extreme_rays([(1, 0), (0, 1)], 2) == [(0, 1), (1, 0)]
    assert extreme_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)], 3) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_primitive():
    assert primitive((Fraction(2, 3), Fraction(4, 3))) == (1, 2)
    assert primitive((-6, 0, 9)) == (-2, 0, 3)


# zonotope ---------------------------------------------------------------

@settings(max_examples=100)
@given(st.tuples(st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4)))
def test_zonotope_membership_matches_halfspaces(tau):
    Z = Zonotope.of(B_F4)
    assert zonotope_contains(Z, tau) == in_open_zonotope(B_F4, tau)


@settings(max_examples=60)
@given(st.fractions(-3, 3, max_denominator=6))
def test_zonotope_1d(t):
    assert zonotope_contains(Zonotope.of(B_2F1), (t,)) == (abs(t) < 2)
    assert zonotope_contains(Zonotope.of(B_2F1, HALF), (t,)) == (abs(t) < 1)


def test_zonotope_witness_is_certificate():
    Z = Zonotope.of(B_F4)
    nu = zonotope_witness(Z, (1, 1))
    assert all(0 < x < 1 for x in nu)
    assert tuple(sum(n * b[k] for n, b in zip(nu, Z.generators)) for k in range(2)) == (1, 1)
    assert zonotope_witness(Z, (2, 0)) is None  # boundary


def test_tau_points_2f1():
    Zh = Zonotope.of(B_2F1, HALF)
    assert enumerate_tau(Zh, [HALF]) == [(-HALF,), (HALF,)]


def test_tau_points_f4():
    Zh = Zonotope.of(B_F4, HALF)
    assert enumerate_tau(Zh, [HALF, HALF]) == [(-HALF, -HALF), (HALF, HALF)]
    assert not zonotope_contains(Zh, (HALF, -HALF))
    assert not in_open_zonotope(B_F4, (HALF, -HALF), HALF)


def test_f4_has_no_offset_with_four_points():
    Zh = Zonotope.of(B_F4, HALF)
    for p, q in product(range(6), repeat=2):
        pts = enumerate_tau(Zh, [Fraction(p, 6), Fraction(q, 6)])
        assert len(pts) <= 3


def test_random_systems_cover_oracle():
    rng = random.Random(3)
    done = 0
    while done < 5:
        B = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(2)]
        for r in B:
            r.append(-sum(r))
        try:
            build_system(B, ["0"] * 5)
        except ValueError:
            continue
        done += 1
        assert {c.indices: c.delta for c in enumerate_cotriangles(B)} == brute_cotriangles(B)
        chambers = enumerate_chambers(B)
        assert len({c.cotriangulation.rank for c in chambers}) == 1
        adjacency_graph(B, chambers)
