from __future__ import annotations

from itertools import product
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjoint_sections.rootsys import build_root_system, pairing, weyl_group_degrees
from adjoint_sections.weyl import (
    InvalidTripleError,
    OrbitCapExceeded,
    WeylElement,
    all_generators_involutions,
    check_transitivity,
    dominant_representative,
    minuscule_orbit,
    orbit,
    orbit_tuples,
    simple_reflection,
    stabilizer_of_weight,
    subgroup_order,
    triple_rotation,
    weyl_order,
    zero_sum_triples,
    proper_zero_sum_quadruples,
)
from adjoint_sections.rootsys import all_types

SMALL_TYPES = [t for t in all_types() if t[1] <= 6]


def brute_force_group(rs, limit=2000):
    """Closure of the simple reflection matrices (independent of BFS on weights)."""
    gens = [simple_reflection(rs, i) for i in range(rs.rank)]
    seen = {WeylElement.identity(rs.rank).matrix}
    frontier = list(seen)
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                p = (WeylElement(m, None) * g).matrix
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        frontier = nxt
        assert len(seen) <= limit
    return [WeylElement(m, None) for m in seen]


def test_minuscule_orbit_sizes():
    assert len(minuscule_orbit(build_root_system("E", 6), 1)) == 27
    assert len(minuscule_orbit(build_root_system("E", 7), 7)) == 56
    assert len(minuscule_orbit(build_root_system("A", 1), 1)) == 2


def test_zero_orbit():
    rs = build_root_system("E", 8)
    assert len(orbit(rs, (0,) * 8)) == 1


def test_orbit_cap():
    with pytest.raises(OrbitCapExceeded):
        orbit(build_root_system("E", 6), build_root_system("E", 6).rho(), cap=100)


def test_orbit_rejects_wrong_rank():
    with pytest.raises(ValueError):
        orbit(build_root_system("A", 2), (1, 0, 0))


@pytest.mark.parametrize("typ", [("A", 2), ("G", 2), ("B", 2)])
def test_tuple_orbits_match_brute_force(typ):
    rs = build_root_system(*typ)
    group = brute_force_group(rs)
    roots = sorted(rs.short_roots)
    base = (roots[0], roots[1])
    for symmetry, canon in (("ordered", tuple), ("unordered", lambda t: tuple(sorted(t)))):
        expected = {canon(tuple(g(p) for p in base)) for g in group}
        assert set(orbit_tuples(rs, base, symmetry).elements) == expected


def test_witness_sends_base_to_point():
    rs = build_root_system("E", 6)
    orb = orbit(rs, rs.fundamental_weight(1))
    for p in list(orb.elements)[:: 5]:
        w = orb.witness(p)
        assert w(rs.fundamental_weight(1)) == p
        assert WeylElement.from_word(rs, w.word).matrix == w.matrix


def test_weyl_orders():
    assert weyl_order(build_root_system("A", 2)).order == 6
    assert weyl_order(build_root_system("G", 2)).order == 12
    assert weyl_order(build_root_system("E", 6)).order == 51840
    big = weyl_order(build_root_system("E", 8), cap=10**6)
    assert big.provenance == "degrees" and big.order == 696729600


@pytest.mark.parametrize("typ", [t for t in SMALL_TYPES if t[1] <= 4])
def test_weyl_order_matches_degrees(typ):
    rs = build_root_system(*typ)
    assert weyl_order(rs).order == prod(weyl_group_degrees(*typ))


@pytest.mark.parametrize("typ", [("A", 2), ("B", 3), ("C", 3), ("G", 2), ("D", 4), ("F", 4), ("A", 4)])
def test_orbit_stabilizer_for_fundamental_weights(typ):
    rs = build_root_system(*typ)
    w = weyl_order(rs).order
    for i in range(1, rs.rank + 1):
        varpi = rs.fundamental_weight(i)
        stab = subgroup_order(rs, stabilizer_of_weight(rs, varpi))
        assert len(orbit(rs, varpi)) * stab == w


def test_stabilizer_examples():
    e6 = build_root_system("E", 6)
    gens = stabilizer_of_weight(e6, e6.fundamental_weight(1))
    assert len(gens) == 20  # D5 has 20 positive roots
    a1 = build_root_system("A", 1)
    assert len(stabilizer_of_weight(a1, (1,))) == 0
    b3 = build_root_system("B", 3)
    assert len(stabilizer_of_weight(b3, (0, 0, 0))) == len(b3.positive_roots)


def test_stabilizer_fixes_weight(small_rs):
    varpi = small_rs.highest_short_root
    gens = stabilizer_of_weight(small_rs, varpi)
    assert all(g(varpi) == varpi for g in gens)
    assert all_generators_involutions(gens)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_TYPES), st.lists(st.integers(0, 7), max_size=12))
def test_elements_permute_roots_and_preserve_form(typ, word):
    rs = build_root_system(*typ)
    word = [i % rs.rank for i in word]
    w = WeylElement.from_word(rs, word)
    assert w.permutes_roots(rs)
    assert w.det() in (1, -1)
    roots = sorted(rs.roots)[:4]
    for a, b in product(roots, roots):
        assert rs.inner(w(a), w(b)) == rs.inner(a, b)
    assert (w * w.inverse(rs)).is_identity()


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_TYPES), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_dominant_representative(typ, coords):
    rs = build_root_system(*typ)
    lam = tuple(coords[: rs.rank])
    dom = dominant_representative(rs, lam)
    assert all(x >= 0 for x in dom)
    if rs.rank <= 4:
        assert dom in orbit(rs, lam)


def test_reflection_in_non_simple_root():
    rs = build_root_system("G", 2)
    for beta in rs.roots:
        s = WeylElement.reflection(rs, beta)
        neg = tuple(-x for x in beta)
        assert s(beta) == neg
        assert (s * s).is_identity()
    with pytest.raises(ValueError):
        WeylElement.reflection(rs, (7, 7))


def test_coroot_matrix_is_contragredient():
    rs = build_root_system("B", 3)
    w = WeylElement.from_word(rs, [0, 1, 2, 1])
    m, c = w.matrix, w.coroot_matrix(rs)
    n = rs.rank
    # <w lam, w x> = <lam, x> for lam in X, x in the coweight basis
    for i in range(n):
        for j in range(n):
            assert sum(m[k][i] * c[k][j] for k in range(n)) == int(i == j)


@pytest.mark.parametrize("typ", [("A", 2), ("F", 4), ("E", 6)])
def test_triple_rotation_has_order_three(typ):
    rs = build_root_system(*typ)
    triple = zero_sum_triples(rs.short_roots)[0]
    w = triple_rotation(rs, triple)
    assert (w**3).is_identity() and not w.is_identity()


def test_triple_rotation_rejects_non_triple():
    rs = build_root_system("A", 2)
    a, b = rs.simple_roots
    with pytest.raises(InvalidTripleError):
        triple_rotation(rs, (a, b, a))


def test_zero_sum_triple_counts():
    counts = {("A", 2): 2, ("A", 3): 8, ("A", 4): 20, ("C", 3): 8, ("D", 4): 32, ("F", 4): 32, ("G", 2): 2, ("E", 6): 240}
    for typ, n in counts.items():
        assert len(zero_sum_triples(build_root_system(*typ).short_roots)) == n, typ
    for typ in [("A", 1), ("B", 2), ("B", 5), ("C", 2)]:
        assert zero_sum_triples(build_root_system(*typ).short_roots) == []


def test_e6_e7_weight_tuples():
    e6 = build_root_system("E", 6)
    assert len(zero_sum_triples(minuscule_orbit(e6, 1))) == 45
    e7 = build_root_system("E", 7)
    quads = proper_zero_sum_quadruples(minuscule_orbit(e7, 7))
    assert all(sum(q[k][i] for k in range(4)) == 0 for q in quads for i in range(7))
    assert len([q for q in quads if e7.fundamental_weight(7) in q]) == 45


@pytest.mark.parametrize("typ", [("A", 3), ("C", 3), ("D", 4), ("F", 4), ("G", 2), ("E", 6)])
def test_short_triples_transitive(typ):
    rep = check_transitivity(build_root_system(*typ), "short_triples_sum_zero")
    assert rep.transitive and not rep.vacuous
    assert sum(rep.orbit_sizes) == rep.total_count


def test_short_triples_vacuous_for_b():
    rep = check_transitivity(build_root_system("B", 4), "short_triples_sum_zero")
    assert rep.vacuous and rep.orbit_count == 0


def test_e6_families():
    e6 = build_root_system("E", 6)
    meet = check_transitivity(e6, "e6_weights_meeting_varpi")
    assert meet.total_count == 10 and meet.transitive
    pairs = check_transitivity(e6, "e6_pairs_triple_with_marked")
    assert pairs.total_count == 135 and pairs.transitive
    with pytest.raises(ValueError):
        check_transitivity(build_root_system("E", 7), "e6_weights_meeting_varpi")
    with pytest.raises(ValueError):
        check_transitivity(e6, "no_such_family")


def test_pairing_with_simple_coroots_is_cartan():
    rs = build_root_system("F", 4)
    for i, a in enumerate(rs.simple_roots):
        for j, b in enumerate(rs.simple_roots):
            assert pairing(rs, a, b) == rs.cartan[i][j]
