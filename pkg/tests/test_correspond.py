from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjoint_sections.correspond import (
    CUSPIDAL,
    NODAL,
    CurveModel,
    FiberFunction,
    RelationViolation,
    TorusPoint,
    build_relation_set,
    character_function,
    check_fiber_relations,
    correspondence_c,
    e6_triple_evidence,
    e6_triples_from_quadruples,
    e7_proper_quadruples,
    find_violated_relation,
    identity_point,
    in_kernel_of_c,
    random_point,
    short_triple_evidence,
    solve_torus_point,
    spectral_fiber,
    subscheme_vanishing_check,
    verify_kernel_generation,
    zero_sum_short_triples,
)
from adjoint_sections.reps import minuscule_weights, quasi_minuscule_weights
from adjoint_sections.rootsys import all_types, build_root_system
from adjoint_sections.weyl import WeylElement, minuscule_orbit, zero_sum_triples

SMALL = [t for t in all_types() if t[1] <= 4]


def test_curve_models():
    cusp, node = CurveModel(CUSPIDAL), CurveModel(NODAL)
    assert cusp.op(Fraction(2), Fraction(3)) == 5 and cusp.identity == 0
    assert node.op(Fraction(2), Fraction(3)) == 6 and node.identity == 1
    assert cusp.power(Fraction(2), -3) == -6 and node.power(Fraction(2), -3) == Fraction(1, 8)
    assert node.inverse(Fraction(4)) == Fraction(1, 4)
    with pytest.raises(ValueError):
        CurveModel("smooth")
    with pytest.raises(ValueError):
        TorusPoint(node, (Fraction(0),))


def test_spectral_fiber_examples():
    a1 = build_root_system("A", 1)
    node = CurveModel(NODAL)
    fib = spectral_fiber(a1, minuscule_weights(a1, (1,)), TorusPoint(node, (Fraction(3),)))
    assert fib.as_dict() == {(1,): 3, (-1,): Fraction(1, 3)}
    e = spectral_fiber(a1, quasi_minuscule_weights(a1), identity_point(node, 1))
    assert set(e.at_identity) == {(2,), (-2,), (0,)}
    assert e.has_zero_slot


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.lists(st.integers(0, 3), max_size=6), st.integers(0, 2**32), st.sampled_from([CUSPIDAL, NODAL]))
def test_spectral_fiber_is_w_equivariant(typ, word, seed, kind):
    rs = build_root_system(*typ)
    w = WeylElement.from_word(rs, [i % rs.rank for i in word])
    x = random_point(CurveModel(kind), rs.rank, random.Random(seed))
    wx = x.act(w, rs)
    for mu in rs.short_roots:
        assert wx.evaluate(w(mu)) == x.evaluate(mu)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2**32), st.sampled_from([CUSPIDAL, NODAL]))
def test_negation_is_inversion(typ, seed, kind):
    rs = build_root_system(*typ)
    curve = CurveModel(kind)
    x = random_point(curve, rs.rank, random.Random(seed))
    for mu in rs.short_roots:
        assert curve.op(x.evaluate(mu), x.evaluate(tuple(-m for m in mu))) == curve.identity


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2**32))
def test_characters_are_homomorphisms(typ, seed):
    rs = build_root_system(*typ)
    x = random_point(CurveModel(NODAL), rs.rank, random.Random(seed))
    roots = sorted(rs.roots)
    for a in roots[:5]:
        for b in roots[-5:]:
            s = tuple(p + q for p, q in zip(a, b))
            assert x.evaluate(s) == x.evaluate(a) * x.evaluate(b)


def test_relation_sets():
    a1 = build_relation_set(build_root_system("A", 1))
    assert len(a1.type_i) == 1 and a1.type_ii == ()
    a2 = build_relation_set(build_root_system("A", 2))
    assert len(a2.type_i) == 3 and len(a2.type_ii) == 6
    for n in range(2, 6):
        assert build_relation_set(build_root_system("B", n)).type_ii == ()


def test_relations_lie_in_kernel(small_rs):
    rels = build_relation_set(small_rs)
    for r in rels.all:
        total = [0] * small_rs.rank
        for root, k in zip(rels.roots, r.vector):
            for j in range(small_rs.rank):
                total[j] += k * root[j]
        assert not any(total)


@pytest.mark.parametrize("typ,kr", [(("A", 1), 1), (("A", 2), 4), (("B", 2), 2), (("G", 2), 4), (("D", 4), 20), (("C", 3), 9), (("F", 4), 20)])
def test_kernel_generation(typ, kr):
    kg = verify_kernel_generation(build_root_system(*typ))
    assert kg.passed and kg.index == 1 and kg.kernel_rank == kr


def test_b2_kernel_from_type_i_only():
    kg = verify_kernel_generation(build_root_system("B", 2))
    assert kg.type_ii_count == 0 and kg.passed


def test_fiber_relations_examples():
    a2 = build_root_system("A", 2)
    rels = build_relation_set(a2)
    x = TorusPoint(CurveModel(NODAL), (Fraction(2), Fraction(3)))
    f = character_function(x, rels.roots)
    assert check_fiber_relations(f, rels)
    d = f.as_dict()
    d[rels.roots[0]] *= 5
    bad = find_violated_relation(FiberFunction.from_dict(d), rels)
    assert bad is not None and bad[1] != 1


def test_character_function_requires_nodal():
    with pytest.raises(ValueError):
        character_function(identity_point(CurveModel(CUSPIDAL), 2), [(1, 0)])


def test_solve_torus_point_a2():
    a2 = build_root_system("A", 2)
    rels = build_relation_set(a2)
    alpha, beta = a2.simple_roots
    d = {alpha: Fraction(2), tuple(-x for x in alpha): Fraction(1, 2), beta: Fraction(3), tuple(-x for x in beta): Fraction(1, 3)}
    ab = tuple(x + y for x, y in zip(alpha, beta))
    d[ab], d[tuple(-x for x in ab)] = Fraction(6), Fraction(1, 6)
    h = solve_torus_point(FiberFunction.from_dict(d), a2, rels)
    assert h.simple_values == (2, 3)
    assert h.character(a2, ab) == 6
    d[ab] = Fraction(5)
    with pytest.raises(RelationViolation) as exc:
        solve_torus_point(FiberFunction.from_dict(d), a2, rels)
    assert exc.value.relation.kind in ("i", "ii") and exc.value.value != 1


@pytest.mark.parametrize("typ", [("F", 4), ("B", 3), ("C", 3), ("G", 2), ("D", 4)])
def test_solve_torus_point_round_trip(typ):
    rs = build_root_system(*typ)
    rels = build_relation_set(rs)
    rng = random.Random(7)
    for _ in range(100 if typ == ("F", 4) else 20):
        x = random_point(CurveModel(NODAL), rs.rank, rng)
        h = solve_torus_point(character_function(x, rels.roots), rs, rels)
        assert h.simple_values == tuple(x.evaluate(a) for a in rs.simple_roots)


def test_correspondence_c_examples():
    a2 = build_root_system("A", 2)
    triples = zero_sum_short_triples(a2)
    const = FiberFunction.from_dict({r: Fraction(2) for r in a2.short_roots})
    vals = correspondence_c(const, triples)
    assert set(vals.values()) == {8}
    assert not in_kernel_of_c(vals)
    assert correspondence_c(const, []) == {}
    assert in_kernel_of_c({})


def test_characters_lie_in_kernel_of_c(small_rs):
    """For a torus point, the product over a zero-sum triple is 1."""
    x = random_point(CurveModel(NODAL), small_rs.rank, random.Random(3))
    f = character_function(x, small_rs.short_roots)
    assert in_kernel_of_c(correspondence_c(f, zero_sum_short_triples(small_rs)))


def test_e7_quadruples_and_bijection():
    e7 = build_root_system("E", 7)
    weights = minuscule_orbit(e7, 7)
    quads = e7_proper_quadruples(e7, weights)
    varpi = e7.fundamental_weight(7)
    restricted = e6_triples_from_quadruples(e7, quads, varpi)
    e6 = build_root_system("E", 6)
    assert len(restricted) == 45
    assert sorted(restricted) in (sorted(zero_sum_triples(minuscule_orbit(e6, i))) for i in (1, 6))
    with pytest.raises(ValueError):
        e7_proper_quadruples(e6, minuscule_orbit(e6, 1))
    with pytest.raises(ValueError):
        e7_proper_quadruples(e7, weights[:10])


@pytest.mark.parametrize("typ", [("A", 2), ("G", 2), ("F", 4), ("C", 3)])
def test_subscheme_vanishing(typ):
    rs = build_root_system(*typ)
    chk = subscheme_vanishing_check(rs, zero_sum_short_triples(rs)[0], trials=40)
    assert chk.passed and chk.to_json()["pass"]


def test_subscheme_rejects_bad_triple():
    rs = build_root_system("A", 2)
    a, b = rs.simple_roots
    with pytest.raises(ValueError):
        subscheme_vanishing_check(rs, (a, b, a), trials=1)


def test_subscheme_is_deterministic():
    rs = build_root_system("G", 2)
    t = zero_sum_short_triples(rs)[0]
    assert subscheme_vanishing_check(rs, t, 10, 5) == subscheme_vanishing_check(rs, t, 10, 5)


def test_e6_triple_evidence():
    ev = e6_triple_evidence(build_root_system("E", 6))
    assert ev.passed and ev.contains_three_cycle
    assert ev.span_invariant_rank == 0 and ev.full_invariant_rank == 0


@pytest.mark.parametrize("typ", [("A", 2), ("G", 2), ("F", 4)])
def test_short_triple_rotation_evidence(typ):
    ev = short_triple_evidence(build_root_system(*typ))
    assert ev.span_passed and ev.span_rank == 2


def test_short_triple_evidence_vacuous():
    assert short_triple_evidence(build_root_system("B", 3)) is None
