import pytest

from aspec.errors import InputError
from aspec.fields import GF, QQ
from aspec.modules import SpectralPoint, simple_modules
from aspec.polyquot import from_poly_quotient
from aspec.polyring import PointModule, PolynomialRing, taylor_shift
from aspec.topology import (
    ASpecSpace,
    aspec_morphism,
    global_sections_roundtrip,
    space_of_simples,
    spec_compare,
)
from conftest import (
    corpus,
    make_a2,
    make_dual_numbers,
    make_k_times_k,
    make_kx3,
    make_split_quadratic,
)


def test_d_sets_split_quadratic():
    a = make_split_quadratic()
    space = space_of_simples(a)
    x = a.element_from_label("x")
    dx = space.d_set(x)
    # x acts as 0 on one simple and as 1 on the other
    assert len(dx) == 1
    assert space.d_set(a.unit) == frozenset(range(2))
    assert space.d_set([QQ.zero, QQ.zero]) == frozenset()


def test_topology_k2_discrete():
    a = make_k_times_k()
    space = space_of_simples(a)
    assert len(space.opens()) == 4


def test_topology_single_point():
    a = make_dual_numbers()
    space = space_of_simples(a)
    assert space.opens() == [frozenset(), frozenset({0})]


def test_closed_points():
    for name, alg in corpus():
        space = space_of_simples(alg)
        report = space.closed_points_report()
        assert all(report.values()), name


def test_sections_whole_space_is_A():
    for name, alg in corpus():
        space = space_of_simples(alg)
        sec = space.sections(frozenset(range(len(space.points))))
        assert sec.dim == alg.dim, name


def test_sections_empty_is_zero():
    a = make_k_times_k()
    space = space_of_simples(a)
    assert space.sections(frozenset()).dim == 0


def test_sections_k2_point():
    a = make_k_times_k()
    space = space_of_simples(a)
    sec = space.sections(frozenset({0}))
    assert sec.dim == 1


def test_sections_split_quadratic_product():
    a = make_split_quadratic()
    space = space_of_simples(a)
    whole = space.sections(frozenset({0, 1}))
    assert whole.dim == 2
    o_alg = whole.o.as_algebra()
    assert o_alg.is_commutative()
    assert o_alg.radical_basis() == []   # k x k


def test_restriction_composes():
    a = make_k_times_k()
    space = space_of_simples(a)
    whole = frozenset({0, 1})
    u = frozenset({0})
    res1 = space.restriction(whole, u)
    res2 = space.restriction(u, u)
    comp = res1.mul(res2)
    assert comp == res1


def test_restrictions_compose_three_levels():
    a = make_a2()
    space = space_of_simples(a)
    opens = space.opens()
    for u in opens:
        for v in opens:
            for w in opens:
                if w <= v <= u and space.sections(u).dim:
                    left = space.restriction(u, w)
                    right = space.restriction(u, v).mul(
                        space.restriction(v, w))
                    assert left == right


def test_sheaf_axioms_corpus():
    for name, alg in corpus():
        space = space_of_simples(alg)
        if len(space.points) > 3:
            continue
        report = space.sheafify_check()
        assert report["passed"], (name, report["failures"])


def test_presheaf_defect_surfaced_on_a2():
    # the raw presheaf on the discrete two-point space of A2 is not a
    # sheaf (the arrow dies on both singletons); the check must surface
    # this as a finding while the sheafified sections pass
    a = make_a2()
    space = space_of_simples(a)
    report = space.sheafify_check()
    assert report["passed"]
    assert report["presheaf_findings"]


def test_sheaf_sections_disjoint_decomposition():
    a = make_a2()
    space = space_of_simples(a)
    whole = space.sheaf_sections(frozenset({0, 1}))
    u = space.sheaf_sections(frozenset({0}))
    v = space.sheaf_sections(frozenset({1}))
    assert len(whole["basis"]) == len(u["basis"]) + len(v["basis"])


def test_sheaf_disjoint_product():
    a = make_k_times_k()
    space = space_of_simples(a)
    whole = space.sections(frozenset({0, 1}))
    u = space.sections(frozenset({0}))
    v = space.sections(frozenset({1}))
    assert whole.dim == u.dim + v.dim


def test_stalk_commutative_split():
    a = make_split_quadratic()
    space = space_of_simples(a)
    sd = space.stalk({0})
    assert sd.comparison_is_iso
    assert sd.direct_sections.dim == 1


def test_stalk_full_subset_is_global():
    a = make_a2()
    space = space_of_simples(a)
    sd = space.stalk({0, 1})
    assert sd.minimal_open == frozenset({0, 1})
    assert sd.comparison_is_iso
    assert sd.direct_sections.dim == a.dim


def test_stalk_local_ring_dual_numbers():
    a = make_dual_numbers()
    space = space_of_simples(a)
    sd = space.stalk({0})
    assert sd.direct_sections.dim == 2
    o_alg = sd.direct_sections.o.as_algebra()
    rad, index = o_alg.radical()
    assert len(rad) == 1     # local with 1-dim radical, like A itself


def test_simples_only_variant_coincides_on_corpus():
    for name, alg in corpus():
        space = space_of_simples(alg)
        whole = frozenset(range(len(space.points)))
        a_all = space.sections(whole)
        a_simp = space.sections_simples_only(whole)
        assert a_all.dim == a_simp.dim, name


def test_aspec_morphism_identity():
    a = make_k_times_k()
    space = space_of_simples(a)
    ident = [list(a.basis_vector(i)) for i in range(a.dim)]
    point_map, target, secmaps = aspec_morphism(ident, a, a, space)
    assert point_map == [0, 1]
    assert len(target.points) == 2


def test_aspec_morphism_k_into_k2():
    a = make_k_times_k()
    from aspec.quiver import QuiverPresentation, from_quiver
    k = from_quiver(QuiverPresentation(["1"], []))
    space = space_of_simples(a)
    # k -> k x k diagonal: 1 -> (1, 1)
    phi = [list(a.unit)]
    point_map, target, secmaps = aspec_morphism(phi, k, a, space)
    assert len(target.points) == 1
    assert point_map == [0, 0]


def test_aspec_morphism_projection():
    # k[x]/(x^2) -> k: the simple of k pulls back along the contraction
    a = make_dual_numbers()
    from aspec.quiver import QuiverPresentation, from_quiver
    k = from_quiver(QuiverPresentation(["1"], []))
    space = space_of_simples(k)
    # phi: A -> k: 1 -> 1, x -> 0
    phi = {"1": [QQ.one], "x": [QQ.zero]}
    rows = [phi[lab] for lab in a.labels]
    point_map, target, secmaps = aspec_morphism(rows, a, k, space)
    assert len(target.points) == 1
    assert target.points[0].module.dim == 1


def test_spec_compare_split_quadratic():
    a = make_split_quadratic()
    report = spec_compare(a)
    assert report["passed"]
    assert report["topology_discrete"]


def test_spec_compare_dual_numbers():
    a = make_dual_numbers()
    report = spec_compare(a)
    assert report["passed"]


def test_spec_compare_x3_minus_1():
    rel = {(3,): QQ.one, (0,): QQ.neg(QQ.one)}
    a = from_poly_quotient(QQ, ["x"], [rel])
    report = spec_compare(a)
    assert report["passed"]
    degs = sorted(len(g) - 1 for g, e in report["factors"])
    assert degs == [1, 2]


def test_spec_compare_k2_structure_constants():
    a = make_k_times_k()
    report = spec_compare(a)
    assert report["passed"]


def test_spec_compare_rejects_noncommutative():
    a = make_a2()
    with pytest.raises(InputError):
        spec_compare(a)


def test_taylor_shift():
    # p = x^2: p(a + t) = a^2 + 2at + t^2
    out = taylor_shift(QQ, [QQ.zero, QQ.zero, QQ.one], QQ.of_int(3))
    assert out == [QQ.of_int(9), QQ.of_int(6), QQ.one]


def test_poly_ring_space_and_stalks():
    ring = PolynomialRing(QQ)
    pts = [PointModule(ring, QQ.of_int(0)), PointModule(ring, QQ.of_int(1))]
    report = spec_compare(ring, points=pts, order=3)
    assert report["passed"]


def test_poly_ring_sections_product():
    ring = PolynomialRing(QQ)
    pts = [SpectralPoint(PointModule(ring, QQ.of_int(0)), name="M0"),
           SpectralPoint(PointModule(ring, QQ.of_int(1)), name="M1")]
    space = ASpecSpace(ring, pts, order=3)
    whole = space.sections(frozenset({0, 1}))
    assert whole.dim == 2 * 4
    one = space.sections(frozenset({0}))
    assert one.dim == 4
    res = space.restriction(frozenset({0, 1}), frozenset({0}))
    assert res.rows == 8 and res.cols == 4


def test_global_sections_roundtrip_corpus():
    for name, alg in corpus():
        space = space_of_simples(alg)
        report = global_sections_roundtrip(space)
        assert report["passed"], (name, report)


def test_spec_compare_repeated_factor():
    # x^2 (x - 1): localizations k[x]/(x^2) and k
    rel = {(3,): QQ.one, (2,): QQ.neg(QQ.one)}
    a = from_poly_quotient(QQ, ["x"], [rel])
    report = spec_compare(a)
    assert report["passed"]
    assert sorted((len(g) - 1, e) for g, e in report["factors"]) == \
        [(1, 1), (1, 2)]


def test_spec_compare_f5_cases():
    f5 = GF(5)
    irreducible = from_poly_quotient(f5, ["x"],
                                     [{(2,): f5.one, (0,): f5.of_int(3)}])
    assert spec_compare(irreducible)["passed"]
    split = from_poly_quotient(f5, ["x"],
                               [{(2,): f5.one, (0,): f5.of_int(-1)}])
    assert spec_compare(split)["passed"]


def test_spec_compare_mixed_nonsplit_unsupported():
    from aspec.errors import UnsupportedAlgebraError
    f5 = GF(5)
    mixed = from_poly_quotient(f5, ["x"],
                               [{(4,): f5.one, (2,): f5.of_int(3)}])
    with pytest.raises(UnsupportedAlgebraError):
        spec_compare(mixed)
