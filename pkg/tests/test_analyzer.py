import random

import pytest

from conglab.analyzer import (
    quasi_level,
    TranslationSubspace,
    amplitude_at,
    amplitude_extrema_check,
    amplitude_join_search,
    analyze,
    build_example,
    cusp_split_check,
    cusps,
    frame_subgroup,
    level,
    level_chain,
    level_index_divisibility_check,
    quasi_amplitude_at,
    quasi_level_ideal_check,
    screen_translation_subspace,
    standard_screen_subspace,
    unit_square_closure_check,
)
from conglab.domains import ideal_arith, parse_domain, residue_norm
from conglab.matgroups import Mat2, _ops, full_sl2, make_generator
from conglab.quotients import build_quotient, ideal_image

Z = parse_domain("Z")
F3T = parse_domain("Fq[t] q=3")
F9T = parse_domain("Fq[t] q=9 mod=u^2+1")


# ---------------------------------------------------------------------------
# framing


def test_frame_full_group():
    ring = build_quotient(Z, Z.parse_ideal("(5)"))
    gens = [make_generator(k, ring, ring.one_idx) for k in ("T", "S")]
    F = frame_subgroup(Z, Z.parse_ideal("(5)"), gens)
    assert F.index == 1
    assert F.is_normal


def test_frame_borel_mod_t():
    q0 = F3T.parse_ideal("(t)")
    ring = build_quotient(F3T, q0)
    gens = [
        make_generator("Tdiag", ring, u, r)
        for u in ring.domain_unit_image
        for r in range(ring.size)
    ]
    F = frame_subgroup(F3T, q0, gens)
    assert F.index == 24 // 6 == 4


def test_frame_trivial_image_is_kernel_itself():
    q0 = Z.parse_ideal("(6)")
    F = frame_subgroup(Z, q0, [])
    assert F.index == 144  # |SL2(Z/6)|
    lvl, ql, o = level_chain(F)
    assert lvl == q0 and o == q0
    assert len(ql) == 1


# ---------------------------------------------------------------------------
# the named example frames


def test_example_borel_kernel_facts():
    F = build_example("ex2_13")
    cs = cusps(F)
    assert F.index == 4
    assert len(cs) == 2
    amps = sorted(str(c.amplitude) for c in cs)
    assert amps == ["(1)", "(t)"]
    assert sorted(c.term for c in cs) == [1, 3]
    assert cusp_split_check(F, cs)
    assert level(F) == F3T.parse_ideal("(t)")
    v = amplitude_extrema_check(F, cs)
    assert str(v.c_min) == "(t)" and str(v.c_max) == "(1)"


def test_example_icosahedral_function_field_facts():
    F = build_example("ex3_2")
    assert F.index == 6
    cs = cusps(F)
    assert len(cs) == 1
    c = cs[0]
    assert residue_norm(F.ring.modulus) // len(c.quasi_amplitude) * len(
        c.quasi_amplitude
    ) == 9
    assert F.ring.size // len(c.quasi_amplitude) == 3
    assert c.m_factor == 2
    assert c.width == 6
    lvl = level(F)
    assert lvl == F9T.parse_ideal("(t)")
    verdict = quasi_level_ideal_check(F)
    assert verdict.status == "pass"


def test_example_icosahedral_quasi_amplitudes_differ():
    F = build_example("ex3_2")
    ring = F.ring
    ops = _ops(ring)
    # a primitive root of F_9 placed on the diagonal
    zeta = next(
        u for u in ring.units
        if len({_pow(ring, u, k) for k in range(1, 9)}) == 8
    )
    gamma = make_generator("Tdiag", ring, zeta, ring.zero_idx)
    b_id = quasi_amplitude_at(F, ops.identity)
    b_gamma = quasi_amplitude_at(F, gamma)
    assert b_gamma.elements != b_id.elements
    zsq = ring.mul(zeta, zeta)
    scaled = {ring.mul(zsq, x) for x in b_id.elements}
    assert b_gamma.elements == scaled or b_gamma.elements == {
        ring.mul(ring.inv(zsq), x) for x in b_id.elements
    }


def _pow(ring, x, k):
    out = ring.one_idx
    for _ in range(k):
        out = ring.mul(out, x)
    return out


def test_example_icosahedral_bianchi_facts():
    F = build_example("ex3_5")
    D = F.domain
    assert F.index == 6
    cs = cusps(F)
    assert len(cs) == 2
    three = D.principal_ideal((3, 0))
    assert all(c.amplitude == three for c in cs)
    sets = [c.quasi_amplitude.elements for c in cs]
    assert not (sets[0] <= sets[1]) and not (sets[1] <= sets[0])
    v = amplitude_extrema_check(F, cs)
    assert list(v.amplitudes) == [three]


def test_example_square_coordinates_facts():
    F = build_example("ex4_9")
    D = F.domain
    assert F.group.order == 16
    assert F.is_normal
    lvl, ql, o = level_chain(F)
    assert lvl == F.modulus  # p^4
    assert ideal_image(F.ring, lvl).elements != ql.elements
    verdict = quasi_level_ideal_check(F, lvl, ql)
    assert verdict.status == "not_applicable"
    assert verdict.condition.failed_clause == "i"
    assert not verdict.ql_equals_l


def test_example_translation_join_facts():
    F = build_example("ex4_10")
    assert F.info["index_of_join_base"] == 9
    assert F.info["order_of_join_base"] == 64
    assert F.index == 3
    assert F.is_normal
    lvl, ql, o = level_chain(F)
    assert lvl == F3T.parse_ideal("(t^2+t)")
    assert F.ring.one_idx in ql.elements
    assert ideal_image(F.ring, lvl).elements != ql.elements


def test_example_split_two_facts():
    F = build_example("ex5_4")
    D = F.domain
    assert F.index == 2
    assert F.is_normal
    lvl, ql, o = level_chain(F)
    assert lvl == F.modulus
    assert residue_norm(lvl) == 4 == F.index ** 2
    assert F.ring.size // len(ql) == 2
    verdict = level_index_divisibility_check(F, lvl)
    assert verdict.status == "not_applicable"
    assert not verdict.divides_index and not verdict.divides_factorial


# ---------------------------------------------------------------------------
# cusp invariants


def test_cusp_term_equals_width_everywhere():
    for name in ("ex2_13", "ex3_2", "ex3_5", "ex5_4"):
        F = build_example(name)
        for c in cusps(F):
            assert c.term == c.width
        assert cusp_split_check(F)


def test_widths_sum_to_index():
    F = build_example("ex2_13")
    assert sum(c.width for c in cusps(F)) == F.index


def test_level_equals_intersection_over_all_group_elements():
    F = build_example("ex2_13")
    lvl = level(F)
    inter = None
    for code in full_sl2(F.ring).sorted_elements():
        amp = amplitude_at(F, code)
        inter = amp if inter is None else ideal_arith("intersect", inter, amp)
    assert inter == lvl


def test_conjugation_invariance_of_amplitudes():
    F = build_example("ex2_13")
    ops = _ops(F.ring)
    rng = random.Random(8)
    codes = full_sl2(F.ring).sorted_elements()
    for _ in range(10):
        k = rng.choice(codes)
        g = rng.choice(codes)
        conj_frame = F.conjugated_by(k)
        lhs = amplitude_at(conj_frame, ops.mmul(ops.minv(k), g))
        assert lhs == amplitude_at(F, g)


def test_unit_square_closure_on_examples():
    for name in ("ex2_13", "ex3_2", "ex3_5", "ex4_9", "ex4_10", "ex5_4"):
        F = build_example(name)
        assert unit_square_closure_check(F)


def test_amplitude_join_search():
    F = build_example("ex2_13")
    ops = _ops(F.ring)
    identity = ops.identity
    rep = amplitude_join_search(
        F, identity, identity, F3T.parse_ideal("(t)"), F3T.parse_ideal("(t)")
    )
    assert isinstance(rep, Mat2)
    cs = cusps(F)
    # join of the two example amplitudes: (t) + (1) = (1), attained at a cusp
    rep = amplitude_join_search(
        F, identity, cs[1].rep, F3T.parse_ideal("(t)"), cs[1].amplitude
    )
    assert amplitude_at(F, rep).is_unit_ideal() or str(
        amplitude_at(F, rep)
    ) == "(1)"
    with pytest.raises(ValueError):
        amplitude_join_search(F, identity, identity, F3T.zero_ideal(), F3T.parse_ideal("(t)"))


# ---------------------------------------------------------------------------
# sandwich and coprime-splitting properties


def test_sandwich_between_kernel_and_scalars():
    # frames of the kernel itself have level = quasi-level = order ideal = q0
    for D, text in ((Z, "(4)"), (F3T, "(t^2)")):
        q0 = D.parse_ideal(text)
        F = frame_subgroup(D, q0, [])
        lvl, ql, o = level_chain(F)
        assert lvl == q0 and o == q0
        assert len(ql) == 1


def test_coprime_level_splitting():
    # intersect the join base with one local kernel, multiply by the other
    from conglab.matgroups import FinMatGroup, principal_congruence_image

    F = build_example("ex4_10")
    ring = F.ring
    q1 = F3T.parse_ideal("(t)")
    q2 = F3T.parse_ideal("(t+1)")
    assert level(F) == ideal_arith("product", q1, q2)
    g1 = principal_congruence_image(ring, q1)
    g2 = principal_congruence_image(ring, q2)
    ops = _ops(ring)
    inter = F.group.elements & g1.elements
    prod = {ops.mmul(x, y) for x in inter for y in g2.elements}
    mixed = frame_subgroup(
        F3T, F.modulus, list(FinMatGroup.from_elements(ring, prod).gens)
    )
    assert level(mixed) == q2


def test_commutator_landing():
    # [G, N*G(q2)] lands in (N meet G(q1)) * G(q2) for the split level
    from conglab.matgroups import principal_congruence_image

    F = build_example("ex4_10")
    ring = F.ring
    ops = _ops(ring)
    q1 = F3T.parse_ideal("(t)")
    q2 = F3T.parse_ideal("(t+1)")
    g1 = principal_congruence_image(ring, q1)
    g2 = principal_congruence_image(ring, q2)
    nbar = {ops.mmul(x, y) for x in F.group.elements for y in g2.elements}
    target = {
        ops.mmul(x, y) for x in (F.group.elements & g1.elements) for y in g2.elements
    }
    G = full_sl2(ring)
    rng = random.Random(2)
    sample_g = [rng.choice(G.sorted_elements()) for _ in range(40)]
    sample_n = [rng.choice(sorted(nbar)) for _ in range(40)]
    for g in sample_g:
        for n in sample_n:
            comm = ops.mmul(
                ops.mmul(ops.minv(g), ops.minv(n)), ops.mmul(g, n)
            )
            assert comm in target


# ---------------------------------------------------------------------------
# analyze report


def test_analyze_report_shape():
    report = analyze(build_example("ex2_13")).to_json()
    assert report["index"] == 4
    assert report["level"] == "(t)"
    assert {"A", "B", "C", "cusp_split", "unit_square", "index_level"} <= set(
        report["theorems"]
    )
    assert report["theorems"]["cusp_split"] is True
    assert len(report["cusps"]) == 2


def test_analyze_inequality_tight_example():
    report = analyze(build_example("ex5_4"))
    assert report.inequality.applicable
    assert report.inequality.tight


# ---------------------------------------------------------------------------
# translation-subspace screen


def test_screen_example_f2_cubic():
    D = parse_domain("Fq[t] q=2")
    f = D.parse_element("t^3+t+1")
    ts = standard_screen_subspace(D, f)
    report = screen_translation_subspace(ts)
    assert report.level == D.principal_ideal(f)
    assert report.ql_codim == 1
    assert report.congruence_possible is False
    # oracle: t^2 * t = t^3 = t + 1 mod f, which has a constant term
    assert D.divmod(D.parse_element("t^3"), f)[1] == D.parse_element("t+1")
    assert report.certificate is not None


def test_screen_whole_space_inconclusive():
    D = parse_domain("Fq[t] q=2")
    f = D.parse_element("t^3+t+1")
    basis = tuple(
        D.parse_element(s) for s in ("1", "t", "t^2")
    )
    report = screen_translation_subspace(TranslationSubspace(D, f, basis))
    assert report.level.is_unit_ideal()
    assert report.ql_codim == 0
    assert report.congruence_possible is None


def test_screen_f3_quadratic():
    D = parse_domain("Fq[t] q=3")
    f = D.parse_element("t^2+1")
    ts = standard_screen_subspace(D, f)
    report = screen_translation_subspace(ts)
    # f(0) = 1 != 0 but f'(0) = 0: the screen stays inconclusive
    assert report.level == D.principal_ideal(f)
    assert report.ql_codim == 1
    assert report.congruence_possible is None


def test_screen_f3_quadratic_with_linear_term():
    D = parse_domain("Fq[t] q=3")
    f = D.parse_element("t^2+t+1")
    report = screen_translation_subspace(standard_screen_subspace(D, f))
    assert report.level == D.principal_ideal(f)
    assert report.congruence_possible is False


def test_quasi_amplitude_family_is_covered_by_cusp_orbits():
    # every quasi-amplitude b(H, g) equals a squared-unit scaling of some
    # cusp representative's quasi-amplitude
    for name in ("ex2_13", "ex3_5"):
        F = build_example(name)
        orbit_sets = set()
        for c in cusps(F):
            for member in c.orbit:
                orbit_sets.add(member.elements)
        for code in full_sl2(F.ring).sorted_elements():
            assert quasi_amplitude_at(F, code).elements in orbit_sets


def test_quasi_amplitude_family_min_no_max_on_degree_two_residue():
    # same construction as the upper-triangular example but with an
    # irreducible quadratic modulus: all amplitudes equal the modulus, the
    # quasi-amplitude family has a minimum and no maximum
    from conglab.quotients import build_quotient

    q0 = F3T.parse_ideal("(t^2+1)")
    ring = build_quotient(F3T, q0)
    gens = [
        make_generator("Tdiag", ring, u, r)
        for u in ring.domain_unit_image
        for r in (ring.reduce((0,)), ring.reduce((1,)), ring.reduce((2,)))
    ]
    F = frame_subgroup(F3T, q0, gens)
    cs = cusps(F)
    assert all(c.amplitude == q0 for c in cs)
    family = set()
    for c in cs:
        for member in c.orbit:
            family.add(frozenset(member.elements))
    zero_only = frozenset({ring.zero_idx})
    assert zero_only in family
    assert all(zero_only <= s for s in family)
    assert not any(all(other <= s for other in family) for s in family)


def test_coprime_level_splitting_on_kernel_frame():
    # splitting the level of the plain kernel frame over a composite modulus
    from conglab.matgroups import FinMatGroup, principal_congruence_image

    Zd = Z
    q0 = Zd.parse_ideal("(6)")
    F = frame_subgroup(Zd, q0, [])
    ring = F.ring
    ops = _ops(ring)
    for q1txt, q2txt in (("(2)", "(3)"), ("(3)", "(2)")):
        q1 = Zd.parse_ideal(q1txt)
        q2 = Zd.parse_ideal(q2txt)
        g2 = principal_congruence_image(ring, q2)
        inter = F.group.elements & principal_congruence_image(ring, q1).elements
        prod = {ops.mmul(x, y) for x in inter for y in g2.elements}
        mixed = frame_subgroup(
            Zd, q0, list(FinMatGroup.from_elements(ring, prod).gens)
        )
        assert level(mixed) == q2


def test_square_coordinate_quasi_level_is_the_square_set():
    # the quasi-level computed through the core must equal the set of
    # squares of the ramified prime's image, found independently here
    from conglab.domains import factor_ideal
    from conglab.quotients import ideal_image as _ideal_image

    F = build_example("ex4_9")
    D = F.domain
    p = factor_ideal(D.principal_ideal((2, 0))).pairs[0][0]
    squares = {F.ring.mul(x, x) for x in _ideal_image(F.ring, p).elements}
    ql = quasi_level(F)
    assert ql.elements == frozenset(squares)
    assert len(ql) == 2
