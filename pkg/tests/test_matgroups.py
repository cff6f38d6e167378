import itertools
import random

import pytest

from conglab.domains import factor_ideal, ideal_pow, parse_domain
from conglab.matgroups import (
    CosetSpace,
    FinMatGroup,
    Mat2,
    _ops,
    borel_and_unipotent,
    closure_codes,
    core_of,
    cube_law_check,
    double_cosets,
    full_sl2,
    make_generator,
    normal_closure,
    principal_congruence_image,
    projective_center_is_trivial,
    sl2_order_formula,
)
from conglab.quotients import build_quotient

Z = parse_domain("Z")
F3T = parse_domain("Fq[t] q=3")
F9T = parse_domain("Fq[t] q=9 mod=u^2+1")
ZSQ2 = parse_domain("Q(sqrt(-2)) maximal")


def ring_of(D, text):
    return build_quotient(D, D.parse_ideal(text))


def brute_sl2_codes(ring):
    """Oracle: enumerate all determinant-1 matrices directly."""
    ops = _ops(ring)
    out = set()
    n = ring.size
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if ring.sub(ring.mul(a, d), ring.mul(b, c)) == ring.one_idx:
            out.add(ops.encode(a, b, c, d))
    return out


# ---------------------------------------------------------------------------
# generators


def test_generator_T_zero_is_identity():
    R = ring_of(Z, "(5)")
    assert make_generator("T", R, R.zero_idx).code == _ops(R).identity


def test_generator_U_specializations():
    R = ring_of(Z, "(7)")
    one, zero = R.one_idx, R.zero_idx
    for x in range(R.size):
        assert make_generator("U", R, one, zero, x) == make_generator("T", R, x)
        # U(0,1;x) is the lower unipotent with parameter -x; the family
        # {U(0,1;x)} equals {S(x)} as x ranges over the ring
        assert make_generator("U", R, zero, one, x) == make_generator(
            "S", R, R.neg(x)
        )


def test_generator_Runi_over_z4():
    R = ring_of(Z, "(4)")
    m = make_generator("Runi", R, R.reduce(2))
    assert (m.a, m.b, m.c, m.d) == (3, 2, 2, 3)


def test_generator_errors():
    R = ring_of(Z, "(4)")
    with pytest.raises(ValueError):
        make_generator("Tdiag", R, R.reduce(2), R.zero_idx)  # 2 not a unit mod 4
    with pytest.raises(ValueError):
        make_generator("U", R, R.reduce(2), R.reduce(2), R.one_idx)
    with pytest.raises(ValueError):
        Mat2(R, R.one_idx, R.zero_idx, R.zero_idx, R.reduce(3))  # det 3


# ---------------------------------------------------------------------------
# full SL2 and closure


@pytest.mark.parametrize(
    "D,text,expected",
    [(F3T, "(t)", 24), (F9T, "(t)", 720), (Z, "(4)", 48)],
)
def test_full_sl2_order_vs_brute_force(D, text, expected):
    R = ring_of(D, text)
    oracle = brute_sl2_codes(R)
    assert len(oracle) == expected
    G = full_sl2(R)
    assert G.elements == frozenset(oracle)
    assert sl2_order_formula(R.modulus) == expected


def test_closure_examples():
    R = ring_of(Z, "(5)")
    ops = _ops(R)
    assert closure_codes(R, [ops.identity]) == {ops.identity}
    t1 = make_generator("T", R, R.one_idx).code
    assert len(closure_codes(R, [t1])) == 5

    R2 = ring_of(Z, "(2)")
    gens = [make_generator("T", R2, R2.one_idx).code, make_generator("S", R2, R2.one_idx).code]
    assert closure_codes(R2, gens) == brute_sl2_codes(R2)
    assert len(brute_sl2_codes(R2)) == 6


def test_closure_cap():
    from conglab.domains import CapExceeded

    R = ring_of(Z, "(5)")
    gens = [make_generator("T", R, R.one_idx).code, make_generator("S", R, R.one_idx).code]
    with pytest.raises(CapExceeded) as exc:
        closure_codes(R, gens, cap=10)
    assert exc.value.partial == 10


def test_from_elements_rejects_non_groups():
    R = ring_of(Z, "(5)")
    t1 = make_generator("T", R, R.one_idx).code
    with pytest.raises(ValueError):
        FinMatGroup.from_elements(R, [_ops(R).identity, t1])


def test_lagrange_on_random_subgroups():
    R = ring_of(Z, "(6)")
    G = full_sl2(R)
    rng = random.Random(17)
    codes = G.sorted_elements()
    for _ in range(12):
        gens = [rng.choice(codes) for _ in range(2)]
        H = FinMatGroup.from_generators(R, gens)
        assert G.order % H.order == 0
        assert H.elements <= G.elements


# ---------------------------------------------------------------------------
# normal closure and congruence images


def test_normal_closure_examples():
    R = ring_of(Z, "(4)")
    G = full_sl2(R)
    # translations over the image of (2) normally generate the level-(2)
    # image; its order is |(2)/(4)|^3 = 8 = |SL2(Z/4)| / |SL2(Z/2)|
    two = Z.parse_ideal("(2)")
    from conglab.quotients import ideal_image

    tgens = [make_generator("T", R, x).code for x in ideal_image(R, two).sorted_elements()]
    N = normal_closure(R, tgens, G)
    assert N.order == 8 == G.order // 6
    assert N == principal_congruence_image(R, two)

    assert normal_closure(R, [_ops(R).identity], G).order == 1

    R3 = ring_of(F3T, "(t)")
    G3 = full_sl2(R3)
    N3 = normal_closure(R3, [make_generator("T", R3, R3.one_idx).code], G3)
    assert N3 == G3


def test_principal_congruence_image_examples():
    R = ring_of(Z, "(4)")
    assert principal_congruence_image(R, Z.parse_ideal("(4)")).order == 1
    assert principal_congruence_image(R, Z.unit_ideal()) == full_sl2(R)
    img = principal_congruence_image(R, Z.parse_ideal("(2)"))
    # oracle: direct enumeration of X = I mod 2 with det 1 mod 4
    ops = _ops(R)
    direct = {
        x
        for x in brute_sl2_codes(R)
        if all(
            entry % 2 == target
            for entry, target in zip(ops.decode(x), (1, 0, 0, 1))
        )
    }
    assert len(direct) == 8
    assert img.elements == direct


def test_principal_congruence_image_requires_containment():
    R = ring_of(Z, "(4)")
    with pytest.raises(ValueError):
        principal_congruence_image(R, Z.parse_ideal("(3)"))


# ---------------------------------------------------------------------------
# cores and coset spaces


def borel_of_sl2_f3():
    R = ring_of(F3T, "(t)")
    gens = []
    for alpha in (1, 2):
        for beta in range(3):
            gens.append(
                make_generator("Tdiag", R, R.reduce((alpha,)), R.reduce((beta,)))
            )
    return R, FinMatGroup.from_generators(R, gens)


def test_core_examples():
    R, B = borel_of_sl2_f3()
    G = full_sl2(R)
    assert B.order == 6
    core = core_of(B, G)
    ops = _ops(R)
    assert core.elements == {ops.identity, ops.mneg(ops.identity)}

    # a normal subgroup is its own core
    N = principal_congruence_image(ring_of(Z, "(4)"), Z.parse_ideal("(2)"))
    G4 = full_sl2(ring_of(Z, "(4)"))
    assert core_of(N, G4) == N


def test_coset_space_counts():
    R, B = borel_of_sl2_f3()
    G = full_sl2(R)
    cs = CosetSpace(G, B)
    assert len(cs) * B.order == G.order
    # canonical labels are the minimal code of each coset
    for i, rep in enumerate(cs.reps):
        coset = [x for x in G.sorted_elements() if cs.coset_of[x] == i]
        assert min(coset) == rep


# ---------------------------------------------------------------------------
# borel image and double cosets


def test_borel_sizes():
    R = ring_of(Z, "(5)")
    B, U = borel_and_unipotent(R)
    assert B.order == 10 and U.order == 5

    R9 = ring_of(F9T, "(t)")
    B9, U9 = borel_and_unipotent(R9)
    assert B9.order == 72 and U9.order == 9

    ZSQ13 = parse_domain("Q(sqrt(-13)) maximal")
    R13 = build_quotient(ZSQ13, ZSQ13.principal_ideal((3, 0)))
    B13, U13 = borel_and_unipotent(R13)
    assert B13.order == 18 and U13.order == 9


def test_double_cosets_examples():
    R, B = borel_of_sl2_f3()
    G = full_sl2(R)
    assert len(double_cosets(G, G, B)) == 1
    bruhat = double_cosets(G, B, B)
    assert len(bruhat) == 2

    from conglab.matgroups import _double_coset_data

    reps, assigned = _double_coset_data(G, B, B)
    sizes = {}
    for x, r in assigned.items():
        sizes[r] = sizes.get(r, 0) + 1
    assert sum(sizes.values()) == G.order


# ---------------------------------------------------------------------------
# structural checks


def test_cube_law_examples():
    assert cube_law_check(Z, Z.parse_ideal("(2)"), Z.parse_ideal("(4)"))
    assert cube_law_check(F3T, F3T.parse_ideal("(t)"), F3T.parse_ideal("(t^2)"))
    p = factor_ideal(ZSQ2.principal_ideal((2, 0))).pairs[0][0]
    assert cube_law_check(ZSQ2, ideal_pow(p, 2), ideal_pow(p, 4))


def test_cube_law_orders():
    # the quotient orders |q/q'|^3 for the three frames above
    R = ring_of(Z, "(4)")
    assert principal_congruence_image(R, Z.parse_ideal("(2)")).order == (4 // 2) ** 3 == 8
    R = ring_of(F3T, "(t^2)")
    assert principal_congruence_image(R, F3T.parse_ideal("(t)")).order == (9 // 3) ** 3
    p = factor_ideal(ZSQ2.principal_ideal((2, 0))).pairs[0][0]
    R = build_quotient(ZSQ2, ideal_pow(p, 4))
    assert principal_congruence_image(R, ideal_pow(p, 2)).order == (16 // 4) ** 3


def test_cube_law_precondition():
    with pytest.raises(ValueError):
        cube_law_check(Z, Z.parse_ideal("(2)"), Z.parse_ideal("(8)"))


def test_projective_center_examples():
    assert projective_center_is_trivial(ring_of(Z, "(5)"))
    assert projective_center_is_trivial(ring_of(Z, "(9)"))
    assert projective_center_is_trivial(ring_of(F3T, "(t^2)"))
    with pytest.raises(ValueError):
        projective_center_is_trivial(ring_of(Z, "(6)"))  # not local
    with pytest.raises(ValueError):
        projective_center_is_trivial(ring_of(Z, "(4)"))  # 2 not a unit


def _set_product(ring, A, B):
    ops = _ops(ring)
    return {ops.mmul(x, y) for x in A for y in B}


def test_coprime_congruence_images_multiply_to_full():
    R = ring_of(Z, "(12)")
    G = full_sl2(R)
    A = principal_congruence_image(R, Z.parse_ideal("(4)"))
    B = principal_congruence_image(R, Z.parse_ideal("(3)"))
    assert _set_product(R, A.elements, B.elements) == G.elements

    R2 = ring_of(F3T, "(t^2+t)")
    G2 = full_sl2(R2)
    A2 = principal_congruence_image(R2, F3T.parse_ideal("(t)"))
    B2 = principal_congruence_image(R2, F3T.parse_ideal("(t+1)"))
    assert _set_product(R2, A2.elements, B2.elements) == G2.elements


def test_elementary_times_congruence_image():
    # E(R, a-image) * G(b-image) = G((a+b)-image), including non-coprime
    # pairs; E(R, a) is the normal subgroup generated by the translations
    from conglab.quotients import ideal_image

    R = ring_of(Z, "(8)")
    G = full_sl2(R)
    a = Z.parse_ideal("(2)")
    b = Z.parse_ideal("(4)")
    egens = [
        make_generator("T", R, x).code for x in ideal_image(R, a).sorted_elements()
    ]
    E = normal_closure(R, egens, G)
    Gb = principal_congruence_image(R, b)
    Gsum = principal_congruence_image(R, Z.parse_ideal("(2)"))
    assert _set_product(R, E.elements, Gb.elements) == Gsum.elements


def test_core_equals_conjugate_intersection():
    # the coset-action kernel must agree with intersecting all conjugates
    R, B = borel_of_sl2_f3()
    G = full_sl2(R)
    ops = _ops(R)
    inter = set(B.elements)
    for g in G.elements:
        gi = ops.minv(g)
        inter &= {ops.mmul(ops.mmul(gi, h), g) for h in B.elements}
    assert core_of(B, G).elements == inter

    R6 = ring_of(Z, "(6)")
    G6 = full_sl2(R6)
    rng = random.Random(23)
    codes = G6.sorted_elements()
    H = FinMatGroup.from_generators(R6, [rng.choice(codes) for _ in range(2)])
    ops6 = _ops(R6)
    inter = set(H.elements)
    for g in G6.elements:
        gi = ops6.minv(g)
        inter &= {ops6.mmul(ops6.mmul(gi, h), g) for h in H.elements}
    assert core_of(H, G6).elements == inter
