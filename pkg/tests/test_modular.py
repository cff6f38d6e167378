import itertools

import pytest

from conglab.domains import ParseError
from conglab.modular import (
    CuspSplit,
    PermRep,
    ProjectiveGroup,
    _rebased_minimum,
    _standardize_xy,
    coset_permrep,
    cusp_split,
    exact_congruence_test,
    index_level_checks,
    larcher_check,
    low_index_enumerate,
    parse_permrep,
    perm_inv,
    perm_mul,
    projective_group_order,
    screen_permrep,
)

FULL = PermRep(1, (0,), (0,))


# ---------------------------------------------------------------------------
# validation


def test_parse_permrep_full_group():
    rep = parse_permrep({"n": 1, "S": [0], "T": [0]})
    assert rep == FULL


def test_parse_permrep_rejects_bad_relations():
    with pytest.raises(ParseError):
        parse_permrep({"n": 4, "S": [1, 2, 3, 0], "T": [0, 1, 2, 3]})  # S order 4
    with pytest.raises(ParseError):
        parse_permrep({"n": 2, "S": [0, 1], "T": [1, 0]})  # (ST)^3 != id
    with pytest.raises(ParseError):
        parse_permrep({"n": 2, "S": [0, 1], "T": [0, 1]})  # intransitive
    with pytest.raises(ParseError):
        parse_permrep({"n": 3, "S": [0, 0, 1], "T": [0, 1, 2]})  # not a permutation
    with pytest.raises(ParseError):
        parse_permrep("{not json")


def gamma0_2_rep():
    # cosets of the upper-triangular subgroup of PSL2(Z/2)
    G = ProjectiveGroup(2)
    sub = [G.identity, G.T]
    return coset_permrep(G, sub)


def test_gamma0_2_rep_is_valid():
    rep = gamma0_2_rep()
    assert rep.n == 3


# ---------------------------------------------------------------------------
# cusp splits


def test_cusp_split_examples():
    assert cusp_split(FULL) == CuspSplit((1,), 1)
    rep = gamma0_2_rep()
    assert cusp_split(rep) == CuspSplit((1, 2), 2)


def test_cusp_split_gamma_2():
    # the level-2 kernel itself on 6 cosets: three cusps of width 2
    G = ProjectiveGroup(2)
    rep = coset_permrep(G, [G.identity])
    assert rep.n == 6
    assert cusp_split(rep) == CuspSplit((2, 2, 2), 2)


def test_cusp_split_sums_to_degree():
    for rep in low_index_enumerate(6):
        assert cusp_split(rep).index == rep.n


# ---------------------------------------------------------------------------
# screens


def test_larcher_examples():
    assert not larcher_check(CuspSplit((3, 4), 12)).passed
    assert larcher_check(CuspSplit((3, 4), 12)).failure() == "min+max"
    assert larcher_check(CuspSplit((1, 6), 6)).passed
    assert larcher_check(CuspSplit((8,), 8)).passed


def brute_projective_order(n):
    """Oracle: count SL2(Z/n) four-tuples directly, halving for n > 2."""
    count = 0
    for a, b, c, d in itertools.product(range(n), repeat=4):
        if (a * d - b * c) % n == 1 % n:
            count += 1
    return count if n <= 2 else count // 2


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 6), (6, 72), (7, 168), (8, 192)])
def test_projective_orders(n, expected):
    assert brute_projective_order(n) == expected
    assert projective_group_order(n) == expected


def test_index_level_examples():
    # a split (3,4) subgroup of index 7 fails the index >= level screen
    for rep in low_index_enumerate(7):
        split = cusp_split(rep)
        if split.lengths == (3, 4):
            v = index_level_checks(rep, split)
            assert not v.index_at_least_level
        if split.lengths == (1, 6):
            v = index_level_checks(rep, split)
            assert v.index_at_least_level
            assert not v.index_divides_order  # 7 does not divide 72
            assert v.projective_order == 72


# ---------------------------------------------------------------------------
# exact test


def test_exact_test_examples():
    assert exact_congruence_test(FULL) == exact_congruence_test(FULL)
    v = exact_congruence_test(FULL)
    assert v.congruence and v.level == 1

    rep = gamma0_2_rep()
    v = exact_congruence_test(rep)
    assert v.congruence and v.level == 2


def test_exact_test_on_small_kernel_cosets():
    # every subgroup realized inside PSL2(Z/n) must test as congruence
    for n in (2, 3):
        G = ProjectiveGroup(n)
        # subgroups generated by one element
        seen = set()
        for g in range(G.size):
            sub = {G.identity}
            x = g
            while x not in sub:
                sub.add(x)
                x = G.mul(x, g)
            key = frozenset(sub)
            if key in seen:
                continue
            seen.add(key)
            rep = coset_permrep(G, sub)
            assert exact_congruence_test(rep).congruence


def test_wohlfahrt_coherence():
    # testing at a multiple of the level gives the same verdict
    for rep in low_index_enumerate(7):
        v = exact_congruence_test(rep)
        v2 = exact_congruence_test(rep, level_override=2 * v.level)
        assert v.congruence == v2.congruence


# ---------------------------------------------------------------------------
# enumeration


def _transitive(x, y):
    n = len(x)
    seen = {0}
    frontier = [0]
    while frontier:
        c = frontier.pop()
        for p in (x, y):
            if p[c] not in seen:
                seen.add(p[c])
                frontier.append(p[c])
    return len(seen) == n


def brute_standardized_tables(n):
    """Oracle: filter all (involution, order-3) pairs directly."""
    idp = tuple(range(n))
    perms = list(itertools.permutations(range(n)))
    invol = [p for p in perms if perm_mul(p, p) == idp]
    order3 = [p for p in perms if perm_mul(perm_mul(p, p), p) == idp]
    subs = set()
    for x in invol:
        for y in order3:
            if _transitive(x, y):
                subs.add(_standardize_xy(x, y, 0))
    return subs


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_enumeration_matches_brute_force(n):
    oracle = brute_standardized_tables(n)
    classes_oracle = {_rebased_minimum(*s) for s in oracle}
    mine = [r for r in low_index_enumerate(n) if r.n == n]
    mine_tables = {(r.S, perm_mul(r.S, r.T)) for r in mine}
    assert mine_tables == classes_oracle


def test_enumeration_trivial():
    assert low_index_enumerate(1) == [FULL]


def test_enumeration_finds_the_cited_splits():
    splits7 = {cusp_split(r).lengths for r in low_index_enumerate(7) if r.n == 7}
    assert (3, 4) in splits7 and (2, 5) in splits7 and (1, 6) in splits7
    splits8 = {cusp_split(r).lengths for r in low_index_enumerate(8) if r.n == 8}
    assert (8,) in splits8
    splits9 = {cusp_split(r).lengths for r in low_index_enumerate(9) if r.n == 9}
    assert (1, 1, 7) in splits9


def test_split_eight_noncongruence_exists():
    found = False
    for rep in low_index_enumerate(8):
        if rep.n == 8 and cusp_split(rep).lengths == (8,):
            v = index_level_checks(rep)
            if v.passed and larcher_check(cusp_split(rep)).passed:
                if not exact_congruence_test(rep).congruence:
                    found = True
    assert found


# ---------------------------------------------------------------------------
# screen driver


def test_screen_short_circuits_on_larcher():
    rep = next(
        r for r in low_index_enumerate(7) if cusp_split(r).lengths == (3, 4)
    )
    out = screen_permrep(rep)
    assert out["verdict"].startswith("non-congruence (larcher")
    assert "exact" not in out["screens"]
    out_all = screen_permrep(rep, run_all=True)
    assert "exact" in out_all["screens"]


def test_screen_congruence_verdict():
    out = screen_permrep(gamma0_2_rep())
    assert out["verdict"] == "congruence, level 2"


def test_perm_helpers():
    p = (1, 2, 0)
    assert perm_mul(p, perm_inv(p)) == (0, 1, 2)


def test_subgroup_counts_match_transitive_action_recurrence():
    # independent oracle beyond brute-forceable degrees: with t_n the number
    # of transitive (involution, order-3) pairs on n labeled points and T_n
    # the unrestricted count, T_n = sum_k C(n-1, k-1) t_k T_{n-k}, and the
    # subgroup count of index n is t_n / (n-1)!
    import math

    N = 9
    invol = [1, 1]
    for n in range(2, N + 1):
        invol.append(invol[n - 1] + (n - 1) * invol[n - 2])
    ord3 = [1, 1, 1]
    for n in range(3, N + 1):
        ord3.append(ord3[n - 1] + (n - 1) * (n - 2) * ord3[n - 3])
    total = [invol[n] * ord3[n] for n in range(N + 1)]
    transitive = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = total[n]
        for k in range(1, n):
            acc -= math.comb(n - 1, k - 1) * transitive[k] * total[n - k]
        transitive[n] = acc
    expected = {
        n: transitive[n] // math.factorial(n - 1) for n in range(1, N + 1)
    }
    assert all(
        transitive[n] % math.factorial(n - 1) == 0 for n in range(1, N + 1)
    )
    reps = low_index_enumerate(N, up_to_conjugacy=False)
    counts = {}
    for rep in reps:
        counts[rep.n] = counts.get(rep.n, 0) + 1
    assert counts == expected
