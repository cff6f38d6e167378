"""Congruence screening for finite-index subgroups of the modular group.

Subgroups are given projectively (they contain -I) as a pair of
permutations: the action of the order-2 generator S and the translation T
on the cosets of the subgroup, with base point 0.  The composition
convention is the right action: a word acts letter by letter, left to
right, and perm_mul(p, q) is "apply p, then q".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, lcm

from .domains import CapExceeded, ParseError
from .matgroups import DEFAULT_GROUP_CAP

_S_MAT = (0, -1, 1, 0)
_T_MAT = (1, 1, 0, 1)

DEFAULT_ENUM_CAP = 12


def perm_mul(p, q):
    """Right-action composition: apply p, then q."""
    return tuple(q[i] for i in p)


def perm_inv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _perm_order_divides(p, k):
    acc = tuple(range(len(p)))
    for _ in range(k):
        acc = perm_mul(acc, p)
    return acc == tuple(range(len(p)))


@dataclass(frozen=True)
class PermRep:
    """A finite-index subgroup of the projective modular group."""

    n: int
    S: tuple
    T: tuple

    def __post_init__(self):
        n = self.n
        for name, p in (("S", self.S), ("T", self.T)):
            if len(p) != n or sorted(p) != list(range(n)):
                raise ParseError(f"{name} is not a permutation of {n} points")
        if not _perm_order_divides(self.S, 2):
            raise ParseError("S must square to the identity")
        if not _perm_order_divides(perm_mul(self.S, self.T), 3):
            raise ParseError("S*T must have order dividing 3")
        reached = {0}
        frontier = [0]
        while frontier:
            c = frontier.pop()
            for p in (self.S, self.T):
                if p[c] not in reached:
                    reached.add(p[c])
                    frontier.append(p[c])
        if len(reached) != n:
            raise ParseError("the action is not transitive")

    def to_json(self):
        return {"n": self.n, "S": list(self.S), "T": list(self.T)}


def parse_permrep(data):
    """Validate a {"n", "S", "T"} mapping (or JSON text) into a PermRep."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad permrep JSON: {exc}") from exc
    if not isinstance(data, dict) or not {"n", "S", "T"} <= set(data):
        raise ParseError('permrep JSON needs keys "n", "S", "T"')
    try:
        n = int(data["n"])
        S = tuple(int(x) for x in data["S"])
        T = tuple(int(x) for x in data["T"])
    except (TypeError, ValueError) as exc:
        raise ParseError("permrep arrays must hold integers") from exc
    return PermRep(n, S, T)


@dataclass(frozen=True)
class CuspSplit:
    """Sorted multiset of T-cycle lengths; the level is their lcm."""

    lengths: tuple
    level: int

    @property
    def index(self):
        return sum(self.lengths)


def cusp_split(rep):
    seen = [False] * rep.n
    lengths = []
    for start in range(rep.n):
        if seen[start]:
            continue
        c = start
        size = 0
        while not seen[c]:
            seen[c] = True
            size += 1
            c = rep.T[c]
        lengths.append(size)
    lengths.sort()
    return CuspSplit(tuple(lengths), lcm(*lengths))


@dataclass(frozen=True)
class LarcherVerdict:
    passed: bool
    gcd_attained: bool
    lcm_attained: bool

    def failure(self):
        if self.passed:
            return None
        parts = []
        if not self.gcd_attained:
            parts.append("min")
        if not self.lcm_attained:
            parts.append("max")
        return "+".join(parts)


def larcher_check(split):
    """The gcd and the lcm of the cusp widths must both be widths."""
    g = gcd(*split.lengths)
    l = lcm(*split.lengths)
    g_in = g in split.lengths
    l_in = l in split.lengths
    return LarcherVerdict(g_in and l_in, g_in, l_in)


# ---------------------------------------------------------------------------
# PSL2(Z/n)


class ProjectiveGroup:
    """PSL2(Z/n): matrices mod n up to sign, enumerated by BFS from S, T."""

    def __init__(self, n, cap=DEFAULT_GROUP_CAP):
        self.n = n
        identity = self._canon((1, 0, 0, 1))
        elements = [identity]
        index = {identity: 0}
        s = self._canon(_S_MAT)
        t = self._canon(_T_MAT)
        qi = 0
        while qi < len(elements):
            e = elements[qi]
            qi += 1
            for m in (s, t):
                prod = self._canon(self._matmul(e, m))
                if prod not in index:
                    if len(elements) >= cap:
                        raise CapExceeded(f"PSL2(Z/{n}) exceeds cap {cap}")
                    index[prod] = len(elements)
                    elements.append(prod)
        self.elements = elements
        self.index = index
        self.size = len(elements)
        self.identity = 0
        self.S = index[s]
        self.T = index[t]
        self.right_S = [index[self._canon(self._matmul(e, s))] for e in elements]
        self.right_T = [index[self._canon(self._matmul(e, t))] for e in elements]

    def _canon(self, m):
        n = self.n
        m = (m[0] % n, m[1] % n, m[2] % n, m[3] % n)
        neg = ((-m[0]) % n, (-m[1]) % n, (-m[2]) % n, (-m[3]) % n)
        return min(m, neg)

    def _matmul(self, x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def mul(self, i, j):
        return self.index[self._canon(self._matmul(self.elements[i], self.elements[j]))]

    def inv(self, i):
        a, b, c, d = self.elements[i]
        return self.index[self._canon((d, -b, -c, a))]


def projective_group_order(n, cap=DEFAULT_GROUP_CAP):
    """|PSL2(Z) : level-n kernel| by enumeration (halved for n > 2)."""
    return ProjectiveGroup(n, cap).size


@dataclass(frozen=True)
class IndexLevelVerdict:
    index_at_least_level: bool
    index_divides_order: bool
    projective_order: int

    @property
    def passed(self):
        return self.index_at_least_level and self.index_divides_order


def index_level_checks(rep, split=None, cap=DEFAULT_GROUP_CAP):
    """The index must be >= the level and divide the level-kernel index."""
    split = cusp_split(rep) if split is None else split
    order = projective_group_order(split.level, cap)
    return IndexLevelVerdict(rep.n >= split.level, order % rep.n == 0, order)


@dataclass(frozen=True)
class CongruenceVerdict:
    congruence: bool
    level: int


def exact_congruence_test(rep, level_override=None, cap=DEFAULT_GROUP_CAP):
    """Whether the subgroup contains the full level-n0 kernel.

    Builds the coset table of the kernel (the projective group of its
    level), extracts a Schreier transversal by BFS, and checks that every
    Schreier generator fixes the base point of the given action.
    """
    split = cusp_split(rep)
    n0 = level_override if level_override is not None else split.level
    G = ProjectiveGroup(n0, cap)
    # phi[e] = image of the base point under the transversal word of e
    phi = [None] * G.size
    phi[G.identity] = 0
    order = [G.identity]
    actions = ((G.right_S, rep.S), (G.right_T, rep.T))
    qi = 0
    while qi < len(order):
        e = order[qi]
        qi += 1
        for right, sigma in actions:
            img = right[e]
            if phi[img] is None:
                phi[img] = sigma[phi[e]]
                order.append(img)
    for e in range(G.size):
        for right, sigma in actions:
            if sigma[phi[e]] != phi[right[e]]:
                return CongruenceVerdict(False, split.level)
    return CongruenceVerdict(True, split.level)


def coset_permrep(G, subgroup_indices):
    """The action of S and T on the right cosets of a subgroup of G."""
    label = {}
    reps = []
    sub = sorted(subgroup_indices)
    for e in range(G.size):
        if e in label:
            continue
        c = len(reps)
        reps.append(e)
        for h in sub:
            label[G.mul(h, e)] = c
    sperm = tuple(label[G.right_S[reps[c]]] for c in range(len(reps)))
    tperm = tuple(label[G.right_T[reps[c]]] for c in range(len(reps)))
    return PermRep(len(reps), sperm, tperm)


# ---------------------------------------------------------------------------
# low-index enumeration


def low_index_enumerate(max_index, cap=DEFAULT_ENUM_CAP, up_to_conjugacy=True):
    """All subgroups of the projective modular group of index <= max_index,
    up to conjugacy, as standardized permutation representations.

    Backtracks over coset tables of the order-2 generator x and the
    order-3 generator z = S*T, introducing cosets in scan order so each
    subgroup appears exactly once; conjugates are then deduplicated by
    rebasing (pass up_to_conjugacy=False for the raw subgroup list).
    """
    if max_index > cap:
        raise CapExceeded(f"enumeration index {max_index} above cap {cap}")
    tables = []
    sx = [-1] * max_index
    sy = [-1] * max_index
    pre_y = [-1] * max_index

    def assign_y(i, j, trail):
        if sy[i] >= 0:
            return sy[i] == j
        if pre_y[j] >= 0:
            return pre_y[j] == i
        sy[i] = j
        pre_y[j] = i
        trail.append(i)
        if j == i:
            return True
        k = sy[j]
        if k >= 0:
            if k == i:
                return False  # a 2-cycle cannot close to order 3
            return assign_y(k, i, trail)
        h = pre_y[i]
        if h >= 0 and h != j:
            return assign_y(j, h, trail)
        return True

    def undo_y(trail):
        for i in trail:
            pre_y[sy[i]] = -1
            sy[i] = -1

    def first_slot(ncos):
        for i in range(ncos):
            if sx[i] < 0:
                return i, "x"
            if sy[i] < 0:
                return i, "y"
        return None

    def dfs(ncos):
        slot = first_slot(ncos)
        if slot is None:
            tables.append((tuple(sx[:ncos]), tuple(sy[:ncos])))
            return
        i, kind = slot
        limit = min(ncos + 1, max_index)
        if kind == "x":
            for j in range(limit):
                if j < ncos and sx[j] >= 0 and j != i:
                    continue
                sx[i] = j
                sx[j] = i
                dfs(max(ncos, j + 1))
                sx[i] = -1
                if j != i:
                    sx[j] = -1
        else:
            for j in range(limit):
                if j < ncos and pre_y[j] >= 0:
                    continue
                trail = []
                if assign_y(i, j, trail):
                    dfs(max(ncos, j + 1))
                undo_y(trail)

    dfs(1)
    out = []
    for tx, ty in tables:
        if not up_to_conjugacy or _rebased_minimum(tx, ty) == (tx, ty):
            out.append(_permrep_from_xy(tx, ty))
    out.sort(key=lambda r: (r.n, r.S, r.T))
    return out


def _standardize_xy(sx, sy, base):
    old2new = {base: 0}
    order = [base]
    qi = 0
    while qi < len(order):
        c = order[qi]
        qi += 1
        for img in (sx[c], sy[c]):
            if img not in old2new:
                old2new[img] = len(order)
                order.append(img)
    n = len(sx)
    nsx = [0] * n
    nsy = [0] * n
    for old, new in old2new.items():
        nsx[new] = old2new[sx[old]]
        nsy[new] = old2new[sy[old]]
    return tuple(nsx), tuple(nsy)


def _rebased_minimum(sx, sy):
    return min(_standardize_xy(sx, sy, base) for base in range(len(sx)))


def _permrep_from_xy(sx, sy):
    # T = x * z with x the order-2 and z the order-3 table
    tperm = tuple(sy[sx[i]] for i in range(len(sx)))
    return PermRep(len(sx), tuple(sx), tperm)


# ---------------------------------------------------------------------------
# screen driver


def screen_permrep(rep, run_all=False, cap=DEFAULT_GROUP_CAP):
    """Run the screens in order; stops at the first failure unless run_all."""
    split = cusp_split(rep)
    out = {
        "index": rep.n,
        "cusp_split": list(split.lengths),
        "level": split.level,
        "screens": {},
    }
    screens = out["screens"]
    larcher = larcher_check(split)
    screens["larcher"] = larcher.passed
    verdict = None
    if not larcher.passed:
        verdict = f"non-congruence (larcher {larcher.failure()})"
        if not run_all:
            out["verdict"] = verdict
            return out
    il = index_level_checks(rep, split, cap)
    screens["index_at_least_level"] = il.index_at_least_level
    if verdict is None and not il.index_at_least_level:
        verdict = "non-congruence (index below level)"
        if not run_all:
            out["verdict"] = verdict
            return out
    screens["index_divides_kernel_index"] = il.index_divides_order
    screens["kernel_index"] = il.projective_order
    if verdict is None and not il.index_divides_order:
        verdict = "non-congruence (index does not divide kernel index)"
        if not run_all:
            out["verdict"] = verdict
            return out
    exact = exact_congruence_test(rep, cap=cap)
    screens["exact"] = exact.congruence
    if verdict is None:
        verdict = (
            f"congruence, level {exact.level}"
            if exact.congruence
            else "non-congruence (exact test)"
        )
    out["verdict"] = verdict
    return out
