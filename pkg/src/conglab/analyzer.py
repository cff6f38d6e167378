"""Invariants of a congruence subgroup framed by a modulus and finite image.

A FramedSubgroup holds the image of a subgroup H >= SL2(D, q0) inside
SL2(D/q0); every invariant below (cusps, amplitudes, quasi-amplitudes,
level, quasi-level, order ideal) is computed exactly in that finite frame
and pulled back to D.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import (
    DEFAULT_FACTOR_CAP,
    Ideal,
    _factor_int,
    condition_L,
    factor_ideal,
    ideal_arith,
    ideal_pow,
    parse_domain,
    residue_norm,
)
from .matgroups import (
    DEFAULT_GROUP_CAP,
    FinMatGroup,
    Mat2,
    _double_coset_data,
    _ops,
    borel_and_unipotent,
    core_of,
    full_sl2,
    make_generator,
    principal_congruence_image,
)
from .quotients import (
    DEFAULT_RING_CAP,
    AdditiveSubgroup,
    additive_closure,
    build_quotient,
    ideal_image,
    largest_ideal_inside,
    local_decompose,
)


class InternalCheckError(RuntimeError):
    """A structural identity that is guaranteed for frames failed."""


@dataclass(frozen=True)
class Caps:
    ring: int = DEFAULT_RING_CAP
    group: int = DEFAULT_GROUP_CAP
    factor: int = DEFAULT_FACTOR_CAP


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# frames


class FramedSubgroup:
    """A congruence subgroup encoded by its modulus and image in SL2(D/q0)."""

    def __init__(self, domain, modulus, ring, group, ambient, borel, unipotent, info=None):
        self.domain = domain
        self.modulus = modulus
        self.ring = ring
        self.group = group
        self.ambient = ambient
        self.borel = borel
        self.unipotent = unipotent
        self.info = dict(info or {})
        self._core = None
        self._normal = None

    @property
    def index(self):
        return self.ambient.order // self.group.order

    @property
    def core(self):
        if self._core is None:
            self._core = core_of(self.group, self.ambient)
        return self._core

    @property
    def is_normal(self):
        return self.group.is_normal_in_full()

    def conjugated_by(self, code):
        frame = FramedSubgroup(
            self.domain,
            self.modulus,
            self.ring,
            self.group.conjugated_by(code),
            self.ambient,
            self.borel,
            self.unipotent,
            info=self.info,
        )
        return frame

    def __repr__(self):
        return (
            f"<FramedSubgroup index {self.index} over {self.domain}/{self.modulus}>"
        )


def frame_subgroup(domain, modulus, gens, caps=DEFAULT_CAPS, info=None):
    """Frame the subgroup generated by gens together with the level-q0 kernel."""
    ring = build_quotient(domain, modulus, ring_cap=caps.ring)
    ambient = full_sl2(ring, cap=caps.group)
    codes = [g.code if isinstance(g, Mat2) else g for g in gens]
    for code in codes:
        Mat2.from_code(ring, code)
    group = FinMatGroup.from_generators(ring, codes, cap=caps.group) if codes else (
        FinMatGroup(ring, (), frozenset({_ops(ring).identity}))
    )
    if not group.elements <= ambient.elements:
        raise InternalCheckError("frame image leaves SL2(R)")
    borel, unipotent = borel_and_unipotent(ring)
    return FramedSubgroup(domain, modulus, ring, group, ambient, borel, unipotent, info)


def frame_from_group(domain, modulus, group, caps=DEFAULT_CAPS, info=None):
    """Frame a prebuilt FinMatGroup (element set already closed)."""
    ring = group.ring
    ambient = full_sl2(ring, cap=caps.group)
    if not group.elements <= ambient.elements:
        raise InternalCheckError("frame image leaves SL2(R)")
    borel, unipotent = borel_and_unipotent(ring)
    return FramedSubgroup(domain, modulus, ring, group, ambient, borel, unipotent, info)


# ---------------------------------------------------------------------------
# cusp data


@dataclass
class CuspData:
    rep: Mat2
    quasi_amplitude: AdditiveSubgroup
    amplitude: Ideal
    m_factor: int
    width: int
    term: int
    orbit: tuple  # quasi-amplitudes of the cusp under squared-unit scaling

    def to_json(self):
        return {
            "rep": str(self.rep),
            "amplitude": str(self.amplitude),
            "quasi_amplitude": self.quasi_amplitude.to_json(),
            "m": self.m_factor,
            "width": self.width,
            "orbit_under_squared_units": [a.to_json() for a in self.orbit],
        }


def quasi_amplitude_at(frame, g, group=None):
    """The additive group {x in R : g T(x) g^-1 in H} at an arbitrary g."""
    ring = frame.ring
    ops = _ops(ring)
    code = g.code if isinstance(g, Mat2) else g
    ginv = ops.minv(code)
    elems = group.elements if group is not None else frame.group.elements
    hits = []
    one, zero = ring.one_idx, ring.zero_idx
    for x in range(ring.size):
        t = ops.encode(one, x, zero, one)
        if ops.mmul(ops.mmul(code, t), ginv) in elems:
            hits.append(x)
    return additive_closure(hits, ring)


def amplitude_at(frame, g):
    return largest_ideal_inside(quasi_amplitude_at(frame, g))


def cusps(frame):
    """One CuspData per double coset of the frame against the Borel image."""
    ring = frame.ring
    ops = _ops(ring)
    mmul = ops.mmul
    reps, _ = _double_coset_data(frame.ambient, frame.group, frame.borel)
    uni = frame.unipotent.elements
    out = []
    for code in reps:
        quasi = quasi_amplitude_at(frame, code)
        amp = largest_ideal_inside(quasi)
        conj = frame.group.conjugated_by(code)
        stab = conj.elements & frame.borel.elements
        width = frame.borel.order // len(stab)
        uprod = {mmul(u, x) for u in uni for x in stab}
        m = frame.borel.order // len(uprod)
        term = m * (ring.size // len(quasi))
        if term != width:
            raise InternalCheckError("cusp width does not factor as m * |D:b|")
        orbit = _squared_unit_orbit(ring, quasi)
        out.append(CuspData(Mat2.from_code(ring, code), quasi, amp, m, width, term, orbit))
    return out


def _squared_unit_orbit(ring, quasi):
    seen = {}
    for sq in ring.domain_unit_squares_image:
        scaled = quasi.scaled(sq)
        key = tuple(sorted(scaled.elements))
        if key not in seen:
            seen[key] = scaled
    return tuple(seen[k] for k in sorted(seen))


# ---------------------------------------------------------------------------
# level-type invariants


def quasi_level(frame):
    """Translations landing in every conjugate: the core's quasi-amplitude."""
    return quasi_amplitude_at(frame, _ops(frame.ring).identity, group=frame.core)


def level(frame):
    return largest_ideal_inside(quasi_level(frame))


def order_ideal(frame):
    """Preimage of the ideal generated by a-d, b, c over the image group."""
    ring = frame.ring
    ops = _ops(ring)
    seeds = set()
    for code in frame.group.elements:
        a, b, c, d = ops.decode(code)
        seeds.add(ring.sub(a, d))
        seeds.add(b)
        seeds.add(c)
    ringwide = set()
    for s in seeds:
        for r in range(ring.size):
            ringwide.add(ring.mul(s, r))
    span = additive_closure(ringwide, ring)
    out = ring.modulus
    for g in span.generators:
        out = ideal_arith("sum", out, ring.domain.principal_ideal(ring.lift(g)))
    return out


def level_chain(frame):
    """(level, quasi-level, order ideal); enforces l <= ql <= o elementwise."""
    ql = quasi_level(frame)
    lvl = largest_ideal_inside(ql)
    o = order_ideal(frame)
    ring = frame.ring
    lvl_img = ideal_image(ring, lvl).elements
    o_img = ideal_image(ring, o).elements
    if not (lvl_img <= ql.elements and ql.elements <= o_img):
        raise InternalCheckError("level chain containments fail")
    return lvl, ql, o


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class AmplitudeExtremaVerdict:
    amplitudes: tuple
    c_min: Ideal
    c_max: Ideal
    passed: bool

    def to_json(self):
        return {
            "amplitudes": [str(a) for a in self.amplitudes],
            "c_min": str(self.c_min),
            "c_max": str(self.c_max),
            "passed": self.passed,
        }


def amplitude_extrema_check(frame, cusp_list=None):
    """Intersection and sum of all cusp amplitudes must be attained."""
    cusp_list = cusps(frame) if cusp_list is None else cusp_list
    amplitudes = []
    seen = set()
    for c in cusp_list:
        if c.amplitude.data not in seen:
            seen.add(c.amplitude.data)
            amplitudes.append(c.amplitude)
    c_min = amplitudes[0]
    c_max = amplitudes[0]
    for a in amplitudes[1:]:
        c_min = ideal_arith("intersect", c_min, a)
        c_max = ideal_arith("sum", c_max, a)
    passed = any(c_min == a for a in amplitudes) and any(c_max == a for a in amplitudes)
    if not passed:
        raise InternalCheckError(
            f"amplitude extrema not attained (min {c_min}, max {c_max}, "
            f"set {[str(a) for a in amplitudes]})"
        )
    amplitudes.sort(key=lambda a: (residue_norm(a), str(a)), reverse=True)
    return AmplitudeExtremaVerdict(tuple(amplitudes), c_min, c_max, passed)


@dataclass
class QuasiLevelVerdict:
    status: str  # "pass" | "not_applicable"
    condition: object
    ql_equals_l: bool

    def to_json(self):
        return {
            "status": self.status,
            "condition_L": self.condition.to_json(),
            "ql_equals_l": self.ql_equals_l,
        }


def quasi_level_ideal_check(frame, lvl=None, ql=None):
    """Under the level condition the quasi-level must equal the level."""
    if ql is None:
        ql = quasi_level(frame)
    if lvl is None:
        lvl = largest_ideal_inside(ql)
    cond = condition_L(lvl)
    equal = ideal_image(frame.ring, lvl).elements == ql.elements
    if cond.holds:
        if not equal:
            raise InternalCheckError("quasi-level differs from level despite the level condition")
        return QuasiLevelVerdict("pass", cond, True)
    return QuasiLevelVerdict("not_applicable", cond, equal)


@dataclass
class DivisibilityVerdict:
    status: str  # "pass" | "not_applicable"
    residue: int
    index: int
    divides_factorial: bool
    divides_index: bool
    normal: bool

    def to_json(self):
        return {
            "status": self.status,
            "residue": self.residue,
            "index": self.index,
            "divides_factorial": self.divides_factorial,
            "divides_index": self.divides_index,
            "normal": self.normal,
        }


def _divides_factorial(m, n):
    """Whether m divides n!, by prime-exponent comparison."""
    for p, e in _factor_int(m).items():
        total = 0
        pk = p
        while pk <= n:
            total += n // pk
            pk *= p
        if total < e:
            return False
    return True


def level_index_divisibility_check(frame, lvl=None):
    """|D/l| divides index! (and the index itself when the frame is normal)."""
    if lvl is None:
        lvl = level(frame)
    cond = condition_L(lvl)
    res = residue_norm(lvl)
    idx = frame.index
    fact = _divides_factorial(res, idx)
    div = idx % res == 0
    normal = frame.is_normal
    if cond.holds:
        if not fact or (normal and not div):
            raise InternalCheckError("level-index divisibility fails despite the level condition")
        return DivisibilityVerdict("pass", res, idx, fact, div, normal)
    return DivisibilityVerdict("not_applicable", res, idx, fact, div, normal)


@dataclass
class IndexLevelInequality:
    applicable: bool
    degree: int
    residue: int
    bound: int
    tight: bool

    def to_json(self):
        return {
            "applicable": self.applicable,
            "degree": self.degree,
            "residue": self.residue,
            "bound": self.bound,
            "tight": self.tight,
        }


def index_level_inequality_check(frame, lvl=None):
    """|D/l| <= index^d over number-ring kinds (d = field degree)."""
    kind = frame.domain.kind
    if kind == "polynomials":
        return IndexLevelInequality(False, 0, 0, 0, False)
    degree = 1 if kind == "integers" else 2
    if lvl is None:
        lvl = level(frame)
    res = residue_norm(lvl)
    bound = frame.index ** degree
    if res > bound:
        raise InternalCheckError("index-level inequality fails on a frame")
    return IndexLevelInequality(True, degree, res, bound, res == bound)


def cusp_split_check(frame, cusp_list=None):
    """index = sum over cusps of m * |D : b|."""
    cusp_list = cusps(frame) if cusp_list is None else cusp_list
    return frame.index == sum(c.term for c in cusp_list)


def unit_square_closure_check(frame, cusp_list=None, ql=None):
    """Squared units stabilize the quasi-level, and map quasi-amplitude
    elements into the quasi-amplitude family of some cusp."""
    ring = frame.ring
    if ql is None:
        ql = quasi_level(frame)
    for alpha in ring.units:
        sq = ring.mul(alpha, alpha)
        if not all(ring.mul(sq, x) in ql.elements for x in ql.elements):
            return False
    cusp_list = cusps(frame) if cusp_list is None else cusp_list
    family = set()
    for c in cusp_list:
        for member in c.orbit:
            family |= member.elements
    for c in cusp_list:
        for alpha in ring.units:
            sq = ring.mul(alpha, alpha)
            for x in c.quasi_amplitude.elements:
                if ring.mul(sq, x) not in family:
                    return False
    return True


def amplitude_join_search(frame, g1, g2, q1, q2, cusp_list=None):
    """A cusp representative whose amplitude contains q1 + q2.

    q_i must be nonzero ideals inside the amplitudes at g_i; existence is
    guaranteed for frames, so exhaustion raises an internal error.
    """
    for g, q in ((g1, q1), (g2, q2)):
        if q.is_zero():
            raise ValueError("the joined ideals must be nonzero")
        amp = amplitude_at(frame, g)
        if not amp.contains_ideal(q):
            raise ValueError("ideal is not contained in the amplitude at g")
    target = ideal_arith("sum", q1, q2)
    cusp_list = cusps(frame) if cusp_list is None else cusp_list
    for c in cusp_list:
        if c.amplitude.contains_ideal(target):
            return c.rep
    raise InternalCheckError("no cusp amplitude contains the join")


# ---------------------------------------------------------------------------
# full report


@dataclass
class AnalysisReport:
    frame: FramedSubgroup
    cusp_list: list
    extrema: AmplitudeExtremaVerdict
    lvl: Ideal
    ql: AdditiveSubgroup
    o_ideal: Ideal
    condition: object
    quasi_verdict: QuasiLevelVerdict
    divisibility: DivisibilityVerdict
    inequality: IndexLevelInequality
    cusp_split_ok: bool
    unit_square_ok: bool

    def to_json(self):
        return {
            "domain": str(self.frame.domain),
            "modulus": str(self.frame.modulus),
            "index": self.frame.index,
            "cusps": [c.to_json() for c in self.cusp_list],
            "amplitudes": [str(a) for a in self.extrema.amplitudes],
            "c_min": str(self.extrema.c_min),
            "c_max": str(self.extrema.c_max),
            "level": str(self.lvl),
            "quasi_level": self.ql.to_json(),
            "order_ideal": str(self.o_ideal),
            "condition_L": self.condition.to_json(),
            "theorems": {
                "A": self.extrema.to_json(),
                "B": self.quasi_verdict.to_json(),
                "C": self.divisibility.to_json(),
                "cusp_split": self.cusp_split_ok,
                "unit_square": self.unit_square_ok,
                "index_level": self.inequality.to_json(),
            },
        }


def analyze(frame):
    """Compute every frame invariant and run all verdicts."""
    cusp_list = cusps(frame)
    extrema = amplitude_extrema_check(frame, cusp_list)
    lvl, ql, o_ideal = level_chain(frame)
    if extrema.c_min != lvl:
        raise InternalCheckError(
            "amplitude intersection differs from the core-based level"
        )
    condition = condition_L(lvl)
    quasi_verdict = quasi_level_ideal_check(frame, lvl, ql)
    divisibility = level_index_divisibility_check(frame, lvl)
    inequality = index_level_inequality_check(frame, lvl)
    split_ok = cusp_split_check(frame, cusp_list)
    if not split_ok:
        raise InternalCheckError("cusp split equation fails")
    unit_ok = unit_square_closure_check(frame, cusp_list, ql)
    if not unit_ok:
        raise InternalCheckError("squared-unit closure fails on a frame")
    return AnalysisReport(
        frame,
        cusp_list,
        extrema,
        lvl,
        ql,
        o_ideal,
        condition,
        quasi_verdict,
        divisibility,
        inequality,
        split_ok,
        unit_ok,
    )


# ---------------------------------------------------------------------------
# built-in example frames


EXAMPLE_NAMES = ("ex2_13", "ex3_2", "ex3_5", "ex4_9", "ex4_10", "ex5_4")


def build_example(name, caps=DEFAULT_CAPS):
    """Construct one of the named built-in frames."""
    if name == "ex2_13":
        return _example_borel_plus_kernel(caps)
    if name == "ex3_2":
        return _example_icosahedral(parse_domain("Fq[t] q=9 mod=u^2+1"), "(t)", caps)
    if name == "ex3_5":
        D = parse_domain("Q(sqrt(-13)) maximal")
        return _example_icosahedral(D, None, caps)
    if name == "ex4_9":
        return _example_square_coordinates(caps)
    if name == "ex4_10":
        return _example_translation_join(caps)
    if name == "ex5_4":
        return _example_split_two(caps)
    raise ValueError(f"unknown example {name!r}")


def _example_borel_plus_kernel(caps):
    # upper-triangular matrices with constant entries over F_3[t], modulo (t)
    D = parse_domain("Fq[t] q=3")
    q0 = D.parse_ideal("(t)")
    ring = build_quotient(D, q0, ring_cap=caps.ring)
    gens = [
        make_generator("Tdiag", ring, u, r)
        for u in ring.domain_unit_image
        for r in range(ring.size)
    ]
    return frame_subgroup(D, q0, gens, caps, info={"name": "ex2_13"})


def _proj_order_filter(ring, ambient):
    ops = _ops(ring)
    identity = ops.identity
    neg = ops.mneg(identity)
    center = {identity, neg}

    def proj_power_in_center(x, k):
        acc = identity
        for _ in range(k):
            acc = ops.mmul(acc, x)
        return acc in center

    invol = []
    third = []
    for x in ambient.sorted_elements():
        if x in center:
            continue
        if ops.mmul(x, x) in center:
            invol.append(x)
        elif proj_power_in_center(x, 3):
            third.append(x)
    return invol, third, center


def _example_icosahedral(D, modulus_text, caps):
    # the lexicographically first (2,3,5)-generated subgroup of order 120
    if modulus_text is None:
        q0 = D.principal_ideal(D.from_int(3))
    else:
        q0 = D.parse_ideal(modulus_text)
    ring = build_quotient(D, q0, ring_cap=caps.ring)
    ambient = full_sl2(ring, cap=caps.group)
    ops = _ops(ring)
    invol, third, center = _proj_order_filter(ring, ambient)
    from .matgroups import closure_codes

    for x in invol:
        for y in third:
            z = ops.mmul(x, y)
            if z in center:
                continue
            acc = z
            for _ in range(4):
                acc = ops.mmul(acc, z)
            if acc not in center:
                continue
            grp = closure_codes(ring, [x, y], cap=721)
            if len(grp) == 120:
                group = FinMatGroup(ring, (x, y), frozenset(grp))
                frame = frame_from_group(
                    D, q0, group, caps,
                    info={"name": "ex3_2" if D.kind == "polynomials" else "ex3_5",
                          "generators": (str(Mat2.from_code(ring, x)),
                                         str(Mat2.from_code(ring, y)))},
                )
                quasi = quasi_amplitude_at(frame, ops.identity)
                beta = min(e for e in quasi.elements if e != ring.zero_idx)
                frame.info["beta"] = ring.element_str(beta)
                return frame
    raise InternalCheckError("no order-120 subgroup found")


def _example_square_coordinates(caps):
    # kernel-square coordinates over the ramified prime above 2
    D = parse_domain("Q(sqrt(-2)) maximal")
    p = D.principal_ideal((0, 1))
    q0 = ideal_pow(p, 4)
    ring = build_quotient(D, q0, ring_cap=caps.ring)
    level_two = principal_congruence_image(ring, ideal_pow(p, 2), cap=caps.group)
    p_img = ideal_image(ring, p)
    squares = {ring.mul(x, x) for x in p_img.elements}
    ops = _ops(ring)
    codes = []
    for code in level_two.sorted_elements():
        _, b, c, _ = ops.decode(code)
        if b in squares and c in squares:
            codes.append(code)
    group = FinMatGroup.from_elements(ring, codes)
    return frame_from_group(D, q0, group, caps, info={"name": "ex4_9", "prime": str(p)})


def _matrix_projector(ring, factor):
    ops = _ops(ring)
    fops = _ops(factor.ring)
    proj = factor.projection

    def project(code):
        a, b, c, d = ops.decode(code)
        return fops.encode(proj[a], proj[b], proj[c], proj[d])

    return project


def _example_translation_join(caps):
    # join of T(1) with the product of the two local 2-Sylow kernels
    D = parse_domain("Fq[t] q=3")
    q0 = D.parse_ideal("(t^2+t)")
    ring = build_quotient(D, q0, ring_cap=caps.ring)
    ambient = full_sl2(ring, cap=caps.group)
    dec = local_decompose(ring)
    ops = _ops(ring)
    locals_ = []
    for f in dec.factors:
        lg = full_sl2(f.ring, cap=caps.group)
        fops = _ops(f.ring)
        syl = set()
        for x in lg.elements:
            acc = x
            for _ in range(3):
                acc = fops.mmul(acc, x)
            if acc == fops.identity:
                syl.add(x)
        locals_.append((syl, _matrix_projector(ring, f)))
    n_codes = [
        code
        for code in ambient.sorted_elements()
        if all(project(code) in syl for syl, project in locals_)
    ]
    n_group = FinMatGroup.from_elements(ring, n_codes)
    m_group = FinMatGroup.from_generators(
        ring, list(n_group.gens) + [make_generator("T", ring, ring.one_idx).code],
        cap=caps.group,
    )
    info = {
        "name": "ex4_10",
        "index_of_join_base": ambient.order // n_group.order,
        "order_of_join_base": n_group.order,
    }
    return frame_from_group(D, q0, m_group, caps, info=info)


def _example_split_two(caps):
    # even-sign-product subgroup over the split prime 2 in Q(sqrt(-7))
    D = parse_domain("Q(sqrt(-7)) maximal")
    q0 = D.principal_ideal((2, 0))
    ring = build_quotient(D, q0, ring_cap=caps.ring)
    ambient = full_sl2(ring, cap=caps.group)
    dec = local_decompose(ring)
    signs = []
    for f in dec.factors:
        fops = _ops(f.ring)
        table = {}
        for x in full_sl2(f.ring, cap=caps.group).elements:
            order = 1
            acc = x
            while acc != fops.identity:
                acc = fops.mmul(acc, x)
                order += 1
            table[x] = 1 if order % 2 else -1
        signs.append((table, _matrix_projector(ring, f)))
    codes = [
        code
        for code in ambient.sorted_elements()
        if _sign_product(code, signs) == 1
    ]
    group = FinMatGroup.from_elements(ring, codes)
    return frame_from_group(D, q0, group, caps, info={"name": "ex5_4", "degree": 2})


def _sign_product(code, signs):
    out = 1
    for table, project in signs:
        out *= table[project(code)]
    return out


# ---------------------------------------------------------------------------
# translation-subspace screen


@dataclass(frozen=True)
class TranslationSubspace:
    """A k-subspace of k[t]/(f) whose preimage contains (f)."""

    domain: object  # polynomial domain supplying k = F_q
    modulus: tuple  # monic polynomial f
    basis: tuple    # polynomials spanning the subspace mod f


@dataclass
class SubspaceScreenReport:
    level: Ideal
    ql_codim: int
    congruence_possible: object  # False | None (inconclusive)
    certificate: object

    def to_json(self):
        return {
            "level": str(self.level),
            "ql_codim": self.ql_codim,
            "congruence_possible": self.congruence_possible,
            "certificate": self.certificate,
        }


def _vec_of(D, poly, d):
    return [poly[i] if i < len(poly) else 0 for i in range(d)]


def _rref(D, rows):
    rows = [list(r) for r in rows]
    pivots = []
    out = []
    col = 0
    d = len(rows[0]) if rows else 0
    while rows and col < d:
        pivot_row = None
        for r in rows:
            if r[col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        rows.remove(pivot_row)
        inv = D.fq_inv(pivot_row[col])
        pivot_row = [D.fq_mul(inv, x) for x in pivot_row]
        for r in rows:
            factor = r[col]
            if factor:
                for i in range(d):
                    r[i] = D.fq_add(r[i], D.fq_neg(D.fq_mul(factor, pivot_row[i])))
        for r in out:
            factor = r[col]
            if factor:
                for i in range(d):
                    r[i] = D.fq_add(r[i], D.fq_neg(D.fq_mul(factor, pivot_row[i])))
        out.append(pivot_row)
        pivots.append(col)
        rows = [r for r in rows if any(r)]
        col += 1
    return out, pivots


def _in_span(D, rref_rows, pivots, vec):
    v = list(vec)
    for row, col in zip(rref_rows, pivots):
        factor = v[col]
        if factor:
            for i in range(len(v)):
                v[i] = D.fq_add(v[i], D.fq_neg(D.fq_mul(factor, row[i])))
    return not any(v)


def screen_translation_subspace(ts):
    """Level, quasi-level codimension, and a squared-unit violation screen."""
    D = ts.domain
    f = ts.modulus
    d = D.deg(f)
    if d < 1:
        raise ValueError("modulus must be non-constant")
    vectors = [_vec_of(D, D.divmod(b, f)[1], d) for b in ts.basis]
    span, pivots = _rref(D, vectors)
    dim = len(span)

    def contains_poly(poly):
        return _in_span(D, span, pivots, _vec_of(D, D.divmod(poly, f)[1], d))

    best = f
    for h in _monic_divisors(D, f):
        if D.deg(h) < D.deg(best) and all(
            contains_poly(D.mul(h, _t_power(D, i))) for i in range(d)
        ):
            best = h
    lvl = Ideal(D, D.monic(best))
    codim = d - dim
    t_poly = _t_power(D, 1)
    invertible = D.gcd(t_poly, f) == D.one()
    certificate = None
    possible = None
    if invertible:
        t2 = D.mul(t_poly, t_poly)
        for row in span:
            v_poly = D._norm(row)
            image = D.divmod(D.mul(t2, v_poly), f)[1]
            if not contains_poly(image):
                certificate = {
                    "alpha": D.element_str(t_poly),
                    "witness": D.element_str(v_poly),
                    "image": D.element_str(image),
                }
                possible = False
                break
    return SubspaceScreenReport(lvl, codim, possible, certificate)


def _t_power(D, k):
    return D._norm([0] * k + [1])


def _monic_divisors(D, f):
    pf = factor_ideal(Ideal(D, D.monic(f)))
    divisors = [D.one()]
    for p, e in pf.pairs:
        divisors = [
            D.mul(dv, _poly_pow(D, p.data, k)) for dv in divisors for k in range(e + 1)
        ]
    return divisors


def _poly_pow(D, x, k):
    out = D.one()
    for _ in range(k):
        out = D.mul(out, x)
    return out


def standard_screen_subspace(D, f):
    """The subspace spanned by t, t^2, ..., t^(deg f - 1) modulo f."""
    d = D.deg(f)
    basis = tuple(_t_power(D, i) for i in range(1, d))
    return TranslationSubspace(D, f, basis)
