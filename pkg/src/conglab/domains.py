"""Exact arithmetic for the three supported Dedekind-domain kinds.

* ``Z``            -- the rational integers,
* ``Fq[t]``        -- univariate polynomials over a finite field F_q,
  q = p^e, with a fixed irreducible modulus polynomial in ``u`` defining
  the field when e > 1,
* ``Q(sqrt(m))``   -- the maximal order of an imaginary quadratic field,
  m < 0 squarefree, with Z-basis {1, w}.

Elements are plain immutable values interpreted by their owning Domain:
an int, a tuple of F_q coefficient values (low degree first, no trailing
zeros), or an integer pair ``(a, b)`` meaning ``a + b*w``.

Ideals of the PID kinds are stored by canonical generator (nonnegative
integer, monic polynomial, zero allowed).  Ideals of a quadratic order
are stored as the Hermite normal form ``[[a, b], [0, c]]`` of a Z-basis
of the ideal as a sublattice of ``Z*1 + Z*w`` (diagonal positive,
``0 <= b < c``, multiplicative closure under ``w`` checked on
construction).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


class ParseError(ValueError):
    """Malformed domain, element, or ideal text."""


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


DEFAULT_FACTOR_CAP = 2 ** 64

# Fixed field moduli (coefficients in u, low degree first) so element
# encodings are reproducible across runs.
FIXED_FIELD_MODULI = {
    4: (1, 1, 1),      # u^2 + u + 1 over F_2
    8: (1, 1, 0, 1),   # u^3 + u + 1 over F_2
    9: (1, 0, 1),      # u^2 + 1 over F_3
}

_FQ_TABLE_LIMIT = 512


# ---------------------------------------------------------------------------
# small integer helpers


def _ext_gcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y, g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _factor_int(n, cap=DEFAULT_FACTOR_CAP):
    """Trial-division factorization of n >= 1 as an ordered dict prime -> exp."""
    if n > cap:
        raise CapExceeded(f"integer {n} exceeds factoring cap {cap}")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _is_prime(n):
    return n >= 2 and _factor_int(n) == {n: 1}


def _sqrt_mod_prime(a, p):
    """Square root of a modulo an odd prime p; None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# polynomials over F_p represented as coefficient tuples (used for the
# field modulus and for F_q internals)


def _pnorm(v, p):
    v = [c % p for c in v]
    while v and v[-1] == 0:
        v.pop()
    return tuple(v)


def _pmul(x, y, p):
    if not x or not y:
        return ()
    out = [0] * (len(x) + len(y) - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                out[i + j] = (out[i + j] + a * b) % p
    return _pnorm(out, p)


def _pdivmod(x, y, p):
    if not y:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(y[-1], p - 2, p)
    rem = list(x)
    quo = [0] * max(0, len(x) - len(y) + 1)
    for i in range(len(x) - len(y), -1, -1):
        c = rem[i + len(y) - 1] * inv % p
        if c:
            quo[i] = c
            for j, b in enumerate(y):
                rem[i + j] = (rem[i + j] - c * b) % p
    return _pnorm(quo, p), _pnorm(rem, p)


def _p_is_irreducible(f, p):
    """Trial division by all lower-degree monic polynomials."""
    d = len(f) - 1
    if d < 1:
        return False
    for deg in range(1, d // 2 + 1):
        for idx in range(p ** deg):
            cand = []
            k = idx
            for _ in range(deg):
                cand.append(k % p)
                k //= p
            cand.append(1)
            if _pdivmod(f, tuple(cand), p)[1] == ():
                return False
    return True


# ---------------------------------------------------------------------------
# integer row HNF for small lattices


def _row_hnf(rows, ncols):
    """Hermite normal form (row style) of an integer matrix given as rows.

    Returns the list of pivot rows ordered by pivot column; entries above
    each pivot are reduced into [0, pivot).
    """
    work = [tuple(r) for r in rows if any(r)]
    pivots = []
    for col in range(ncols):
        rest = []
        piv = None
        for r in work:
            if r[col] == 0:
                rest.append(r)
                continue
            if piv is None:
                piv = r
                continue
            a, b = piv, r
            while b[col] != 0:
                q = a[col] // b[col]
                a = tuple(x - q * y for x, y in zip(a, b))
                a, b = b, a
            piv = a
            if any(b):
                rest.append(b)
        if piv is not None:
            if piv[col] < 0:
                piv = tuple(-x for x in piv)
            pivots.append(piv)
        work = rest
    for i in range(len(pivots) - 1, -1, -1):
        p = pivots[i]
        pcol = next(j for j in range(ncols) if p[j] != 0)
        for k in range(i):
            r = pivots[k]
            if r[pcol] != 0:
                q = r[pcol] // p[pcol]
                pivots[k] = tuple(x - q * y for x, y in zip(r, p))
    return pivots


# ---------------------------------------------------------------------------
# element expression parsing (shared by all kinds)

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-zA-Z]+)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"bad character in element text: {text[pos:]!r}")
        pos = m.end()
        for kind, val in zip(
            ("int", "name", "pow", "mul", "add", "sub", "lpar", "rpar"), m.groups()
        ):
            if val is not None:
                tokens.append((kind, val))
                break
    return tokens


class _ExprParser:
    """Parses +/-/*/^ expressions in the variables u, t, w into a monomial
    dict {(u_exp, t_exp, w_exp): integer coefficient}."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self):
        out = self.sum_()
        if self.pos != len(self.tokens):
            raise ParseError("trailing tokens in element text")
        return out

    def sum_(self):
        sign = 1
        kind, _ = self.peek()
        if kind in ("add", "sub"):
            self.take()
            sign = -1 if kind == "sub" else 1
        total = _mono_scale(self.term(), sign)
        while True:
            kind, _ = self.peek()
            if kind not in ("add", "sub"):
                return total
            self.take()
            sign = -1 if kind == "sub" else 1
            total = _mono_add(total, _mono_scale(self.term(), sign))

    def term(self):
        result = self.atom()
        while True:
            kind, _ = self.peek()
            if kind != "mul":
                return result
            self.take()
            result = _mono_mul(result, self.atom())

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return {(0, 0, 0): int(val)}
        if kind == "lpar":
            inner = self.sum_()
            kind, _ = self.take()
            if kind != "rpar":
                raise ParseError("unbalanced parenthesis in element text")
            return self._maybe_pow_group(inner)
        if kind == "name":
            if val not in ("u", "t", "w"):
                raise ParseError(f"unknown symbol {val!r}")
            exp = 1
            if self.peek()[0] == "pow":
                self.take()
                k, v = self.take()
                if k != "int":
                    raise ParseError("exponent must be an integer")
                exp = int(v)
            key = tuple(exp if s == val else 0 for s in ("u", "t", "w"))
            return {key: 1}
        raise ParseError("malformed element text")

    def _maybe_pow_group(self, inner):
        if self.peek()[0] == "pow":
            self.take()
            k, v = self.take()
            if k != "int":
                raise ParseError("exponent must be an integer")
            out = {(0, 0, 0): 1}
            for _ in range(int(v)):
                out = _mono_mul(out, inner)
            return out
        return inner


def _mono_scale(m, s):
    return {k: v * s for k, v in m.items()}


def _mono_add(m1, m2):
    out = dict(m1)
    for k, v in m2.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _mono_mul(m1, m2):
    out = {}
    for k1, v1 in m1.items():
        for k2, v2 in m2.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            out[k] = out.get(k, 0) + v1 * v2
    return {k: v for k, v in out.items() if v}


def _parse_monomials(text):
    return _ExprParser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# domains


class Domain:
    """Base class; concrete kinds implement the arithmetic hooks."""

    kind = None

    # -- element arithmetic (implemented by subclasses) --

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def from_int(self, n):
        raise NotImplementedError

    def is_zero(self, x):
        return x == self.zero()

    def is_unit(self, x):
        return x in self.units

    def element_str(self, x):
        raise NotImplementedError

    def parse_element(self, text):
        raise NotImplementedError

    # -- ideals --

    def zero_ideal(self):
        raise NotImplementedError

    def unit_ideal(self):
        return self.principal_ideal(self.one())

    def principal_ideal(self, x):
        return self.ideal_from_gens([x])

    def ideal_from_gens(self, elems):
        raise NotImplementedError

    def parse_ideal(self, text):
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            return self.principal_ideal(self.parse_element(text[1:-1]))
        raise ParseError(f"bad ideal text {text!r}")

    def __repr__(self):
        return f"<Domain {self}>"


class IntegerDomain(Domain):
    kind = "integers"

    def __init__(self):
        self.units = (1, -1)
        self.unit_squares = (1,)

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, x, y):
        return x + y

    def neg(self, x):
        return -x

    def mul(self, x, y):
        return x * y

    def from_int(self, n):
        return n

    def element_str(self, x):
        return str(x)

    def parse_element(self, text):
        monos = _parse_monomials(text)
        if any(k != (0, 0, 0) for k in monos):
            raise ParseError("integer elements cannot use symbols")
        return monos.get((0, 0, 0), 0)

    def zero_ideal(self):
        return Ideal(self, 0)

    def ideal_from_gens(self, elems):
        g = 0
        for x in elems:
            g = math.gcd(g, x)
        return Ideal(self, g)

    def __str__(self):
        return "Z"

    def __eq__(self, other):
        return isinstance(other, IntegerDomain)

    def __hash__(self):
        return hash("Z")


class PolynomialDomain(Domain):
    """F_q[t]; elements are tuples of F_q values (ints in range(q))."""

    kind = "polynomials"

    def __init__(self, p, e, field_modulus=None):
        if not _is_prime(p):
            raise ParseError(f"{p} is not prime")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            self.field_modulus = None
        else:
            if field_modulus is None:
                raise ParseError(f"a field modulus is required for q={self.q}")
            fm = _pnorm(field_modulus, p)
            if len(fm) - 1 != e:
                raise ParseError("field modulus degree does not match q")
            if fm[-1] != 1:
                raise ParseError("field modulus must be monic")
            if not _p_is_irreducible(fm, p):
                raise ParseError("field modulus is reducible")
            if self.q > _FQ_TABLE_LIMIT:
                raise CapExceeded(f"field size {self.q} above table limit")
            self.field_modulus = fm
        self._build_field_tables()
        self.units = tuple((c,) for c in range(1, self.q))
        self.unit_squares = tuple(
            sorted({(self.fq_mul(c, c),) for c in range(1, self.q)})
        )

    # F_q internals: values are ints in range(q), base-p digit encoding

    def _fq_tuple(self, v):
        digits = []
        for _ in range(self.e):
            digits.append(v % self.p)
            v //= self.p
        return _pnorm(digits, self.p)

    def _fq_value(self, tup):
        v = 0
        for c in reversed(tup):
            v = v * self.p + c
        return v

    def _build_field_tables(self):
        if self.e == 1:
            self._mul_table = None
            self._inv_table = None
            return
        q = self.q
        mul = [0] * (q * q)
        for a in range(q):
            ta = self._fq_tuple(a)
            for b in range(a, q):
                prod = _pmul(ta, self._fq_tuple(b), self.p)
                r = _pdivmod(prod, self.field_modulus, self.p)[1]
                v = self._fq_value(r)
                mul[a * q + b] = v
                mul[b * q + a] = v
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        self._mul_table = mul
        self._inv_table = inv

    def fq_add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        out = 0
        shift = 1
        for _ in range(self.e):
            out += ((a % self.p + b % self.p) % self.p) * shift
            a //= self.p
            b //= self.p
            shift *= self.p
        return out

    def fq_neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        out = 0
        shift = 1
        for _ in range(self.e):
            out += ((-a) % self.p) * shift
            a //= self.p
            shift *= self.p
        return out

    def fq_mul(self, a, b):
        if self.e == 1:
            return a * b % self.p
        return self._mul_table[a * self.q + b]

    def fq_inv(self, a):
        if a == 0:
            raise ZeroDivisionError("field inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._inv_table[a]

    def fq_pow(self, a, k):
        out = 1
        for _ in range(k):
            out = self.fq_mul(out, a)
        return out

    def fq_embed_int(self, n):
        return n % self.p

    # polynomial arithmetic

    def _norm(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def zero(self):
        return ()

    def one(self):
        return (1,)

    def deg(self, x):
        return len(x) - 1

    def add(self, x, y):
        n = max(len(x), len(y))
        out = []
        for i in range(n):
            a = x[i] if i < len(x) else 0
            b = y[i] if i < len(y) else 0
            out.append(self.fq_add(a, b))
        return self._norm(out)

    def neg(self, x):
        return tuple(self.fq_neg(c) for c in x)

    def mul(self, x, y):
        if not x or not y:
            return ()
        out = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    out[i + j] = self.fq_add(out[i + j], self.fq_mul(a, b))
        return self._norm(out)

    def divmod(self, x, y):
        if not y:
            raise ZeroDivisionError("polynomial division by zero")
        inv = self.fq_inv(y[-1])
        rem = list(x)
        quo = [0] * max(0, len(x) - len(y) + 1)
        for i in range(len(x) - len(y), -1, -1):
            c = self.fq_mul(rem[i + len(y) - 1], inv)
            if c:
                quo[i] = c
                for j, b in enumerate(y):
                    rem[i + j] = self.fq_add(rem[i + j], self.fq_neg(self.fq_mul(c, b)))
        return self._norm(quo), self._norm(rem)

    def monic(self, x):
        if not x:
            return x
        inv = self.fq_inv(x[-1])
        return tuple(self.fq_mul(c, inv) for c in x)

    def gcd(self, x, y):
        while y:
            x, y = y, self.divmod(x, y)[1]
        return self.monic(x)

    def ext_gcd(self, x, y):
        """Return (g, a, b) with g = gcd monic = a*x + b*y."""
        old_r, r = x, y
        old_s, s = self.one(), self.zero()
        old_t, t = self.zero(), self.one()
        while r:
            q, rem = self.divmod(old_r, r)
            old_r, r = r, rem
            old_s, s = s, self.sub(old_s, self.mul(q, s))
            old_t, t = t, self.sub(old_t, self.mul(q, t))
        if old_r:
            inv = self.fq_inv(old_r[-1])
            scale = (inv,)
            old_r = self.mul(old_r, scale)
            old_s = self.mul(old_s, scale)
            old_t = self.mul(old_t, scale)
        return old_r, old_s, old_t

    def from_int(self, n):
        c = self.fq_embed_int(n)
        return (c,) if c else ()

    def element_str(self, x):
        if not x:
            return "0"
        parts = []
        for k in range(len(x) - 1, -1, -1):
            c = x[k]
            if c == 0:
                continue
            ctext, nterms = self._fq_str(c)
            if k == 0:
                parts.append(ctext if nterms == 1 else f"({ctext})")
            else:
                tpart = "t" if k == 1 else f"t^{k}"
                if c == 1:
                    parts.append(tpart)
                elif nterms == 1:
                    parts.append(f"{ctext}*{tpart}")
                else:
                    parts.append(f"({ctext})*{tpart}")
        return "+".join(parts)

    def _fq_str(self, c):
        """Render an F_q value as a u-polynomial; returns (text, #terms)."""
        tup = self._fq_tuple(c) if self.e > 1 else (c,)
        parts = []
        for k in range(len(tup) - 1, -1, -1):
            a = tup[k]
            if a == 0:
                continue
            if k == 0:
                parts.append(str(a))
            else:
                upart = "u" if k == 1 else f"u^{k}"
                parts.append(upart if a == 1 else f"{a}*{upart}")
        if not parts:
            return "0", 1
        return "+".join(parts), len(parts)

    def parse_element(self, text):
        monos = _parse_monomials(text)
        coeffs = {}
        u_elt = self.p if self.e > 1 else None  # the field generator u
        for (ue, te, we), c in monos.items():
            if we:
                raise ParseError("symbol w is not defined in a polynomial domain")
            if ue and self.e == 1:
                raise ParseError("symbol u is not defined over a prime field")
            v = self.fq_embed_int(c)
            if ue:
                v = self.fq_mul(v, self.fq_pow(u_elt, ue))
            coeffs[te] = self.fq_add(coeffs.get(te, 0), v)
        if not coeffs:
            return ()
        out = [0] * (max(coeffs) + 1)
        for k, v in coeffs.items():
            out[k] = v
        return self._norm(out)

    def zero_ideal(self):
        return Ideal(self, ())

    def ideal_from_gens(self, elems):
        g = ()
        for x in elems:
            g = self.gcd(g, x)
        return Ideal(self, g)

    def __str__(self):
        if self.e == 1:
            return f"Fq[t] q={self.q}"
        mod = self.element_str(tuple(self.field_modulus))
        # the modulus lives in u, not t
        mod = mod.replace("t", "u")
        return f"Fq[t] q={self.q} mod={mod}"

    def __eq__(self, other):
        return (
            isinstance(other, PolynomialDomain)
            and other.p == self.p
            and other.e == self.e
            and other.field_modulus == self.field_modulus
        )

    def __hash__(self):
        return hash(("Fq[t]", self.p, self.e, self.field_modulus))


class QuadraticDomain(Domain):
    """Maximal order of Q(sqrt(m)), m < 0 squarefree; elements (a, b) = a + b*w."""

    kind = "quadratic"

    def __init__(self, m):
        if m >= 0:
            raise ParseError("m must be negative")
        mm = _factor_int(-m)
        if any(e > 1 for e in mm.values()):
            raise ParseError("m must be squarefree")
        self.m = m
        if m % 4 == 1:
            # w = (1 + sqrt(m))/2, w^2 = (m-1)/4 + w
            self.c0 = (m - 1) // 4
            self.c1 = 1
            self.disc = m
        else:
            # w = sqrt(m), w^2 = m
            self.c0 = m
            self.c1 = 0
            self.disc = 4 * m
        if m == -1:
            self.units = ((1, 0), (-1, 0), (0, 1), (0, -1))
        elif m == -3:
            self.units = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
        else:
            self.units = ((1, 0), (-1, 0))
        squares = sorted({self.mul(u, u) for u in self.units})
        for x in squares:
            for y in squares:
                assert self.mul(x, y) in squares, "unit squares not closed"
        self.unit_squares = tuple(squares)

    def zero(self):
        return (0, 0)

    def one(self):
        return (1, 0)

    def w(self):
        return (0, 1)

    def add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def mul(self, x, y):
        a, b = x
        c, d = y
        bd = b * d
        return (a * c + bd * self.c0, a * d + b * c + bd * self.c1)

    def from_int(self, n):
        return (n, 0)

    def element_norm(self, x):
        """Field norm N(a + b*w) as an integer."""
        a, b = x
        # N(x) = x * conj(x); conj(w) = c1 - w
        return a * a + a * b * self.c1 - b * b * self.c0

    def element_str(self, x):
        a, b = x
        if b == 0:
            return str(a)
        wtxt = "w" if abs(b) == 1 else f"{abs(b)}*w"
        if a == 0:
            return wtxt if b > 0 else f"-{wtxt}"
        return f"{a}+{wtxt}" if b > 0 else f"{a}-{wtxt}"

    def parse_element(self, text):
        monos = _parse_monomials(text)
        a, b = 0, 0
        for (ue, te, we), c in monos.items():
            if ue or te:
                raise ParseError("symbols u, t are not defined in a quadratic domain")
            val = (c, 0)
            for _ in range(we):
                val = self.mul(val, (0, 1))
            a += val[0]
            b += val[1]
        return (a, b)

    def zero_ideal(self):
        return Ideal(self, (0, 0, 0))

    def ideal_from_gens(self, elems):
        rows = []
        for x in elems:
            rows.append(x)
            rows.append(self.mul(x, (0, 1)))
        return self.ideal_from_lattice(rows)

    def ideal_from_lattice(self, rows):
        """HNF of the given coordinate rows; validates closure under w."""
        piv = _row_hnf(rows, 2)
        if not piv:
            return Ideal(self, (0, 0, 0))
        if len(piv) != 2 or piv[0][0] == 0 or piv[1][1] == 0:
            raise ValueError("lattice is not of full rank")
        a, b = piv[0]
        c = piv[1][1]
        data = (a, b, c)
        self._check_ideal_lattice(data)
        return Ideal(self, data)

    def ideal_from_hnf(self, a, b, c):
        if a <= 0 or c <= 0 or not 0 <= b < c:
            raise ParseError("HNF must have positive diagonal and reduced offset")
        data = (a, b, c)
        self._check_ideal_lattice(data)
        return Ideal(self, data)

    def _lattice_contains(self, data, x):
        a, b, c = data
        u, v = x
        if a == 0:
            return u == 0 and v == 0
        if u % a:
            return False
        return (v - (u // a) * b) % c == 0

    def _check_ideal_lattice(self, data):
        a, b, c = data
        for row in ((a, b), (0, c)):
            wrow = self.mul(row, (0, 1))
            if not self._lattice_contains(data, wrow):
                raise ValueError("lattice is not closed under multiplication by w")

    def __str__(self):
        return f"Q(sqrt({self.m})) maximal"

    def __eq__(self, other):
        return isinstance(other, QuadraticDomain) and other.m == self.m

    def __hash__(self):
        return hash(("Qsqrt", self.m))

    def parse_ideal(self, text):
        text = text.strip()
        if text.startswith("[["):
            m = re.match(
                r"\[\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*0\s*,\s*(-?\d+)\s*\]\]$",
                text,
            )
            if not m:
                raise ParseError(f"bad HNF ideal text {text!r}")
            a, b, c = (int(g) for g in m.groups())
            if a == 0 and b == 0 and c == 0:
                return self.zero_ideal()
            return self.ideal_from_hnf(a, b, c)
        return super().parse_ideal(text)


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class Ideal:
    """Canonical ideal of a supported domain.

    data is a nonnegative integer, a monic polynomial tuple, or an HNF
    triple (a, b, c) for the lattice rows (a, b), (0, c).
    """

    domain: Domain
    data: object

    def is_zero(self):
        if self.domain.kind == "quadratic":
            return self.data == (0, 0, 0)
        return self.data == self.domain.zero()

    def is_unit_ideal(self):
        if self.domain.kind == "quadratic":
            return self.data == (1, 0, 1)
        return self.data == self.domain.one()

    def generators(self):
        """Elements generating the ideal (one for PID kinds, two lattice rows)."""
        if self.domain.kind == "quadratic":
            a, b, c = self.data
            return [(a, b), (0, c)]
        return [self.data]

    def contains(self, x):
        D = self.domain
        if D.kind == "quadratic":
            return D._lattice_contains(self.data, x)
        if self.is_zero():
            return D.is_zero(x)
        if D.kind == "integers":
            return x % self.data == 0
        return D.divmod(x, self.data)[1] == ()

    def contains_ideal(self, other):
        """True iff other is a subset of self."""
        return all(self.contains(g) for g in other.generators())

    def norm(self):
        return residue_norm(self)

    def __str__(self):
        if self.domain.kind == "quadratic":
            if self.is_zero():
                return "(0)"
            a, b, c = self.data
            return f"[[{a},{b}],[0,{c}]]"
        return f"({self.domain.element_str(self.data)})"

    def __repr__(self):
        return f"<Ideal {self} of {self.domain}>"


@dataclass(frozen=True)
class PrimeFactorization:
    """Pairwise-distinct prime ideals with positive exponents."""

    pairs: tuple

    def __post_init__(self):
        seen = set()
        for p, e in self.pairs:
            key = (p.domain, p.data)
            if key in seen:
                raise ValueError("duplicate prime in factorization")
            seen.add(key)
            if e <= 0:
                raise ValueError("exponents must be positive")

    def product(self):
        out = None
        for p, e in self.pairs:
            pe = ideal_pow(p, e)
            out = pe if out is None else ideal_arith("product", out, pe)
        return out


def _check_same_domain(I, J):
    if I.domain != J.domain:
        raise ValueError("ideals belong to different domains")


def ideal_arith(mode, I, J):
    """Sum, product, or intersection of two ideals of the same domain."""
    _check_same_domain(I, J)
    D = I.domain
    if mode == "sum":
        if I.is_zero():
            return J
        if J.is_zero():
            return I
        if D.kind == "quadratic":
            return D.ideal_from_lattice(list(I.generators()) + list(J.generators()))
        return D.ideal_from_gens([I.data, J.data])
    if mode == "product":
        if I.is_zero() or J.is_zero():
            return D.zero_ideal()
        if D.kind == "quadratic":
            rows = [D.mul(x, y) for x in I.generators() for y in J.generators()]
            return D.ideal_from_lattice(rows)
        return Ideal(D, D.mul(I.data, J.data) if D.kind == "polynomials" else I.data * J.data)
    if mode == "intersect":
        if I.is_zero() or J.is_zero():
            return D.zero_ideal()
        if D.kind == "integers":
            return Ideal(D, I.data * J.data // math.gcd(I.data, J.data))
        if D.kind == "polynomials":
            g = D.gcd(I.data, J.data)
            quo, rem = D.divmod(D.mul(I.data, J.data), g)
            assert rem == ()
            return Ideal(D, D.monic(quo))
        rows = _quad_pair_rows(I, J)
        piv = _row_hnf(rows, 4)
        inter = [r[2:] for r in piv if r[0] == 0 and r[1] == 0]
        return D.ideal_from_lattice(inter)
    raise ValueError(f"unknown mode {mode!r}")


def _quad_pair_rows(I, J):
    rows = []
    for g in I.generators():
        rows.append((g[0], g[1], g[0], g[1]))
    for g in J.generators():
        rows.append((g[0], g[1], 0, 0))
    return rows


def ideal_bezout(I, J):
    """For coprime I + J = D, return (x, y) with x in I, y in J, x + y = 1."""
    _check_same_domain(I, J)
    D = I.domain
    if not ideal_arith("sum", I, J).is_unit_ideal():
        raise ValueError("ideals are not coprime")
    if D.kind == "integers":
        g, s, t = _ext_gcd(I.data, J.data)
        assert g == 1
        return (s * I.data, t * J.data)
    if D.kind == "polynomials":
        g, s, t = D.ext_gcd(I.data, J.data)
        assert g == D.one()
        return (D.mul(s, I.data), D.mul(t, J.data))
    piv = _row_hnf(_quad_pair_rows(I, J), 4)
    lead = [r for r in piv if r[0] != 0]
    assert lead and lead[0][0] == 1 and lead[0][1] == 0
    x = (lead[0][2], lead[0][3])
    y = D.sub(D.one(), x)
    assert I.contains(x) and J.contains(y)
    return (x, y)


def ideal_pow(I, k):
    if k == 0:
        return I.domain.unit_ideal()
    out = I
    for _ in range(k - 1):
        out = ideal_arith("product", out, I)
    return out


def residue_norm(I):
    """|D/I| for a nonzero ideal."""
    if I.is_zero():
        raise ValueError("residue norm of the zero ideal")
    D = I.domain
    if D.kind == "integers":
        return abs(I.data)
    if D.kind == "polynomials":
        return D.q ** D.deg(I.data)
    a, _, c = I.data
    return a * c


def factor_ideal(I, cap=DEFAULT_FACTOR_CAP):
    """Complete prime factorization of a nonzero ideal."""
    if I.is_zero():
        raise ValueError("cannot factor the zero ideal")
    D = I.domain
    if residue_norm(I) > cap:
        raise CapExceeded(f"ideal norm {residue_norm(I)} exceeds factoring cap {cap}")
    if D.kind == "integers":
        pairs = [
            (Ideal(D, p), e) for p, e in sorted(_factor_int(abs(I.data), cap).items())
        ]
    elif D.kind == "polynomials":
        pairs = _factor_poly_ideal(D, I)
    else:
        pairs = _factor_quad_ideal(D, I, cap)
    pf = PrimeFactorization(tuple(pairs))
    if not I.is_unit_ideal():
        product = pf.product()
        assert product is not None and product.data == I.data, "factorization mismatch"
    return pf


def _factor_poly_ideal(D, I):
    # trial division by monic polynomials of increasing degree; once all
    # factors of degree < d are removed, any degree-d divisor is irreducible
    rem = I.data
    pairs = []
    d = 1
    while D.deg(rem) >= 1:
        if 2 * d > D.deg(rem):
            pairs.append((Ideal(D, D.monic(rem)), 1))
            break
        if D.q ** d > 10 ** 6:
            raise CapExceeded("polynomial factor search too large")
        for idx in range(D.q ** d):
            cand = []
            k = idx
            for _ in range(d):
                cand.append(k % D.q)
                k //= D.q
            cand.append(1)
            cand = tuple(cand)
            e = 0
            while True:
                quo, r = D.divmod(rem, cand)
                if r != ():
                    break
                rem = quo
                e += 1
            if e:
                pairs.append((Ideal(D, cand), e))
        d += 1
    return pairs


def _quad_primes_above(D, ell):
    """Prime ideals of the maximal order above the rational prime ell."""
    c0, c1 = D.c0, D.c1
    if ell == 2:
        roots = [r for r in (0, 1) if (r * r - c1 * r - c0) % 2 == 0]
        if len(roots) == 2:
            kind = "split"
        elif len(roots) == 1:
            kind = "ramified"
        else:
            kind = "inert"
    else:
        disc = (c1 * c1 + 4 * c0) % ell
        if disc == 0:
            kind = "ramified"
            inv2 = pow(2, ell - 2, ell)
            roots = [c1 * inv2 % ell]
        else:
            s = _sqrt_mod_prime(disc, ell)
            if s is None:
                kind = "inert"
                roots = []
            else:
                kind = "split"
                inv2 = pow(2, ell - 2, ell)
                roots = sorted({(c1 + s) * inv2 % ell, (c1 - s) * inv2 % ell})
    if kind == "inert":
        return [D.principal_ideal(D.from_int(ell))]
    return [D.ideal_from_gens([D.from_int(ell), (-r, 1)]) for r in roots]


def _factor_quad_ideal(D, I, cap):
    pairs = []
    n = residue_norm(I)
    for ell in sorted(_factor_int(n, cap)):
        for P in _quad_primes_above(D, ell):
            e = 0
            Pk = P
            while Pk.contains_ideal(I):
                e += 1
                Pk = ideal_arith("product", Pk, P)
            if e:
                pairs.append((P, e))
    pairs.sort(key=lambda pe: (residue_norm(pe[0]), pe[0].data))
    return pairs


def crt_select(factors):
    """An element d with d in p_i^a_i \\ p_i^(a_i+1) for every listed prime.

    factors is a list of (prime Ideal, exponent >= 0) pairs with pairwise
    distinct primes.  Memberships are verified before returning.
    """
    if not factors:
        raise ValueError("empty factor list")
    D = factors[0][0].domain
    seen = set()
    for p, e in factors:
        if p.domain != D:
            raise ValueError("primes from different domains")
        if p.data in seen:
            raise ValueError("duplicate primes")
        seen.add(p.data)
        if e < 0:
            raise ValueError("negative exponent")
    picks = []
    uppers = []
    for p, e in factors:
        pe = ideal_pow(p, e)
        pe1 = ideal_arith("product", pe, p)
        x = None
        for cand in pe.generators():
            if not pe1.contains(cand):
                x = cand
                break
        assert x is not None, "prime power equals its successor"
        picks.append(x)
        uppers.append(pe1)
    if len(factors) == 1:
        d = picks[0]
    else:
        d = D.zero()
        for i, (x, Ai) in enumerate(zip(picks, uppers)):
            Bi = None
            for j, other in enumerate(uppers):
                if j == i:
                    continue
                Bi = other if Bi is None else ideal_arith("product", Bi, other)
            _, ui = ideal_bezout(Ai, Bi)  # ui = 1 mod Ai, ui in Bi
            d = D.add(d, D.mul(x, ui))
    for (p, e), Ai in zip(factors, uppers):
        assert ideal_pow(p, e).contains(d) and not Ai.contains(d)
    return d


@dataclass(frozen=True)
class ConditionLReport:
    holds: bool
    failed_clause: object  # "i" | "ii" | None
    witnesses: tuple

    def to_json(self):
        return {
            "holds": self.holds,
            "failed_clause": self.failed_clause,
            "witnesses": [str(w) for w in self.witnesses],
        }


def condition_L(q, cap=DEFAULT_FACTOR_CAP):
    """Coprimality-to-2 and no simple residue-3 prime divisor.

    Clause (i): q + (2) = D.  Clause (ii): no prime p | q with
    |D/p| = 3 appearing with exponent exactly 1.
    """
    if q.is_zero():
        raise ValueError("condition requires a nonzero ideal")
    D = q.domain
    two = D.principal_ideal(D.from_int(2))
    factors = factor_ideal(q, cap)
    if not ideal_arith("sum", q, two).is_unit_ideal():
        twoelem = D.from_int(2)
        witnesses = tuple(p for p, _ in factors.pairs if p.contains(twoelem))
        return ConditionLReport(False, "i", witnesses)
    bad = tuple(
        p for p, e in factors.pairs if e == 1 and residue_norm(p) == 3
    )
    if bad:
        return ConditionLReport(False, "ii", bad)
    return ConditionLReport(True, None, ())


# ---------------------------------------------------------------------------
# domain parsing


_POLY_SPEC_RE = re.compile(r"^Fq\[t\]\s+q=(\d+)(?:\s+mod=(\S+))?$")
_QUAD_SPEC_RE = re.compile(r"^Q\(sqrt\((-?\d+)\)\)\s+maximal$")


def parse_domain(spec):
    """Parse a domain description: "Z", "Fq[t] q=.. [mod=..]", "Q(sqrt(m)) maximal"."""
    spec = spec.strip()
    if spec == "Z":
        return IntegerDomain()
    m = _POLY_SPEC_RE.match(spec)
    if m:
        q = int(m.group(1))
        fact = _factor_int(q)
        if len(fact) != 1:
            raise ParseError(f"q={q} is not a prime power")
        p = next(iter(fact))
        e = fact[p]
        if e == 1:
            if m.group(2):
                raise ParseError("prime fields take no modulus")
            return PolynomialDomain(p, 1)
        if m.group(2):
            modulus = _parse_u_poly(m.group(2), p)
        elif q in FIXED_FIELD_MODULI:
            modulus = FIXED_FIELD_MODULI[q]
        else:
            raise ParseError(f"q={q} requires an explicit mod= polynomial")
        return PolynomialDomain(p, e, modulus)
    m = _QUAD_SPEC_RE.match(spec)
    if m:
        return QuadraticDomain(int(m.group(1)))
    raise ParseError(f"unrecognized domain spec {spec!r}")


def _parse_u_poly(text, p):
    monos = _parse_monomials(text)
    coeffs = {}
    for (ue, te, we), c in monos.items():
        if te or we:
            raise ParseError("field modulus must be a polynomial in u")
        coeffs[ue] = (coeffs.get(ue, 0) + c) % p
    if not coeffs:
        raise ParseError("empty field modulus")
    out = [0] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        out[k] = v
    return _pnorm(out, p)
