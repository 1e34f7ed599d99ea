"""Binary finite fields and concrete genus-2 curves y^2 + a(x) y = b(x).

Field elements are ints holding polynomial bit-vectors modulo a fixed
irreducible; multiplication runs on discrete-log tables, so the fields
stay cheap up to GF(2^16) (the largest needed for two-step point
counts).  Curve polynomials are ascending coefficient tuples over the
field, a of degree <= 3 (nonzero) and b of degree <= 6, in the affine
convention a(x) = sum a_i x^i with infinity at x1 = 0.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .polycore import VAR_INDEX, EXP_BITS, EXP_MASK


class ZeroCubic(Exception):
    """The cubic a vanishes; the datum is not a curve."""


class NotSmooth(Exception):
    pass


class FieldTooLarge(Exception):
    pass


class SingularMatrix(Exception):
    pass


# Fixed moduli (bit k = coefficient of z^k); any fixed irreducibles
# would do, these keep serialized field elements reproducible.
FIXED_MODULI = {
    1: 0b10,                # z
    2: 0b111,               # z^2+z+1
    3: 0b1011,              # z^3+z+1
    4: 0b10011,             # z^4+z+1
    5: 0b100101,            # z^5+z^2+1
    6: 0b1011011,           # z^6+z^4+z^3+z+1
    7: 0b10000011,          # z^7+z+1
    8: 0b100011101,         # z^8+z^4+z^3+z+1
}
MAX_EXTENSION = 16


def _gf2x_mod(a, b):
    db = b.bit_length() - 1
    while a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def _gf2x_irreducible(f, n):
    """Exhaustive trial division by all lower-degree polynomials."""
    if f.bit_length() - 1 != n:
        return False
    if n == 1:
        return True
    if not f & 1:
        return False
    for d in range(1, n // 2 + 1):
        for g in range(1 << d, 1 << (d + 1)):
            if _gf2x_mod(f, g) == 0:
                return False
    return True


def _smallest_irreducible(n):
    for f in range((1 << n) + 1, 1 << (n + 1), 2):
        if _gf2x_irreducible(f, n):
            return f
    raise AssertionError("no irreducible of degree %d" % n)


class BinaryField:
    """GF(2^n) with elements as ints < 2^n; addition is XOR."""

    def __init__(self, n, modulus=None):
        if not 1 <= n <= MAX_EXTENSION:
            raise FieldTooLarge("extension degree %d out of range" % n)
        if modulus is None:
            modulus = FIXED_MODULI.get(n) or _smallest_irreducible(n)
        if not _gf2x_irreducible(modulus, n):
            raise ValueError("modulus 0b%s is not irreducible"
                             % bin(modulus)[2:])
        self.n = n
        self.modulus = modulus
        self.q = 1 << n
        self._log, self._exp = self._build_tables()

    def _raw_mul(self, a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            if (a >> self.n) & 1:
                a ^= self.modulus
            b >>= 1
        return r

    def _build_tables(self):
        q = self.q
        if q == 2:
            return [0, 0], [1]
        for gen in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._raw_mul(x, gen)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                log = [0] * q
                for e, v in enumerate(exp):
                    log[v] = e
                return log, exp
        raise AssertionError("no multiplicative generator found")

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def sqrt(self, a):
        # squaring is bijective; the inverse is q/2 more squarings
        return self.pow(a, self.q // 2) if a else 0

    def frobenius(self, a):
        return self.mul(a, a)

    def trace(self, a):
        t = 0
        x = a
        for _ in range(self.n):
            t ^= x
            x = self.mul(x, x)
        return t

    def elements(self):
        return range(self.q)

    @property
    def generator(self):
        if self.q == 2:
            return 1
        return self._exp[1]

    def __repr__(self):
        return "GF(2^%d)" % self.n


@lru_cache(maxsize=None)
def binary_field(n):
    return BinaryField(n)


@lru_cache(maxsize=None)
def _embedding_table(n, big_n):
    """Map from GF(2^n) into GF(2^big_n) as a lookup list."""
    if big_n % n:
        raise ValueError("no embedding of GF(2^%d) in GF(2^%d)"
                         % (n, big_n))
    base = binary_field(n)
    big = binary_field(big_n)
    if n == 1:
        return [0, 1]
    root = None
    for x in big.elements():
        acc = 0
        mod = base.modulus
        k = 0
        power = 1
        while mod:
            if mod & 1:
                acc ^= power
            power = big.mul(power, x)
            mod >>= 1
            k += 1
        if acc == 0 and x:
            root = x
            break
    assert root is not None
    table = []
    for v in base.elements():
        acc = 0
        power = 1
        while v:
            if v & 1:
                acc ^= power
            power = big.mul(power, root)
            v >>= 1
        table.append(acc)
    return table


# -- polynomials over the field (ascending coefficient tuples) ----------


def ptrim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def pdeg(u):
    return len(u) - 1


def padd(u, v):
    n = max(len(u), len(v))
    return ptrim(
        (u[i] if i < len(u) else 0) ^ (v[i] if i < len(v) else 0)
        for i in range(n))


def pmul(F, u, v):
    if not u or not v:
        return ()
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    out[i + j] ^= F.mul(a, b)
    return ptrim(out)


def pscale(F, u, c):
    if c == 0:
        return ()
    return tuple(F.mul(x, c) for x in u)


def pdivmod(F, u, v):
    if not v:
        raise ZeroDivisionError("division by the zero polynomial")
    u = list(u)
    q = [0] * max(0, len(u) - len(v) + 1)
    inv_lead = F.inv(v[-1])
    for i in range(len(u) - len(v), -1, -1):
        c = F.mul(u[i + len(v) - 1], inv_lead)
        if c:
            q[i] = c
            for j, b in enumerate(v):
                u[i + j] ^= F.mul(c, b)
    return ptrim(q), ptrim(u)


def pgcd(F, u, v):
    while v:
        u, v = v, pdivmod(F, u, v)[1]
    if u:
        u = pscale(F, u, F.inv(u[-1]))
    return u


def pderiv(u):
    return ptrim(u[i] if i % 2 else 0 for i in range(1, len(u)))


def peval(F, u, x):
    acc = 0
    for c in reversed(u):
        acc = F.mul(acc, x) ^ c
    return acc


def psqrt(F, u):
    """Square root of a polynomial that is a square (even exponents)."""
    assert all(c == 0 for i, c in enumerate(u) if i % 2 == 1)
    return ptrim(F.sqrt(u[2 * i])
                 for i in range((len(u) + 1) // 2))


def pradical(F, u):
    """Product of the distinct irreducible factors of u, monic.

    Characteristic-2 aware: when the derivative vanishes the input is a
    perfect square and the radical of its square root is taken instead.
    """
    if pdeg(u) <= 0:
        return (1,) if u else ()
    du = pderiv(u)
    if not du:
        return pradical(F, psqrt(F, u))
    g = pgcd(F, u, du)
    if pdeg(g) == 0:
        return pscale(F, u, F.inv(u[-1]))
    w = pdivmod(F, u, g)[0]  # odd-multiplicity factors, each once
    rg = pradical(F, g)      # factors of multiplicity >= 2
    common = pgcd(F, w, rg)
    rad = pmul(F, pdivmod(F, w, common)[0], rg)
    return pscale(F, rad, F.inv(rad[-1]))


def preverse(u, degree):
    """Coefficients of x^degree * u(1/x), within the stated degree."""
    padded = list(u) + [0] * (degree + 1 - len(u))
    return ptrim(reversed(padded))


A_SLOTS = tuple(VAR_INDEX["a%d" % i] for i in range(4))
B_SLOTS = tuple(VAR_INDEX["b%d" % j] for j in range(7))


class Genus2Curve:
    """A pair (a, b) over GF(2^n) with cached geometry."""

    def __init__(self, field, a, b):
        a = ptrim(a)
        b = ptrim(b)
        if not a:
            raise ZeroCubic("the cubic a must be nonzero")
        if pdeg(a) > 3 or pdeg(b) > 6:
            raise ValueError("degrees must be <= 3 and <= 6")
        if any(c >= field.q for c in a + b):
            raise ValueError("coefficient outside the field")
        self.field = field
        self.a = a
        self.b = b
        self._smooth = None
        self._two_rank = None
        self._invariants = None

    def coefficient_vector(self):
        """a0..a3, b0..b6 padded with zeros."""
        return (tuple(self.a) + (0,) * (4 - len(self.a)),
                tuple(self.b) + (0,) * (7 - len(self.b)))

    def is_smooth(self):
        if self._smooth is None:
            F = self.field
            h = padd(pmul(F, pmul(F, pderiv(self.a), pderiv(self.a)),
                          self.b),
                     pmul(F, pderiv(self.b), pderiv(self.b)))
            # gcd(a, 0) = a, which correctly flags every root of a as
            # singular when h vanishes identically
            affine_ok = pdeg(pgcd(F, self.a, h)) <= 0
            abar = preverse(self.a, 3)
            bbar = preverse(self.b, 6)
            hbar = padd(pmul(F, pmul(F, pderiv(abar), pderiv(abar)), bbar),
                        pmul(F, pderiv(bbar), pderiv(bbar)))
            inf_ok = not (peval(F, abar, 0) == 0
                          and peval(F, hbar, 0) == 0)
            self._smooth = affine_ok and inf_ok
        return self._smooth

    def two_rank(self):
        if self._two_rank is None:
            F = self.field
            distinct = pdeg(pradical(F, self.a))
            if pdeg(self.a) < 3:
                distinct += 1  # the zero at infinity
            self._two_rank = distinct - 1
        return self._two_rank

    def eval_invariants(self, table=None):
        if self._invariants is None:
            from . import char2inv
            if table is None:
                table = char2inv.build_k_table()
            av, bv = self.coefficient_vector()
            values = {}
            for name, rec in table.items():
                values[name] = _eval_body(self.field, rec.body, av + bv)
            self._invariants = values
        return self._invariants

    def count_points(self, m=1):
        return count_points(self, m)

    def __repr__(self):
        return "Genus2Curve(GF(2^%d), a=%s, b=%s)" % (
            self.field.n, list(self.a), list(self.b))


_COMPILED_BODIES = {}


def _compiled_body(body):
    cached = _COMPILED_BODIES.get(id(body))
    if cached is not None and cached[0] is body:
        return cached[1]
    compiled = []
    for m in body.terms:
        factors = []
        for pos, slot in enumerate(A_SLOTS + B_SLOTS):
            e = (m >> (EXP_BITS * slot)) & EXP_MASK
            if e:
                factors.append((pos, e))
        compiled.append(tuple(factors))
    _COMPILED_BODIES[id(body)] = (body, compiled)
    return compiled


def _eval_body(F, body, values):
    acc = 0
    for factors in _compiled_body(body):
        prod = 1
        for pos, e in factors:
            v = values[pos]
            if v == 0:
                prod = 0
                break
            prod = F.mul(prod, F.pow(v, e))
        acc ^= prod
    return acc


@dataclass(frozen=True)
class GroupElement:
    """2x2 invertible matrix plus a translation cubic."""
    field: BinaryField
    alpha: int
    beta: int
    gamma: int
    delta: int
    v: tuple = ()

    def det(self):
        F = self.field
        return F.mul(self.alpha, self.delta) ^ F.mul(self.beta, self.gamma)


def _transform_form(F, coeffs, degree, g):
    """Coefficients of form(alpha x1 + beta x2, gamma x1 + delta x2).

    Forms are sum coeffs[i] x1^(degree-i) x2^i; the output is indexed
    the same way.
    """
    out = [0] * (degree + 1)
    padded = tuple(coeffs) + (0,) * (degree + 1 - len(coeffs))
    for i, ci in enumerate(padded):
        if ci == 0:
            continue
        # (alpha x1 + beta x2)^(degree-i) * (gamma x1 + delta x2)^i
        first = _binomial_power(F, g.alpha, g.beta, degree - i)
        second = _binomial_power(F, g.gamma, g.delta, i)
        for j1, c1 in enumerate(first):
            if c1 == 0:
                continue
            for j2, c2 in enumerate(second):
                if c2 == 0:
                    continue
                out[j1 + j2] ^= F.mul(ci, F.mul(c1, c2))
    return ptrim(out)


def _binomial_power(F, u, v, e):
    """Coefficients of (u x1 + v x2)^e by x2-degree."""
    return [F.mul(F.pow(u, e - k), F.pow(v, k)) if comb(e, k) & 1 else 0
            for k in range(e + 1)]


def act(g, curve):
    """The twisted action: a stays weight (3,-1), b weight (6,-2)."""
    F = curve.field
    d = g.det()
    if d == 0:
        raise SingularMatrix("matrix determinant is zero")
    dinv = F.inv(d)
    a_new = pscale(F, _transform_form(F, curve.coefficient_vector()[0],
                                      3, g), dinv)
    b_new = pscale(F, _transform_form(F, curve.coefficient_vector()[1],
                                      6, g), F.mul(dinv, dinv))
    if g.v:
        v = ptrim(g.v)
        if pdeg(v) > 3:
            raise ValueError("translation cubic has degree > 3")
        b_new = padd(b_new, padd(pmul(F, v, v), pmul(F, a_new, v)))
    return Genus2Curve(F, a_new, b_new)


def count_points(curve, m=1):
    """|C(F_{2^(n*m)})| on the smooth model, two charts glued."""
    n = curve.field.n
    nm = n * m
    if nm > MAX_EXTENSION:
        raise FieldTooLarge("2^%d exceeds the supported range" % nm)
    big = binary_field(nm)
    emb = _embedding_table(n, nm)
    a = tuple(emb[c] for c in curve.a)
    b = tuple(emb[c] for c in curve.b)
    total = 0
    for x in big.elements():
        alpha = peval(big, a, x)
        beta = peval(big, b, x)
        total += _artin_schreier_solutions(big, alpha, beta)
    abar = preverse(a, 3)
    bbar = preverse(b, 6)
    alpha = abar[0] if abar else 0
    beta = bbar[0] if bbar else 0
    total += _artin_schreier_solutions(big, alpha, beta)
    return total


def _artin_schreier_solutions(F, alpha, beta):
    """Solutions y of y^2 + alpha*y = beta."""
    if alpha == 0:
        return 1  # unique square root
    w = F.mul(beta, F.pow(F.inv(alpha), 2))
    return 2 if F.trace(w) == 0 else 0


def l_polynomial(curve):
    """Frobenius numerator [1, a1, a2, q*a1, q^2] from two point counts."""
    if not curve.is_smooth():
        raise NotSmooth("L-polynomial needs a smooth curve")
    q = curve.field.q
    n1 = count_points(curve, 1)
    n2 = count_points(curve, 2)
    a1 = n1 - (q + 1)
    num = n2 - q * q - 1 + a1 * a1
    assert num % 2 == 0
    a2 = num // 2
    return (1, a1, a2, q * a1, q * q)


def two_rank_from_L(curve):
    """Degree of L mod 2; agrees with the ramification count."""
    L = l_polynomial(curve)
    degree = 0
    for i, c in enumerate(L):
        if c % 2:
            degree = i
    return degree


def all_curves(field):
    """Every pair (a, b) with a != 0, deg a <= 3, deg b <= 6."""
    q = field.q
    for a in itertools.product(range(q), repeat=4):
        if not any(a):
            continue
        for b in itertools.product(range(q), repeat=7):
            yield Genus2Curve(field, a, b)


def _f2_truth_table(body):
    """All 2^11 evaluations of an F2 body at 0/1 coefficient vectors."""
    table = [0] * 2048
    for m in body.terms:
        mask = 0
        for pos, slot in enumerate(A_SLOTS + B_SLOTS):
            if (m >> (EXP_BITS * slot)) & EXP_MASK:
                mask |= 1 << pos
        table[mask] ^= 1
    for bit in range(11):
        step = 1 << bit
        for mask in range(2048):
            if mask & step:
                table[mask] ^= table[mask ^ step]
    return table


def enumerate_curves(field, progress=None):
    """Exhaustive classification report over a small field.

    Buckets every (a, b) pair by (two-rank, K1 = 0, K10 = 0) and
    records violations of the expected equivalences: K1 = 0 iff
    two-rank <= 1 on smooth curves, K10 != 0 iff smooth (reported, not
    assumed), and the L-polynomial 2-rank agreement over the prime
    field.
    """
    from . import char2inv

    if field.n > 2:
        raise FieldTooLarge("exhaustive enumeration is for n <= 2")
    table = char2inv.build_k_table()
    use_truth_tables = field.n == 1
    if use_truth_tables:
        tt = {name: _f2_truth_table(rec.body)
              for name, rec in table.items()}
    counts = {"total": 0, "smooth": 0}
    by_rank = {0: 0, 1: 0, 2: 0}
    buckets = {}
    violations = {"k1_rank": [], "k10_smooth": [], "l_rank": []}
    check_l = field.n == 1
    for idx, curve in enumerate(all_curves(field)):
        counts["total"] += 1
        if progress and idx % 4096 == 0:
            progress(idx)
        if not curve.is_smooth():
            continue
        counts["smooth"] += 1
        rank = curve.two_rank()
        by_rank[rank] += 1
        if use_truth_tables:
            av, bv = curve.coefficient_vector()
            mask = 0
            for pos, v in enumerate(av + bv):
                if v:
                    mask |= 1 << pos
            inv = {name: t[mask] for name, t in tt.items()}
        else:
            inv = curve.eval_invariants(table)
        key = "rank=%d,K1%s0,K10%s0" % (
            rank, "!=" if inv["K1"] else "=", "!=" if inv["K10"] else "=")
        buckets[key] = buckets.get(key, 0) + 1
        if (inv["K1"] == 0) != (rank <= 1):
            violations["k1_rank"].append(_curve_key(curve))
        if inv["K10"] == 0:
            violations["k10_smooth"].append(_curve_key(curve))
        if check_l and two_rank_from_L(curve) != rank:
            violations["l_rank"].append(_curve_key(curve))
    return {
        "field_deg": field.n,
        "counts": counts,
        "smooth_by_two_rank": by_rank,
        "buckets": dict(sorted(buckets.items())),
        "checks": {
            "k1_zero_iff_rank_le_1": not violations["k1_rank"],
            "k10_nonzero_on_smooth": not violations["k10_smooth"],
            "two_rank_matches_L":
                (not violations["l_rank"]) if check_l else None,
        },
        "violations": {k: v[:16] for k, v in violations.items()},
    }


def _curve_key(curve):
    return {"a": list(curve.a), "b": list(curve.b)}


def curve_record(curve):
    """JSON-ready record of one curve."""
    av, bv = curve.coefficient_vector()
    rec = {
        "n": curve.field.n,
        "a": list(av),
        "b": list(bv),
        "smooth": curve.is_smooth(),
        "two_rank": curve.two_rank(),
        "invariants": {k: v for k, v in
                       sorted(curve.eval_invariants().items())},
    }
    if rec["smooth"] and 2 * curve.field.n <= MAX_EXTENSION:
        rec["L"] = list(l_polynomial(curve))
        rec["points"] = {"1": count_points(curve, 1)}
        if 2 * curve.field.n <= MAX_EXTENSION:
            rec["points"]["2"] = count_points(curve, 2)
    return rec


# -- the curve expression grammar ---------------------------------------


class CurveSyntaxError(ValueError):
    pass


def parse_poly(text, field):
    """Parse 'x^3 + g*x + 1' style input into a coefficient tuple.

    Field elements are written in the generator g; integers reduce to
    the prime field.
    """
    tokens = _tokenize(text)
    poly, pos = _parse_sum(tokens, 0, field)
    if pos != len(tokens):
        raise CurveSyntaxError("trailing input near %r"
                               % (tokens[pos][1],))
    return poly


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
        elif ch in "xg":
            tokens.append(("var", ch))
            i += 1
        elif ch in "+-*^()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise CurveSyntaxError("unexpected character %r" % ch)
    return tokens


def _parse_sum(tokens, pos, field):
    acc, pos = _parse_product(tokens, pos, field)
    while pos < len(tokens) and tokens[pos][0] in "+-":
        term, pos = _parse_product(tokens, pos + 1, field)
        acc = padd(acc, term)  # minus is plus in characteristic 2
    return acc, pos


def _parse_product(tokens, pos, field):
    acc, pos = _parse_power(tokens, pos, field)
    while pos < len(tokens) and tokens[pos][0] == "*":
        factor, pos = _parse_power(tokens, pos + 1, field)
        acc = pmul(field, acc, factor)
    return acc, pos


def _parse_power(tokens, pos, field):
    base, pos = _parse_atom(tokens, pos, field)
    if pos < len(tokens) and tokens[pos][0] == "^":
        if pos + 1 >= len(tokens) or tokens[pos + 1][0] != "int":
            raise CurveSyntaxError("exponent must be an integer")
        e = int(tokens[pos + 1][1])
        pos += 2
        out = (1,)
        for _ in range(e):
            out = pmul(field, out, base)
        return out, pos
    return base, pos


def _parse_atom(tokens, pos, field):
    if pos >= len(tokens):
        raise CurveSyntaxError("unexpected end of input")
    kind, value = tokens[pos]
    if kind == "int":
        return ((int(value) & 1,) if int(value) & 1 else ()), pos + 1
    if kind == "var":
        if value == "x":
            return (0, 1), pos + 1
        if field.n == 1:
            raise CurveSyntaxError("g needs an extension field")
        return (field.generator,), pos + 1
    if kind == "-":
        return _parse_atom(tokens, pos + 1, field)
    if kind == "(":
        inner, pos = _parse_sum(tokens, pos + 1, field)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise CurveSyntaxError("missing closing parenthesis")
        return inner, pos + 1
    raise CurveSyntaxError("unexpected token %r" % value)
