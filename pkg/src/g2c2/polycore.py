"""Exact sparse multivariate polynomial arithmetic over ZZ and F2.

All polynomials live in one fixed 23-variable universe,

    a0 a1 a2 a3  b0 .. b6  c0 .. c6  x1 x2  t s m

ordered as listed (a0 smallest index, m largest).  A monomial is packed
into a single Python int, 8 bits per exponent, variable i occupying bits
[8*i, 8*i+8).  Monomial multiplication is then plain integer addition,
which keeps the hot loops fast without any C extension.

A polynomial is a ring tag ("ZZ" or "F2") plus a dict mapping packed
monomials to nonzero coefficients.  Over F2 every stored coefficient is 1,
so addition works on the dict key views (C-speed set XOR).  Over ZZ the
coefficients are arbitrary-precision ints.  Values are immutable after
construction; every operation returns a fresh polynomial.

Canonical order (graded lexicographic, ties broken with a0 counted as the
most significant variable, largest terms first) is applied whenever terms
are iterated for output, so equal polynomials always print identically.
"""

from fractions import Fraction

RING_ZZ = "ZZ"
RING_F2 = "F2"

VAR_NAMES = (
    "a0", "a1", "a2", "a3",
    "b0", "b1", "b2", "b3", "b4", "b5", "b6",
    "c0", "c1", "c2", "c3", "c4", "c5", "c6",
    "x1", "x2", "t", "s", "m",
)
NVARS = len(VAR_NAMES)
VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}

EXP_BITS = 8
EXP_MASK = (1 << EXP_BITS) - 1
MAX_EXP = EXP_MASK


class PolyError(Exception):
    pass


class RingMismatch(PolyError):
    """Operands belong to different coefficient rings."""


class NotDivisible(PolyError):
    """exact_divide found no exact quotient."""


class ZeroPolynomial(PolyError):
    """Operation undefined on the zero polynomial."""


def mono_pack(exps):
    """Pack {var name: exponent} into a monomial int."""
    m = 0
    for name, e in exps.items():
        if e < 0 or e > MAX_EXP:
            raise OverflowError("exponent %r out of packing range" % e)
        if e:
            m |= e << (EXP_BITS * VAR_INDEX[name])
    return m


def mono_exps(m):
    """Unpack a monomial int to a 23-tuple of exponents."""
    return tuple((m >> (EXP_BITS * i)) & EXP_MASK for i in range(NVARS))


def mono_degree(m):
    d = 0
    while m:
        d += m & EXP_MASK
        m >>= EXP_BITS
    return d


def mono_exp_of(m, vi):
    """Exponent of variable index vi in monomial m."""
    return (m >> (EXP_BITS * vi)) & EXP_MASK


def _grlex_key(m):
    return (mono_degree(m), mono_exps(m))


def mono_str(m):
    parts = []
    for i in range(NVARS):
        e = mono_exp_of(m, i)
        if e == 1:
            parts.append(VAR_NAMES[i])
        elif e > 1:
            parts.append("%s^%d" % (VAR_NAMES[i], e))
    return "*".join(parts)


class MultiPoly:
    """Immutable sparse polynomial over ZZ or F2.

    Do not mutate the term dict of an existing instance; all public
    operations allocate a new one.
    """

    __slots__ = ("ring", "terms", "_bound")

    def __init__(self, ring, terms, _bound=None):
        if ring not in (RING_ZZ, RING_F2):
            raise ValueError("unknown ring tag %r" % (ring,))
        self.ring = ring
        self.terms = terms
        # Upper bound for any single exponent, used to guard the packing.
        if _bound is None:
            _bound = _exact_max_exp(terms)
        self._bound = _bound

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(ring):
        return MultiPoly(ring, {}, 0)

    @staticmethod
    def const(ring, c):
        if ring == RING_F2:
            c = c & 1
        if c == 0:
            return MultiPoly(ring, {}, 0)
        return MultiPoly(ring, {0: c if ring == RING_ZZ else 1}, 0)

    @staticmethod
    def var(name, ring):
        return MultiPoly(ring, {mono_pack({name: 1}): 1}, 1)

    @staticmethod
    def from_terms(ring, items):
        """Build from an iterable of ({var: exp} or packed int, coef)."""
        terms = {}
        for mono, c in items:
            if not isinstance(mono, int):
                mono = mono_pack(mono)
            if ring == RING_F2:
                c = c & 1
                if c == 0:
                    continue
                if mono in terms:
                    del terms[mono]
                else:
                    terms[mono] = 1
            else:
                c2 = terms.get(mono, 0) + c
                if c2:
                    terms[mono] = c2
                elif mono in terms:
                    del terms[mono]
        return MultiPoly(ring, terms)

    # -- basic queries -----------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def sorted_terms(self):
        """Terms in canonical order (graded lex, largest first)."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]),
                      reverse=True)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(mono_degree(m) for m in self.terms)

    def degree_in(self, name):
        """Largest exponent of the named variable, -1 for the zero poly."""
        if not self.terms:
            return -1
        vi = VAR_INDEX[name]
        return max(mono_exp_of(m, vi) for m in self.terms)

    def variables(self):
        """Names of variables that actually occur."""
        seen = 0
        for m in self.terms:
            seen |= m
            # cheap short-circuit once every slot is known occupied
        out = []
        for i in range(NVARS):
            if (seen >> (EXP_BITS * i)) & EXP_MASK:
                out.append(VAR_NAMES[i])
        return out

    def coefficient(self, mono):
        if not isinstance(mono, int):
            mono = mono_pack(mono)
        return self.terms.get(mono, 0)

    # -- ring operations ---------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatch("%s vs %s" % (self.ring, other.ring))

    def __add__(self, other):
        self._check_ring(other)
        if self.ring == RING_F2:
            keys = self.terms.keys() ^ other.terms.keys()
            return MultiPoly(RING_F2, dict.fromkeys(keys, 1),
                             max(self._bound, other._bound))
        out = dict(self.terms)
        for m, c in other.terms.items():
            c2 = out.get(m, 0) + c
            if c2:
                out[m] = c2
            elif m in out:
                del out[m]
        return MultiPoly(RING_ZZ, out, max(self._bound, other._bound))

    def __neg__(self):
        if self.ring == RING_F2:
            return self
        return MultiPoly(RING_ZZ, {m: -c for m, c in self.terms.items()},
                         self._bound)

    def __sub__(self, other):
        if self.ring == RING_F2:
            return self + other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check_ring(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.ring)
        bound = self._bound + other._bound
        if bound > MAX_EXP:
            self._bound = _exact_max_exp(self.terms)
            other._bound = _exact_max_exp(other.terms)
            bound = self._bound + other._bound
            if bound > MAX_EXP:
                raise OverflowError("monomial exponent would exceed %d"
                                    % MAX_EXP)
        p, q = self.terms, other.terms
        if len(p) < len(q):
            p, q = q, p
        # q is the smaller factor
        if self.ring == RING_F2:
            acc = set()
            pk = p.keys()
            for mq in q:
                acc ^= {mp + mq for mp in pk}
            return MultiPoly(RING_F2, dict.fromkeys(acc, 1), bound)
        out = {}
        get = out.get
        for mq, cq in q.items():
            for mp, cp in p.items():
                k = mp + mq
                c2 = get(k, 0) + cp * cq
                if c2:
                    out[k] = c2
                elif k in out:
                    del out[k]
        return MultiPoly(RING_ZZ, out, bound)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by an integer scalar."""
        if self.ring == RING_F2:
            return self if c & 1 else MultiPoly.zero(RING_F2)
        if c == 0:
            return MultiPoly.zero(RING_ZZ)
        if c == 1:
            return self
        return MultiPoly(RING_ZZ, {m: c * v for m, v in self.terms.items()},
                         self._bound)

    def square(self):
        if self.ring == RING_F2:
            # Frobenius: (p + q)^2 = p^2 + q^2 in characteristic 2.
            bound = 2 * self._bound
            if bound > MAX_EXP:
                self._bound = _exact_max_exp(self.terms)
                bound = 2 * self._bound
                if bound > MAX_EXP:
                    raise OverflowError("monomial exponent would exceed %d"
                                        % MAX_EXP)
            return MultiPoly(RING_F2,
                             dict.fromkeys((m << 1 for m in self.terms), 1),
                             bound)
        return self * self

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        result = MultiPoly.const(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base.square()
        return result

    # -- calculus ----------------------------------------------------

    def derivative(self, name):
        """Formal partial derivative with respect to the named variable."""
        vi = VAR_INDEX[name]
        shift = EXP_BITS * vi
        step = 1 << shift
        out = {}
        if self.ring == RING_F2:
            for m in self.terms:
                e = (m >> shift) & EXP_MASK
                if e & 1:
                    k = m - step
                    if k in out:
                        del out[k]
                    else:
                        out[k] = 1
            return MultiPoly(RING_F2, out, self._bound)
        for m, c in self.terms.items():
            e = (m >> shift) & EXP_MASK
            if e:
                k = m - step
                c2 = out.get(k, 0) + c * e
                if c2:
                    out[k] = c2
                elif k in out:
                    del out[k]
        return MultiPoly(RING_ZZ, out, self._bound)

    # -- substitution ------------------------------------------------

    def substitute(self, bindings):
        """Simultaneous substitution of variables by polynomials.

        `bindings` maps variable names to MultiPoly images in the same
        ring.  Unbound variables pass through unchanged.  An image may
        mention its own key and any non-key variable; when the images
        form a cycle on the keys the slower monomial-wise path is used.
        """
        if not bindings or not self.terms:
            return self
        for im in bindings.values():
            if im.ring != self.ring:
                raise RingMismatch("binding image in ring %s, poly in %s"
                                   % (im.ring, self.ring))
        order = _sequential_order(bindings)
        if order is None:
            return _subst_monomialwise(self, bindings)
        cur = self
        for name in order:
            cur = _subst_one(cur, name, bindings[name])
        return cur

    def evaluate(self, values):
        """Exact evaluation at rational/integer points (ZZ ring).

        `values` maps variable names to ints or Fractions; every
        occurring variable must be bound.
        """
        total = Fraction(0)
        cache = {}
        for m, c in self.terms.items():
            v = cache.get(m)
            if v is None:
                v = Fraction(1)
                mm = m
                i = 0
                while mm:
                    e = mm & EXP_MASK
                    if e:
                        v *= Fraction(values[VAR_NAMES[i]]) ** e
                    mm >>= EXP_BITS
                    i += 1
                cache[m] = v
            total += c * v
        return total

    # -- 2-adic pipeline ----------------------------------------------

    def content_2adic(self):
        """Minimum 2-adic valuation over all coefficients (ZZ, nonzero)."""
        if self.ring != RING_ZZ:
            raise RingMismatch("content_2adic is a ZZ operation")
        if not self.terms:
            raise ZeroPolynomial("content_2adic of 0")
        best = None
        for c in self.terms.values():
            v = (c & -c).bit_length() - 1
            if best is None or v < best:
                best = v
                if best == 0:
                    break
        return best

    def divide_pow2_and_reduce(self):
        """Divide by 2^content_2adic, then reduce modulo 2 (ZZ -> F2)."""
        v = self.content_2adic()
        out = {}
        for m, c in self.terms.items():
            if (c >> v) & 1:
                out[m] = 1
        return MultiPoly(RING_F2, out, self._bound)

    def reduce_mod2(self):
        """Plain reduction modulo 2 without content division."""
        if self.ring != RING_ZZ:
            raise RingMismatch("reduce_mod2 is a ZZ operation")
        return MultiPoly(RING_F2,
                         {m: 1 for m, c in self.terms.items() if c & 1},
                         self._bound)

    def int_content(self):
        """gcd of all coefficients (ZZ, nonzero), always positive."""
        from math import gcd
        if not self.terms:
            raise ZeroPolynomial("content of 0")
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
            if g == 1:
                break
        return g

    # -- output -------------------------------------------------------

    def to_text(self):
        """Bit-exact canonical text form."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            ms = mono_str(m)
            if self.ring == RING_F2:
                parts.append(ms if ms else "1")
            else:
                parts.append("%d*%s" % (c, ms) if ms else "%d" % c)
        return " + ".join(parts)

    def to_json_obj(self):
        terms = []
        for m, c in self.sorted_terms():
            exps = {}
            for i in range(NVARS):
                e = mono_exp_of(m, i)
                if e:
                    exps[VAR_NAMES[i]] = e
            terms.append({"coef": str(c), "exps": exps})
        return {"ring": self.ring, "terms": terms}

    @staticmethod
    def from_json_obj(obj):
        ring = obj["ring"]
        items = [(t["exps"], int(t["coef"])) for t in obj["terms"]]
        return MultiPoly.from_terms(ring, items)

    def __repr__(self):
        text = self.to_text()
        if len(text) > 70:
            text = text[:67] + "..."
        return "MultiPoly(%s, %s)" % (self.ring, text)


def _exact_max_exp(terms):
    best = 0
    for m in terms:
        while m:
            e = m & EXP_MASK
            if e > best:
                best = e
            m >>= EXP_BITS
    return best


# -- substitution machinery ------------------------------------------


def _sequential_order(bindings):
    """Order keys so each image mentions only already-processed keys.

    Variables an image injects are final content and must never be
    rewritten by a later pass, so a key may be processed only once every
    other key its image mentions is done (a self-mention is harmless:
    one pass replaces each occurrence exactly once).  Returns None when
    the dependency graph has a genuine cycle.
    """
    occupied = {}
    for name, im in bindings.items():
        mask = 0
        for m in im.terms:
            mask |= m
        occupied[name] = {VAR_NAMES[i] for i in range(NVARS)
                          if (mask >> (EXP_BITS * i)) & EXP_MASK}
    remaining = set(bindings)
    order = []
    while remaining:
        progressed = False
        for v in sorted(remaining, key=lambda n: VAR_INDEX[n]):
            deps = (occupied[v] & remaining) - {v}
            if not deps:
                order.append(v)
                remaining.remove(v)
                progressed = True
                break
        if not progressed:
            return None
    return order


def _subst_one(poly, name, image):
    """Replace one variable by its image (single pass, Horner scheme)."""
    vi = VAR_INDEX[name]
    shift = EXP_BITS * vi
    strata = {}
    maxdeg = 0
    for m, c in poly.terms.items():
        e = (m >> shift) & EXP_MASK
        base = m - (e << shift)
        stratum = strata.get(e)
        if stratum is None:
            stratum = strata[e] = {}
        if poly.ring == RING_F2:
            if base in stratum:
                del stratum[base]
            else:
                stratum[base] = 1
        else:
            c2 = stratum.get(base, 0) + c
            if c2:
                stratum[base] = c2
            elif base in stratum:
                del stratum[base]
        if e > maxdeg:
            maxdeg = e
    if maxdeg == 0:
        return poly
    zero = MultiPoly.zero(poly.ring)
    acc = MultiPoly(poly.ring, strata.get(maxdeg, {}))
    for e in range(maxdeg - 1, -1, -1):
        acc = acc * image
        s = strata.get(e)
        if s:
            acc = acc + MultiPoly(poly.ring, s)
    return acc if acc.terms else zero


def _subst_monomialwise(poly, bindings):
    """Reference substitution: per-monomial image powers, always correct."""
    bound_idx = {VAR_INDEX[n]: im for n, im in bindings.items()}
    pow_cache = {}
    total = MultiPoly.zero(poly.ring)
    one = MultiPoly.const(poly.ring, 1)
    for m, c in poly.terms.items():
        factor = one
        passthrough = 0
        mm = m
        i = 0
        while mm:
            e = mm & EXP_MASK
            if e:
                im = bound_idx.get(i)
                if im is None:
                    passthrough += e << (EXP_BITS * i)
                else:
                    key = (i, e)
                    p = pow_cache.get(key)
                    if p is None:
                        p = pow_cache[key] = im ** e
                    factor = factor * p
            mm >>= EXP_BITS
            i += 1
        if passthrough:
            factor = factor * MultiPoly(poly.ring, {passthrough: 1})
        if poly.ring == RING_ZZ and c != 1:
            factor = factor.scale(c)
        total = total + factor
    return total


# -- module-level operation wrappers ----------------------------------


def substitute(p, bindings):
    return p.substitute(bindings)


def partial_derivative(p, name):
    return p.derivative(name)


def content_2adic(p):
    return p.content_2adic()


def divide_pow2_and_reduce(p):
    return p.divide_pow2_and_reduce()


def exact_divide(p, q):
    """Return r with q*r == p exactly, else raise NotDivisible.

    Works over both rings; over ZZ the quotient must have integer
    coefficients.  Successive leading-term elimination in graded-lex
    order: whenever an exact quotient exists the leading term of the
    running remainder is divisible by the leading term of q, so the
    procedure either finds the quotient or proves there is none.
    """
    if p.ring != q.ring:
        raise RingMismatch("%s vs %s" % (p.ring, q.ring))
    if q.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    if p.is_zero():
        return p
    ring = p.ring
    lq = max(q.terms, key=_grlex_key)
    cq = q.terms[lq]
    lq_exps = mono_exps(lq)
    rem = dict(p.terms)
    quot = {}
    while rem:
        lr = max(rem, key=_grlex_key)
        diff = lr - lq
        if diff < 0 or any(er < eq for er, eq in zip(mono_exps(lr), lq_exps)):
            raise NotDivisible("leading monomial not divisible")
        cr = rem[lr]
        if ring == RING_ZZ:
            qc, r = divmod(cr, cq)
            if r:
                raise NotDivisible("leading coefficient not divisible")
        else:
            qc = 1
        quot[diff] = qc
        # rem -= (qc * x^diff) * q
        for mq, c in q.terms.items():
            k = mq + diff
            if ring == RING_F2:
                if k in rem:
                    del rem[k]
                else:
                    rem[k] = 1
            else:
                c2 = rem.get(k, 0) - qc * c
                if c2:
                    rem[k] = c2
                elif k in rem:
                    del rem[k]
    return MultiPoly(ring, quot)


def poly_var(name, ring=RING_F2):
    return MultiPoly.var(name, ring)


def zz(name):
    return MultiPoly.var(name, RING_ZZ)


def f2(name):
    return MultiPoly.var(name, RING_F2)
