"""Characteristic-2 invariants of curve pairs (a, b).

A curve y^2 + a(x) y = b(x) lifts to the binary sextic a~^2 + 4 b~; an
invariant of the sextic, after the substitution

    c_i  =  4 b_i + sum_{r+s=i} a_r a_s          (0 <= r, s <= 3)

is divided by the exact power of 2 it contains and reduced modulo 2.
This module performs that reduction, assembles the table K1..K15, and
proves invariance under the full group action symbolically: two
unipotents with a generic parameter, the coordinate swap, and the four
translations b -> b + t^2 m^2 + t a m span everything that needs
checking.
"""

from dataclasses import dataclass
from functools import lru_cache

from .polycore import (
    MultiPoly, RING_F2, RING_ZZ, VAR_INDEX, EXP_BITS, EXP_MASK,
    mono_exp_of, exact_divide, f2,
)
from .igusa0 import (
    BinaryForm, ScaledInvariant, build_igusa_invariants,
    form_coefficient_images, scaled_mul, scaled_pow, scaled_scalar,
    scaled_sub,
)

A_NAMES = ("a0", "a1", "a2", "a3")
B_NAMES = ("b0", "b1", "b2", "b3", "b4", "b5", "b6")
C_NAMES = tuple("c%d" % i for i in range(7))

K_WEIGHTS = {"K1": 1, "K2": 2, "K3": 3, "K4": 4,
             "K8": 8, "K10": 10, "K12": 12, "K15": 15}


class VerificationFailure(Exception):
    """A pipeline anchor did not match."""


class ZeroAfterSubstitution(Exception):
    """Reduction produced zero: the scale calibration is wrong."""


@dataclass(frozen=True)
class FormPair:
    """Symbolic curve datum: a cubic and a sextic binary form."""
    a: BinaryForm
    b: BinaryForm


@dataclass(frozen=True)
class InvariantRecord:
    name: str
    weight: int
    body: MultiPoly

    def to_json_obj(self):
        return {"name": self.name, "weight": self.weight,
                "poly": self.body.to_json_obj()}

    @staticmethod
    def from_json_obj(obj):
        return InvariantRecord(obj["name"], obj["weight"],
                               MultiPoly.from_json_obj(obj["poly"]))


def universal_pair(ring=RING_F2):
    a_terms = [({A_NAMES[i]: 1, "x1": 3 - i, "x2": i}, 1) for i in range(4)]
    b_terms = [({B_NAMES[i]: 1, "x1": 6 - i, "x2": i}, 1) for i in range(7)]
    return FormPair(
        BinaryForm(3, MultiPoly.from_terms(ring, a_terms)),
        BinaryForm(6, MultiPoly.from_terms(ring, b_terms)))


@lru_cache(maxsize=1)
def substitution_eq6():
    """The lift of (a, b) to sextic coefficients: c_i as a ZZ polynomial.

    Cross terms a_r a_s with r != s occur for both orders, hence carry
    the coefficient 2.
    """
    images = {}
    for i in range(7):
        terms = [({"b%d" % i: 1}, 4)]
        for r in range(4):
            s = i - r
            if 0 <= s <= 3:
                if r == s:
                    terms.append(({"a%d" % r: 2}, 1))
                else:
                    terms.append(({"a%d" % r: 1, "a%d" % s: 1}, 1))
        images["c%d" % i] = MultiPoly.from_terms(RING_ZZ, terms)
    return images


def reduce_invariant(inv):
    """Substitute the lift, divide by the 2-adic content, reduce mod 2.

    The rational scale of `inv` is a power of 2 times an odd rational;
    both parts act trivially on the reduction (the content division
    absorbs any power of 2 and odd factors are 1 mod 2), so only the
    integer body matters here.
    """
    substituted = inv.body.substitute(substitution_eq6())
    if substituted.is_zero():
        raise ZeroAfterSubstitution(inv.name)
    return substituted.divide_pow2_and_reduce()


# -- the K table --------------------------------------------------------


def k1_poly():
    return f2("a0") * f2("a3") + f2("a1") * f2("a2")


K3_DISPLAY_GROUPS = (
    # (coefficient in the a-variables, b-monomial) of the eight groups
    ("a0*a3 + a1*a2", {"b3": 2}),
    ("a0^2*a3^2 + a0*a2^3 + a1^3*a3 + a1^2*a2^2", {"b3": 1}),
    ("a0*a1^2*a3 + a1^3*a2", {"b4": 1}),
    ("a0*a2^2*a3 + a1*a2^3", {"b2": 1}),
    ("a0^2*a1*a3 + a0^2*a2^2 + a0*a1^2*a2 + a1^4", {"b5": 1}),
    ("a0*a2*a3^2 + a1^2*a3^2 + a1*a2^2*a3 + a2^4", {"b1": 1}),
    ("a0^2*a1*a2 + a0^3*a3", {"b6": 1}),
    ("a1*a2*a3^2 + a0*a3^3", {"b0": 1}),
)


def _parse_f2(text):
    """Parse the restricted 'mon + mon' notation used for fixtures."""
    poly = MultiPoly.zero(RING_F2)
    for term in text.split("+"):
        exps = {}
        for factor in term.strip().split("*"):
            if "^" in factor:
                v, e = factor.split("^")
                exps[v] = exps.get(v, 0) + int(e)
            else:
                exps[factor] = exps.get(factor, 0) + 1
        poly = poly + MultiPoly.from_terms(RING_F2, [(exps, 1)])
    return poly


def k3_display_poly():
    """The eight-group displayed form of K3."""
    total = MultiPoly.zero(RING_F2)
    for coeff_text, bmono in K3_DISPLAY_GROUPS:
        total = total + _parse_f2(coeff_text) * \
            MultiPoly.from_terms(RING_F2, [(bmono, 1)])
    return total


def k3_display_q():
    """The quartic coefficient of b3 in the displayed K3."""
    return _parse_f2("a0^2*a3^2 + a0*a2^3 + a1^3*a3 + a1^2*a2^2")


def k12_top_display():
    """The displayed top (b3^4) stratum of K12: a fourth power."""
    s = _parse_f2("a0^2*a3^2 + a0*a1*a2*a3 + a0*a2^3 + a1^3*a3")
    return s.square().square()


K10_STRATA_DISPLAY = {
    6: "a0^4*a3^4",
    5: "a0^5*a3^5 + a0^4*a1*a2*a3^4 + a0^4*a2^3*a3^3 + a0^3*a1^3*a3^4",
    4: ("a0^6*a3^6 + a0^5*a1*a2*a3^5 + a0^4*a1^2*a2^2*a3^4 + "
        "a0^3*a1^3*a2^3*a3^3 + a0^6*a3^4*b6 + a0^5*a1*a3^4*b5 + "
        "a0^5*a2^2*a3^3*b5 + a0^4*a1^2*a3^4*b4 + a0^4*a1*a2^3*a3^2*b5 + "
        "a0^4*a2^6*b6 + a0^4*a2^5*a3*b5 + a0^4*a2^4*a3^2*b4 + "
        "a0^4*a2^2*a3^4*b2 + a0^4*a2*a3^5*b1 + a0^4*a3^6*b0 + "
        "a0^3*a1^2*a3^5*b1 + a0^2*a1^4*a3^4*b2 + a0^2*a1^3*a2*a3^4*b1 + "
        "a0*a1^5*a3^4*b1 + a1^6*a3^4*b0 + a0^4*a2^4*b5^2 + "
        "a1^4*a3^4*b1^2"),
}


def k10_stratum_display(degree):
    """Displayed b3-strata of K10 (top three)."""
    return _parse_f2(K10_STRATA_DISPLAY[degree])


@lru_cache(maxsize=1)
def build_k_table():
    """Assemble and anchor-check the characteristic-2 invariants.

    Raises VerificationFailure when any displayed anchor is missed:
    K2 = K1^2, the eight-group K3, the top strata of K8 and K10, and
    the top stratum of K12.
    """
    from . import igusa0

    jt = build_igusa_invariants()
    k1 = k1_poly()
    k2 = reduce_invariant(jt["J2"])
    if k2 != k1.square():
        raise VerificationFailure("reduction of J2 is not K1^2")
    i4 = scaled_sub(scaled_pow(jt["J2"], 2),
                    scaled_scalar(jt["J4"], 24), "I4")
    i4 = ScaledInvariant("I4", i4.body, i4.scale)
    k4 = reduce_invariant(i4)
    k3 = exact_divide(k4, k1)
    if k3 != k3_display_poly():
        raise VerificationFailure("K4/K1 does not match the displayed K3")
    k8 = reduce_invariant(jt["J8"])
    expected = igusa0.build_notes().get("expected_k8")
    if expected is not None and k8 != expected:
        raise VerificationFailure("K8 differs from the calibrated target")
    st8 = b3_strata(k8)
    if (max(st8) != 8 or st8[8] != MultiPoly.const(RING_F2, 1)
            or 7 in st8 or st8.get(6) != k1.square()
            or st8.get(5) != k1 * k3_display_q()):
        raise VerificationFailure("K8 strata do not match the display")
    k10 = reduce_invariant(jt["J10"])
    st10 = b3_strata(k10)
    if max(st10) != 6 or any(
            st10.get(d) != k10_stratum_display(d) for d in (6, 5, 4)):
        raise VerificationFailure("K10 strata do not match the display")
    k12 = k8 * k1 ** 4 + k3 ** 4 + k1 ** 3 * k3 ** 3
    st12 = b3_strata(k12)
    if max(st12) != 4 or st12[4] != k12_top_display():
        raise VerificationFailure("K12 stratum does not match the display")
    k15 = (k1 ** 3 * k3 ** 4 + k1 ** 5 * k10
           + k1 ** 4 * k3 * k8 + k3 ** 5)
    table = {}
    for name, body in (("K1", k1), ("K2", k2), ("K3", k3), ("K4", k4),
                       ("K8", k8), ("K10", k10), ("K12", k12),
                       ("K15", k15)):
        table[name] = InvariantRecord(name, K_WEIGHTS[name], body)
    return table


@lru_cache(maxsize=1)
def j6_reduction_mode():
    """How the degree-6 invariant reaches K3^2 under reduction.

    Tries the direct reduction first; on mismatch searches integer
    combinations of J2^3, J2*J4 and J6 (walking their 2-adic digits)
    and reports the smallest one whose reduction is exactly K3^2.
    Returns ("direct", None) or ("combination", (n1, n2, n3)) with the
    combination understood against the primitive bodies of the three
    invariants aligned at a common bottom level.
    """
    from .igusa0 import lattice_bottom_search, signed_residues

    jt = build_igusa_invariants()
    k3sq = build_k_table()["K3"].body.square()
    if reduce_invariant(jt["J6"]) == k3sq:
        return ("direct", None)
    eq6 = substitution_eq6()
    basis = [scaled_pow(jt["J2"], 3),
             scaled_mul(jt["J2"], jt["J4"]), jt["J6"]]
    subst = [si.body.substitute(eq6) for si in basis]
    contents = [s.content_2adic() for s in subst]
    L = max(contents)
    aligned = [s.scale(1 << (L - c)) for s, c in zip(subst, contents)]
    monos = set()
    for s in aligned:
        monos |= set(s.terms)
    rows = [(m, tuple(s.terms.get(m, 0) for s in aligned))
            for m in sorted(monos)]
    target = set(k3sq.terms)

    def validate(bottom, v):
        return bottom == target

    accepts = []
    for extra in (4, 8, 12, 16):
        accepts = lattice_bottom_search(rows, {}, validate,
                                        depth_cap=extra + 1,
                                        cap_hint=L + extra)
        if accepts:
            break
    if not accepts:
        raise VerificationFailure(
            "no integer combination of J2^3, J2*J4, J6 reduces to K3^2")
    level, coords, _, _ = min(
        accepts, key=lambda a: sum(abs(c) for c in
                                   signed_residues(a[1], a[0])))
    return ("combination", signed_residues(coords, level))


# -- strata and isobarity ------------------------------------------------


def b3_strata(body):
    """Decompose by the power of b3: {exponent: coefficient polynomial}."""
    vi = VAR_INDEX["b3"]
    shift = EXP_BITS * vi
    out = {}
    for m in body.terms:
        e = (m >> shift) & EXP_MASK
        out.setdefault(e, {})[m - (e << shift)] = 1
    return {e: MultiPoly(RING_F2, t) for e, t in out.items()}


def check_isobaric(record):
    """Bi-isobaric degree 2n and weighted degree 3n, every monomial."""
    n = record.weight
    for m in record.body.terms:
        dega = wa = 0
        for i, name in enumerate(A_NAMES):
            e = mono_exp_of(m, VAR_INDEX[name])
            dega += e
            wa += i * e
        degb = wb = 0
        for j, name in enumerate(B_NAMES):
            e = mono_exp_of(m, VAR_INDEX[name])
            degb += e
            wb += j * e
        if dega + 2 * degb != 2 * n or wa + wb != 3 * n:
            return False
    return True


# -- the seven symbolic generators ---------------------------------------


@lru_cache(maxsize=1)
def invariance_generators():
    """(name, bindings) for the seven generator checks.

    Two unipotents with a generic parameter plus the swap generate the
    special linear group symbolically, and the four monomial
    translations span the cubic translations.  The unipotent images are
    triangular in the coefficients (the image of each coefficient only
    mentions already-final ones), so plain simultaneous substitution
    applies.
    """
    gens = []
    x1, x2, t, s = f2("x1"), f2("x2"), f2("t"), f2("s")
    for label, x1_im, x2_im in (("x1->x1+t*x2", x1 + t * x2, x2),
                                ("x2->x2+s*x1", x1, x2 + s * x1)):
        bindings = form_coefficient_images(3, A_NAMES, x1_im, x2_im,
                                           RING_F2)
        bindings.update(
            form_coefficient_images(6, B_NAMES, x1_im, x2_im, RING_F2))
        gens.append((label, bindings))

    swap = {A_NAMES[i]: f2(A_NAMES[3 - i]) for i in range(4)}
    swap.update({B_NAMES[j]: f2(B_NAMES[6 - j]) for j in range(7)})
    gens.append(("x1<->x2", swap))

    pair = universal_pair()
    for mu in range(4):
        v = t * x1 ** (3 - mu) * x2 ** mu
        w = v * v + pair.a.poly * v
        w_strata = form_strata(w, 6)
        bindings = {B_NAMES[j]: f2(B_NAMES[j]) + w_strata[j]
                    for j in range(7) if not w_strata[j].is_zero()}
        gens.append(("b+=t^2*m^2+t*a*m (m=x1^%d*x2^%d)" % (3 - mu, mu),
                     bindings))
    return tuple(gens)


def form_strata(poly, degree):
    """Coefficients of x1^(degree-j) x2^j, j = 0..degree."""
    i1, i2 = VAR_INDEX["x1"], VAR_INDEX["x2"]
    strip = ~((EXP_MASK << (EXP_BITS * i1)) | (EXP_MASK << (EXP_BITS * i2)))
    out = [dict() for _ in range(degree + 1)]
    for m in poly.terms:
        j = mono_exp_of(m, i2)
        assert mono_exp_of(m, i1) == degree - j
        out[j][m & strip] = 1
    return [MultiPoly(RING_F2, t) for t in out]


def check_invariance(record):
    """Residual of the body under each generator; all must be zero.

    Returns {generator label: residual polynomial}; a nonzero entry is
    the failure certificate.
    """
    residuals = {}
    for label, bindings in invariance_generators():
        transformed = record.body.substitute(bindings)
        residuals[label] = transformed + record.body
    return residuals


def is_invariant(record):
    return all(r.is_zero() for r in check_invariance(record).values())


# -- covariants ----------------------------------------------------------


def covariant_c20(a=None):
    """The weight-(2,0) quadratic covariant of a cubic form.

    For a = sum alpha_i x1^(3-i) x2^i this is
    (alpha0*alpha2 + alpha1^2) x1^2 + (alpha0*alpha3 + alpha1*alpha2)
    x1 x2 + (alpha1*alpha3 + alpha2^2) x2^2; the middle coefficient of
    the universal cubic is K1.
    """
    if a is None:
        a = universal_pair().a
    alpha = form_strata(a.poly, 3)
    x1, x2 = f2("x1"), f2("x2")
    poly = ((alpha[0] * alpha[2] + alpha[1].square()) * x1 * x1
            + (alpha[0] * alpha[3] + alpha[1] * alpha[2]) * x1 * x2
            + (alpha[1] * alpha[3] + alpha[2].square()) * x2 * x2)
    return BinaryForm(2, poly)


# -- ring relations -------------------------------------------------------


def independence_monomials(max_weight):
    """Exponent tuples (e,f,g,h) with e+3f+8g+10h <= max_weight."""
    out = []
    for h in range(max_weight // 10 + 1):
        for g in range((max_weight - 10 * h) // 8 + 1):
            for f in range((max_weight - 10 * h - 8 * g) // 3 + 1):
                for e in range(max_weight - 10 * h - 8 * g - 3 * f + 1):
                    out.append((e, f, g, h))
    return out


def f2_rank(rows):
    """Rank of a set of F2 row vectors given as int bitmasks."""
    pivots = []
    rank = 0
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            pivots.sort(reverse=True)
            rank += 1
    return rank


def independence_rank(table, max_weight):
    """Rank of the expanded monomials in K1, K3, K8, K10 up to a weight."""
    exps = independence_monomials(max_weight)
    k1 = table["K1"].body
    k3 = table["K3"].body
    k8 = table["K8"].body
    k10 = table["K10"].body
    pow_cache = {}

    def power(base, poly, k):
        key = (base, k)
        if key not in pow_cache:
            pow_cache[key] = poly ** k
        return pow_cache[key]

    columns = {}
    rows = []
    for e, f, g, h in exps:
        prod = power("k1", k1, e) * power("k3", k3, f)
        prod = prod * power("k8", k8, g)
        prod = prod * power("k10", k10, h)
        bits = 0
        for m in prod.terms:
            col = columns.setdefault(m, len(columns))
            bits |= 1 << col
        rows.append(bits)
    return len(exps), f2_rank(rows)


def verify_relations(table, max_weight=20):
    """The three exact ring identities; returns a list of result dicts."""
    k1, k3 = table["K1"].body, table["K3"].body
    k8, k10 = table["K8"].body, table["K10"].body
    k12, k15 = table["K12"].body, table["K15"].body
    results = []

    lhs = k15
    rhs = k3 * k12 + k10 * k1 ** 5
    residual = lhs + rhs
    results.append({
        "id": "K15 = K3*K12 + K10*K1^5",
        "pass": residual.is_zero(),
        "residual_terms": len(residual.terms),
    })

    k10_4 = k10.square().square()
    lhs = k10_4 * k12
    k3k10 = k3 * k10
    rhs = (k8 * k10_4 * (k1 ** 4)
           + k3k10.square().square()
           + (k3.square() * k3) * (k1 ** 3) * k10_4)
    residual = lhs + rhs
    results.append({
        "id": "K10^4*K12 = K8*K10^4*K1^4 + (K3*K10)^4 + (K3*K10)^3*K1^3*K10",
        "pass": residual.is_zero(),
        "residual_terms": len(residual.terms),
    })

    count, rank = independence_rank(table, max_weight)
    results.append({
        "id": "K1,K3,K8,K10 independent to weight %d" % max_weight,
        "pass": rank == count,
        "residual_terms": count - rank,
        "monomials": count,
        "rank": rank,
    })
    return results
