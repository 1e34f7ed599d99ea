"""Exact power-series verification of the graded ring presentation.

The ring is generated in weights 1, 10, 12, 13, 48 with one relation in
weight 52, so its dimension generating function is

    G = (1 - t^52) / ((1-t)(1-t^10)(1-t^12)(1-t^13)(1-t^48)).

Everything here is exact integer arithmetic on truncated power series:
expansions, the rational-function identity behind the dimension
recursion, monomial bases for the weight-graded pieces, and the cubic
growth rate extracted through finite differences over a full period.
"""

from fractions import Fraction
from math import lcm

GENERATOR_WEIGHTS = (1, 10, 12, 13, 48)
RELATION_WEIGHT = 52


class TruncatedSeries:
    """Integer power series truncated at a fixed order (inclusive)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __eq__(self, other):
        return self.coeffs == other.coeffs

    def __add__(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __sub__(self, other):
        n = min(len(self.coeffs), len(other.coeffs))
        return TruncatedSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(n)])

    def shift(self, k):
        """Multiply by t^k."""
        return TruncatedSeries(([0] * k + self.coeffs)[:len(self.coeffs)])


def poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def expand_rational(num, den, order):
    """Exact series of num(t)/den(t), den(0) = +-1, to the given order.

    `num` and `den` are coefficient lists (ascending).
    """
    if den[0] not in (1, -1):
        raise ValueError("denominator must be a unit at t=0")
    coeffs = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * coeffs[k - j]
        coeffs.append(acc // den[0])
    return TruncatedSeries(coeffs)


def one_minus_t_power(k):
    out = [0] * (k + 1)
    out[0] = 1
    out[k] = -1
    return out


def expand_G(order):
    """Exact dimensions r(0..order) of the graded ring."""
    den = [1]
    for w in GENERATOR_WEIGHTS:
        den = poly_mul(den, one_minus_t_power(w))
    return expand_rational(one_minus_t_power(RELATION_WEIGHT), den, order)


def dim_weight_one_ring(k):
    """dim of the weight-k piece of a ring with generators in 1 and 12."""
    return k // 12 + 1


def monomial_basis_N(k):
    """Exponents (alpha, beta, gamma, delta) on the weight-(10,12,13,48)
    generators with total weight k and gamma <= 3.

    These monomials complement multiplication by the weight-1 generator
    inside weight k, because of the shape of the weight-52 relation.
    """
    out = []
    for delta in range(k // 48 + 1):
        for gamma in range(min(3, (k - 48 * delta) // 13) + 1):
            rest = k - 48 * delta - 13 * gamma
            for beta in range(rest // 12 + 1):
                if (rest - 12 * beta) % 10 == 0:
                    alpha = (rest - 12 * beta) // 10
                    out.append((alpha, beta, gamma, delta))
    return sorted(out)


def verify_series_identities(order=200):
    """The four exact series facts behind the dimension count.

    Returns a list of {"id", "pass", "first_failure"} dicts.
    """
    if order < 100:
        raise ValueError("order must be at least 100")
    g = expand_G(order)
    results = []

    # (i) G - t^10*G - 1/((1-t)(1-t^12)^2)
    #     = -t^12 (t^26+t^25+t^24+t^13+t^12+1)/(t^60-t^48-t^12+1)
    lhs = g - g.shift(10)
    den = poly_mul(one_minus_t_power(1),
                   poly_mul(one_minus_t_power(12), one_minus_t_power(12)))
    lhs = lhs - expand_rational([1], den, order)
    num = [0] * 39
    for e in (12, 24, 25, 36, 37, 38):
        num[e] = -1
    den2 = [0] * 61
    den2[0] = 1
    den2[12] = -1
    den2[48] = -1
    den2[60] = 1
    rhs = expand_rational(num, den2, order)
    first = next((k for k in range(order + 1) if lhs[k] != rhs[k]), None)
    results.append({"id": "G - t^10 G rational identity",
                    "pass": first is None, "first_failure": first})

    # (ii) r(k) - r(k-10) = c(k)(c(k)+1)/2 off k = 0,1,2 mod 12
    first = None
    for k in range(10, order + 1):
        if k % 12 in (0, 1, 2):
            continue
        c = dim_weight_one_ring(k)
        if g[k] - g[k - 10] != c * (c + 1) // 2:
            first = k
            break
    results.append({"id": "r(k) - r(k-10) = c(k)(c(k)+1)/2 off 0,1,2 mod 12",
                    "pass": first is None, "first_failure": first})

    # (iii) r(k) - r(k-1) = |N_k|
    first = None
    for k in range(1, order + 1):
        if g[k] - g[k - 1] != len(monomial_basis_N(k)):
            first = k
            break
    results.append({"id": "r(k) - r(k-1) = |N_k|",
                    "pass": first is None, "first_failure": first})

    # (iv) anchors
    anchors = {0: 1, 10: 2, 11: 2, 12: 3, 13: 4}
    anchors.update({k: 1 for k in range(1, 10)})
    first = next((k for k, v in sorted(anchors.items()) if g[k] != v), None)
    results.append({"id": "r anchors: 1,...,1,2,2,3,4 up to weight 13",
                    "pass": first is None, "first_failure": first})
    return results


def degree_identity_check():
    """52/(1*10*12*13*48) reduces to 1/1440 exactly."""
    prod = 1
    for w in GENERATOR_WEIGHTS:
        prod *= w
    return Fraction(RELATION_WEIGHT, prod) == Fraction(1, 1440)


def asymptotic_fit(order=9400):
    """Leading cubic coefficient of r(k), by exact finite differences.

    The dimension function is a quasi-polynomial whose periodic parts
    all divide the lcm of the generator weights, so the third finite
    difference with that step is exactly 6*lambda*step^3.  Returns a
    report dict; the measured lambda is compared against 1/1080 and the
    residue-derived 1/8640, and the discrepancy is flagged without
    judgement.
    """
    period = lcm(*GENERATOR_WEIGHTS)
    need = 3 * period
    if order < need:
        raise ValueError("order must be at least %d for one full "
                         "third difference" % need)
    g = expand_G(order)

    def third_difference(k0):
        return (g[k0 + 3 * period] - 3 * g[k0 + 2 * period]
                + 3 * g[k0 + period] - g[k0])

    lam = Fraction(third_difference(0), 6 * period ** 3)
    stable = all(
        Fraction(third_difference(k0), 6 * period ** 3) == lam
        for k0 in range(1, min(8, order - need)))
    monotone = all(g[k] <= g[k + 1] for k in range(order))
    positive = all(g[k] > 0 for k in range(order + 1))
    candidates = {"1/1080": Fraction(1, 1080), "1/8640": Fraction(1, 8640)}
    matches = sorted(name for name, v in candidates.items() if v == lam)
    return {
        "lambda": lam,
        "stable": stable,
        "period": period,
        "matches": matches,
        "discrepancy_flag": "1/1080" not in matches,
        "monotone": monotone,
        "positive": positive,
    }
