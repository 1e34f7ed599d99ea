import pytest
from hypothesis import given, settings, strategies as st

from g2c2.polycore import (
    MultiPoly, RING_F2, RING_ZZ,
    NotDivisible, RingMismatch, ZeroPolynomial,
    exact_divide, f2, zz, mono_pack,
)


def P(ring, *items):
    return MultiPoly.from_terms(ring, items)


def test_add_char2_cancels():
    k1 = P(RING_F2, ({"a0": 1, "a3": 1}, 1), ({"a1": 1, "a2": 1}, 1))
    assert (k1 + k1).is_zero()


def test_square_is_frobenius_char2():
    k1 = P(RING_F2, ({"a0": 1, "a3": 1}, 1), ({"a1": 1, "a2": 1}, 1))
    sq = k1 * k1
    assert sq == P(RING_F2, ({"a0": 2, "a3": 2}, 1), ({"a1": 2, "a2": 2}, 1))
    assert sq == k1.square()


def test_binomial_square_zz():
    p = zz("x1") + zz("x2")
    assert p * p == P(RING_ZZ, ({"x1": 2}, 1), ({"x1": 1, "x2": 1}, 2),
                      ({"x2": 2}, 1))


def test_ring_mismatch_is_usage_error():
    with pytest.raises(RingMismatch):
        zz("x1") + f2("x1")
    with pytest.raises(RingMismatch):
        zz("x1") * f2("x1")


def test_substitute_eq6_style_images():
    c6 = zz("c6")
    image = zz("b6").scale(4) + zz("a3") * zz("a3")
    assert c6.substitute({"c6": image}) == image
    c3 = zz("c3")
    image3 = (zz("b3").scale(4) + (zz("a0") * zz("a3")).scale(2)
              + (zz("a1") * zz("a2")).scale(2))
    assert c3.substitute({"c3": image3}) == image3


def test_substitute_identity_bindings():
    p = zz("c0") * zz("c6") + zz("c3") ** 2
    assert p.substitute({"c0": zz("c0"), "c3": zz("c3")}) == p


def test_substitute_simultaneous_swap():
    # cyclic bindings exercise the monomial-wise fallback
    p = f2("a0") + f2("a3") ** 2
    q = p.substitute({"a0": f2("a3"), "a3": f2("a0")})
    assert q == f2("a3") + f2("a0") ** 2


def test_exact_divide_square_char2():
    k1 = f2("a0") * f2("a3") + f2("a1") * f2("a2")
    assert exact_divide(k1.square(), k1) == k1


def test_exact_divide_by_one():
    p = zz("c0") * zz("c6") - zz("c3").scale(7)
    one = MultiPoly.const(RING_ZZ, 1)
    assert exact_divide(p, one) == p


def test_exact_divide_remainder_forced():
    p = f2("a0") * f2("a3") + f2("a1") * f2("a2") + f2("b3")
    q = f2("a0") * f2("a3")
    with pytest.raises(NotDivisible):
        exact_divide(p, q)


def test_exact_divide_integer_coefficients():
    with pytest.raises(NotDivisible):
        exact_divide(zz("x1"), MultiPoly.const(RING_ZZ, 2))
    assert exact_divide(zz("x1").scale(6), MultiPoly.const(RING_ZZ, 2)) \
        == zz("x1").scale(3)


def test_derivative_examples():
    assert (zz("x1") ** 3).derivative("x1") == (zz("x1") ** 2).scale(3)
    assert (f2("b3") ** 2).derivative("b3").is_zero()
    p = f2("a0") * f2("a3") + f2("a1") * f2("a2")
    assert p.derivative("a0") == f2("a3")


def test_content_2adic_examples():
    p = zz("b0").scale(4) + (zz("a0") * zz("a1")).scale(2)
    assert p.content_2adic() == 1
    q = zz("b0").scale(4) + zz("a0") ** 2
    assert q.content_2adic() == 0
    r = zz("b0").scale(8) + zz("b1").scale(16)
    assert r.content_2adic() == 3
    with pytest.raises(ZeroPolynomial):
        MultiPoly.zero(RING_ZZ).content_2adic()


def test_divide_pow2_and_reduce_examples():
    p = zz("b0").scale(4) + (zz("a0") * zz("a1")).scale(2)
    assert p.divide_pow2_and_reduce() == f2("a0") * f2("a1")
    q = (zz("c3") ** 2).scale(3)
    assert q.divide_pow2_and_reduce() == f2("c3") ** 2
    # content 0 because of the odd coefficient 3; reduce coefficientwise
    j2 = (- (zz("c0") * zz("c6")).scale(120)
          + (zz("c1") * zz("c5")).scale(20)
          - (zz("c2") * zz("c4")).scale(8)
          + (zz("c3") ** 2).scale(3))
    assert j2.content_2adic() == 0
    assert j2.divide_pow2_and_reduce() == f2("c3") ** 2


def test_text_format():
    k1 = f2("a0") * f2("a3") + f2("a1") * f2("a2")
    assert k1.to_text() == "a0*a3 + a1*a2"
    j2 = (- (zz("c0") * zz("c6")).scale(120)
          + (zz("c1") * zz("c5")).scale(20)
          - (zz("c2") * zz("c4")).scale(8)
          + (zz("c3") ** 2).scale(3))
    assert j2.to_text() == "-120*c0*c6 + 20*c1*c5 + -8*c2*c4 + 3*c3^2"
    assert MultiPoly.zero(RING_F2).to_text() == "0"


def test_json_roundtrip():
    k1 = f2("a0") * f2("a3") + f2("a1") * f2("a2")
    obj = k1.to_json_obj()
    assert obj == {"ring": "F2", "terms": [
        {"coef": "1", "exps": {"a0": 1, "a3": 1}},
        {"coef": "1", "exps": {"a1": 1, "a2": 1}},
    ]}
    assert MultiPoly.from_json_obj(obj) == k1
    j = (zz("c0") * zz("c6")).scale(-120) + (zz("c3") ** 2).scale(3)
    assert MultiPoly.from_json_obj(j.to_json_obj()) == j


# -- property tests ---------------------------------------------------

VARS = ["a0", "a1", "a2", "a3", "b0", "b3", "b6"]


def _poly_strategy(ring):
    coef = st.just(1) if ring == RING_F2 else \
        st.integers(min_value=-40, max_value=40).filter(lambda c: c != 0)
    term = st.tuples(
        st.dictionaries(st.sampled_from(VARS),
                        st.integers(min_value=1, max_value=3),
                        max_size=3),
        coef)
    return st.lists(term, max_size=6).map(
        lambda items: MultiPoly.from_terms(ring, items))


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(RING_ZZ), _poly_strategy(RING_ZZ))
def test_mul_commutes_zz(p, q):
    assert p * q == q * p


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(RING_F2), _poly_strategy(RING_F2),
       _poly_strategy(RING_F2))
def test_mul_associates_f2(p, q, r):
    assert (p * q) * r == p * (q * r)


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(RING_ZZ), _poly_strategy(RING_ZZ))
def test_exact_divide_recovers_factor(p, q):
    if q.is_zero():
        return
    assert exact_divide(p * q, q) == p


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(RING_F2), _poly_strategy(RING_F2))
def test_exact_divide_recovers_factor_f2(p, q):
    if q.is_zero():
        return
    assert exact_divide(p * q, q) == p


@settings(max_examples=40, deadline=None)
@given(_poly_strategy(RING_ZZ), st.integers(min_value=0, max_value=5))
def test_pow2_shift_invariance(p, k):
    if p.is_zero():
        return
    assert p.scale(1 << k).divide_pow2_and_reduce() \
        == p.divide_pow2_and_reduce()


@settings(max_examples=60, deadline=None)
@given(_poly_strategy(RING_ZZ), _poly_strategy(RING_ZZ),
       st.sampled_from(VARS))
def test_leibniz_rule(p, q, v):
    lhs = (p * q).derivative(v)
    rhs = p * q.derivative(v) + q * p.derivative(v)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(_poly_strategy(RING_ZZ), _poly_strategy(RING_ZZ))
def test_substitute_is_ring_hom(p, q):
    bindings = {"a0": zz("b3") + zz("a1").scale(2),
                "b0": zz("a2") * zz("a3") + MultiPoly.const(RING_ZZ, 1)}
    sp, sq = p.substitute(bindings), q.substitute(bindings)
    assert (p + q).substitute(bindings) == sp + sq
    assert (p * q).substitute(bindings) == sp * sq


@settings(max_examples=40, deadline=None)
@given(_poly_strategy(RING_F2))
def test_substitution_paths_agree(p):
    from g2c2.polycore import _subst_monomialwise
    bindings = {"a0": f2("a0") + f2("t") * f2("a1"),
                "b3": f2("b3") + f2("t") ** 2}
    fast = p.substitute(bindings)
    slow = _subst_monomialwise(p, bindings)
    assert fast == slow


def test_canonical_order_stable():
    p = P(RING_F2, ({"a1": 1, "a2": 1}, 1), ({"a0": 1, "a3": 1}, 1),
          ({"b3": 1}, 1))
    # graded first (degree 2 before degree 1), a0 most significant
    assert [m for m, _ in p.sorted_terms()] == [
        mono_pack({"a0": 1, "a3": 1}),
        mono_pack({"a1": 1, "a2": 1}),
        mono_pack({"b3": 1}),
    ]
