from fractions import Fraction

import pytest

from g2c2 import hilbert as hb


def test_r_anchors():
    g = hb.expand_G(60)
    assert g[0] == 1
    for k in range(1, 10):
        assert g[k] == 1, k
    assert g[10] == 2
    assert g[11] == 2
    assert g[12] == 3
    assert g[13] == 4


def test_r52_counts_the_relation():
    g = hb.expand_G(60)
    # lattice points of 10a+12b+13c+48d+e = 52 minus one for the relation
    brute = sum(1 for a in range(6) for b in range(5) for c in range(5)
                for d in range(2)
                if 10 * a + 12 * b + 13 * c + 48 * d <= 52)
    assert g[52] == brute - 1 == 37


def test_monomial_basis_examples():
    assert hb.monomial_basis_N(23) == [(1, 0, 1, 0)]
    assert hb.monomial_basis_N(11) == []
    assert hb.monomial_basis_N(12) == [(0, 1, 0, 0)]
    assert hb.monomial_basis_N(0) == [(0, 0, 0, 0)]


def test_monomial_basis_respects_gamma_cap():
    # 13*4 = 52 would need gamma = 4
    assert all(gamma <= 3 for (_, _, gamma, _) in hb.monomial_basis_N(52))
    assert (0, 0, 4, 0) not in hb.monomial_basis_N(52)


def test_monomial_basis_brute_force_agreement():
    for k in range(0, 120):
        brute = {(a, b, c, d)
                 for a in range(k // 10 + 1)
                 for b in range(k // 12 + 1)
                 for c in range(4)
                 for d in range(k // 48 + 1)
                 if 10 * a + 12 * b + 13 * c + 48 * d == k}
        assert set(hb.monomial_basis_N(k)) == brute, k


def test_series_identities_to_order_200():
    results = hb.verify_series_identities(200)
    assert all(r["pass"] for r in results), results


def test_identity_ii_value_at_k14():
    g = hb.expand_G(20)
    c = hb.dim_weight_one_ring(14)
    assert c == 2
    assert g[14] - g[4] == c * (c + 1) // 2 == 3


def test_degree_identity():
    assert hb.degree_identity_check()
    prod = 1
    for w in hb.GENERATOR_WEIGHTS:
        prod *= w
    assert prod == 74880
    assert 74880 // 52 == 1440


def test_telescoping_basis_count():
    g = hb.expand_G(150)
    total = 0
    for k in range(151):
        total += len(hb.monomial_basis_N(k))
        assert g[k] == total, k


def test_expand_rational_matches_factored_form():
    # (1-t^4)/(1-t)(1-t^2) expanded two ways
    num = hb.one_minus_t_power(4)
    den = hb.poly_mul(hb.one_minus_t_power(1), hb.one_minus_t_power(2))
    s1 = hb.expand_rational(num, den, 40)
    # (1-t^4) = (1-t^2)(1+t^2), so this equals (1+t^2)/(1-t)
    s2 = hb.expand_rational([1, 0, 1], hb.one_minus_t_power(1), 40)
    assert s1 == s2


def test_asymptotic_fit():
    report = hb.asymptotic_fit()
    assert report["stable"]
    assert report["monotone"]
    assert report["positive"]
    assert report["lambda"] == Fraction(1, 8640)
    assert report["matches"] == ["1/8640"]
    assert report["discrepancy_flag"]


def test_asymptotic_fit_rejects_short_orders():
    with pytest.raises(ValueError):
        hb.asymptotic_fit(2000)


def test_truncated_series_ops():
    a = hb.TruncatedSeries([1, 2, 3])
    b = hb.TruncatedSeries([1, 1, 1])
    assert (a + b).coeffs == [2, 3, 4]
    assert (a - b).coeffs == [0, 1, 2]
    assert a.shift(1).coeffs == [0, 1, 2]
    assert a.order == 2
