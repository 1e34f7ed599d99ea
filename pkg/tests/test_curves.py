import itertools
import random

import pytest

from g2c2 import curves as cv
from g2c2 import char2inv as c2


F2 = cv.binary_field(1)
F4 = cv.binary_field(2)
F16 = cv.binary_field(4)


def curve(field, a, b):
    return cv.Genus2Curve(field, a, b)


# -- fields -------------------------------------------------------------


def test_fixed_moduli_are_irreducible():
    for n, mod in cv.FIXED_MODULI.items():
        assert cv._gf2x_irreducible(mod, n), n


def test_f4_arithmetic():
    z = F4.generator
    assert F4.mul(z, z ^ 1) == 1
    assert all(F4.frobenius(F4.frobenius(x)) == x for x in F4.elements())
    assert F4.trace(z) == 1
    assert F4.trace(0) == 0


def test_field_inverse_and_division():
    for F in (F2, F4, F16):
        for x in range(1, F.q):
            assert F.mul(x, F.inv(x)) == 1
        with pytest.raises(ZeroDivisionError):
            F.inv(0)


def test_field_sqrt_is_inverse_of_squaring():
    for F in (F4, F16):
        for x in F.elements():
            assert F.sqrt(F.mul(x, x)) == x


def test_trace_is_additive_onto_f2():
    for F in (F4, F16, cv.binary_field(3)):
        traces = {F.trace(x) for x in F.elements()}
        assert traces == {0, 1}
        for x in F.elements():
            for y in F.elements():
                assert F.trace(x ^ y) == F.trace(x) ^ F.trace(y)


def test_extension_embedding_is_a_field_hom():
    emb = cv._embedding_table(2, 4)
    for x in F4.elements():
        for y in F4.elements():
            assert emb[F4.mul(x, y)] == F16.mul(emb[x], emb[y])
            assert emb[x ^ y] == emb[x] ^ emb[y]


def test_deterministic_higher_moduli():
    f9 = cv.binary_field(9)
    assert cv._gf2x_irreducible(f9.modulus, 9)
    assert f9.modulus == cv._smallest_irreducible(9)


# -- polynomial layer ---------------------------------------------------


def test_radical_counts_distinct_roots():
    # (x)(x+1)^2 over F2: radical x(x+1)
    u = cv.pmul(F2, (0, 1), cv.pmul(F2, (1, 1), (1, 1)))
    assert cv.pradical(F2, u) == cv.pmul(F2, (0, 1), (1, 1))
    # perfect square: (x^2+x)^2
    sq = cv.pmul(F2, (0, 1, 1), (0, 1, 1))
    assert cv.pradical(F2, sq) == (0, 1, 1)


def _distinct_closure_roots(F, u):
    """Brute-force count of distinct roots over the algebraic closure.

    Roots of a degree <= 6 polynomial have degree <= 6 over the base;
    counting the roots R_d inside each F_{q^d} and unfolding
    R_d = sum_{e | d} N_e gives the number N_e of exact-degree-e roots.
    """
    R = {}
    for d in range(1, 7):
        if F.n * d > cv.MAX_EXTENSION:
            raise AssertionError("splitting field out of range")
        big = cv.binary_field(F.n * d)
        emb = cv._embedding_table(F.n, F.n * d)
        ubig = tuple(emb[c] for c in u)
        R[d] = sum(1 for x in big.elements()
                   if cv.peval(big, ubig, x) == 0)
    N = {1: R[1], 2: R[2] - R[1], 3: R[3] - R[1], 4: R[4] - R[2],
         5: R[5] - R[1], 6: R[6] - R[3] - R[2] + R[1]}
    assert all(v >= 0 for v in N.values())
    return sum(N.values())


def test_radical_degree_is_distinct_root_count():
    rng = random.Random(3)
    for F, trials in ((F2, 70), (F4, 25)):
        done = 0
        while done < trials:
            u = cv.ptrim(rng.randrange(F.q) for _ in range(7))
            if cv.pdeg(u) < 1:
                continue
            done += 1
            assert cv.pdeg(cv.pradical(F, u)) \
                == _distinct_closure_roots(F, u), u


# -- curve geometry -----------------------------------------------------


def test_smoothness_examples():
    assert curve(F2, (1,), (0, 0, 0, 0, 0, 1)).is_smooth()
    assert not curve(F2, (0, 1, 1, 1), (0, 1)).is_smooth()
    assert curve(F2, (0, 1, 1, 1), (1, 0, 0, 0, 0, 1)).is_smooth()


def test_smoothness_matches_brute_force_singular_search():
    # both charts, all points over extensions up to degree 3
    def brute_smooth(c):
        F = c.field
        for chart in range(2):
            if chart == 0:
                a, b = c.a, c.b
            else:
                a, b = cv.preverse(c.a, 3), cv.preverse(c.b, 6)
            h = cv.padd(
                cv.pmul(F, cv.pmul(F, cv.pderiv(a), cv.pderiv(a)), b),
                cv.pmul(F, cv.pderiv(b), cv.pderiv(b)))
            for d in (1, 2, 3):
                big = cv.binary_field(F.n * d)
                emb = cv._embedding_table(F.n, F.n * d)
                abig = tuple(emb[x] for x in a)
                hbig = tuple(emb[x] for x in h)
                for x in big.elements():
                    if chart == 1 and x != 0:
                        continue  # overlap already covered by chart 0
                    if cv.peval(big, abig, x) == 0 \
                            and cv.peval(big, hbig, x) == 0:
                        return False
        return True

    rng = random.Random(7)
    for _ in range(150):
        a = tuple(rng.randrange(2) for _ in range(4))
        if not any(a):
            continue
        b = tuple(rng.randrange(2) for _ in range(7))
        c = curve(F2, a, b)
        assert c.is_smooth() == brute_smooth(c), (a, b)


def test_two_rank_examples():
    assert curve(F2, (0, 1, 1, 1), (0, 1)).two_rank() == 2
    assert curve(F2, (0, 0, 0, 1), (0, 1)).two_rank() == 0
    assert curve(F2, (1,), (0, 1)).two_rank() == 0
    with pytest.raises(cv.ZeroCubic):
        curve(F2, (), (0, 1))


def test_point_counts_y2_y_x5():
    c = curve(F2, (1,), (0, 0, 0, 0, 0, 1))
    assert cv.count_points(c, 1) == 3
    assert cv.count_points(c, 2) == 5
    assert cv.l_polynomial(c) == (1, 0, 0, 0, 4)
    assert cv.two_rank_from_L(c) == 0 == c.two_rank()


def test_point_count_brute_force_f4():
    # independent brute force directly over pairs (x, y)
    c = curve(F4, (1, F4.generator), (0, 0, 1))
    def brute(field, a, b, emb):
        ab = tuple(emb[x] for x in a)
        bb = tuple(emb[x] for x in b)
        n = 0
        for x in field.elements():
            for y in field.elements():
                lhs = field.mul(y, y) ^ field.mul(cv.peval(field, ab, x), y)
                if lhs == cv.peval(field, bb, x):
                    n += 1
        # points at infinity
        abar = cv.preverse(ab, 3)
        bbar = cv.preverse(bb, 6)
        n += cv._artin_schreier_solutions(
            field, abar[0] if abar else 0, bbar[0] if bbar else 0)
        return n
    assert cv.count_points(c, 1) == brute(F4, c.a, c.b,
                                          list(F4.elements()))
    big = cv.binary_field(4)
    emb = cv._embedding_table(2, 4)
    assert cv.count_points(c, 2) == brute(big, c.a, c.b, emb)


def test_count_points_field_too_large():
    c = curve(cv.binary_field(8), (1,), (0, 1))
    with pytest.raises(cv.FieldTooLarge):
        cv.count_points(c, 3)


def test_l_polynomial_requires_smooth():
    c = curve(F2, (0, 1, 1, 1), (0, 1))
    with pytest.raises(cv.NotSmooth):
        cv.l_polynomial(c)


def test_act_examples():
    c = curve(F2, (0, 0, 0, 1), (0, 0, 0, 0, 0, 0, 1))
    swapped = cv.act(cv.GroupElement(F2, 0, 1, 1, 0), c)
    assert swapped.a == (1,) and swapped.b == (1,)
    # the stabilizer element (id, a)
    c5 = curve(F2, (1,), (0, 0, 0, 0, 0, 1))
    fixed = cv.act(cv.GroupElement(F2, 1, 0, 0, 1, v=(1,)), c5)
    assert fixed.a == c5.a and fixed.b == c5.b
    with pytest.raises(cv.SingularMatrix):
        cv.act(cv.GroupElement(F2, 1, 1, 1, 1), c5)


def test_act_transforms_invariants_by_det_powers():
    table = c2.build_k_table()
    rng = random.Random(99)
    for F in (F2, F4, F16):
        for _ in range(25):
            a = tuple(rng.randrange(F.q) for _ in range(4))
            if not any(a):
                continue
            b = tuple(rng.randrange(F.q) for _ in range(7))
            c = curve(F, a, b)
            while True:
                g = cv.GroupElement(
                    F, rng.randrange(F.q), rng.randrange(F.q),
                    rng.randrange(F.q), rng.randrange(F.q),
                    v=tuple(rng.randrange(F.q) for _ in range(4)))
                if g.det():
                    break
            moved = cv.act(g, c)
            d = g.det()
            before = c.eval_invariants(table)
            after = moved.eval_invariants(table)
            for name, rec in table.items():
                assert after[name] == F.mul(F.pow(d, rec.weight),
                                            before[name]), name
            assert c.is_smooth() == moved.is_smooth()
            assert c.two_rank() == moved.two_rank()
            if c.is_smooth():
                assert cv.count_points(c, 1) == cv.count_points(moved, 1)


def test_scaling_law():
    # K_n(c*a, c^2*b) = c^(2n) K_n(a, b): the twisted scalar action
    table = c2.build_k_table()
    rng = random.Random(5)
    for F in (F4, F16):
        for _ in range(10):
            a = tuple(rng.randrange(F.q) for _ in range(4))
            if not any(a):
                continue
            b = tuple(rng.randrange(F.q) for _ in range(7))
            lam = rng.randrange(1, F.q)
            c = curve(F, a, b)
            scaled = curve(F, cv.pscale(F, a, lam),
                           cv.pscale(F, b, F.mul(lam, lam)))
            before = c.eval_invariants(table)
            after = scaled.eval_invariants(table)
            for name, rec in table.items():
                assert after[name] == F.mul(F.pow(lam, 2 * rec.weight),
                                            before[name])


def test_k1_evaluation_example():
    table = c2.build_k_table()
    c = curve(F2, (0, 1, 1, 1), (0, 1))
    assert c.eval_invariants(table)["K1"] == 1


def test_k1_vanishes_iff_low_rank_exhaustive_f4_sample():
    table = c2.build_k_table()
    rng = random.Random(21)
    for _ in range(120):
        a = tuple(rng.randrange(4) for _ in range(4))
        if not any(a):
            continue
        b = tuple(rng.randrange(4) for _ in range(7))
        c = curve(F4, a, b)
        if not c.is_smooth():
            continue
        k1 = c.eval_invariants(table)["K1"]
        assert (k1 == 0) == (c.two_rank() <= 1)


def test_enumerate_f2():
    rep = cv.enumerate_curves(F2)
    assert rep["counts"]["total"] == 1920
    assert rep["counts"]["smooth"] == 768
    assert rep["checks"]["k1_zero_iff_rank_le_1"]
    assert rep["checks"]["k10_nonzero_on_smooth"]
    assert rep["checks"]["two_rank_matches_L"]
    assert sum(rep["smooth_by_two_rank"].values()) == 768


def test_two_rank_from_l_random_f4():
    rng = random.Random(31)
    found = 0
    while found < 60:
        a = tuple(rng.randrange(4) for _ in range(4))
        if not any(a):
            continue
        b = tuple(rng.randrange(4) for _ in range(7))
        c = curve(F4, a, b)
        if not c.is_smooth():
            continue
        found += 1
        assert cv.two_rank_from_L(c) == c.two_rank()


def test_curve_record_shape():
    c = curve(F2, (1,), (0, 0, 0, 0, 0, 1))
    rec = cv.curve_record(c)
    assert rec["n"] == 1
    assert rec["a"] == [1, 0, 0, 0]
    assert rec["b"] == [0, 0, 0, 0, 0, 1, 0]
    assert rec["smooth"] is True
    assert rec["two_rank"] == 0
    assert rec["L"] == [1, 0, 0, 0, 4]
    assert rec["points"] == {"1": 3, "2": 5}
    assert rec["invariants"]["K1"] == 0


def test_parse_poly():
    assert cv.parse_poly("x^3 + x + 1", F2) == (1, 1, 0, 1)
    assert cv.parse_poly("x^5", F2) == (0, 0, 0, 0, 0, 1)
    z = F4.generator
    assert cv.parse_poly("g*x", F4) == (0, z)
    assert cv.parse_poly("(g+1)*x^5+1", F4) == (1, 0, 0, 0, 0, z ^ 1)
    assert cv.parse_poly("1+1", F2) == ()
    assert cv.parse_poly("x*x*x", F2) == (0, 0, 0, 1)
    with pytest.raises(cv.CurveSyntaxError):
        cv.parse_poly("x +", F2)
    with pytest.raises(cv.CurveSyntaxError):
        cv.parse_poly("g", F2)
    with pytest.raises(cv.CurveSyntaxError):
        cv.parse_poly("y^2", F2)
