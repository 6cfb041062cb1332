"""Engines: agreement of all algorithms with the exact rational oracle,
tuning formulas, operation-count and storage instrumentation, and error
behavior."""

import math
import random
from fractions import Fraction

import pytest

import holoeval.balls as bl
from holoeval.balls import Ball, ComplexBall
from holoeval.poly import BiPoly, bipoly_from_text
from holoeval.recmat import (DenominatorZeroError, RecMatrix,
                             ScalarRecurrence, companion,
                             rising_factorial_matrix, unroll_rational)
from holoeval.engines import (ALGORITHMS, OpCounter, SymmetryError,
                              bivariate_delta, choose_m, default_algorithm,
                              eval_dispatch, eval_multipoint, eval_rect_delta,
                              eval_rect_ps, eval_rect_split,
                              eval_rect_split_taylor, make_plan)
from holoeval.special import hyp1f1_gamma_matrix

RISING = rising_factorial_matrix()


def rising_exact(z, n):
    acc = Fraction(1)
    for i in range(n):
        acc *= z + i
    return acc


class TestChooseM:
    def test_rect_split_formula(self):
        m, _ = choose_m("rect-split", 10 ** 4, 4 * 10 ** 4)
        assert m == 13
        m, _ = choose_m("rect-delta", 10 ** 4, 4 * 10 ** 4)
        assert m == 13

    def test_multipoint_formula(self):
        assert choose_m("multipoint", 10 ** 4, 1000)[0] == 100

    def test_clamp(self):
        for alg in ALGORITHMS:
            assert choose_m(alg, 1, 64)[0] == 1

    def test_rect_ps_subn(self):
        m, subn = choose_m("rect-ps", 10 ** 4, 10 ** 4)
        assert subn == min(int(2 * 100), int(10 * (10 ** 4) ** 0.25))
        assert m == int(subn ** 0.5)

    def test_default_policy(self):
        assert default_algorithm(31) == "naive"
        assert default_algorithm(32) == "rect-delta"
        assert default_algorithm(999) == "rect-delta"
        assert default_algorithm(1000) == "rect-split"
        assert default_algorithm(10, thresholds=(4, 8)) == "rect-split"


class TestSmallExamples:
    def test_multipoint_factorial(self):
        M = companion(ScalarRecurrence([bipoly_from_text("-1-k"),
                                        bipoly_from_text("1")]))
        rep = eval_dispatch(M, Ball.zero(), 4, 64, algorithm="multipoint", m=2)
        assert rep.matrix[0][0].contains(24)

    def test_multipoint_n_equals_m_equals_1(self):
        z = Ball.from_fraction(Fraction(1, 2), 64)
        rep = eval_dispatch(RISING, z, 1, 64, algorithm="multipoint", m=1)
        assert rep.matrix[0][0].contains(Fraction(1, 2))

    def test_multipoint_rising_100(self):
        z = Ball.from_fraction(Fraction(1, 2), 256)
        rep = eval_dispatch(RISING, z, 100, 256, algorithm="multipoint")
        assert rep.matrix[0][0].contains(rising_exact(Fraction(1, 2), 100))

    def test_rect_ps_rising_8(self):
        z = Ball.from_fraction(Fraction(1, 2), 128)
        rep = eval_dispatch(RISING, z, 8, 128, algorithm="rect-ps", m=3,
                            subn=8)
        assert rep.matrix[0][0].contains(Fraction(2027025, 256))

    def test_rect_ps_trivial(self):
        z = Ball.from_fraction(Fraction(1, 2), 64)
        rep = eval_dispatch(RISING, z, 1, 64, algorithm="rect-ps", m=1, subn=1)
        assert rep.matrix[0][0].contains(Fraction(1, 2))

    def test_rect_split_degenerate_m1(self):
        z = Ball.from_fraction(Fraction(1, 2), 96)
        rep = eval_dispatch(RISING, z, 5, 96, algorithm="rect-split", m=1)
        assert rep.matrix[0][0].contains(Fraction(945, 32))

    def test_rect_split_exact_point(self):
        rep = eval_dispatch(RISING, Ball.from_int(3), 6, 96,
                            algorithm="rect-split", m=2)
        assert rep.matrix[0][0].contains(20160)

    def test_rect_delta_16(self):
        z = Ball.from_fraction(Fraction(1, 2), 128)
        rep = eval_dispatch(RISING, z, 16, 128, algorithm="rect-delta", m=4)
        assert rep.matrix[0][0].contains(rising_exact(Fraction(1, 2), 16))

    def test_rect_delta_single_block(self):
        z = Ball.from_fraction(Fraction(1, 2), 64)
        rep = eval_dispatch(RISING, z, 4, 64, algorithm="rect-delta", m=4)
        assert rep.matrix[0][0].contains(rising_exact(Fraction(1, 2), 4))

    def test_empty_product_every_engine(self):
        z = Ball.from_fraction(Fraction(1, 2), 64)
        for alg in ALGORITHMS:
            rep = eval_dispatch(RISING, z, 0, 64, algorithm=alg)
            assert rep.matrix[0][0].is_exact()
            assert rep.matrix[0][0].contains(1)
            assert rep.accuracy_bits == 64

    def test_parameter_free_agreement(self):
        fib = companion(ScalarRecurrence([bipoly_from_text("-1"),
                                          bipoly_from_text("-1"),
                                          bipoly_from_text("1")]))
        mats = [eval_dispatch(fib, Ball.zero(), 12, 64, algorithm=a).matrix
                for a in ("rect-ps", "multipoint", "rect-split")]
        for mat in mats:
            assert mat[1][1].contains(233)  # F_13
            assert mat[1][1].is_exact()


class TestTaylorVariant:
    def test_rising_matches_rect_split(self):
        z = Ball.from_fraction(Fraction(1, 2), 400)
        plan = make_plan("rect-split", 100, 400, m=7, taylor="off")
        a = eval_rect_split(RISING, z, 100, plan)
        b = eval_rect_split_taylor(RISING, z, 100, make_plan("rect-split", 100, 400, m=7))
        exact = rising_exact(Fraction(1, 2), 100)
        assert a[0][0].contains(exact) and b[0][0].contains(exact)
        assert a[0][0].overlaps(b[0][0])

    def test_constant_matrix_is_symmetric(self):
        fib = companion(ScalarRecurrence([bipoly_from_text("-1"),
                                          bipoly_from_text("-1"),
                                          bipoly_from_text("1")]))
        mat = eval_rect_split_taylor(fib, Ball.zero(), 30, make_plan("rect-split", 30, 64, m=5))
        assert mat[1][1].contains(1346269)  # F_31

    def test_hyp1f1_matrix_symmetry(self):
        # 1 + k + x is symmetric under (k -> k+m) vs (x -> x+m), and the
        # constant entry is invariant, so the Taylor update applies
        M = hyp1f1_gamma_matrix(17)
        assert M.shift_symmetry_holds(4)
        z = Ball.from_fraction(Fraction(5, 4), 128)
        a = eval_rect_split_taylor(M, z, 40, make_plan("rect-split", 40, 128, m=5))
        rep = eval_dispatch(M, z, 40, 128, algorithm="naive")
        for i in range(2):
            for j in range(2):
                assert a[i][j].overlaps(rep.matrix[i][j])

    def test_asymmetric_matrix_raises(self):
        M = RecMatrix([[bipoly_from_text("1 + k")]])
        assert not M.shift_symmetry_holds(3)
        with pytest.raises(SymmetryError):
            eval_rect_split_taylor(M, Ball.one(), 20, make_plan("rect-split", 20, 64, m=4))


def rand_bipoly(rng, maxdeg=2, bound=5):
    return BiPoly([[rng.randint(-bound, bound)
                    for _ in range(rng.randint(1, maxdeg + 1))]
                   for _ in range(rng.randint(1, maxdeg + 1))])


def random_valid_recurrence(rng, nmax):
    while True:
        order = rng.randint(1, 3)
        coeffs = [rand_bipoly(rng) for _ in range(order + 1)]
        if coeffs[-1].is_zero():
            continue
        z = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
        M = companion(ScalarRecurrence(coeffs))
        try:
            exact = unroll_rational(M, z, nmax)
        except DenominatorZeroError:
            continue
        return M, z, exact


class TestCrossAlgorithmAgreement:
    def test_containment_all_engines(self):
        rng = random.Random(2024)
        for _ in range(12):
            n = rng.choice([7, 64, 257, 500])
            M, z, exact = random_valid_recurrence(rng, n)
            zb = Ball.from_fraction(z, 192)
            for alg in ALGORITHMS:
                rep = eval_dispatch(M, zb, n, 192, algorithm=alg)
                for i in range(M.r):
                    for j in range(M.r):
                        assert rep.matrix[i][j].contains(exact[i][j]), (alg, n)

    def test_naive_vs_rect_split_overlap(self):
        z = Ball.from_fraction(Fraction(1, 3), 256)
        a = eval_dispatch(RISING, z, 300, 256, algorithm="naive").matrix
        b = eval_dispatch(RISING, z, 300, 256, algorithm="rect-split").matrix
        assert a[0][0].overlaps(b[0][0])

    def test_complex_parameter(self):
        z = ComplexBall(Ball.from_fraction(Fraction(1, 2), 128),
                        Ball.from_fraction(Fraction(1, 3), 128))
        exact_re, exact_im = Fraction(1), Fraction(0)
        zre, zim = Fraction(1, 2), Fraction(1, 3)
        for i in range(20):
            nre = exact_re * (zre + i) - exact_im * zim
            nim = exact_re * zim + exact_im * (zre + i)
            exact_re, exact_im = nre, nim
        for alg in ALGORITHMS:
            rep = eval_dispatch(RISING, z, 20, 128, algorithm=alg)
            v = rep.matrix[0][0]
            assert v.re.contains(exact_re) and v.im.contains(exact_im), alg


class TestDenominators:
    def test_pure_k_denominator_exact(self):
        M = RecMatrix([[bipoly_from_text("2")]], bipoly_from_text("1 + k"))
        rep = eval_dispatch(M, Ball.one(), 6, 96, algorithm="rect-split")
        assert rep.matrix[0][0].contains(Fraction(2 ** 6, math.factorial(6)))

    def test_x_dependent_denominator(self):
        M = RecMatrix([[bipoly_from_text("x + k + 5")]],
                      bipoly_from_text("1 + k + x"))
        z = Fraction(1, 2)
        exact = Fraction(1)
        for i in range(50):
            exact *= (z + i + 5) / (1 + i + z)
        zb = Ball.from_fraction(z, 160)
        for alg in ALGORITHMS:
            rep = eval_dispatch(M, zb, 50, 160, algorithm=alg)
            assert rep.matrix[0][0].contains(exact), alg

    def test_vanishing_reported(self):
        M = RecMatrix([[bipoly_from_text("1")]], bipoly_from_text("k - 3"))
        for alg in ("naive", "rect-split", "rect-delta"):
            with pytest.raises(DenominatorZeroError) as err:
                eval_dispatch(M, Ball.one(), 10, 64, algorithm=alg)
            assert err.value.index == 3


class TestInstrumentation:
    def test_nonscalar_bound_sweep(self):
        for k in range(2, 13):
            n = 2 ** k
            m = math.isqrt(n)
            if m * m < n:
                m += 1
            z = Ball.from_fraction(Fraction(1, 2), 4 * n)
            rep = eval_dispatch(RISING, z, n, 4 * n, algorithm="rect-split", m=m)
            c = rep.counter
            assert c.nonscalar <= 4 * (m + n / m), n
            assert c.scalar <= 8 * n, n

    def test_storage_linear_in_m(self):
        n = 2 ** 10
        z = Ball.from_fraction(Fraction(1, 2), 1024)
        peaks = {}
        for m in (8, 16, 32):
            rep = eval_dispatch(RISING, z, n, 1024, algorithm="rect-split", m=m)
            peaks[m] = rep.counter.peak_coeffs
        assert peaks[16] <= 3 * peaks[8]
        assert peaks[32] <= 3 * peaks[16]

    def test_positivity_stability(self):
        # all-positive inputs: accuracy loss stays O(log n)
        for n in (10, 100, 1000):
            p = 4 * n
            z = Ball.from_fraction(Fraction(1, 2), p)
            rep = eval_dispatch(RISING, z, n, p, algorithm="rect-split")
            loss = p - rep.accuracy_bits
            assert loss <= 4 * math.log2(n) + 16, (n, loss)


class TestDeltaGeneric:
    def test_delta_m4_constant_row(self):
        d = bivariate_delta(RISING, 4)[0][0]
        assert d.eval_k(0).coeffs == [840, 632, 168, 16]

    def test_dispatch_policy_example(self):
        rep = eval_dispatch(RISING, Ball.from_fraction(Fraction(1, 2), 64),
                            999, 64)
        assert rep.plan.algorithm == "rect-delta"
        rep = eval_dispatch(RISING, Ball.from_fraction(Fraction(1, 2), 64),
                            1000, 64)
        assert rep.plan.algorithm == "rect-split"
