"""Ball arithmetic: containment against exact rational oracles, exactness
of the membership test, decimal round trips, and the elementary functions
checked against mpmath."""

import math
import random
import sys
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import holoeval.balls as bl
from holoeval.balls import Ball, BallDomainError, ComplexBall

sys.set_int_max_str_digits(8000000)


def frac_ball(q, p=64):
    return Ball.from_fraction(Fraction(q), p)


class TestBasicOps:
    def test_add_interval(self):
        a = bl.parse_decimal("1.0 ± 0.1", 64)
        b = bl.parse_decimal("2.0 ± 0.2", 64)
        s = bl.add(a, b, 64)
        assert s.contains(3)
        assert s.rad_fraction() >= Fraction(3, 10)

    def test_add_identity(self):
        x = frac_ball(Fraction(7, 8))
        s = bl.add(x, Ball.zero(), 64)
        assert s.contains(Fraction(7, 8))

    def test_add_thirds(self):
        a = frac_ball(Fraction(1, 3), 53)
        s = bl.add(a, a, 53)
        assert s.contains(Fraction(2, 3))

    def test_mul_exact(self):
        p = bl.mul(Ball.from_int(2), Ball.from_int(3), 64)
        assert p.is_exact() and p.contains(6)

    def test_mul_spread(self):
        a = bl.parse_decimal("1 ± 0.1", 64)
        p = bl.mul(a, a, 64)
        assert p.rad_fraction() >= Fraction(21, 100)
        assert p.contains(Fraction(81, 100)) and p.contains(Fraction(121, 100))

    def test_mul_sqrt2(self):
        r = bl.sqrt(Ball.from_int(2), 128)
        assert bl.mul(r, r, 128).contains(2)

    def test_scalar_mul(self):
        b = bl.mul_int(frac_ball(Fraction(3, 2)), 632, 64)
        assert b.contains(948)
        assert bl.mul_int(frac_ball(5), 0, 64).is_zero()
        # the m=4 giant-step coefficient times z = 1/2
        c = bl.mul_int(frac_ball(Fraction(1, 2)), 632, 64)
        assert c.contains(316)

    def test_division(self):
        q = bl.div(Ball.from_int(1), Ball.from_int(3), 64)
        assert q.contains(Fraction(1, 3))
        with pytest.raises(BallDomainError):
            bl.div(Ball.from_int(1), bl.parse_decimal("0 ± 1", 64), 64)

    def test_contains_exact(self):
        b = bl.parse_decimal("0.333333333 ± 1e-9", 64)
        assert b.contains(Fraction(1, 3))
        assert not frac_ball(Fraction(1, 2)).contains(Fraction(1, 3))
        v = bl.div(Ball.from_int(1), Ball.from_int(3), 64)
        # boundary: |mid - x| == rad must count as inside
        edge = Ball(v.man, v.exp, 0, 0)
        diff = abs(edge.mid_fraction() - Fraction(1, 3))
        rm, re = bl._u_from_fraction_upper(diff) if diff else (0, 0)
        within = Ball(edge.man, edge.exp, rm, re)
        assert within.contains(Fraction(1, 3))

    def test_rising_product_contains(self):
        z = frac_ball(Fraction(1, 2), 64)
        acc = Ball.one()
        for i in range(5):
            acc = bl.mul(acc, bl.add_int(z, i, 64), 64)
        assert acc.contains(Fraction(945, 32))


def random_fraction(rng, bound=9):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def build_expr(rng, depth):
    """Random expression tree; returns (ball evaluator, exact evaluator)."""
    if depth == 0 or rng.random() < 0.3:
        q = random_fraction(rng)
        return ("leaf", q)
    op = rng.choice(["add", "sub", "mul", "smul"])
    if op == "smul":
        return ("smul", rng.randint(-50, 50), build_expr(rng, depth - 1))
    return (op, build_expr(rng, depth - 1), build_expr(rng, depth - 1))


def eval_exact(node):
    if node[0] == "leaf":
        return node[1]
    if node[0] == "smul":
        return node[1] * eval_exact(node[2])
    a, b = eval_exact(node[1]), eval_exact(node[2])
    return {"add": a + b, "sub": a - b, "mul": a * b}[node[0]]


def eval_ball(node, p):
    if node[0] == "leaf":
        return Ball.from_fraction(node[1], p)
    if node[0] == "smul":
        return bl.mul_int(eval_ball(node[2], p), node[1], p)
    a, b = eval_ball(node[1], p), eval_ball(node[2], p)
    return {"add": bl.add, "sub": bl.sub, "mul": bl.mul}[node[0]](a, b, p)


class TestContainmentProperty:
    @given(st.integers(0, 10 ** 9), st.integers(2, 12))
    @settings(max_examples=120, deadline=None)
    def test_expression_trees(self, seed, depth):
        rng = random.Random(seed)
        tree = build_expr(rng, depth)
        exact = eval_exact(tree)
        for p in (24, 64):
            assert eval_ball(tree, p).contains(exact)

    def test_precision_monotonicity_statistical(self):
        # doubling precision should (statistically) not grow radii
        rng = random.Random(5)
        worse = 0
        trials = 60
        for _ in range(trials):
            tree = build_expr(rng, 8)
            r1 = eval_ball(tree, 32).rad_fraction()
            r2 = eval_ball(tree, 64).rad_fraction()
            if r2 > 2 * r1:
                worse += 1
        assert worse <= trials // 10


class TestComplex:
    def test_mul_contains(self):
        z = ComplexBall(frac_ball(Fraction(1, 3)), frac_ball(Fraction(1, 7)))
        w = bl.c_mul(z, z, 64)
        assert w.re.contains(Fraction(1, 9) - Fraction(1, 49))
        assert w.im.contains(2 * Fraction(1, 21))

    def test_div_roundtrip(self):
        z = ComplexBall(frac_ball(Fraction(2, 5)), frac_ball(Fraction(-3, 4)))
        w = ComplexBall(frac_ball(Fraction(1, 3)), frac_ball(Fraction(5, 9)))
        q = bl.c_div(bl.c_mul(z, w, 96), w, 96)
        assert q.re.contains(Fraction(2, 5)) and q.im.contains(Fraction(-3, 4))


def _mp_fraction(value, digits):
    return Fraction(mpmath.nstr(value, digits))


class TestElementaryFunctions:
    @pytest.mark.parametrize("p", [64, 256, 2048])
    def test_exp_log_against_mpmath(self, p):
        mpmath.mp.prec = p + 60
        digits = int(p * 0.301) + 10
        x = Ball.from_fraction(Fraction(7, 3), p)
        e = bl.exp(x, p)
        target = _mp_fraction(mpmath.exp(mpmath.mpf(7) / 3), digits)
        assert abs(e.mid_fraction() - target) <= e.rad_fraction() + Fraction(1, 10 ** (digits - 5))
        assert e.rel_accuracy_bits() >= p - 8
        l = bl.log(x, p)
        target = _mp_fraction(mpmath.log(mpmath.mpf(7) / 3), digits)
        assert abs(l.mid_fraction() - target) <= l.rad_fraction() + Fraction(1, 10 ** (digits - 5))

    def test_exp_functional_equation(self):
        p = 192
        a = Ball.from_fraction(Fraction(3, 7), p)
        b = Ball.from_fraction(Fraction(-9, 5), p)
        lhs = bl.exp(bl.add(a, b, p), p)
        rhs = bl.mul(bl.exp(a, p), bl.exp(b, p), p)
        assert lhs.overlaps(rhs)

    def test_log_inverts_exp(self):
        p = 256
        x = Ball.from_fraction(Fraction(11, 4), p)
        assert bl.log(bl.exp(x, p), p).contains(Fraction(11, 4))

    def test_pi_log2(self):
        mpmath.mp.prec = 1200
        pi_b = bl.pi(1024)
        target = _mp_fraction(mpmath.mp.pi, 330)
        assert abs(pi_b.mid_fraction() - target) <= pi_b.rad_fraction() + Fraction(1, 10 ** 325)
        assert pi_b.rel_accuracy_bits() >= 1024 - 4
        l2 = bl.log2_const(1024)
        target = _mp_fraction(mpmath.log(2), 330)
        assert abs(l2.mid_fraction() - target) <= l2.rad_fraction() + Fraction(1, 10 ** 325)

    def test_power(self):
        p = 128
        v = bl.power(Ball.from_int(5), Ball.from_fraction(Fraction(1, 2), p), p)
        assert bl.mul(v, v, p).contains(5)

    def test_complex_exp_log(self):
        p = 256
        mpmath.mp.prec = p + 60
        z = ComplexBall(Ball.from_fraction(Fraction(5, 4), p),
                        Ball.from_fraction(Fraction(1, 3), p))
        e = bl.c_exp(z, p)
        mv = mpmath.exp(mpmath.mpc(mpmath.mpf(5) / 4, mpmath.mpf(1) / 3))
        digits = int(p * 0.301)
        eps = Fraction(1, 10 ** (digits - 5))
        assert abs(e.re.mid_fraction() - _mp_fraction(mv.real, digits)) <= e.re.rad_fraction() + eps
        assert abs(e.im.mid_fraction() - _mp_fraction(mv.imag, digits)) <= e.im.rad_fraction() + eps
        l = bl.c_log(z, p)
        mv = mpmath.log(mpmath.mpc(mpmath.mpf(5) / 4, mpmath.mpf(1) / 3))
        assert abs(l.re.mid_fraction() - _mp_fraction(mv.real, digits)) <= l.re.rad_fraction() + eps
        assert abs(l.im.mid_fraction() - _mp_fraction(mv.imag, digits)) <= l.im.rad_fraction() + eps

    def test_domain_errors(self):
        with pytest.raises(BallDomainError):
            bl.log(Ball.from_int(-2), 64)
        with pytest.raises(BallDomainError):
            bl.sqrt(Ball.from_int(-1), 64)
        with pytest.raises(BallDomainError):
            bl.exp(Ball.from_man_exp(1, 60), 64)


class TestDecimal:
    def test_exact_display(self):
        assert bl.to_decimal(Ball.from_int(24)) == "24"
        assert bl.to_decimal(bl.parse_decimal("29.53125", 64)) == "29.53125"
        assert bl.to_decimal(Ball.from_int(-3)) == "-3"
        assert bl.to_decimal(Ball.zero()) == "0"

    def test_inexact_display_contains(self):
        v = bl.div(Ball.from_int(1), Ball.from_int(7), 64)
        s = bl.to_decimal(v)
        assert "±" in s
        mid_s, rad_s = s.split("±")
        mid = Fraction(bl._decimal_fraction(mid_s.strip()))
        rad = Fraction(bl._decimal_fraction(rad_s.strip()))
        assert abs(mid - Fraction(1, 7)) <= rad

    def test_parse_forms(self):
        assert bl.parse_decimal("3/4", 64).contains(Fraction(3, 4))
        assert bl.parse_decimal("-2.5e3", 64).contains(-2500)
        b = bl.parse_decimal("1.5 ± 1e-10", 64)
        assert b.contains(Fraction(3, 2)) and b.rad_fraction() >= Fraction(1, 10 ** 10)

    def test_roundtrip_through_string(self):
        rng = random.Random(9)
        for _ in range(40):
            q = random_fraction(rng, 999)
            b = Ball.from_fraction(q, 96)
            s = bl.to_decimal(b)
            again = bl.parse_decimal(s, 96)
            assert again.contains(q)


class TestAccuracy:
    def test_rel_accuracy(self):
        assert Ball.from_int(5).rel_accuracy_bits() > 10 ** 6
        v = bl.div(Ball.from_int(1), Ball.from_int(3), 200)
        assert 190 <= v.rel_accuracy_bits() <= 210
