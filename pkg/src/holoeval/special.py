"""Applications of the engines: rising factorials, Bernoulli numbers, and
two independent high-precision gamma-function algorithms (asymptotic series
with argument reduction, and a confluent hypergeometric partial sum).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from . import balls as bl
from .balls import Ball, BallDomainError, ComplexBall, _Z
from .poly import BiPoly
from .recmat import RecMatrix, rising_factorial_matrix
from .engines import (OpCounter, PowerTable, default_algorithm, eval_dispatch,
                      make_plan)

_BETA = math.log(2) / (2 * math.pi)  # ~0.1103, argument-reduction slope


# ---------------------------------------------------------------------------
# rising factorials
# ---------------------------------------------------------------------------

def rising_poly_coeffs(m: int):
    """Coefficients of x(x+1)...(x+m-1), ascending; the entries are the
    unsigned Stirling numbers of the first kind."""
    coeffs = [_Z(1)]
    for i in range(m):
        nxt = [coeffs[0] * i if coeffs else _Z(0)]
        for j in range(1, len(coeffs)):
            nxt.append(coeffs[j - 1] + coeffs[j] * i)
        nxt.append(coeffs[-1])
        coeffs = nxt
    return coeffs


@dataclass(frozen=True)
class RisingDeltaCoeffs:
    """Integer table C(v, i) of the difference of giant steps
    (x+k+m)(x+k+m+1)...(x+k+2m-1) - (x+k)(x+k+1)...(x+k+m-1)
    = sum_v x^v sum_i k^i C(v, i)."""

    m: int
    rows: tuple  # rows[v][i], 0 <= v < m, 0 <= i < m - v

    def coeff(self, v: int, i: int) -> int:
        return self.rows[v][i]

    def recurrence_holds(self) -> bool:
        """(v+1) C(v+1, i) == (i+1) C(v, i+1) wherever both sides exist."""
        for v in range(self.m - 1):
            for i in range(len(self.rows[v + 1])):
                if (v + 1) * self.rows[v + 1][i] != (i + 1) * self.rows[v][i + 1]:
                    return False
        return True

    def as_bipoly(self) -> BiPoly:
        grid = [list(row) for row in self.rows]
        return BiPoly(grid)


def rising_delta_coeffs(m: int) -> RisingDeltaCoeffs:
    """The table C_m(v, i): the v = 0 row from the closed form with unsigned
    Stirling numbers, the remaining rows propagated by the index/degree
    exchange recurrence."""
    if m < 1:
        raise ValueError("m must be >= 1")
    stirling = rising_poly_coeffs(m)  # stirling[j] multiplies x^j
    row0 = []
    for i in range(m):
        acc = _Z(0)
        for j in range(i + 1, m + 1):
            acc += _Z(m) ** (j - i) * stirling[j] * math.comb(j, i)
        row0.append(acc)
    rows = [row0]
    for v in range(m - 1):
        prev = rows[-1]
        nxt = []
        for i in range(m - v - 1):
            num = (i + 1) * prev[i + 1]
            q, r = divmod(num, v + 1)
            if r:
                raise ArithmeticError("inexact division in coefficient recurrence")
            nxt.append(q)
        rows.append(nxt)
    return RisingDeltaCoeffs(m, tuple(tuple(int(c) for c in r) for r in rows))


def _rising_delta_core(z, n: int, m: int, wp: int, counter: OpCounter):
    """Specialized rectangular-splitting (difference variant) loop for the
    rising factorial, driven by the closed-form coefficient table."""
    w = n // m
    table = PowerTable(z, max(m, 1), wp, counter)
    if w == 0:
        acc = table.eval_int_poly([0, 1], wp, counter)
        for i in range(1, n):
            f = table.eval_int_poly([i, 1], wp, counter)
            acc = bl.n_mul(acc, f, wp)
            counter.nonscalar += 1
        return acc
    ctab = rising_delta_coeffs(m)
    scoeffs = rising_poly_coeffs(m)
    S = table.eval_int_poly(scoeffs, wp, counter)
    V = S
    for i in range(w - 1):
        k0 = m * i
        xcoeffs = []
        for v in range(m):
            row = ctab.rows[v]
            acc = row[-1]
            for c in reversed(row[:-1]):
                acc = acc * k0 + c
            xcoeffs.append(acc)
        counter.coeff += (m * (m + 1)) // 2
        delta = table.eval_int_poly(xcoeffs, wp, counter)
        S = bl.n_add(S, delta, wp)
        V = bl.n_mul(S, V, wp)
        counter.nonscalar += 1
    for i in range(m * w, n):
        f = table.eval_int_poly([i, 1], wp, counter)
        V = bl.n_mul(V, f, wp)
        counter.nonscalar += 1
    return V


def rising_factorial_report(z, n: int, prec: int, algorithm: str | None = None,
                            m: int | None = None):
    """z^(rising n) plus the plan and instrumentation used."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if algorithm is None:
        algorithm = default_algorithm(n)
    if algorithm == "rect-delta":
        plan = make_plan("rect-delta", n, prec, m=m)
        counter = OpCounter()
        if n == 0:
            val = bl.n_one(z)
        else:
            val = _rising_delta_core(z, n, plan.m, plan.work_prec, counter)
        val = bl.n_reduce(val, prec)
        acc = min(val.rel_accuracy_bits(), prec)
        return val, plan, counter, acc
    rep = eval_dispatch(rising_factorial_matrix(), z, n, prec,
                        algorithm=algorithm, m=m)
    return rep.matrix[0][0], rep.plan, rep.counter, rep.accuracy_bits


def rising_factorial(z, n: int, prec: int, algorithm: str | None = None,
                     m: int | None = None):
    """Ball containing z (z+1) ... (z+n-1); the empty product is exactly 1."""
    return rising_factorial_report(z, n, prec, algorithm, m)[0]


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact rationals, tangent-number recurrence)
# ---------------------------------------------------------------------------

def _tangent_numbers(nmax: int):
    """Tangent numbers T_1..T_nmax by the in-place triangle recurrence."""
    T = [_Z(0)] * (nmax + 1)
    if nmax >= 1:
        T[1] = _Z(1)
    for k in range(2, nmax + 1):
        T[k] = (k - 1) * T[k - 1]
    for k in range(2, nmax + 1):
        for j in range(k, nmax + 1):
            T[j] = (j - k) * T[j - 1] + (j - k + 2) * T[j]
    return T[1:]


def _primes_upto(n: int):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = b"\x00" * len(sieve[p * p::p])
    return [i for i, v in enumerate(sieve) if v]


def vsc_denominator(two_k: int) -> int:
    """von Staudt-Clausen: product of primes p with (p-1) | 2k."""
    d = 1
    for p in _primes_upto(two_k + 1):
        if two_k % (p - 1) == 0:
            d *= p
    return d


class BernoulliCache:
    """Exact even-index Bernoulli numbers B_0, B_2, ..., grown on demand.

    Extension never invalidates previously returned values; concurrent
    readers are safe, extension takes a lock."""

    def __init__(self):
        self._even = [Fraction(1)]  # B_0
        self._lock = threading.Lock()

    def max_index(self) -> int:
        return 2 * (len(self._even) - 1)

    def ensure(self, upto_2n: int) -> None:
        need = upto_2n // 2
        if need < len(self._even):
            return
        with self._lock:
            if need < len(self._even):
                return
            tang = _tangent_numbers(need)
            new = [Fraction(1)]
            for n in range(1, need + 1):
                t = tang[n - 1]
                den_full = (_Z(4) ** n) * ((_Z(4) ** n) - 1)
                d = vsc_denominator(2 * n)
                num, rem = divmod(2 * n * t * d, den_full)
                if rem:
                    raise ArithmeticError("tangent-number identity violated")
                if n % 2 == 0:
                    num = -num
                new.append(Fraction(int(num), d))
            self._even = new

    def get(self, two_k: int) -> Fraction:
        if two_k % 2 == 1:
            raise ValueError("only even indices are cached (odd ones vanish)")
        self.ensure(two_k)
        return self._even[two_k // 2]

    def save(self, path) -> None:
        with open(path, "w") as fh:
            for k, b in enumerate(self._even):
                fh.write("%d %d %d\n" % (2 * k, b.numerator, b.denominator))

    def load(self, path) -> None:
        entries = {}
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                idx_s, num_s, den_s = line.split()
                entries[int(idx_s)] = Fraction(int(num_s), int(den_s))
        with self._lock:
            top = max(entries) if entries else -1
            if top < self.max_index():
                return
            new = []
            for k in range(0, top + 2, 2):
                if k not in entries:
                    return  # refuse holes; keep current cache
                new.append(entries[k])
            self._even = new


_shared_bernoulli = BernoulliCache()


def bernoulli_even(upto_2n: int, cache: BernoulliCache | None = None) -> BernoulliCache:
    """Ensure B_0..B_{2n} are available; returns the cache."""
    cache = cache if cache is not None else _shared_bernoulli
    cache.ensure(upto_2n)
    return cache


# ---------------------------------------------------------------------------
# Stirling-series gamma
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StirlingParams:
    """Shift n and series length N for a target of p bits; beta is the
    slope relating precision to the required real part."""

    p: int
    n: int
    nterms: int
    beta: float = _BETA


# series-term cap: beyond this many exact Bernoulli numbers the O(N^2)
# generation dominates, so the shift n is enlarged instead
def _bernoulli_cap(p: int) -> int:
    return 1024 + p // 22


def _as_complex(x) -> ComplexBall:
    return x if isinstance(x, ComplexBall) else ComplexBall.from_ball(x)


def _re_mid_float(x) -> float:
    return (x.re if isinstance(x, ComplexBall) else x).mid_float()


def _contains_nonpositive_integer(x) -> bool:
    if isinstance(x, ComplexBall):
        return x.im.contains_zero() and _contains_nonpositive_integer(x.re)
    lo = x.mid_fraction() - x.rad_fraction()
    hi = x.mid_fraction() + x.rad_fraction()
    k = min(math.floor(hi), 0)
    return lo <= k <= hi


def _sec_half_arg_factor(w) -> float:
    """Float upper estimate of sec^2(arg(w)/2) = 2|w| / (|w| + Re w)."""
    if not isinstance(w, ComplexBall):
        return 1.0
    re = w.re.mid_float()
    im = w.im.mid_float()
    mod = math.hypot(re, im)
    if mod + re <= 0:
        return math.inf
    return 2 * mod / (mod + re) * (1 + 1e-9)


def _stirling_nterms_float(t: float, secfac: float, target_bits: int,
                           nmax: int) -> int | None:
    """Smallest N with the float model of the remainder below 2^-target."""
    log2 = math.log(2)
    for nn in range(1, nmax + 1):
        val = (math.log(2 * 1.645) + math.lgamma(2 * nn + 1)
               - 2 * nn * math.log(2 * math.pi) - (2 * nn - 1) * math.log(t)
               - math.log(2 * nn * (2 * nn - 1)) + nn * math.log(secfac))
        if val / log2 < -(target_bits + 4):
            return nn
    return None


def _stirling_remainder_ok(w, nterms: int, target_bits: int) -> bool:
    """Rigorous check |R_N(w)| < 2^-target via 64-bit ball bounds with
    |B_2N| <= 2 zeta(2) (2N)! / (2pi)^(2N)."""
    wp = 64
    two_n = 2 * nterms
    if isinstance(w, ComplexBall):
        mod2 = bl.add(bl.mul(w.re, w.re, wp), bl.mul(w.im, w.im, wp), wp)
        mod = bl.sqrt(mod2, wp)
        if not mod.is_positive():
            return False
        den = bl.add(mod, w.re, wp)
        if not den.is_positive():
            return False
        sec2 = bl.div(bl.mul_int(mod, 2, wp), den, wp)
        secn = bl.pow_int(sec2, nterms, wp)
        wabs = mod
    else:
        if not w.is_positive():
            return False
        secn = Ball.one()
        wabs = w
    fac = Ball.from_int(math.factorial(two_n))
    zeta2_up = Ball.from_fraction(Fraction(16449342, 10 ** 7), wp)
    two_pi_lo = Ball.from_fraction(Fraction(62831853, 10 ** 7), wp)
    bound = bl.mul(bl.mul_int(zeta2_up, 2, wp), fac, wp)
    bound = bl.div(bound, bl.pow_int(two_pi_lo, two_n, wp), wp)
    bound = bl.div_int(bound, two_n * (two_n - 1), wp)
    bound = bl.div(bound, bl.pow_int(wabs, two_n - 1, wp), wp)
    bound = bl.mul(bound, secn, wp)
    um, ue = bound.abs_upper()
    if um == 0:
        return True
    return ue + um.bit_length() < -target_bits


def stirling_params(x, p: int, n_override: int | None = None) -> StirlingParams:
    """Choose the argument shift n and the series length N so that the
    remainder is rigorously below 2^-p.

    The default shift aims at Re(x) + n ~ 2 beta p; at very high precision
    the shift is enlarged further to keep the number of exact Bernoulli
    numbers manageable (their generation costs O(N^2) integer operations).
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if _contains_nonpositive_integer(x):
        raise BallDomainError("gamma argument contains a pole")
    re_mid = _re_mid_float(x)
    secfac = _sec_half_arg_factor(x)  # arg shrinks as n grows; this is safe
    cap = _bernoulli_cap(p)
    nmax = max(16 * cap, p)
    if n_override is not None:
        n = n_override
    else:
        t = max(2 * _BETA * p, re_mid, 4.0)
        while True:
            nn = _stirling_nterms_float(t, secfac, p, nmax)
            if nn is not None and nn <= cap:
                break
            t *= 1.25
        n = max(0, math.ceil(t - re_mid))
    w_approx = max(re_mid + n, 4.0)
    nterms = _stirling_nterms_float(w_approx, secfac, p, nmax)
    if nterms is None:
        raise BallDomainError("cannot reach the target precision: "
                              "shift too small for the asymptotic series")
    wball = (bl.c_add_int(x, n, 64) if isinstance(x, ComplexBall)
             else bl.add_int(x, n, 64))
    while not _stirling_remainder_ok(wball, nterms, p):
        if nterms >= 2 * nmax:
            raise BallDomainError("remainder bound does not reach the target "
                                  "(argument too wide or too close to a pole)")
        nterms += max(1, nterms // 32)
    return StirlingParams(p=p, n=n, nterms=nterms)


def _log_2pi(wp: int) -> Ball:
    return bl.add(bl.log2_const(wp), bl.log(bl.pi(wp), wp), wp)


def log_gamma_stirling(w, nterms: int, wp: int,
                       cache: BernoulliCache | None = None):
    """log Gamma(w) for Re(w) large, by the asymptotic series with N terms
    and a rigorous remainder inflation."""
    cache = bernoulli_even(2 * (nterms - 1) if nterms > 1 else 0, cache)
    cplx = isinstance(w, ComplexBall)
    one_half = Ball.from_fraction(Fraction(1, 2), wp)
    logw = bl.n_log(w, wp)
    wsq_inv = bl.n_div(bl.n_one(w), bl.n_mul(w, w, wp), wp)
    acc = None
    for k in range(nterms - 1, 0, -1):
        ck = cache.get(2 * k) / (2 * k * (2 * k - 1))
        ckb = Ball.from_fraction(ck, wp)
        if acc is None:
            acc = ComplexBall.from_ball(ckb) if cplx else ckb
        else:
            acc = bl.n_mul(acc, wsq_inv, wp)
            acc = (bl.c_add(acc, ComplexBall.from_ball(ckb), wp) if cplx
                   else bl.add(acc, ckb, wp))
    if acc is None:
        series = bl.n_zero(w)
    else:
        series = bl.n_div(acc, w, wp)
    half = (ComplexBall.from_ball(one_half) if cplx else one_half)
    out = bl.n_mul(bl.n_sub(w, half, wp), logw, wp)
    out = bl.n_sub(out, w, wp)
    l2pi_half = bl.mul_2exp(_log_2pi(wp), -1)
    out = bl.n_add(out, (ComplexBall.from_ball(l2pi_half) if cplx else l2pi_half), wp)
    out = bl.n_add(out, series, wp)
    # inflate by the rigorous remainder bound (checked by the caller to be
    # below the target; recomputed here so the enclosure never depends on it)
    rad = _stirling_remainder_rad(w, nterms)
    return _inflate(out, rad)


def _stirling_remainder_rad(w, nterms: int):
    wp = 64
    two_n = 2 * nterms
    if isinstance(w, ComplexBall):
        mod2 = bl.add(bl.mul(w.re, w.re, wp), bl.mul(w.im, w.im, wp), wp)
        mod = bl.sqrt(mod2, wp)
        sec2 = bl.div(bl.mul_int(mod, 2, wp), bl.add(mod, w.re, wp), wp)
        secn = bl.pow_int(sec2, nterms, wp)
        wabs = mod
    else:
        secn = Ball.one()
        wabs = w
    fac = Ball.from_int(math.factorial(two_n))
    bound = bl.mul(bl.mul_int(Ball.from_fraction(Fraction(16449342, 10 ** 7), wp), 2, wp), fac, wp)
    bound = bl.div(bound, bl.pow_int(Ball.from_fraction(Fraction(62831853, 10 ** 7), wp), two_n, wp), wp)
    bound = bl.div_int(bound, two_n * (two_n - 1), wp)
    bound = bl.div(bound, bl.pow_int(wabs, two_n - 1, wp), wp)
    bound = bl.mul(bound, secn, wp)
    return bound.abs_upper()


def _inflate(v, rad):
    rm, re = rad
    if rm == 0:
        return v
    if isinstance(v, ComplexBall):
        return ComplexBall(_inflate(v.re, rad), _inflate(v.im, rad))
    nrm, nre = bl._rad_add(v.rm, v.re, rm, re)
    return Ball(v.man, v.exp, nrm, nre)


def gamma_stirling(x, p: int, n_override: int | None = None,
                   cache: BernoulliCache | None = None):
    """Gamma(x) via the asymptotic series for Gamma(x + n) divided by the
    rising factorial x (x+1) ... (x+n-1)."""
    params = stirling_params(x, p + 16, n_override=n_override)
    t_est = max(_re_mid_float(x) + params.n, 4.0)
    wp = p + 48 + int(t_est * math.log(t_est) + 2).bit_length()
    w = (bl.c_add_int(x, params.n, wp) if isinstance(x, ComplexBall)
         else bl.add_int(x, params.n, wp))
    lg = log_gamma_stirling(w, params.nterms, wp, cache)
    gw = bl.n_exp(lg, wp)
    if params.n:
        rf = rising_factorial(x, params.n, wp)
        out = bl.n_div(gw, rf, wp)
    else:
        out = gw
    return bl.n_reduce(out, p)


# ---------------------------------------------------------------------------
# gamma via the confluent hypergeometric partial sum
# ---------------------------------------------------------------------------

def hyp1f1_gamma_matrix(nbig: int) -> RecMatrix:
    """Order-2 matrix advancing (s_k, t_{k+1}): upper-left entries equal the
    cleared denominator 1+k+z, so the denominator product is read off the
    numerator product instead of being evaluated separately."""
    e = BiPoly([[1, 1], [1]])  # 1 + k + x
    return RecMatrix([[e, e], [BiPoly.zero(), BiPoly.const(nbig)]])


def _gamma_1f1_params(p: int):
    p2 = p + 2 * max(0, math.ceil(math.log2(p + 2))) + 24
    nbig = math.ceil(p2 * math.log(2)) + 1
    nsum = max(2 * nbig + 8, math.ceil(math.e * math.log(2) * p2))
    return nbig, nsum


def gamma_1f1(x, p: int, algorithm: str | None = None):
    """Gamma(x) via the truncated series for the lower incomplete gamma
    , evaluated as an order-2 parametric matrix product."""
    if p < 2:
        raise ValueError("p must be >= 2")
    if _contains_nonpositive_integer(x):
        raise BallDomainError("gamma argument contains a pole")
    cplx = isinstance(x, ComplexBall)
    re_mid = _re_mid_float(x)
    shift = math.floor(re_mid) - 1
    nbig, nsum = _gamma_1f1_params(p)
    wp = p + 64 + max(0, shift).bit_length() + nsum.bit_length()
    z = (bl.c_add_int(x, -shift, wp) if cplx else bl.add_int(x, -shift, wp))
    zre = z.re if cplx else z
    if not zre.is_positive():
        raise BallDomainError("argument too wide to shift into [1, 2]")
    M = hyp1f1_gamma_matrix(nbig)
    rep = eval_dispatch(M, z, nsum + 1, wp, algorithm=algorithm)
    pmat = rep.matrix
    q00 = pmat[0][0]
    zq = bl.n_mul(z, q00, wp)
    s_n = bl.n_div(pmat[0][1], zq, wp)
    t_next = bl.n_div(pmat[1][1], zq, wp)
    # tail of the series: |sum_{k>n} t_k| <= 2 |t_{n+1}| once the term
    # ratio N/(z+k+1) has dropped below 1/2 (guaranteed by nsum >= 2N+8)
    tail = _tail_ball(t_next, z)
    s_tot = bl.n_add(s_n, tail, wp)
    # gamma(z, N) = N^z e^-N * s
    logn = bl.log(Ball.from_int(nbig), wp)
    zlogn = (bl.c_mul(z, ComplexBall.from_ball(logn), wp) if cplx
             else bl.mul(z, logn, wp))
    arg = (bl.c_add_int(zlogn, -nbig, wp) if cplx else bl.add_int(zlogn, -nbig, wp))
    pref = bl.n_exp(arg, wp)
    gz = bl.n_mul(pref, s_tot, wp)
    # upper incomplete gamma gap: |Gamma(z) - gamma(z,N)| <= (N+1) e^-N
    gap = bl.mul_int(bl.exp(Ball.from_int(-nbig), 64), nbig + 1, 64)
    gz = _inflate(gz, gap.abs_upper())
    # undo the integer shift
    if shift > 0:
        rf = rising_factorial(z, shift, wp)
        out = bl.n_mul(gz, rf, wp)
    elif shift < 0:
        rf = rising_factorial(x, -shift, wp)
        out = bl.n_div(gz, rf, wp)
    else:
        out = gz
    return bl.n_reduce(out, p)


def _tail_ball(t_next, like):
    """A ball covering [0, 2 t] (resp. the complex disc of radius 2|t|)."""
    if isinstance(like, ComplexBall):
        um, ue = t_next.abs_upper()
        um, ue = bl._rnorm(2 * um, ue)
        z = Ball(bl._ZERO, 0, um, ue)
        return ComplexBall(z, Ball(bl._ZERO, 0, um, ue))
    um, ue = t_next.abs_upper()
    return Ball(t_next.man, t_next.exp, *bl._rad_add(t_next.rm, t_next.re, um, ue))
