"""The evaluation engines: interchangeable algorithms for computing
prod_{i=0}^{n-1} M(z, i) over ball arithmetic, plus tuning heuristics.

Algorithms
----------
naive           one factor at a time, O(n) full-precision multiplications
binsplit-exact  exact product over Z[x], one polynomial evaluation at z
multipoint      giant-step polynomial built over ball coefficients,
                evaluated at 0, m, 2m, ... by a remainder tree
rect-ps         exact subproducts of length ~n~ evaluated entrywise by
                Paterson-Stockmeyer baby-step giant-step
rect-split      giant-step products kept at degree O(m) in x, evaluated
                through a power table with scalar operations only
rect-delta      differences of successive giant-step products, expanded
                once as a bivariate polynomial

Cost classes are counted per evaluation: "nonscalar" multiplications are
ball x ball products at working precision; "scalar" operations multiply a
ball by an exact integer coefficient; "coeff" operations stay in Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import balls as bl
from .balls import Ball, ComplexBall
from .poly import UniPoly, product_tree, taylor_shift_basecase, taylor_shift_convolution
from .recmat import (DenominatorZeroError, RecMatrix, eval_factor,
                     product_binsplit_exact)

ALGORITHMS = ("naive", "binsplit-exact", "multipoint", "rect-ps",
              "rect-split", "rect-delta")

# default selection thresholds (overridable): naive below the first bound,
# rect-delta up to the second, rect-split beyond
DEFAULT_THRESHOLDS = (32, 1000)


class SymmetryError(ValueError):
    """The matrix does not satisfy M(x, k+m) = M(x+m, k)."""


@dataclass
class OpCounter:
    """Instrumentation for one evaluation."""

    nonscalar: int = 0
    scalar: int = 0
    coeff: int = 0
    peak_coeffs: int = 0

    def note_live_coeffs(self, count: int):
        if count > self.peak_coeffs:
            self.peak_coeffs = count


@dataclass(frozen=True)
class EvalPlan:
    """Algorithm selection plus tuning parameters for one evaluation."""

    algorithm: str
    m: int
    prec: int
    guard: int
    subn: int | None = None  # rect-ps subproduct length
    taylor: str = "auto"     # giant-step update: "auto" | "on" | "off"

    @property
    def work_prec(self) -> int:
        return self.prec + self.guard


def guard_bits(n: int) -> int:
    return 10 + 2 * math.ceil(math.log2(n + 2))


def choose_m(algorithm: str, n: int, p: int):
    """Step-length heuristics; returns (m, subn)."""
    if n < 1:
        return 1, None
    if algorithm == "multipoint":
        m = int(n ** 0.5)
    elif algorithm == "rect-ps":
        subn = int(min(2 * n ** 0.5, 10 * p ** 0.25))
        subn = max(1, min(subn, n))
        m = max(1, int(subn ** 0.5))
        return m, subn
    elif algorithm in ("rect-split", "rect-delta"):
        m = int(min(0.2 * p ** 0.4, n ** 0.5))
    else:
        m = 1
    return max(1, min(m, n)), None


def default_algorithm(n: int, thresholds=DEFAULT_THRESHOLDS) -> str:
    lo, hi = thresholds
    if n < lo:
        return "naive"
    if n < hi:
        return "rect-delta"
    return "rect-split"


def make_plan(algorithm: str, n: int, p: int, m: int | None = None,
              subn: int | None = None, taylor: str = "auto") -> EvalPlan:
    if algorithm not in ALGORITHMS:
        raise ValueError("unknown algorithm %r (choose from %s)"
                         % (algorithm, ", ".join(ALGORITHMS)))
    auto_m, auto_subn = choose_m(algorithm, n, p)
    if m is None:
        m = auto_m
    m = max(1, min(m, max(n, 1)))
    if algorithm == "rect-ps":
        if subn is None:
            subn = auto_subn if auto_subn is not None else m
        subn = max(m, min(subn, max(n, 1)))
    else:
        subn = None
    return EvalPlan(algorithm, m, p, guard_bits(n), subn, taylor)


# ---------------------------------------------------------------------------
# power table with a fused scalar dot product
# ---------------------------------------------------------------------------

class PowerTable:
    """Powers z^0 .. z^D of the evaluation point.

    Besides the ball powers, the table keeps fixed-point mantissas on a
    common exponent so that sum c_j z^j collapses into one integer dot
    product (all scalar operations).  Containment is preserved: the fixed
    point forms are exact rescalings of the ball midpoints and the entry
    radii are carried separately."""

    def __init__(self, z, max_exp: int, p: int, counter: OpCounter | None = None):
        self.z = z
        self.p = p
        self.D = max_exp
        self.is_complex = isinstance(z, ComplexBall)
        powers = [bl.n_one(z)]
        if max_exp >= 1:
            powers.append(z)
        for j in range(2, max_exp + 1):
            powers.append(bl.n_mul(powers[j // 2], powers[(j + 1) // 2], p))
            if counter is not None:
                counter.nonscalar += 1
        self.powers = powers
        if self.is_complex:
            self._fix_re, self._e_re, self._rad_re = _fixed_point([b.re for b in powers], p)
            self._fix_im, self._e_im, self._rad_im = _fixed_point([b.im for b in powers], p)
        else:
            self._fix, self._e, self._rad = _fixed_point(powers, p)

    def power(self, j: int):
        return self.powers[j]

    def eval_int_poly(self, coeffs, p: int | None = None,
                      counter: OpCounter | None = None):
        """sum_j coeffs[j] * z^j using scalar operations only."""
        if p is None:
            p = self.p
        if self.is_complex:
            if self._fix_re is None or self._fix_im is None:
                out = self._slow_dot(coeffs, p)
            else:
                re = _fused_dot(coeffs, self._fix_re, self._e_re, self._rad_re, p)
                im = _fused_dot(coeffs, self._fix_im, self._e_im, self._rad_im, p)
                out = ComplexBall(re, im)
        elif self._fix is None:
            out = self._slow_dot(coeffs, p)
        else:
            out = _fused_dot(coeffs, self._fix, self._e, self._rad, p)
        if counter is not None:
            nz = 0
            for c in coeffs:
                if c:
                    nz += 1
            counter.scalar += nz
        return out

    def _slow_dot(self, coeffs, p):
        acc = None
        for j, c in enumerate(coeffs):
            if not c:
                continue
            term = bl.n_mul_int(self.powers[j], c, p)
            acc = term if acc is None else bl.n_add(acc, term, p)
        return bl.n_zero(self.z) if acc is None else acc


def _fixed_point(powers, p):
    """Align ball midpoints on a common exponent; None when the magnitude
    spread makes fixed point wasteful (caller falls back to per-op)."""
    exps = []
    for b in powers:
        if b.man:
            exps.append(b.exp)
    if not exps:
        return [bl._ZERO] * len(powers), 0, [(b.rm, b.re) for b in powers]
    e = min(exps)
    spread = max(b.exp + b.man.bit_length() for b in powers if b.man) - e
    if spread > 8 * p + 1024:
        return None, 0, [(b.rm, b.re) for b in powers]
    fix = [b.man << (b.exp - e) if b.man else bl._ZERO for b in powers]
    return fix, e, [(b.rm, b.re) for b in powers]


def _fused_dot(coeffs, fix, e, rads, p) -> Ball:
    acc = bl._ZERO
    rm = 0
    re = 0
    for j, c in enumerate(coeffs):
        if not c:
            continue
        acc += c * fix[j]
        rj = rads[j]
        if rj[0]:
            t = bl._rad_mul(*bl._u_from_abs(c, 0), rj[0], rj[1])
            rm, re = bl._rad_add(rm, re, t[0], t[1])
    return bl._make(acc, e, rm, re, p)


# ---------------------------------------------------------------------------
# ball matrices
# ---------------------------------------------------------------------------

def ball_identity(r: int, like):
    one = bl.n_one(like)
    zero = bl.n_zero(like)
    return [[one if i == j else zero for j in range(r)] for i in range(r)]


def ball_mat_mul(A, B, p, counter: OpCounter | None = None):
    r = len(A)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = bl.n_mul(A[i][0], B[0][j], p)
            for t in range(1, r):
                acc = bl.n_add(acc, bl.n_mul(A[i][t], B[t][j], p), p)
            row.append(acc)
        out.append(row)
    if counter is not None:
        counter.nonscalar += r * r * r
    return out


def _accumulate(V, S, p, counter):
    """V <- S x V with an identity-skipping sentinel."""
    if V is None:
        return S
    return ball_mat_mul(S, V, p, counter)


# ---------------------------------------------------------------------------
# denominator products
# ---------------------------------------------------------------------------

def _den_product(M: RecMatrix, z, n: int, plan: EvalPlan, counter: OpCounter):
    """Product of the denominator values q(z, i), i < n.

    Pure-k denominators are multiplied exactly over Z (coefficient work
    only); x-dependent denominators are evaluated as a 1x1 parametric
    product."""
    if M.has_trivial_den() or n == 0:
        return bl.n_one(z)
    den = M.den
    if den.deg_x() <= 0:
        kpoly = UniPoly(den.grid[0] if den.grid else [])
        vals = []
        for i in range(n):
            v = kpoly.eval_at(i)
            if v == 0:
                raise DenominatorZeroError(
                    "denominator vanishes at index %d" % i, index=i)
            vals.append(v)
        counter.coeff += n
        prod = _int_binsplit(vals, 0, len(vals))
        return bl.n_from_int(prod, z)
    sub = RecMatrix([[den]])
    # the 1x1 denominator product must be provably nonzero, so it always
    # goes through the stable scalar-only engine: the multipoint remainder
    # tree can lose O(n) bits, and the full exact product evaluates a
    # degree-n polynomial whose coefficients dwarf a tiny value
    m_den = choose_m("rect-split", n, plan.prec)[0]
    # sign-changing denominators can cost O(m) extra bits in expanded form;
    # escalate the guard until the product separates from zero
    boost = 64 + m_den * (den.deg_k() * max(n, 2).bit_length() + 8)
    for attempt in range(3):
        eff = EvalPlan("rect-split", m_den, plan.prec,
                       plan.guard + attempt * boost, None, plan.taylor)
        mat = _rect_split_core(sub, z, n, eff, counter)
        val = mat[0][0]
        if not val.contains_zero():
            return val
    idx = _find_zero_index(sub, z, n, plan.work_prec)
    raise DenominatorZeroError(
        "denominator product contains zero (first suspect index %s)" % idx,
        index=idx)


def _int_binsplit(vals, a, b):
    if b - a == 1:
        return vals[a]
    m = (a + b) // 2
    return _int_binsplit(vals, a, m) * _int_binsplit(vals, m, b)


def _find_zero_index(M: RecMatrix, z, n: int, p: int):
    dx = M.deg_x()
    table = PowerTable(z, dx, min(p, 128))
    for i in range(n):
        grid, _ = eval_factor(M, i)
        v = table.eval_int_poly(grid[0][0].coeffs, min(p, 128))
        if v.contains_zero():
            return i
    return None


# ---------------------------------------------------------------------------
# the engines (numerator products)
# ---------------------------------------------------------------------------

def _naive_core(M: RecMatrix, z, n: int, plan: EvalPlan, counter: OpCounter):
    p = plan.work_prec
    table = PowerTable(z, M.deg_x(), p, counter)
    V = None
    for i in range(n):
        grid, _ = eval_factor(M, i)
        counter.coeff += sum(len(e.coeffs) for row in grid for e in row)
        S = [[table.eval_int_poly(e.coeffs, p, counter) for e in row]
             for row in grid]
        V = _accumulate(V, S, p, counter)
    return V if V is not None else ball_identity(M.r, z)


def _naive_leftover(M, z, V, start, count, table, p, counter):
    for i in range(start, start + count):
        grid, _ = eval_factor(M, i)
        counter.coeff += sum(len(e.coeffs) for row in grid for e in row)
        S = [[table.eval_int_poly(e.coeffs, p, counter) for e in row]
             for row in grid]
        V = _accumulate(V, S, p, counter)
    return V


def _exact_factor_matrices(M: RecMatrix, start: int, count: int, counter):
    out = []
    for i in range(start, start + count):
        grid, _ = eval_factor(M, i)
        counter.coeff += sum(len(e.coeffs) for row in grid for e in row)
        out.append(grid)
    return out


def _binsplit_core(M: RecMatrix, z, n: int, plan: EvalPlan, counter: OpCounter):
    p = plan.work_prec
    if n == 0:
        return ball_identity(M.r, z)
    factors = _exact_factor_matrices(M, 0, n, counter)
    U = product_binsplit_exact(factors)
    counter.coeff += sum(len(e.coeffs) for row in U for e in row)
    deg = max(e.degree() for row in U for e in row)
    m = max(1, math.isqrt(max(deg, 0)) + 1)
    table = PowerTable(z, m, p, counter)
    return [[_ps_eval(e.coeffs, table, m, p, counter) for e in row] for row in U]


def _ps_eval(coeffs, table: PowerTable, m: int, p: int, counter: OpCounter):
    """Paterson-Stockmeyer: rows of length m via the table (scalar only),
    rows combined by Horner with z^m (one nonscalar product per row)."""
    if not coeffs:
        return bl.n_zero(table.z)
    rows = [coeffs[t:t + m] for t in range(0, len(coeffs), m)]
    zm = table.power(m)
    acc = table.eval_int_poly(rows[-1], p, counter)
    for row in reversed(rows[:-1]):
        acc = bl.n_mul(acc, zm, p)
        counter.nonscalar += 1
        acc = bl.n_add(acc, table.eval_int_poly(row, p, counter), p)
    return acc


def _multipoint_core(M: RecMatrix, z, n: int, plan: EvalPlan,
                     counter: OpCounter):
    p = plan.work_prec
    r = M.r
    if n == 0:
        return ball_identity(r, z)
    m = plan.m
    w = n // m
    xtable = PowerTable(z, M.deg_x(), p, counter)
    V = None
    if w > 0:
        base = _substitute_x(M, xtable, p, counter)
        # T_j = base(k + j), shifts over ball coefficients (scalar work)
        tmats = [base]
        for j in range(1, m):
            tmats.append(_bpmat_shift(base, j, p, counter))
        U = _bpmat_binsplit(tmats, 0, m, p, counter)
        points = [i * m for i in range(w)]
        values = _bpmat_multipoint(U, points, p, counter, z)
        for S in values:
            V = _accumulate(V, S, p, counter)
    V = _naive_leftover(M, z, V, m * w, n - m * w, xtable, p, counter)
    return V if V is not None else ball_identity(r, z)


def _substitute_x(M: RecMatrix, xtable: PowerTable, p, counter):
    """Entries of M as polynomials in k with ball coefficients."""
    out = []
    for row in M.entries:
        orow = []
        for e in row:
            nk = e.deg_k() + 1 if not e.is_zero() else 0
            coeffs = []
            for b in range(nk):
                col = [e.coeff(a, b) for a in range(e.deg_x() + 1)]
                coeffs.append(xtable.eval_int_poly(col, p, counter))
            orow.append(coeffs)
        out.append(orow)
    return out


def _bp_trim(cs):
    n = len(cs)
    while n and _ball_is_exact_zero(cs[n - 1]):
        n -= 1
    return cs[:n]


def _ball_is_exact_zero(b) -> bool:
    if isinstance(b, ComplexBall):
        return _ball_is_exact_zero(b.re) and _ball_is_exact_zero(b.im)
    return b.man == 0 and b.rm == 0


def _bp_shift(coeffs, c: int, p, counter: OpCounter):
    """Ball-coefficient Taylor shift by the integer c (Horner scheme)."""
    if not coeffs or not c:
        return list(coeffs)
    out = [coeffs[-1]]
    for a in reversed(coeffs[:-1]):
        nxt = [bl.n_add(a, bl.n_mul_int(out[0], c, p), p)]
        for j in range(1, len(out)):
            nxt.append(bl.n_add(out[j - 1], bl.n_mul_int(out[j], c, p), p))
        nxt.append(out[-1])
        counter.scalar += len(out)
        out = nxt
    return out


def _bpmat_shift(mat, c, p, counter):
    return [[_bp_shift(e, c, p, counter) for e in row] for row in mat]


def _bp_mul(a, b, p, counter: OpCounter):
    """Schoolbook product of ball-coefficient polynomials (nonscalar)."""
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            t = bl.n_mul(ai, bj, p)
            out[i + j] = t if out[i + j] is None else bl.n_add(out[i + j], t, p)
    counter.nonscalar += len(a) * len(b)
    return out


def _bp_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = bl.n_add(out[i], c, p)
    return out


def _bpmat_mul(A, B, p, counter):
    r = len(A)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = _bp_mul(A[i][0], B[0][j], p, counter)
            for t in range(1, r):
                acc = _bp_add(acc, _bp_mul(A[i][t], B[t][j], p, counter), p)
            row.append(acc)
        out.append(row)
    return out


def _bpmat_binsplit(mats, a, b, p, counter):
    if b - a == 1:
        return mats[a]
    mid = (a + b) // 2
    lo = _bpmat_binsplit(mats, a, mid, p, counter)
    hi = _bpmat_binsplit(mats, mid, b, p, counter)
    return _bpmat_mul(hi, lo, p, counter)


def _bp_rem_monic(coeffs, node: UniPoly, p, counter: OpCounter):
    """Remainder of a ball-coefficient polynomial by a monic integer
    polynomial (synthetic division, scalar operations only)."""
    d = node.degree()
    if len(coeffs) - 1 < d:
        return list(coeffs)
    rem = list(coeffs)
    nc = node.coeffs
    for i in range(len(rem) - 1 - d, -1, -1):
        lead = rem[i + d]
        if _ball_is_exact_zero(lead):
            continue
        for j in range(d):
            c = nc[j]
            if c:
                rem[i + j] = bl.n_sub(rem[i + j], bl.n_mul_int(lead, c, p), p)
        counter.scalar += d
    return rem[:d]


def _bpmat_multipoint(U, points, p, counter, like):
    """Values of a ball-poly matrix at integer points via a remainder tree
    over the exact integer product tree."""
    tree = product_tree(points)
    zero = bl.n_zero(like)
    out = []

    def descend(node, mat):
        if node.left is None:
            out.append([[e[0] if e else zero for e in row] for row in mat])
            return
        lmat = [[_bp_rem_monic(e, node.left.poly, p, counter) for e in row]
                for row in mat]
        rmat = [[_bp_rem_monic(e, node.right.poly, p, counter) for e in row]
                for row in mat]
        descend(node.left, lmat)
        descend(node.right, rmat)

    root = [[_bp_rem_monic(e, tree.poly, p, counter) for e in row] for row in U]
    descend(tree, root)
    return out


def _rect_ps_core(M: RecMatrix, z, n: int, plan: EvalPlan, counter: OpCounter):
    p = plan.work_prec
    if n == 0:
        return ball_identity(M.r, z)
    subn = plan.subn or n
    m = plan.m
    table = PowerTable(z, max(m, M.deg_x()), p, counter)
    V = None
    i = 0
    while i + subn <= n:
        factors = _exact_factor_matrices(M, i, subn, counter)
        U = product_binsplit_exact(factors)
        counter.note_live_coeffs(sum(len(e.coeffs) for row in U for e in row))
        S = [[_ps_eval(e.coeffs, table, m, p, counter) for e in row] for row in U]
        V = _accumulate(V, S, p, counter)
        i += subn
    V = _naive_leftover(M, z, V, i, n - i, table, p, counter)
    return V if V is not None else ball_identity(M.r, z)


def _rect_split_core(M: RecMatrix, z, n: int, plan: EvalPlan,
                     counter: OpCounter, force_taylor=False):
    p = plan.work_prec
    r = M.r
    if n == 0:
        return ball_identity(r, z)
    m = plan.m
    w = n // m
    dx = M.deg_x()
    table = PowerTable(z, max(m * dx, dx), p, counter)
    use_taylor = force_taylor or plan.taylor == "on"
    if plan.taylor == "auto" and not use_taylor and w >= 3:
        use_taylor = M.shift_symmetry_holds(m)
    V = None
    U = None
    for i in range(w):
        if U is None or not use_taylor:
            factors = _exact_factor_matrices(M, i * m, m, counter)
            U = product_binsplit_exact(factors)
        else:
            U = [[_taylor_shift_auto(e, m) for e in row] for row in U]
            counter.coeff += sum((e.degree() + 1) ** 2 for row in U for e in row)
        live = sum(len(e.coeffs) for row in U for e in row)
        counter.note_live_coeffs(live + table.D + 1)
        S = [[table.eval_int_poly(e.coeffs, p, counter) for e in row] for row in U]
        V = _accumulate(V, S, p, counter)
    V = _naive_leftover(M, z, V, m * w, n - m * w, table, p, counter)
    return V if V is not None else ball_identity(r, z)


def _taylor_shift_auto(e: UniPoly, c) -> UniPoly:
    if e.degree() >= 48:
        return taylor_shift_convolution(e, c)
    return taylor_shift_basecase(e, c)


def _rect_delta_core(M: RecMatrix, z, n: int, plan: EvalPlan,
                     counter: OpCounter):
    p = plan.work_prec
    r = M.r
    if n == 0:
        return ball_identity(r, z)
    m = plan.m
    w = n // m
    dx = M.deg_x()
    table = PowerTable(z, max(m * dx, dx), p, counter)
    if w == 0:
        V = _naive_leftover(M, z, None, 0, n, table, p, counter)
        return V if V is not None else ball_identity(r, z)
    delta = bivariate_delta(M, m, counter) if w > 1 else None
    # S = C_0 = prod_{i<m} M(z, i), built from the power table
    S = None
    for i in range(m):
        grid, _ = eval_factor(M, i)
        counter.coeff += sum(len(e.coeffs) for row in grid for e in row)
        fac = [[table.eval_int_poly(e.coeffs, p, counter) for e in row]
               for row in grid]
        S = _accumulate(S, fac, p, counter)
    V = S
    for i in range(w - 1):
        k0 = m * i
        dmat = []
        for row in delta:
            drow = []
            for e in row:
                xpoly = e.eval_k(k0)
                counter.coeff += sum(len(kr) for kr in e.grid)
                drow.append(table.eval_int_poly(xpoly.coeffs, p, counter))
            dmat.append(drow)
        S = [[bl.n_add(S[a][b], dmat[a][b], p) for b in range(r)]
             for a in range(r)]
        V = ball_mat_mul(S, V, p, counter)
    counter.note_live_coeffs(
        sum(sum(len(kr) for kr in e.grid) for row in delta for e in row)
        + table.D + 1 if delta is not None else table.D + 1)
    V = _naive_leftover(M, z, V, m * w, n - m * w, table, p, counter)
    return V


def bivariate_delta(M: RecMatrix, m: int, counter: OpCounter | None = None):
    """Delta_m = prod_{i<m} M(x, k+m+i) - prod_{i<m} M(x, k+i), expanded by
    exact bivariate binary splitting."""
    lo_factors = [[[e.shift_k(i) for e in row] for row in M.entries]
                  for i in range(m)]
    hi_factors = [[[e.shift_k(m + i) for e in row] for row in M.entries]
                  for i in range(m)]
    lo = product_binsplit_exact(lo_factors)
    hi = product_binsplit_exact(hi_factors)
    r = M.r
    if counter is not None:
        counter.coeff += sum(sum(len(kr) for kr in lo[i][j].grid)
                             + sum(len(kr) for kr in hi[i][j].grid)
                             for i in range(r) for j in range(r))
    return [[hi[i][j] - lo[i][j] for j in range(r)] for i in range(r)]


_CORES = {
    "naive": _naive_core,
    "binsplit-exact": _binsplit_core,
    "multipoint": _multipoint_core,
    "rect-ps": _rect_ps_core,
    "rect-split": _rect_split_core,
    "rect-delta": _rect_delta_core,
}


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

@dataclass
class EvalReport:
    """Result of one engine run: the transition-matrix product
    prod (M(z,i)/q(z,i)) plus instrumentation."""

    matrix: list
    numerator: list
    denominator: object
    plan: EvalPlan
    counter: OpCounter
    accuracy_bits: int


def _run(M: RecMatrix, z, n: int, plan: EvalPlan,
         counter: OpCounter | None = None) -> EvalReport:
    if n < 0:
        raise ValueError("n must be >= 0")
    counter = counter if counter is not None else OpCounter()
    core = _CORES[plan.algorithm]
    num = core(M, z, n, plan, counter)
    den = _den_product(M, z, n, plan, counter)
    p = plan.work_prec
    if isinstance(den, (Ball, ComplexBall)) and not _is_one(den):
        mat = [[bl.n_div(e, den, p) for e in row] for row in num]
        counter.nonscalar += M.r * M.r
    else:
        mat = num
    mat = [[bl.n_reduce(e, plan.prec) for e in row] for row in mat]
    acc = min(min(_entry_acc(e) for e in row) for row in mat)
    acc = min(acc, plan.prec)
    return EvalReport(mat, num, den, plan, counter, acc)


def _is_one(v) -> bool:
    if isinstance(v, ComplexBall):
        return _is_one(v.re) and _ball_is_exact_zero(v.im)
    return v.man == 1 and v.exp == 0 and v.rm == 0


def _entry_acc(e) -> int:
    return e.rel_accuracy_bits()


def eval_naive(M: RecMatrix, z, n: int, plan: EvalPlan | None = None, p: int = 53):
    plan = plan or make_plan("naive", n, p)
    return _run(M, z, n, plan).matrix


def eval_binsplit_exact(M: RecMatrix, z, n: int, plan: EvalPlan | None = None,
                        p: int = 53):
    plan = plan or make_plan("binsplit-exact", n, p)
    return _run(M, z, n, plan).matrix


def eval_multipoint(M: RecMatrix, z, n: int, plan: EvalPlan | None = None,
                    p: int = 53):
    plan = plan or make_plan("multipoint", n, p)
    return _run(M, z, n, plan).matrix


def eval_rect_ps(M: RecMatrix, z, n: int, plan: EvalPlan | None = None,
                 p: int = 53):
    plan = plan or make_plan("rect-ps", n, p)
    return _run(M, z, n, plan).matrix


def eval_rect_split(M: RecMatrix, z, n: int, plan: EvalPlan | None = None,
                    p: int = 53):
    plan = plan or make_plan("rect-split", n, p)
    return _run(M, z, n, plan).matrix


def eval_rect_split_taylor(M: RecMatrix, z, n: int,
                           plan: EvalPlan | None = None, p: int = 53):
    """rect-split with Taylor-shift giant-step updates; requires the
    symmetry M(x, k+m) = M(x+m, k)."""
    plan = plan or make_plan("rect-split", n, p)
    if not M.shift_symmetry_holds(plan.m):
        raise SymmetryError(
            "matrix does not satisfy M(x, k+m) = M(x+m, k); "
            "use eval_rect_split instead")
    counter = OpCounter()
    num = _rect_split_core(M, z, n, plan, counter, force_taylor=True)
    den = _den_product(M, z, n, plan, counter)
    wp = plan.work_prec
    if isinstance(den, (Ball, ComplexBall)) and not _is_one(den):
        num = [[bl.n_div(e, den, wp) for e in row] for row in num]
    return [[bl.n_reduce(e, plan.prec) for e in row] for row in num]


def eval_rect_delta(M: RecMatrix, z, n: int, plan: EvalPlan | None = None,
                    p: int = 53):
    plan = plan or make_plan("rect-delta", n, p)
    return _run(M, z, n, plan).matrix


def eval_dispatch(M: RecMatrix, z, n: int, p: int, algorithm: str | None = None,
                  m: int | None = None, subn: int | None = None,
                  taylor: str = "auto",
                  thresholds=DEFAULT_THRESHOLDS) -> EvalReport:
    """Select a plan (unless overridden), run the engine and report the
    divided product with the achieved accuracy."""
    if algorithm is None:
        algorithm = default_algorithm(n, thresholds)
    plan = make_plan(algorithm, n, p, m=m, subn=subn, taylor=taylor)
    return _run(M, z, n, plan)
