"""Smoothed approximate functional equation.

Write Lambda(s) = A^s gamma(s) L(s) (up to a constant) with
gamma(s) = prod_j Gamma((s + lambda_j)/2) and A = sqrt(N) / pi^(d/2).  With
phi the inverse Mellin transform of gamma and

    G_s(t) = t^-s int_t^oo phi(x) x^(s-1) dx,

every split parameter c > 0 gives

    Lambda(s) = c^s sum_n b(n) G_s(nc/A) + eps c^(s-k) sum_n b(n) G_(k-s)(n/(cA))
                + sum_poles r c^(s-a)/(s-a).

G_s(t) is evaluated from its residue expansion: the sum over the poles of
gamma(z) t^-z / (z - s).  The expansion is entire in t but cancels badly for
large t, so the working precision grows with the largest argument.  Agreement
between two split parameters is the functional-equation check; the same pair
of evaluations, solved for eps, gives the root number.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import mpmath
import numpy as np
from gmpy2 import mpfr

from .core import Inconsistent, LFunctionSpec, LValue, RootNumberUnknown

__all__ = [
    "afe_eval", "afe_lambda", "fe_residual", "solve_root_number", "plan_terms", "AFEPlan",
    "DEFAULT_SPLIT",
]

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN10 = math.log(10.0)
GUARD_DIGITS = 12
DEFAULT_SPLIT = Fraction(6, 5)


# ---------------------------------------------------------------------------
# conversions


def _mpfr(x):
    """mpmath mpf -> gmpy2 mpfr (exact at sufficient precision)."""
    sign, man, exp, bc = mpmath.mpf(x)._mpf_
    if not man:
        return mpfr(0)
    with gmpy2.context(gmpy2.get_context(), precision=max(int(bc), 53)):
        v = gmpy2.mul_2exp(mpfr(gmpy2.mpz(-man if sign else man)), exp)
    return v


def _mpf(x):
    m, e = x.as_mantissa_exp()
    return mpmath.mpf((int(m), int(e)))


# ---------------------------------------------------------------------------
# truncated Laurent series  sum_i c[i] x^(val + i)


def _ser_mul(a, b, K):
    va, ca = a
    vb, cb = b
    out = [0] * K
    for i in range(K):
        ai = ca[i]
        if not ai:
            continue
        for j in range(K - i):
            out[i + j] += ai * cb[j]
    return va + vb, out


def _ser_div_linear(a, c, K):
    """a / (c + x); c exact Fraction decides the pole case."""
    v, ca = a
    if c == 0:
        return v - 1, list(ca)
    cm = mpmath.mpf(c.numerator) / c.denominator
    inv = [(-1) ** i / cm ** (i + 1) for i in range(K)]
    return _ser_mul(a, (0, inv), K)


def _gamma_series(a: Fraction, K):
    """Laurent expansion of Gamma(a + x) in x, K terms from the valuation."""
    m = 0
    while a + m < 1:
        m += 1
    b = a + m
    bm = mpmath.mpf(b.numerator) / b.denominator
    logs = [mpmath.mpf(0)] + [mpmath.psi(k - 1, bm) / mpmath.factorial(k) for k in range(1, K)]
    ex = [mpmath.mpf(1)] + [mpmath.mpf(0)] * (K - 1)
    for n in range(1, K):
        ex[n] = sum(k * logs[k] * ex[n - k] for k in range(1, n + 1)) / n
    g = mpmath.gamma(bm)
    ser = (0, [g * e for e in ex])
    for j in range(m - 1, -1, -1):
        ser = _ser_div_linear(ser, a + j, K)
    return ser


# ---------------------------------------------------------------------------
# pole data of gamma(z) = prod Gamma((z + lambda_j)/2)


def _classes(lambdas):
    """Group poles by the class of z mod 1; returns [(z_top, members)]."""
    groups: dict[Fraction, list[Fraction]] = {}
    for lam in lambdas:
        r = (-lam) % 1
        groups.setdefault(r, []).append(lam)
    return [(max(-lam for lam in mem), mem) for _, mem in sorted(groups.items())]


def _is_pole(z0: Fraction, lambdas) -> bool:
    for lam in lambdas:
        a = (z0 + lam) / 2
        if a.denominator == 1 and a <= 0:
            return True
    return False


def _log_residue_estimate(z0: Fraction, lambdas) -> float:
    """Rough log-size of the residue of gamma(z) at z0 (no log factors)."""
    out = 0.0
    for lam in lambdas:
        a = (z0 + lam) / 2
        if a.denominator == 1 and a <= 0:
            out += LN2 - math.lgamma(1 - float(a))
        else:
            out += math.lgamma(float(a))
    return out


class _PoleTable:
    """Laurent coefficients (in eps, z = z0 + eps) of gamma at its poles for one class."""

    def __init__(self, lambdas, z_top: Fraction, count: int, K: int):
        self.z_top = z_top
        self.count = count
        self.K = K
        self.entries: list[tuple[int, int, list] | None] = [None] * count
        d = len(lambdas)
        # running Gamma((z0 + lam)/2) expansions in delta = eps/2, per (factor, parity)
        running = {}
        for j, lam in enumerate(lambdas):
            for par in (0, 1):
                if par < count:
                    a = (z_top - par + lam) / 2
                    running[(j, par)] = (a, _gamma_series(a, K))
        for i in range(count):
            par = i % 2
            z0 = z_top - i
            is_pole = _is_pole(z0, lambdas)
            prod = (0, [mpmath.mpf(1)] + [mpmath.mpf(0)] * (K - 1))
            for j in range(d):
                a, ser = running[(j, par)]
                if is_pole:
                    v, c = ser
                    # delta = eps / 2
                    conv = (v, [c[m] / mpmath.mpf(2) ** (v + m) for m in range(K)])
                    prod = _ser_mul(prod, conv, K)
                running[(j, par)] = (a - 1, _ser_div_linear(ser, a - 1, K))
            if is_pole:
                self.entries[i] = (i, prod[0], prod[1])


_TABLE_CACHE: dict = {}


def _pole_tables(lambdas, counts, K, prec):
    key = (tuple(lambdas), tuple(counts), K, prec)
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    with mpmath.workprec(prec):
        tables = [
            _PoleTable(mem_all, z_top, cnt, K)
            for (z_top, _), cnt, mem_all in zip(_classes(lambdas), counts, [lambdas] * len(counts))
        ]
    if len(_TABLE_CACHE) > 16:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[key] = tables
    return tables


# ---------------------------------------------------------------------------
# incomplete Mellin transform G_s(t)


def _as_half_integer(s):
    """s as an exact Fraction when it is real and 2s is an integer."""
    if isinstance(s, mpmath.mpc):
        if s.imag != 0:
            return None
        s = s.real
    twice = mpmath.nint(2 * s)
    if abs(2 * s - twice) > mpmath.mpf(2) ** (-mpmath.mp.prec // 2):
        return None
    return Fraction(int(twice), 2)


class _IncompleteMellin:
    """Evaluates G_s(t) for one s from precomputed pole tables."""

    def __init__(self, tables, lambdas, s, prec):
        self.prec = prec
        self.complex = isinstance(s, mpmath.mpc) and s.imag != 0
        K = tables[0].K if tables else 1
        with mpmath.workprec(prec):
            s = mpmath.mpc(s) if self.complex else mpmath.mpf(s)
            self.s = s
            s_exact = _as_half_integer(s)
            # when s is itself a pole of gamma, the explicit gamma(s) t^-s term merges
            # into the residue at z = s
            on_pole = s_exact is not None and _is_pole(s_exact, lambdas)
            if on_pole:
                self.gamma_s = mpmath.mpf(0)
                if not any(s_exact <= tab.z_top and (tab.z_top - s_exact).denominator == 1
                           and tab.z_top - s_exact < tab.count for tab in tables):
                    raise ArithmeticError(f"pole table does not reach s = {s_exact}")
            else:
                self.gamma_s = mpmath.fprod(mpmath.gamma((s + lam) / 2) for lam in lambdas)
            self.classes = []
            for tab in tables:
                R = [[None] * tab.count for _ in range(K)]
                I = [[None] * tab.count for _ in range(K)] if self.complex else None
                logmag = np.full(tab.count, -np.inf)
                for i, ent in enumerate(tab.entries):
                    if ent is None:
                        continue
                    _, V, P = ent
                    z0 = tab.z_top - i
                    if on_pole and z0 == s_exact:
                        V, Q = V - 1, P
                    else:
                        w = mpmath.mpf(z0.numerator) / z0.denominator - s
                        h = [(-1) ** m / w ** (m + 1) for m in range(K)]
                        _, Q = _ser_mul((V, P), (0, h), K)
                    best = -np.inf
                    for k in range(-V):
                        r = Q[-1 - k - V] * (-1) ** k / mpmath.factorial(k)
                        if self.complex:
                            R[k][i] = _mpfr(mpmath.re(r))
                            I[k][i] = _mpfr(mpmath.im(r))
                        else:
                            R[k][i] = _mpfr(r)
                        if r != 0:
                            best = max(best, float(mpmath.log(abs(r))))
                    logmag[i] = best
                kmax = max((k for k in range(K) if any(x is not None for x in R[k])), default=0)
                zero = mpfr(0)
                R = [[zero if x is None else x for x in row] for row in R[: kmax + 1]]
                if I is not None:
                    I = [[zero if x is None else x for x in row] for row in I[: kmax + 1]]
                self.classes.append((tab.z_top, R, I, logmag))
            if self.complex:
                self.gs_re = _mpfr(mpmath.re(self.gamma_s))
                self.gs_im = _mpfr(mpmath.im(self.gamma_s))
                self.s_re = _mpfr(mpmath.re(s))
                self.s_im = _mpfr(mpmath.im(s))
            else:
                self.gs_re = _mpfr(self.gamma_s)
                self.s_re = _mpfr(s)

    def __call__(self, t, log_tol: float):
        """G_s(t) as (re, im) mpfr; terms below exp(log_tol) are dropped.
        Must run inside a gmpy2 context of self.prec bits."""
        L = gmpy2.log(t)
        lt = float(L)
        # pole at z = s
        if self.complex:
            mag = gmpy2.exp(-self.s_re * L)
            ang = -self.s_im * L
            c, sn = gmpy2.cos(ang), gmpy2.sin(ang)
            re = mag * (self.gs_re * c - self.gs_im * sn)
            im = mag * (self.gs_re * sn + self.gs_im * c)
        else:
            re = self.gs_re * gmpy2.exp(-self.s_re * L)
            im = None
        for z_top, R, I, logmag in self.classes:
            expo = logmag + np.arange(len(logmag)) * lt - float(z_top) * lt
            hits = np.flatnonzero(expo >= log_tol)
            if hits.size == 0:
                continue
            end = int(hits[-1])
            if end == len(logmag) - 1:
                raise ArithmeticError(f"pole table too short for t = {float(t):.4g}")
            Lk = mpfr(1)
            zt = gmpy2.exp(-mpfr(float(z_top)) * L) if z_top.denominator != 1 else t ** int(-z_top)
            for k in range(len(R)):
                row = R[k]
                acc = row[end]
                for i in range(end - 1, -1, -1):
                    acc = acc * t + row[i]
                re += acc * Lk * zt
                if I is not None:
                    row = I[k]
                    acc = row[end]
                    for i in range(end - 1, -1, -1):
                        acc = acc * t + row[i]
                    im += acc * Lk * zt
                Lk *= L
        return re, im


# ---------------------------------------------------------------------------
# planning


def _log_phi_tail(t: float, lambdas) -> float:
    """Asymptotic log|G_s(t)| for large t (independent of s to leading order)."""
    d = len(lambdas)
    theta = ((1 - d) / 2 + sum(float(l) for l in lambdas) / 2) / d
    return (
        math.log(2) + (d - 1) / 2 * math.log(2 * math.pi) - 0.5 * math.log(d)
        + 2 * theta * math.log(t) - d * t ** (2 / d) - LN2 - (2 / d) * math.log(t)
    )


@dataclass(frozen=True)
class AFEPlan:
    A: float
    t_max: float
    n_max: int
    prec: int
    pole_counts: tuple
    log_scale: float
    coeff_exponent: float


def _log_abs_gamma(lambdas, s) -> float:
    return float(sum(mpmath.re(mpmath.loggamma((s + l) / 2)) for l in lambdas))


def plan_terms(spec: LFunctionSpec, s, digits: int, split=1) -> AFEPlan:
    """Choose truncation, pole count and working precision for one evaluation."""
    lambdas = spec.real_shifts()
    d = spec.degree
    k = spec.k
    A = math.sqrt(spec.conductor) / math.pi ** (d / 2)
    s = mpmath.mpc(s)
    with mpmath.workdps(30):
        pts = [s, k - s]
        right = max(pts, key=lambda z: float(mpmath.re(z)))
        log_scale = float(mpmath.re(right)) * math.log(A) + _log_abs_gamma(lambdas, right)
    cexp = spec.motivic_weight / 2 + 1.0
    target = (digits + GUARD_DIGITS) * LN10
    c = float(split)
    spread = max(c, 1 / c)

    def excess(t):
        n = max(t * A * spread, 1.0)
        return cexp * math.log(n) + math.log(n) + _log_phi_tail(t, lambdas) - log_scale + target

    t = 1.0
    while excess(t) > 0:
        t *= 1.05
    t_max = t
    n_max = int(t_max * A * spread) + 1
    log_tol = log_scale - target - (cexp + 1) * math.log(n_max) - 5
    # pole counts and precision from the term sizes at t_max
    lt = math.log(t_max)
    counts = []
    peak = -math.inf
    for z_top, _ in _classes(lambdas):
        i, best, last_big = 0, -math.inf, 0
        while True:
            z0 = z_top - i
            if _is_pole(z0, lambdas):
                e = _log_residue_estimate(z0, lambdas) - float(z0) * lt
                best = max(best, e)
                if e > log_tol - 10 * LN10:
                    last_big = i
                elif e < best - 10 and i > last_big + 4:
                    break
            i += 1
        counts.append(last_big + 8)
        peak = max(peak, best)
    lost = max(peak - log_tol, 0.0)
    prec = int((lost + target + 20 * LN10) / LN2) + 64
    prec = max(prec, int(digits * LN10 / LN2) + 128)
    return AFEPlan(A, t_max, n_max, prec, tuple(counts), log_scale, cexp)


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class _Parts:
    direct: object   # c^s sum b(n) G_s(nc/A)
    dual: object     # c^(s-k) sum b(n) G_(k-s)(n/(cA))
    polar: object
    err: float       # log of a heuristic absolute error
    terms: int
    prec: int


def _side_sum(spec, G, coeffs, scale, n_max, log_tol, cexp, prec, is_complex):
    re_tot, im_tot = mpfr(0), mpfr(0)
    used = 0
    for n in range(1, n_max + 1):
        b = coeffs[n]
        if not b:
            continue
        t = scale * n
        tol_n = log_tol - cexp * math.log(n)
        re, im = G(t, tol_n - 5)
        re_tot += b * re
        if is_complex:
            im_tot += b * im
        used = n
    return re_tot, im_tot, used


def _afe_parts(spec: LFunctionSpec, s, digits: int, split=1) -> _Parts:
    split = Fraction(split)
    plan = plan_terms(spec, s, digits, split)
    lambdas = spec.real_shifts()
    k = spec.k
    d = spec.degree
    prec = plan.prec
    coeffs = spec.coefficients(plan.n_max)
    tables = _pole_tables(lambdas, plan.pole_counts, d + 1, prec)
    with mpmath.workprec(prec):
        sz = mpmath.mpmathify(s)
        is_complex = isinstance(sz, mpmath.mpc) and sz.imag != 0
        if not is_complex:
            sz = mpmath.re(sz)
        Gs = _IncompleteMellin(tables, lambdas, sz, prec)
        Gd = _IncompleteMellin(tables, lambdas, k - sz, prec)
        A = mpmath.sqrt(spec.conductor) / mpmath.pi ** (mpmath.mpf(d) / 2)
        c = mpmath.mpf(split.numerator) / split.denominator
        log_tol = plan.log_scale - (digits + GUARD_DIGITS) * LN10 - math.log(plan.n_max)
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            sc1 = _mpfr(c / A)
            sc2 = _mpfr(1 / (c * A))
            n1 = int(plan.t_max * float(A) / float(c))
            n2 = int(plan.t_max * float(A) * float(c))
            r1, i1, u1 = _side_sum(spec, Gs, coeffs, sc1, min(n1, plan.n_max), log_tol,
                                   plan.coeff_exponent, prec, is_complex)
            r2, i2, u2 = _side_sum(spec, Gd, coeffs, sc2, min(n2, plan.n_max), log_tol,
                                   plan.coeff_exponent, prec, is_complex)
            S1 = mpmath.mpc(_mpf(r1), _mpf(i1)) if is_complex else _mpf(r1)
            S2 = mpmath.mpc(_mpf(r2), _mpf(i2)) if is_complex else _mpf(r2)
        direct = c**sz * S1
        dual = c ** (sz - k) * S2
        polar = mpmath.mpf(0)
        shift_sum = sum(lambdas, Fraction(0))
        norm = mpmath.pi ** (mpmath.mpf(shift_sum.numerator) / shift_sum.denominator / 2)
        for a, res in spec.poles:
            a = mpmath.mpmathify(a)
            polar += norm * res * c ** (sz - a) / (sz - a)
    # the planner keeps each dropped tail below exp(log_scale - target)
    err = plan.log_scale - (digits + GUARD_DIGITS) * LN10 + LN10
    return _Parts(direct, dual, polar, err, max(u1, u2), prec)


def _lambda_from_parts(parts: _Parts, eps):
    return parts.direct + eps * parts.dual + parts.polar


def afe_lambda(spec: LFunctionSpec, s, digits: int, split=1):
    """Lambda_D(s) = A^s gamma(s) L(s) and a heuristic log absolute error."""
    if spec.root_number is None:
        raise RootNumberUnknown(f"{spec.name}: root number unknown; solve it first")
    parts = _afe_parts(spec, s, digits, split)
    with mpmath.workprec(parts.prec):
        eps = mpmath.mpmathify(spec.root_number)
        if isinstance(eps, mpmath.mpc) and eps.imag == 0:
            eps = eps.real
        return _lambda_from_parts(parts, eps), parts


def afe_eval(spec: LFunctionSpec, s, digits: int = 150) -> LValue:
    """L(s) to about `digits` significant digits by the smoothed approximate
    functional equation.  The error bound combines the truncation estimate
    (heuristic asymptotics of the incomplete Mellin tail) with rounding."""
    lam, parts = afe_lambda(spec, s, digits)
    lambdas = spec.real_shifts()
    with mpmath.workprec(parts.prec):
        sz = mpmath.mpmathify(s)
        if isinstance(sz, mpmath.mpc) and sz.imag == 0:
            sz = sz.real
        d = spec.degree
        A = mpmath.sqrt(spec.conductor) / mpmath.pi ** (mpmath.mpf(d) / 2)
        denom = A**sz * mpmath.fprod(mpmath.gamma((sz + l) / 2) for l in lambdas)
        value = lam / denom
        err = mpmath.exp(parts.err) / abs(denom)
    with mpmath.workdps(digits + 10):
        return LValue(+value, +err, s, digits, parts.terms)


def fe_residual(spec: LFunctionSpec, s, digits: int = 150, split=DEFAULT_SPLIT):
    """Relative disagreement of Lambda(s) computed with split parameters 1 and `split`.
    Tiny exactly when conductor, gamma factors and root number are consistent."""
    lam1, p1 = afe_lambda(spec, s, digits, 1)
    lam2, p2 = afe_lambda(spec, s, digits, split)
    with mpmath.workprec(max(p1.prec, p2.prec)):
        return abs(lam1 - lam2) / abs(lam1)


def solve_root_number(spec: LFunctionSpec, probes=(None, None), digits: int = 40,
                      split=DEFAULT_SPLIT, tol=1e-20):
    """Solve for eps from the requirement that Lambda not depend on the split
    parameter, at each probe point; the estimates must agree and lie on |eps| = 1."""
    k = spec.k
    if probes == (None, None):
        centre = Fraction(k, 2)
        probes = (centre + Fraction(1, 3), centre + Fraction(7, 10))
    estimates = []
    for s in probes:
        s = mpmath.mpmathify(s) if not isinstance(s, Fraction) else mpmath.mpf(s.numerator) / s.denominator
        a = _afe_parts(spec, s, digits, 1)
        b = _afe_parts(spec, s, digits, split)
        with mpmath.workprec(max(a.prec, b.prec)):
            denom = a.dual - b.dual
            eps = (b.direct + b.polar - a.direct - a.polar) / denom
            estimates.append(mpmath.mpc(eps))
    with mpmath.workdps(digits):
        e0, e1 = estimates
        off = max(abs(abs(e0) - 1), abs(abs(e1) - 1), abs(e0 - e1))
        if off > tol:
            raise Inconsistent(
                f"{spec.name}: root-number estimates {mpmath.nstr(e0, 8)}, {mpmath.nstr(e1, 8)} "
                f"are not a common unit (residual {mpmath.nstr(off, 3)})",
                residual=off,
            )
        eps = (e0 + e1) / 2
        eps = eps / abs(eps)
        # snap to +-1 / +-i when exact to working precision
        for cand in (1, -1, 1j, -1j):
            if abs(eps - cand) < mpmath.mpf(10) ** (-(digits // 2)):
                return complex(cand)
        return complex(eps)
