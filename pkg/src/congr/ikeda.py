"""Fourier-coefficient arithmetic of Ikeda lifts to U(n, n).

Only the local data with p-valuation at most one are handled: a prime not
dividing gamma(h) contributes the constant polynomial 1, and a prime with
valuation one and local sign -1 contributes X - 1/X.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import factor, is_prime, kronecker, primes_upto
from .qexp import QExpansion, satake

__all__ = [
    "LiftContext", "LaurentPoly", "Unsupported", "UnsupportedLocalDatum", "gamma_of",
    "local_poly", "lift_coeff", "supported_gammas", "lift_congruence_check",
    "CongruenceReport", "nonvanishing_sweep", "SweepResult", "std_L_points",
]


class Unsupported(ValueError):
    pass


class UnsupportedLocalDatum(ValueError):
    pass


@dataclass(frozen=True)
class LiftContext:
    """Lift of an elliptic eigenform to U(n, n) over Q(sqrt(disc)).

    n = 2m: the form has weight 2k+1, level |disc| and character chi_K.
    n = 2m+1: the form has weight 2k and level 1."""

    n: int
    m: int
    k: int
    disc: int = -3

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.n not in (2 * self.m, 2 * self.m + 1):
            raise ValueError(f"n = {self.n} is neither 2m nor 2m+1 for m = {self.m}")
        if self.k < 1:
            raise ValueError("k must be positive")

    @property
    def D(self) -> int:
        return -self.disc

    @property
    def even(self) -> bool:
        return self.n % 2 == 0

    @property
    def form_weight(self) -> int:
        return 2 * self.k + 1 if self.even else 2 * self.k

    @property
    def form_level(self) -> int:
        return self.D if self.even else 1

    @property
    def x_exponent(self) -> Fraction:
        return Fraction(self.k) if self.even else Fraction(2 * self.k - 1, 2)

    def check_form(self, f: QExpansion) -> None:
        if f.weight != self.form_weight or f.level != self.form_level:
            raise ValueError(
                f"lift for n = {self.n} needs weight {self.form_weight}, level {self.form_level}; "
                f"got weight {f.weight}, level {f.level}"
            )


@dataclass(frozen=True)
class LaurentPoly:
    coeffs: dict = field(default_factory=dict)  # degree -> integer

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {d: c for d, c in self.coeffs.items() if c})

    @property
    def top(self) -> int:
        return max(self.coeffs, default=0)

    @property
    def bottom(self) -> int:
        return min(self.coeffs, default=0)

    def inverted(self) -> LaurentPoly:
        """F(1/X)."""
        return LaurentPoly({-d: c for d, c in self.coeffs.items()})

    def scaled(self, c: int) -> LaurentPoly:
        return LaurentPoly({d: c * v for d, v in self.coeffs.items()})

    def satisfies_functional_equation(self, sign: int) -> bool:
        return self.inverted() == self.scaled(sign)

    def __call__(self, x):
        return sum(c * x**d for d, c in self.coeffs.items())

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            c = self.coeffs[d]
            mono = "" if d == 0 else ("X" if d == 1 else f"X^{d}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{'*' + mono if mono else ''}"
            parts.append(("-" if c < 0 else "+") + " " + term)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def gamma_of(det_h, ctx: LiftContext, expect_integer: bool = False) -> Fraction:
    """(-D_K)^floor(n/2) * det h."""
    det_h = Fraction(det_h)
    if det_h == 0:
        raise ValueError("det h must be nonzero")
    g = Fraction(-ctx.D) ** (ctx.n // 2) * det_h
    if expect_integer and g.denominator != 1:
        raise ValueError(f"gamma(h) = {g} is not an integer")
    return g


def local_poly(v: int, chi_sign: int) -> LaurentPoly:
    if v < 0:
        raise ValueError("valuation must be nonnegative")
    if chi_sign not in (1, -1):
        raise ValueError("chi_sign must be +1 or -1")
    if v == 0:
        return LaurentPoly({0: 1})
    if v == 1 and chi_sign == -1:
        return LaurentPoly({1: 1, -1: -1})
    if v == 1:
        raise Unsupported("v = 1 with local sign +1 leaves the middle coefficient undetermined")
    raise Unsupported(f"local polynomials for valuation {v} >= 2 are not implemented")


def _default_sign(p: int, ctx: LiftContext) -> int | None:
    # the supported gamma = -p data have local sign -1 at primes inert in K
    return -1 if kronecker(ctx.disc, p) == -1 else None


def lift_coeff(gamma: int, ctx: LiftContext, form: QExpansion, signs: dict | None = None) -> int:
    """|gamma|^x prod_p F_p(alpha'_p) for the supported local data.

    At a prime with valuation one the factor p^x (alpha' - 1/alpha') is taken
    as the Hecke eigenvalue a(p): with alpha' = p^-x alpha and beta' = p^-x beta,
    the antisymmetric polynomial is read on the Satake pair as alpha' + beta'
    (1/alpha' = -beta' exactly when alpha beta = -p^(2x))."""
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    ctx.check_form(form)
    out = 1
    for p, e in factor(abs(gamma)):
        if e >= 2:
            raise UnsupportedLocalDatum(f"val_{p}(gamma) = {e} >= 2")
        sign = (signs or {}).get(p, _default_sign(p, ctx))
        if sign is None:
            raise UnsupportedLocalDatum(f"no local sign known at p = {p} (not inert in K)")
        try:
            poly = local_poly(e, sign)
        except Unsupported as exc:
            raise UnsupportedLocalDatum(str(exc)) from exc
        if not poly.satisfies_functional_equation(sign):
            raise AssertionError("local polynomial fails its functional equation")
        out *= satake(form, p).trace
    if isinstance(out, Fraction):
        if out.denominator != 1:
            raise ArithmeticError(f"lift coefficient {out} is not integral")
        out = out.numerator
    return out


def supported_gammas(ctx: LiftContext, bound: int) -> list[int]:
    """1, -1 and -p for odd primes p <= bound inert in K."""
    out = [1, -1]
    for p in primes_upto(bound):
        if p > 2 and kronecker(ctx.disc, p) == -1:
            out.append(-p)
    return out


@dataclass
class CongruenceReport:
    ell: int
    r: int
    premise_holds: bool
    premise_violation: int | None
    checked: int
    congruent: bool
    first_violation: int | None

    def __str__(self) -> str:
        mod = f"{self.ell}^{self.r}"
        if self.congruent:
            return f"lift coefficients agree mod {mod} at {self.checked} supported gamma"
        return (f"lift coefficients differ mod {mod} at gamma = {self.first_violation}"
                f" (coefficient premise {'holds' if self.premise_holds else f'fails at n = {self.premise_violation}'})")


def lift_congruence_check(phi: QExpansion, phi2: QExpansion, ell: int, r: int, prime_bound: int,
                          ctx: LiftContext) -> CongruenceReport:
    if (phi.weight, phi.level, phi.character) != (phi2.weight, phi2.level, phi2.character):
        raise ValueError("forms must share weight, level and character")
    mod = ell**r
    top = min(prime_bound, phi.truncation, phi2.truncation)
    violation = None
    for n in range(1, top + 1):
        d = Fraction(phi.coeffs[n]) - Fraction(phi2.coeffs[n])
        if d.denominator % ell == 0 or d.numerator % mod:
            violation = n
            break
    first = None
    gammas = supported_gammas(ctx, top)
    for g in gammas:
        a, b = lift_coeff(g, ctx, phi), lift_coeff(g, ctx, phi2)
        if (a - b) % mod:
            first = g
            break
    return CongruenceReport(ell, r, violation is None, violation, len(gammas), first is None, first)


@dataclass
class SweepResult:
    ell: int
    witness: int | None
    residue: int | None
    checked: list = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None

    def message(self) -> str:
        if self.found:
            return (f"p = {self.witness}: a(p) = {self.residue} mod {self.ell}, so the lift has a "
                    f"Fourier coefficient prime to {self.ell}")
        return (f"no prime p <= {max(self.checked, default=0)} with p = -1 mod D_K and "
                f"a(p) != 0 mod {self.ell}; this can only persist if the mod-{self.ell} "
                f"Galois image is small (abelian)")


def nonvanishing_sweep(phi: QExpansion, ell: int, prime_bound: int = 10_000,
                       disc: int = -3) -> SweepResult:
    """Smallest odd prime p = -1 mod D_K with a(p) != 0 mod ell."""
    D = -disc
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if (2 * D) % ell == 0:
        raise ValueError(f"ell = {ell} divides 2 D_K")
    top = min(prime_bound, phi.truncation)
    res = SweepResult(ell, None, None)
    for p in primes_upto(top):
        if p == 2 or p % D != D - 1:
            continue
        if kronecker(disc, p) != -1:
            raise AssertionError(f"p = {p} = -1 mod {D} is not inert")
        res.checked.append(p)
        a = Fraction(phi.coeffs[p])
        if a.denominator % ell == 0:
            raise ValueError(f"a({p}) is not {ell}-integral")
        r = a.numerator * pow(a.denominator, -1, ell) % ell
        if r:
            res.witness, res.residue = p, r
            break
    return res


def std_L_points(ctx: LiftContext, s, psi_tag: str | None = None) -> list[Fraction]:
    """Points s + k + m - n - i + 1 (i = 1..n) at which the base-change factors
    of the standard L-function are evaluated."""
    s = Fraction(s)
    return [s + ctx.k + ctx.m - ctx.n - i + 1 for i in range(1, ctx.n + 1)]
