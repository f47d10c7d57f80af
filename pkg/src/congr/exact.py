"""Exact arithmetic: valuations, factorization, rational recognition,
quadratic Dirichlet characters, generalized Bernoulli numbers and
closed-form critical values of Dirichlet L-functions."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

__all__ = [
    "ExactScalar", "Factorization", "DirichletCharacter",
    "ZeroInput", "PrecisionTooLow", "NotCritical",
    "is_prime", "factor", "val_p", "squarefree_decomposition",
    "cf_recognize", "char_eval", "kronecker", "bernoulli", "bernoulli_poly",
    "gen_bernoulli", "dirichlet_L_critical", "primes_upto", "format_factored",
]


class ZeroInput(ValueError):
    pass


class PrecisionTooLow(ValueError):
    pass


class NotCritical(ValueError):
    pass


# ---------------------------------------------------------------------------
# primes and factorization

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def _mr_round(n: int, a: int, d: int, r: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 2**64 (first twelve prime bases),
    64 random rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < 2**64:
        bases = _SMALL_PRIMES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(64)]
    return all(_mr_round(n, a, d, r) for a in bases)


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n ^ 0x5DEECE66D)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __str__(self) -> str:
        return format_factored(self.factors) if self.factors else "1"


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factor(n: int) -> Factorization:
    """Prime factorization of a positive integer: trial division up to 10**6,
    then Pollard-Brent rho on what is left."""
    n = int(n)
    if n < 1:
        raise ValueError(f"factor() needs a positive integer, got {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        p += 1 if p == 2 else 2
    if n > 1:
        if n < p * p:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, out)
    return Factorization(tuple(sorted(out.items())))


def val_p(q, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise ZeroInput("valuation of zero is undefined")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """n = s**2 * f with f squarefree; returns (s, f)."""
    s, f = 1, 1
    for p, e in factor(n):
        s *= p ** (e // 2)
        if e % 2:
            f *= p
    return s, f


def format_factored(factors, sep: str = "*") -> str:
    parts = []
    for p, e in factors:
        parts.append(f"{p}^{e}" if e > 1 else str(p))
    return sep.join(parts)


# ---------------------------------------------------------------------------
# exact scalars  (rational) * sqrt(D)^[D>0] * pi^e, optionally times i


@dataclass(frozen=True)
class ExactScalar:
    num: int
    den: int = 1
    sqrt_disc: int = 0
    pi_exp: int = 0
    imag: bool = False

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        g = math.gcd(self.num, self.den)
        if g > 1:
            object.__setattr__(self, "num", self.num // g)
            object.__setattr__(self, "den", self.den // g)
        if self.sqrt_disc < 0:
            raise ValueError("sqrt_disc must be nonnegative")
        if self.sqrt_disc > 0:
            s, f = squarefree_decomposition(self.sqrt_disc)
            if s != 1:
                r = Fraction(self.num * s, self.den)
                object.__setattr__(self, "num", r.numerator)
                object.__setattr__(self, "den", r.denominator)
            object.__setattr__(self, "sqrt_disc", 0 if f == 1 else f)

    @classmethod
    def from_fraction(cls, q, sqrt_disc: int = 0, pi_exp: int = 0, imag: bool = False) -> ExactScalar:
        q = Fraction(q)
        return cls(q.numerator, q.denominator, sqrt_disc, pi_exp, imag)

    @property
    def rational(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def is_rational(self) -> bool:
        return not (self.sqrt_disc or self.pi_exp or self.imag)

    def algebraic(self) -> ExactScalar:
        """Same number with the power of pi dropped."""
        return ExactScalar(self.num, self.den, self.sqrt_disc, 0, self.imag)

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            other = ExactScalar.from_fraction(other)
        q = self.rational * other.rational
        a, b = self.sqrt_disc, other.sqrt_disc
        if a and b:
            g = math.gcd(a, b)
            q *= g
            surd = (a // g) * (b // g)
        else:
            surd = a or b
        if self.imag and other.imag:
            q = -q
        return ExactScalar.from_fraction(q, surd, self.pi_exp + other.pi_exp,
                                         self.imag != other.imag)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, ExactScalar):
            other = ExactScalar.from_fraction(other)
        if other.num == 0:
            raise ZeroDivisionError
        inv_q = 1 / other.rational
        if other.sqrt_disc:
            inv_q /= other.sqrt_disc
        if other.imag:
            inv_q = -inv_q  # 1/i = -i
        inv = ExactScalar.from_fraction(inv_q, other.sqrt_disc, -other.pi_exp, other.imag)
        return self * inv

    def val(self, p: int):
        """p-adic valuation of the rational-times-surd part; pi is ignored.
        Half-integral (a Fraction) only when p divides the surd."""
        v = val_p(self.rational, p)
        if self.sqrt_disc and self.sqrt_disc % p == 0:
            return Fraction(2 * v + 1, 2)
        return v

    def to_mpf(self):
        x = mpmath.mpf(self.num) / self.den
        if self.sqrt_disc:
            x *= mpmath.sqrt(self.sqrt_disc)
        if self.pi_exp:
            x *= mpmath.pi**self.pi_exp
        return mpmath.mpc(0, x) if self.imag else x

    def __float__(self) -> float:
        return float(self.to_mpf())

    def factored(self) -> str:
        if self.num == 0:
            return "0"
        sign = "-" if self.num < 0 else ""
        top = format_factored(factor(abs(self.num))) or "1"
        bits = [top]
        if self.den != 1:
            bits.append("/ " + format_factored(factor(self.den)))
        s = sign + " ".join(bits)
        if self.sqrt_disc:
            s += f" * sqrt({self.sqrt_disc})"
        if self.pi_exp:
            s += f" * pi^{self.pi_exp}"
        if self.imag:
            s += " * i"
        return s

    def __str__(self) -> str:
        s = str(self.rational)
        if self.sqrt_disc:
            s += f"*sqrt({self.sqrt_disc})"
        if self.pi_exp:
            s += f"*pi^{self.pi_exp}"
        if self.imag:
            s += "*i"
        return s


# ---------------------------------------------------------------------------
# continued fraction recognition


def _mpf_to_fraction(x, digits: int) -> Fraction:
    """Exact rational value of x rounded to `digits` significant digits."""
    if x == 0:
        return Fraction(0)
    s = mpmath.nstr(x, digits, min_fixed=1, max_fixed=0, strip_zeros=False)
    return Fraction(s)


def _cf_candidate(q: Fraction, max_den: int, threshold: int) -> Fraction | None:
    num, den = q.numerator, q.denominator
    h0, h1, k0, k1 = 0, 1, 1, 0
    while den:
        a, r = divmod(num, den)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        num, den = den, r
        if den == 0:
            # expansion terminated exactly: the input itself is the convergent
            return Fraction(h1, k1)
        nxt = num // den
        # a zero convergent only says |x| is small
        if nxt >= threshold and h1 != 0:
            return Fraction(h1, k1)
    return None


def cf_recognize(x, working_digits: int, max_den_digits: int) -> Fraction | None:
    """Recognize x as a rational with at most `max_den_digits` digits in its
    denominator, or return None.

    A convergent is accepted when the following partial quotient is at least
    10**(d - 2*max_den_digits - 10), where d is the number of digits x is
    rounded to.  The same convergent must be found at d = working_digits and
    again at d = working_digits - 20.
    """
    if working_digits < 30 or 2 * max_den_digits >= working_digits:
        raise PrecisionTooLow(
            f"need working_digits >= 30 and max_den_digits < working_digits/2 "
            f"(got {working_digits}, {max_den_digits})"
        )
    max_den = 10**max_den_digits
    found = []
    with mpmath.workdps(working_digits + 10):
        x = mpmath.mpf(x)
        if not mpmath.isfinite(x):
            raise ValueError("cannot recognize a non-finite number")
        for wd in (working_digits, working_digits - 20):
            threshold = 10 ** max(wd - 2 * max_den_digits - 10, 1)
            cand = _cf_candidate(_mpf_to_fraction(x, wd), max_den, threshold)
            if cand is None:
                return None
            found.append(cand)
    return found[0] if found[0] == found[1] else None


# ---------------------------------------------------------------------------
# Dirichlet characters


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_fundamental(D: int) -> bool:
    if D == 1:
        return True
    if D % 4 == 1:
        return squarefree_decomposition(abs(D))[0] == 1
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree_decomposition(abs(m))[0] == 1
    return False


@dataclass(frozen=True)
class DirichletCharacter:
    """Trivial character mod `modulus`, or the Kronecker character (D/.)
    attached to a fundamental discriminant D (then modulus = |D|)."""

    modulus: int = 1
    disc: int | None = None

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if self.disc is not None:
            if not _is_fundamental(self.disc) or self.disc == 1:
                raise ValueError(f"{self.disc} is not a nontrivial fundamental discriminant")
            if self.modulus % abs(self.disc):
                raise ValueError("modulus must be a multiple of |disc|")

    @classmethod
    def trivial(cls, modulus: int = 1) -> DirichletCharacter:
        return cls(modulus, None)

    @classmethod
    def kronecker(cls, D: int) -> DirichletCharacter:
        return cls(abs(D), D)

    @property
    def kind(self) -> str:
        return "trivial" if self.disc is None else "kronecker"

    @property
    def conductor(self) -> int:
        return 1 if self.disc is None else abs(self.disc)

    def primitive(self) -> DirichletCharacter:
        return DirichletCharacter(self.conductor, self.disc)

    def is_odd(self) -> bool:
        return self.disc is not None and self.disc < 0

    def __call__(self, n: int) -> int:
        return char_eval(self, n)

    def power(self, e: int) -> DirichletCharacter:
        if self.disc is None or e % 2 == 1:
            return self
        return DirichletCharacter.trivial(self.modulus)

    def tag(self) -> str:
        if self.disc is None:
            return f"trivial mod {self.modulus}"
        return f"({self.disc}/.)"


def char_eval(chi: DirichletCharacter, n: int) -> int:
    if math.gcd(n, chi.modulus) > 1:
        return 0
    if chi.disc is None:
        return 1
    return kronecker(chi.disc, n)


# ---------------------------------------------------------------------------
# Bernoulli numbers and Dirichlet L-values


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2."""
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    # B_n = -1/(n+1) sum_{k<n} C(n+1,k) B_k
    total = sum(math.comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -total / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    x = Fraction(x)
    return sum(math.comb(n, k) * bernoulli(k) * x ** (n - k) for k in range(n + 1))


def gen_bernoulli(n: int, chi: DirichletCharacter) -> Fraction:
    """B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f), f the modulus of chi.

    With this convention B_{1,trivial mod 1} = +1/2 and L(1-n, chi) = -B_{n,chi}/n
    for every chi (imprimitive ones included)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    f = chi.modulus
    total = sum(char_eval(chi, a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1))
    return f ** (n - 1) * total


def dirichlet_L_critical(j: int, chi: DirichletCharacter) -> ExactScalar:
    """Exact L(j, chi) at a critical integer j >= 1 (chi(-1) = (-1)^j).

    Returned as (rational) * sqrt(f) * pi^j. For an imprimitive character
    the Euler factors at primes dividing the modulus are removed."""
    if j < 1:
        raise NotCritical("only j >= 1 supported")
    delta = 1 if chi.is_odd() else 0
    if (j - delta) % 2:
        raise NotCritical(f"L({j}, {chi.tag()}) is not a critical value (parity)")
    if chi.disc is None and j == 1:
        raise NotCritical("zeta has a pole at s = 1")
    prim = chi.primitive()
    f = prim.conductor
    # L(j,chi) = (-1)^(1+(j-delta)/2) tau/(2 i^delta) (2 pi/f)^j B_{j,chi}/j!
    # and tau(chi)/i^delta = sqrt(f) for quadratic chi
    sign = -1 if ((j - delta) // 2) % 2 == 0 else 1
    q = sign * Fraction(2**j, 2 * f**j * math.factorial(j)) * gen_bernoulli(j, prim)
    for p, _ in factor(chi.modulus):
        if f % p:
            q *= 1 - Fraction(char_eval(prim, p), p**j)
    return ExactScalar.from_fraction(q, f if f > 1 else 0, j)
