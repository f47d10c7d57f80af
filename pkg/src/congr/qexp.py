"""Exact q-expansions of level-one modular forms and Satake data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .exact import DirichletCharacter, bernoulli, char_eval

__all__ = [
    "QExpansion", "SatakeLocal", "BadWeight", "OutOfRange", "NonIntegralCoefficient",
    "eisenstein", "delta", "newform_s26", "hecke_eigenvalue", "satake", "reduce_mod",
    "series_mul", "divisor_power_sums", "dim_cusp_forms_level1", "level1_eigenform",
]

DEFAULT_TERMS = 10000


class BadWeight(ValueError):
    pass


class OutOfRange(IndexError):
    pass


class NonIntegralCoefficient(ValueError):
    pass


@dataclass(frozen=True)
class QExpansion:
    """Truncated q-expansion sum_{n=0}^{N} coeffs[n] q^n."""

    coeffs: tuple
    weight: int
    level: int = 1
    character: DirichletCharacter = field(default_factory=DirichletCharacter.trivial)
    name: str = ""

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return len(self.coeffs)

    def is_cuspidal(self) -> bool:
        return self.coeffs[0] == 0

    def is_normalized(self) -> bool:
        return len(self.coeffs) > 1 and self.coeffs[1] == 1

    def scaled(self, c) -> QExpansion:
        return QExpansion(tuple(c * a for a in self.coeffs), self.weight, self.level,
                          self.character, self.name)

    def with_coeffs(self, coeffs, name: str = "") -> QExpansion:
        return QExpansion(tuple(coeffs), self.weight, self.level, self.character,
                          name or self.name)


@dataclass(frozen=True)
class SatakeLocal:
    """Exact surrogate for (alpha_p, beta_p): trace = alpha + beta, norm = alpha * beta."""

    p: int
    trace: int
    norm: int

    def hecke_discriminant(self) -> int:
        return self.trace**2 - 4 * self.norm


# ---------------------------------------------------------------------------
# exact truncated series products via Kronecker substitution


def _pack(coeffs, nbytes: int):
    return gmpy2.mpz(int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in coeffs), "little"))


def _unpack(value, nbytes: int, count: int) -> list[int]:
    value = int(value)
    raw = value.to_bytes(max((value.bit_length() + 7) // 8, nbytes * count), "little")
    raw = raw[: nbytes * count]
    return [int.from_bytes(raw[i : i + nbytes], "little") for i in range(0, len(raw), nbytes)]


def _nonneg_mul(a, b, terms: int) -> list[int]:
    if not any(a) or not any(b):
        return [0] * terms
    bound = max(a) * max(b) * min(len(a), len(b))
    nbytes = (int(bound).bit_length() + 8) // 8
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, terms)


def series_mul(a, b, terms: int) -> list[int]:
    """Product of two integer series truncated to `terms` coefficients."""
    a = [int(x) for x in a[:terms]]
    b = [int(x) for x in b[:terms]]
    ap, am = [max(x, 0) for x in a], [max(-x, 0) for x in a]
    bp, bm = [max(x, 0) for x in b], [max(-x, 0) for x in b]
    pp = _nonneg_mul(ap, bp, terms)
    pm = _nonneg_mul(ap, bm, terms)
    mp_ = _nonneg_mul(am, bp, terms)
    mm = _nonneg_mul(am, bm, terms)
    return [w - x - y + z for w, x, y, z in zip(pp, pm, mp_, mm)]


def _rational_mul(a, b, terms: int) -> list:
    da = math.lcm(*(Fraction(x).denominator for x in a[:terms]))
    db = math.lcm(*(Fraction(x).denominator for x in b[:terms]))
    ia = [int(Fraction(x) * da) for x in a[:terms]]
    ib = [int(Fraction(x) * db) for x in b[:terms]]
    out = series_mul(ia, ib, terms)
    d = da * db
    if d == 1:
        return out
    return [Fraction(c, d) if c % d else c // d for c in out]


def divisor_power_sums(power: int, N: int) -> list[int]:
    """sigma_power(n) for 0 <= n <= N (sigma(0) = 0)."""
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d**power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


# ---------------------------------------------------------------------------
# forms


def eisenstein(k: int, N: int = DEFAULT_TERMS) -> QExpansion:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n."""
    if k < 4 or k % 2:
        raise BadWeight(f"Eisenstein series need even weight >= 4, got {k}")
    c = -Fraction(2 * k) / bernoulli(k)
    sig = divisor_power_sums(k - 1, N)
    if c.denominator == 1:
        c = int(c)
        coeffs = [1] + [c * s for s in sig[1:]]
    else:
        coeffs = [1] + [c * s for s in sig[1:]]
        coeffs = [int(x) if Fraction(x).denominator == 1 else x for x in coeffs]
    return QExpansion(tuple(coeffs), k, name=f"E{k}")


def _eta_cubed(N: int) -> list[int]:
    # prod (1-q^n)^3 = sum_m (-1)^m (2m+1) q^(m(m+1)/2)
    out = [0] * (N + 1)
    m = 0
    while m * (m + 1) // 2 <= N:
        out[m * (m + 1) // 2] = (-1) ** m * (2 * m + 1)
        m += 1
    return out


def delta(N: int = DEFAULT_TERMS) -> QExpansion:
    """Delta = q prod (1 - q^n)^24, exact to q^N."""
    if N < 1:
        raise ValueError("need N >= 1")
    e3 = _eta_cubed(N)
    e6 = series_mul(e3, e3, N)
    e12 = series_mul(e6, e6, N)
    e24 = series_mul(e12, e12, N)
    return QExpansion(tuple([0] + e24[:N]), 12, name="Delta")


def dim_cusp_forms_level1(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    if k == 2:
        return 0
    d = k // 12
    return d - 1 if k % 12 == 2 else d


def newform_s26(N: int = DEFAULT_TERMS) -> QExpansion:
    """The normalized eigenform spanning S_26(SL_2(Z)), as Delta * E4^2 * E6."""
    if N < 6:
        raise ValueError("need N >= 6")
    e4 = eisenstein(4, N).coeffs
    e6 = eisenstein(6, N).coeffs
    d = delta(N).coeffs
    f = series_mul(series_mul(d, e4, N + 1), series_mul(e4, e6, N + 1), N + 1)
    if f[1] != 1:
        f = [Fraction(c, f[1]) for c in f]
    return QExpansion(tuple(f), 26, name="phi26")


def level1_eigenform(weight: int, N: int = DEFAULT_TERMS) -> QExpansion:
    """The normalized eigenform spanning S_weight(SL_2(Z)) when that space is
    one-dimensional, as Delta * E4^a * E6^b with 4a + 6b = weight - 12."""
    if weight == 26:
        return newform_s26(N)
    if dim_cusp_forms_level1(weight) != 1:
        raise BadWeight(f"S_{weight}(SL_2(Z)) has dimension {dim_cusp_forms_level1(weight)}, not 1")
    rest = weight - 12
    b = 0 if rest % 4 == 0 else 1
    a = (rest - 6 * b) // 4
    f = list(delta(N).coeffs)
    for _ in range(a):
        f = series_mul(f, eisenstein(4, N).coeffs, N + 1)
    for _ in range(b):
        f = series_mul(f, eisenstein(6, N).coeffs, N + 1)
    return QExpansion(tuple(f), weight, name=f"f{weight}")


# ---------------------------------------------------------------------------
# eigenvalues and local data


def hecke_eigenvalue(f: QExpansion, m: int):
    if not f.is_normalized():
        raise ValueError("hecke_eigenvalue needs a normalized eigenform")
    if m < 1 or m > f.truncation:
        raise OutOfRange(f"index {m} outside 1..{f.truncation}")
    return f.coeffs[m]


def satake(f: QExpansion, p: int) -> SatakeLocal:
    """Arithmetically normalized Satake data at p: norm = chi(p) p^(k-1),
    or norm = 0 with trace = a_p when p divides the level."""
    if p > f.truncation:
        raise OutOfRange(f"p = {p} beyond truncation {f.truncation}")
    a = f.coeffs[p]
    if f.level % p == 0:
        return SatakeLocal(p, a, 0)
    return SatakeLocal(p, a, char_eval(f.character, p) * p ** (f.weight - 1))


def reduce_mod(f: QExpansion, ell: int, r: int = 1) -> list[int]:
    """Coefficients reduced mod ell^r (the form must be ell-integral)."""
    mod = ell**r
    out = []
    for n, c in enumerate(f.coeffs):
        c = Fraction(c)
        if c.denominator % ell == 0:
            raise NonIntegralCoefficient(f"coefficient {n} = {c} is not {ell}-integral")
        out.append(c.numerator * pow(c.denominator, -1, mod) % mod)
    return out
