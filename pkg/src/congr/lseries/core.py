"""L-function data: functional-equation parameters and Dirichlet coefficients
generated from local Euler factors."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath

from ..exact import primes_upto

__all__ = [
    "LFunctionSpec", "LValue", "NeedMoreCoefficients", "RootNumberUnknown", "Inconsistent",
    "euler_coefficients", "euler_product",
]


class NeedMoreCoefficients(ValueError):
    pass


class RootNumberUnknown(ValueError):
    pass


class Inconsistent(ArithmeticError):
    def __init__(self, msg: str, residual=None):
        super().__init__(msg)
        self.residual = residual


@dataclass
class LFunctionSpec:
    """Completed L-function  Lambda(s) = N^(s/2) prod Gamma_*(s + shift) L(s)
    with  Lambda(s) = eps * conj(Lambda(w + 1 - conj(s))).

    gamma_shifts holds ("R", shift) for Gamma_R(s + shift) = pi^(-(s+shift)/2) Gamma((s+shift)/2)
    and ("C", shift) for Gamma_C(s + shift) = 2 (2 pi)^(-(s+shift)) Gamma(s + shift).
    ``local_factor(p)`` returns the integer coefficients of the Euler polynomial in x = p^-s.
    ``poles`` lists (point, residue of Lambda) for L-functions with poles (zeta).
    """

    name: str
    degree: int
    conductor: int
    gamma_shifts: tuple
    motivic_weight: int
    local_factor: Callable[[int], tuple]
    root_number: complex | None = None
    max_prime: int | None = None
    bad_factors: dict = field(default_factory=dict)
    poles: tuple = ()
    notes: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self.gamma_shifts = tuple((kind, Fraction(sh)) for kind, sh in self.gamma_shifts)
        count = sum(2 if kind == "C" else 1 for kind, _ in self.gamma_shifts)
        if count != self.degree:
            raise ValueError(f"gamma factors give degree {count}, spec says {self.degree}")
        for kind, _ in self.gamma_shifts:
            if kind not in ("R", "C"):
                raise ValueError(f"unknown gamma factor kind {kind!r}")

    def replace(self, **changes) -> LFunctionSpec:
        """Copy with changed functional-equation data; coefficients are shared."""
        changes.setdefault("_cache", self._cache)
        return dataclasses.replace(self, **changes)

    @property
    def k(self) -> int:
        """Functional equation relates s and k - s."""
        return self.motivic_weight + 1

    def real_shifts(self) -> list[Fraction]:
        """Shifts lambda_j with prod Gamma_R(s + lambda_j) equal to the gamma factor."""
        out = []
        for kind, sh in self.gamma_shifts:
            out.append(sh)
            if kind == "C":
                out.append(sh + 1)
        return sorted(out)

    def euler_poly(self, p: int) -> tuple:
        if p in self.bad_factors:
            return tuple(self.bad_factors[p])
        if self.max_prime is not None and p > self.max_prime:
            raise NeedMoreCoefficients(
                f"{self.name}: local factor at p = {p} needs data beyond p <= {self.max_prime}"
            )
        return tuple(self.local_factor(p))

    def coefficients(self, n_max: int) -> list[int]:
        """Dirichlet coefficients b(0..n_max), b(0) = 0."""
        cached = self._cache.get("coeffs")
        if cached is not None and len(cached) > n_max:
            return cached
        out = euler_coefficients(self.euler_poly, n_max)
        self._cache["coeffs"] = out
        return out

    def describe(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "conductor": self.conductor,
            "gamma_shifts": [[k, str(s)] for k, s in self.gamma_shifts],
            "motivic_weight": self.motivic_weight,
            "root_number": None if self.root_number is None else _fmt_complex(self.root_number),
        }


def _fmt_complex(z) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


@dataclass(frozen=True)
class LValue:
    value: object  # mpmath mpf / mpc
    abs_error_bound: object
    s: object
    precision_digits: int
    terms: int = 0

    def __str__(self) -> str:
        v = mpmath.nstr(self.value, self.precision_digits)
        e = mpmath.nstr(self.abs_error_bound, 3)
        return f"L({self.s}) = {v}  (+/- {e}, {self.terms} terms)"


def euler_coefficients(euler_poly, n_max: int) -> list[int]:
    """Expand prod_p 1/P_p(p^-s) into Dirichlet coefficients up to n_max."""
    b = [0] * (n_max + 1)
    if n_max < 1:
        return b
    b[1] = 1
    spf = list(range(n_max + 1))
    for p in primes_upto(int(n_max**0.5) + 1):
        for m in range(p * p, n_max + 1, p):
            if spf[m] == m:
                spf[m] = p
    local: dict[int, list[int]] = {}
    for p in primes_upto(n_max):
        poly = euler_poly(p)
        e_max, pe = 0, 1
        while pe * p <= n_max:
            pe *= p
            e_max += 1
        u = [1] + [0] * e_max
        for m in range(1, e_max + 1):
            acc = 0
            for i in range(1, min(m, len(poly) - 1) + 1):
                acc -= poly[i] * u[m - i]
            u[m] = acc
        local[p] = u
    for n in range(2, n_max + 1):
        p = spf[n]
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        b[n] = local[p][e] * b[m]
    return b


def euler_product(spec: LFunctionSpec, s, p_max: int):
    """Partial Euler product over p <= p_max at the current mpmath precision."""
    out = mpmath.mpf(1)
    for p in primes_upto(p_max):
        poly = spec.euler_poly(p)
        x = mpmath.power(p, -s)
        val = mpmath.mpf(0)
        for c in reversed(poly):
            val = val * x + c
        out /= val
    return out
