"""Imaginary quadratic fields of class number one, unramified Hecke
characters and the CM newforms attached to them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import DirichletCharacter, factor, kronecker
from .qexp import QExpansion

__all__ = [
    "ImagQuadField", "HeckeCharSpec", "QuadInt", "UnsupportedField", "UnitObstruction",
    "Unsupported", "CLASS_NUMBER_ONE", "ideals_of_norm", "cm_form", "shift_identity_points",
    "unit_group_order_mod",
]

# discriminants of the imaginary quadratic fields with class number 1
CLASS_NUMBER_ONE = (-3, -4, -7, -8, -11, -19, -43, -67, -163)


class UnsupportedField(ValueError):
    pass


class UnitObstruction(ValueError):
    pass


class Unsupported(ValueError):
    pass


@dataclass(frozen=True)
class ImagQuadField:
    disc: int

    def __post_init__(self):
        if self.disc not in CLASS_NUMBER_ONE:
            raise UnsupportedField(
                f"discriminant {self.disc} is not one of the class-number-one discriminants "
                f"{CLASS_NUMBER_ONE}"
            )

    @property
    def D(self) -> int:
        return -self.disc

    @property
    def unit_order(self) -> int:
        return {-3: 6, -4: 4}.get(self.disc, 2)

    @property
    def class_number(self) -> int:
        return 1

    def character(self) -> DirichletCharacter:
        return DirichletCharacter.kronecker(self.disc)

    def splitting(self, p: int) -> str:
        c = kronecker(self.disc, p)
        return {1: "split", -1: "inert", 0: "ramified"}[c]


@dataclass(frozen=True)
class QuadInt:
    """(x + y*sqrt(disc)) / 2 in the ring of integers."""

    x: int
    y: int
    disc: int

    def __mul__(self, other: QuadInt) -> QuadInt:
        d = self.disc
        x = (self.x * other.x + d * self.y * other.y) // 2
        y = (self.x * other.y + other.x * self.y) // 2
        return QuadInt(x, y, d)

    def __pow__(self, e: int) -> QuadInt:
        out, base = QuadInt(2, 0, self.disc), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def norm(self) -> int:
        return (self.x * self.x - self.disc * self.y * self.y) // 4

    def conj(self) -> QuadInt:
        return QuadInt(self.x, -self.y, self.disc)

    def __str__(self) -> str:
        halve = self.x % 2 == 0 and self.y % 2 == 0
        x, y = (self.x // 2, self.y // 2) if halve else (self.x, self.y)
        op = "-" if y < 0 else "+"
        body = f"{x} {op} {abs(y)}*sqrt({self.disc})"
        return body if halve else f"({body})/2"


@dataclass(frozen=True)
class HeckeCharSpec:
    """Unramified Hecke character with infinity type (z/|z|)^(-t)."""

    field: ImagQuadField
    t: int
    conductor: int = 1

    def __post_init__(self):
        if self.conductor != 1:
            raise Unsupported("only unramified (conductor 1) characters are supported")
        if self.t % self.field.unit_order:
            raise UnitObstruction(
                f"infinity type {self.t} is not trivial on the {self.field.unit_order} units"
            )

    @property
    def u(self) -> int:
        """Exponent u with infinity type (z/|z|)^u."""
        return -self.t


def _elements_of_norm_upto(field: ImagQuadField, N: int):
    """Yield every nonzero integral element with norm <= N."""
    d = field.disc
    D = -d
    ymax = math.isqrt(4 * N // D)
    for y in range(-ymax, ymax + 1):
        rest = 4 * N - D * y * y
        xmax = math.isqrt(rest)
        for x in range(-xmax, xmax + 1):
            if (x - d * y) % 2:
                continue
            if x == 0 and y == 0:
                continue
            yield QuadInt(x, y, d)


def _canonical_key(a: QuadInt):
    return (abs(a.x), abs(a.y), a.x < 0, a.y < 0)


def ideals_of_norm(field: ImagQuadField, j: int) -> list[QuadInt]:
    """One generator for each ideal of norm j (class number one)."""
    if j < 1:
        raise ValueError("norm must be positive")
    d = field.disc
    found = []
    D = -d
    ymax = math.isqrt(4 * j // D)
    for y in range(-ymax, ymax + 1):
        r = 4 * j - D * y * y
        x = math.isqrt(r)
        if x * x != r:
            continue
        for xx in {x, -x}:
            if (xx - d * y) % 2 == 0:
                found.append(QuadInt(xx, y, d))
    units = _units(field)
    orbits: dict[tuple, QuadInt] = {}
    for a in found:
        orbit = [a * u for u in units]
        rep = min(orbit, key=_canonical_key)
        orbits[(rep.x, rep.y)] = rep
    return sorted(orbits.values(), key=_canonical_key)


def _units(field: ImagQuadField) -> list[QuadInt]:
    d = field.disc
    return [u for u in (QuadInt(x, y, d) for x in range(-2, 3) for y in range(-2, 3))
            if (u.x - d * u.y) % 2 == 0 and u.norm() == 1]


def cm_form(char: HeckeCharSpec, N: int) -> QExpansion:
    """CM form of weight -u+1 and level |disc| attached to the character:
    a(j) is the sum of alpha^(-u) over generators alpha of the ideals of norm j."""
    u = char.u
    if u >= 0:
        raise ValueError("cm_form needs u < 0 (a cusp form of weight >= 2)")
    field = char.field
    w = field.unit_order
    sums = [0] * (N + 1)
    surd = [0] * (N + 1)
    for a in _elements_of_norm_upto(field, N):
        p = a ** (-u)
        sums[a.norm()] += p.x
        surd[a.norm()] += p.y
    coeffs = [0] * (N + 1)
    for j in range(1, N + 1):
        if surd[j]:
            raise ArithmeticError(f"CM coefficient {j} is not rational")
        q = Fraction(sums[j], 2 * w)
        if q.denominator != 1:
            raise ArithmeticError(f"non-integral CM coefficient at {j}: {q}")
        coeffs[j] = int(q)
    return QExpansion(tuple(coeffs), 1 - u, field.D, field.character(),
                      name=f"g[{field.disc},u={u}]")


def shift_identity_points(u: int, bc_points) -> list[Fraction]:
    """Base-change points s -> convolution points s - u/2."""
    return [Fraction(s) - Fraction(u, 2) for s in bc_points]


def unit_group_order_mod(field: ImagQuadField, N: int) -> int:
    """#(O_K / N O_K)^x for a positive integer N."""
    out = 1
    for p, e in factor(N):
        kind = field.splitting(p)
        if kind == "split":
            out *= ((p - 1) * p ** (e - 1)) ** 2
        elif kind == "inert":
            out *= (p * p - 1) * p ** (2 * (e - 1))
        else:
            # p O_K = P^2, N(P) = p; O/P^(2e) has p^(2e) elements, p^(2e-1) non-units
            out *= p ** (2 * e) - p ** (2 * e - 1)
    return out
