"""Constructors for the L-functions used in the congruence computations."""

from __future__ import annotations

from fractions import Fraction

from ..exact import DirichletCharacter, char_eval
from ..qexp import QExpansion, satake
from .core import LFunctionSpec

__all__ = [
    "zeta_spec", "dirichlet_spec", "sym2_spec", "conv_spec", "WeightOrder",
    "InsufficientCoefficients", "sym2_candidates", "conv_candidates", "sym2_local", "conv_local",
    "SYM2_CONDUCTORS", "CONV_CONDUCTORS", "sym2_conductors", "conv_conductors",
]


# q^3 is the conductor of an unramified degree-3 L-function twisted by a
# character of conductor q, so it is offered alongside 1, q and q^2
SYM2_CONDUCTORS = (1, 3, 9, 27)
CONV_CONDUCTORS = (3, 9)


def sym2_conductors(q: int) -> tuple:
    return SYM2_CONDUCTORS if q in (1, 3) else (1, q, q * q, q**3)


def conv_conductors(level: int) -> tuple:
    return CONV_CONDUCTORS if level == 3 else (level, level * level)


class WeightOrder(ValueError):
    pass


class InsufficientCoefficients(ValueError):
    pass


def zeta_spec() -> LFunctionSpec:
    return LFunctionSpec(
        name="zeta", degree=1, conductor=1, gamma_shifts=(("R", 0),), motivic_weight=0,
        local_factor=lambda p: (1, -1), root_number=1, poles=((1, 1), (0, -1)),
    )


def dirichlet_spec(chi: DirichletCharacter) -> LFunctionSpec:
    """L(s, chi) for a nontrivial primitive quadratic character (root number 1)."""
    if chi.disc is None:
        raise ValueError("use zeta_spec for the trivial character")
    prim = chi.primitive()
    shift = 1 if prim.is_odd() else 0
    return LFunctionSpec(
        name=f"L(s,{prim.tag()})", degree=1, conductor=prim.conductor,
        gamma_shifts=(("R", shift),), motivic_weight=0,
        local_factor=lambda p: (1, -char_eval(prim, p)), root_number=1,
    )


def sym2_local(a: int, nu: int, psi: int) -> tuple:
    """(1 - nu psi x)(1 - (a^2 - 2 nu) psi x + nu^2 psi^2 x^2) expanded."""
    c1 = (a * a - 2 * nu) * psi
    c2 = nu * nu * psi * psi
    e = nu * psi
    return (1, -c1 - e, c2 + e * c1, -e * c2)


def conv_local(a: int, A: int, b: int, B: int) -> tuple:
    """prod over Satake pairs of (1 - alpha_i beta_j x); A, B are the norms."""
    return (1, -a * b, a * a * B + b * b * A - 2 * A * B, -a * b * A * B, A * A * B * B)


def sym2_spec(f: QExpansion, twist: DirichletCharacter | None = None, N_coeffs: int | None = None,
              shift_offset: int = 2, conductor: int = 1) -> LFunctionSpec:
    """Symmetric square of a level-one eigenform f, optionally twisted.

    The gamma factor is Gamma_C(s) Gamma_R(s - k + shift_offset); sym2_candidates
    lists the admissible (shift_offset, conductor) pairs."""
    if f.level != 1:
        raise ValueError("sym2_spec supports level-one forms")
    twist = twist or DirichletCharacter.trivial()
    k = f.weight
    limit = f.truncation if N_coeffs is None else min(N_coeffs, f.truncation)

    def local(p):
        if p > f.truncation:
            raise InsufficientCoefficients(f"a({p}) needed, have {f.truncation}")
        psi = char_eval(twist, p)
        if psi == 0:
            return (1,)
        sat = satake(f, p)
        return sym2_local(sat.trace, sat.norm, psi)

    tag = "" if twist.disc is None else f" x {twist.tag()}"
    return LFunctionSpec(
        name=f"Sym2({f.name or 'f'}){tag}", degree=3, conductor=conductor,
        gamma_shifts=(("C", 0), ("R", -k + shift_offset)), motivic_weight=2 * k - 2,
        local_factor=local, max_prime=limit,
        notes={"form": f.name, "twist": twist.tag(), "weight": k},
    )


def sym2_candidates(f: QExpansion, twist: DirichletCharacter | None = None,
                    N_coeffs: int | None = None) -> list[LFunctionSpec]:
    base = sym2_spec(f, twist, N_coeffs)
    q = 1 if twist is None else twist.conductor
    out = []
    for off in (1, 2):
        for N in sym2_conductors(q):
            out.append(base.replace(
                conductor=N, gamma_shifts=(("C", 0), ("R", -f.weight + off)), root_number=None,
            ))
    return out


def conv_spec(f: QExpansion, g: QExpansion, N_coeffs: int | None = None,
              conductor: int | None = None) -> LFunctionSpec:
    """Rankin-Selberg convolution L(s, f x g) with exact Euler factors.

    At primes dividing the level of g the degree-two factor built from a_g(p) is
    kept.  Default conductor is level(g)^2."""
    if f.weight <= g.weight:
        raise WeightOrder(f"weight(f) = {f.weight} must exceed weight(g) = {g.weight}")
    if f.level != 1:
        raise ValueError("conv_spec supports level-one f")
    trunc = min(f.truncation, g.truncation)
    limit = trunc if N_coeffs is None else min(N_coeffs, trunc)

    def local(p):
        if p > trunc:
            raise InsufficientCoefficients(f"coefficient {p} needed, have {trunc}")
        sf, sg = satake(f, p), satake(g, p)
        if g.level % p == 0:
            b = sg.trace
            return (1, -sf.trace * b, sf.norm * b * b)
        return conv_local(sf.trace, sf.norm, sg.trace, sg.norm)

    N = g.level**2 if conductor is None else conductor
    return LFunctionSpec(
        name=f"{f.name or 'f'} x {g.name or 'g'}", degree=4, conductor=N,
        gamma_shifts=(("C", 0), ("C", -(g.weight - 1))),
        motivic_weight=f.weight + g.weight - 2, local_factor=local, max_prime=limit,
        notes={"f": f.name, "g": g.name, "weights": (f.weight, g.weight)},
    )


def conv_candidates(f: QExpansion, g: QExpansion, N_coeffs: int | None = None) -> list[LFunctionSpec]:
    base = conv_spec(f, g, N_coeffs)
    return [base.replace(conductor=N, root_number=None) for N in conv_conductors(g.level)]
