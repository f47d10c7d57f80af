"""Petersson norms and algebraic parts of critical L-values.

The symmetric-square and convolution L-functions carry functional-equation
data that is not known in advance.  Each builder offers a short list of
candidate (gamma factor, conductor) pairs; `select_spec` keeps the unique
candidate whose root number solves to a unit and whose two-split residual is
negligible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from ..exact import DirichletCharacter, ExactScalar, NotCritical, cf_recognize, factor
from ..qexp import QExpansion
from .afe import afe_eval, fe_residual, plan_terms, solve_root_number
from .builders import (CONV_CONDUCTORS, SYM2_CONDUCTORS, conv_conductors, conv_spec,
                       sym2_conductors, sym2_spec)
from .core import Inconsistent, LFunctionSpec, NeedMoreCoefficients

__all__ = [
    "RecognitionFailed", "UnsupportedLevel", "SelectionReport", "select_spec", "sym2_selected",
    "conv_selected", "petersson_norm", "lalg_sym2", "lalg_conv", "lalg_sym2_numeric",
    "lalg_conv_numeric", "gauss_sum", "removed_euler_factor", "sym2_twist_for",
    "required_terms", "SYM2_CONDUCTORS", "CONV_CONDUCTORS", "SELECTION_DIGITS",
]

log = logging.getLogger(__name__)

SELECTION_DIGITS = 30


class RecognitionFailed(ArithmeticError):
    def __init__(self, msg: str, value=None):
        super().__init__(msg)
        self.value = value


class UnsupportedLevel(ValueError):
    pass


@dataclass
class SelectionReport:
    chosen: LFunctionSpec | None
    probe: object
    rows: list = field(default_factory=list)  # (conductor, gamma_shifts, root number or None, residual)

    def lines(self) -> list[str]:
        out = []
        for N, shifts, eps, res in self.rows:
            tag = "selected" if self.chosen is not None and (N, shifts) == (
                self.chosen.conductor, self.chosen.gamma_shifts) else "rejected"
            g = " ".join(f"{k}(s{'+' if s >= 0 else ''}{s})" for k, s in shifts)
            e = "-" if eps is None else f"{complex(eps).real:+.0f}" if abs(complex(eps).imag) < 1e-9 else str(eps)
            out.append(f"N={N:<3} {g:<22} eps={e:<3} residual={mpmath.nstr(res, 3):<10} {tag}")
        return out


def select_spec(candidates, probe=None, digits: int = SELECTION_DIGITS,
                threshold_digits: int | None = None) -> tuple[LFunctionSpec, SelectionReport]:
    """Pick the unique candidate with a unit root number and tiny residual."""
    threshold = mpmath.mpf(10) ** (-(threshold_digits or digits - 8))
    report = SelectionReport(None, probe)
    accepted = []
    for cand in candidates:
        p = probe if probe is not None else mpmath.mpf(cand.k) / 2 + mpmath.mpf("0.37")
        report.probe = p
        try:
            eps = solve_root_number(cand, digits=digits)
        except Inconsistent as exc:
            report.rows.append((cand.conductor, cand.gamma_shifts, None, exc.residual))
            continue
        spec = cand.replace(root_number=eps)
        res = fe_residual(spec, p, digits)
        report.rows.append((cand.conductor, cand.gamma_shifts, eps, res))
        if res < threshold:
            accepted.append(spec)
    if len(accepted) != 1:
        raise Inconsistent(
            f"{len(accepted)} candidates pass the functional-equation test:\n  "
            + "\n  ".join(report.lines()),
            residual=None,
        )
    report.chosen = accepted[0]
    for line in report.lines():
        log.info("%s: %s", accepted[0].name, line)
    return accepted[0], report


def _form_key(f: QExpansion):
    return (f.name, f.weight, f.level, f.character, f.coeffs[: min(len(f.coeffs), 40)])


# selections are cached by form identity; only the functional-equation data is
# reused, the returned spec always reads the coefficients of the forms passed in
_SELECTED: dict = {}


def _rebind(spec: LFunctionSpec, chosen: LFunctionSpec) -> LFunctionSpec:
    return spec.replace(conductor=chosen.conductor, gamma_shifts=chosen.gamma_shifts,
                        root_number=chosen.root_number)


def sym2_selected(f: QExpansion, twist: DirichletCharacter | None = None):
    """Symmetric square of f twisted by the primitive character attached to
    `twist`, with its functional-equation data selected numerically."""
    prim = None if twist is None or twist.disc is None else twist.primitive()
    key = ("sym2", _form_key(f), prim)
    hit = _SELECTED.get(key)
    if hit is None:
        cands = [sym2_spec(f, prim, shift_offset=off, conductor=N)
                 for off in (1, 2) for N in sym2_conductors(prim.conductor if prim else 1)]
        base = cands[0]
        cands = [c.replace(_cache=base._cache) for c in cands]
        hit = select_spec(cands)
        _SELECTED[key] = hit
    chosen, report = hit
    return _rebind(sym2_spec(f, prim), chosen), report


def conv_selected(f: QExpansion, g: QExpansion):
    key = ("conv", _form_key(f), _form_key(g))
    hit = _SELECTED.get(key)
    if hit is None:
        base = conv_spec(f, g)
        cands = [base.replace(conductor=N, root_number=None) for N in conv_conductors(g.level)]
        hit = select_spec(cands)
        _SELECTED[key] = hit
    chosen, report = hit
    return _rebind(conv_spec(f, g), chosen), report


def required_terms(spec: LFunctionSpec, s, digits: int) -> int:
    """Number of Dirichlet coefficients the evaluator will use at s."""
    return plan_terms(spec, s, digits).n_max


def removed_euler_factor(spec: LFunctionSpec, p: int, s: int) -> Fraction:
    """P_p(p^-s) for the Euler polynomial of spec at p: multiplying L(s) by this
    removes the Euler factor at p."""
    x = Fraction(1, p**s) if s >= 0 else Fraction(p ** (-s))
    return sum((Fraction(c) * x**i for i, c in enumerate(spec.euler_poly(p))), Fraction(0))


# ---------------------------------------------------------------------------
# Petersson norm


_NORMS: dict = {}


def petersson_norm(f: QExpansion, digits: int = 150, calibration=Fraction(1)):
    """<f, f> for a level-one eigenform of weight k, from
    <f, f> = Gamma(k) L(Sym^2 f, k) / (2^(2k-1) pi^(k+1)), times `calibration`."""
    if f.level != 1:
        raise UnsupportedLevel(f"petersson_norm needs level 1, got level {f.level}")
    if not f.is_normalized():
        # bilinearity: <c f, c f> = c^2 <f, f>
        c = Fraction(f.coeffs[1])
        base = petersson_norm(f.scaled(1 / c), digits, calibration)
        with mpmath.workdps(digits + 10):
            return base * (mpmath.mpf(c.numerator) / c.denominator) ** 2
    calibration = Fraction(calibration)
    key = (_form_key(f), digits, calibration)
    if key in _NORMS:
        return _NORMS[key]
    k = f.weight
    spec, _ = sym2_selected(f)
    val = afe_eval(spec, k, digits).value
    with mpmath.workdps(digits + 10):
        norm = mpmath.gamma(k) * val / (mpmath.mpf(2) ** (2 * k - 1) * mpmath.pi ** (k + 1))
        norm *= mpmath.mpf(calibration.numerator) / calibration.denominator
        norm = +norm
    _NORMS[key] = norm
    return norm


# ---------------------------------------------------------------------------
# Gauss sums


def gauss_sum(chi: DirichletCharacter) -> ExactScalar:
    """Gauss sum of the odd quadratic character mod 3: i sqrt(3)."""
    if chi.disc != -3 or chi.modulus != 3:
        raise ValueError("gauss_sum is implemented for the character (-3/.) mod 3 only")
    return ExactScalar(1, 1, 3, 0, True)


def _i_power(e: int) -> ExactScalar:
    e %= 4
    return {0: ExactScalar(1), 1: ExactScalar(1, 1, 0, 0, True), 2: ExactScalar(-1),
            3: ExactScalar(-1, 1, 0, 0, True)}[e]


# ---------------------------------------------------------------------------
# algebraic parts


def _recognize(x, digits: int, what: str, max_den_digits: int | None = None) -> Fraction:
    wd = digits - 10
    mdd = max((wd - 40) // 2, 10)
    if max_den_digits is not None:
        mdd = min(mdd, max_den_digits)
    q = cf_recognize(x, wd, mdd)
    if q is None:
        raise RecognitionFailed(f"{what}: no stable rational at {digits} digits "
                                f"(value {mpmath.nstr(x, 30)})", value=x)
    return q


def sym2_twist_for(field_disc: int, j: int) -> DirichletCharacter:
    """chi_K^(j+1): the Kronecker character for even j, trivial mod |disc| for odd j."""
    chi = DirichletCharacter.kronecker(field_disc)
    return chi.power(j + 1)


def lalg_sym2_numeric(f: QExpansion, j: int, digits: int = 150, field_disc: int = -3,
                      calibration=Fraction(1)):
    """L(j+k-1, Sym^2 f x chi_K^(j+1)) / (pi^(k-1+2j) <f, f>) as a float, where
    chi_K^(j+1) is imprimitive (Euler factors at |disc| removed) for odd j."""
    k = f.weight
    if not 1 <= j <= k - 1:
        raise NotCritical(f"j = {j} outside the critical range 1..{k - 1}")
    s = j + k - 1
    twist = sym2_twist_for(field_disc, j)
    spec, _ = sym2_selected(f, twist)
    value = afe_eval(spec, s, digits).value
    correction = Fraction(1)
    for p, _ in factor(twist.modulus):
        if twist.conductor % p:
            correction *= removed_euler_factor(spec, p, s)
    norm = petersson_norm(f, digits, calibration)
    with mpmath.workdps(digits + 10):
        c = mpmath.mpf(correction.numerator) / correction.denominator
        return +(value * c / (mpmath.pi ** (k - 1 + 2 * j) * norm))


def lalg_sym2(f: QExpansion, j: int, digits: int = 150, field_disc: int = -3,
              calibration=Fraction(1), max_den_digits: int | None = None) -> ExactScalar:
    x = lalg_sym2_numeric(f, j, digits, field_disc, calibration)
    return ExactScalar.from_fraction(_recognize(x, digits, f"L_alg Sym2 j={j}", max_den_digits))


def conv_normalizer(f: QExpansion, g: QExpansion, j: int) -> ExactScalar:
    """pi^(2j+1-l') G(chi) i^(l+l'-2j) with l, l' the weights of f and g."""
    l, lp = f.weight, g.weight
    chi = g.character.primitive()
    return ExactScalar(1, 1, 0, 2 * j + 1 - lp) * gauss_sum(chi) * _i_power(l + lp - 2 * j)


def lalg_conv_numeric(f: QExpansion, g: QExpansion, j: int, digits: int = 150,
                      calibration=Fraction(1)):
    l, lp = f.weight, g.weight
    if not lp <= j < l:
        raise NotCritical(f"j = {j} outside the critical range {lp} <= j < {l}")
    spec, _ = conv_selected(f, g)
    value = afe_eval(spec, j, digits).value
    norm = petersson_norm(f, digits, calibration)
    d = conv_normalizer(f, g, j)
    with mpmath.workdps(digits + 10):
        out = value / (d.to_mpf() * norm)
        if isinstance(out, mpmath.mpc):
            if abs(out.imag) > abs(out) * mpmath.mpf(10) ** (-(digits - 20)):
                raise RecognitionFailed(f"L_alg conv j={j} is not real: {mpmath.nstr(out, 10)}", out)
            out = out.real
        return +out


def lalg_conv(f: QExpansion, g: QExpansion, j: int, digits: int = 150,
              calibration=Fraction(1), max_den_digits: int | None = None) -> ExactScalar:
    x = lalg_conv_numeric(f, g, j, digits, calibration)
    return ExactScalar.from_fraction(_recognize(x, digits, f"L_alg conv j={j}", max_den_digits))


def check_coefficients(spec: LFunctionSpec, s, digits: int) -> None:
    """Raise NeedMoreCoefficients early when the form is too short for (s, digits)."""
    need = required_terms(spec, s, digits)
    if spec.max_prime is not None and need > spec.max_prime:
        raise NeedMoreCoefficients(f"{spec.name}: {need} coefficients needed, "
                                   f"{spec.max_prime} available")

