"""Certification of congruence primes between an Ikeda lift and forms that
are not lifts.

For each candidate prime ell the pipeline checks, in order, the size bound,
the coprimality conditions, the range of the Hecke character exponent, the
unit-group condition, that the unit-side product U is an ell-unit, that the
depth b = val_ell(V) is positive, and that some Fourier coefficient of the
lift is nonzero mod ell.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .exact import (DirichletCharacter, ExactScalar, dirichlet_L_critical, factor, is_prime,
                    val_p)
from .heckechar import HeckeCharSpec, ImagQuadField, cm_form, shift_identity_points, unit_group_order_mod
from .ikeda import LiftContext, Unsupported, nonvanishing_sweep, std_L_points
from .lseries.builders import sym2_conductors
from .lseries.core import LFunctionSpec
from .lseries.afe import plan_terms
from .lseries.lalg import lalg_conv, lalg_sym2, sym2_twist_for
from .qexp import QExpansion, dim_cusp_forms_level1, level1_eigenform

__all__ = [
    "CertConfig", "ConfigInvalid", "EtaNotUnit", "Check", "CertificationReport", "Factor",
    "ProductResult", "CertificationRun", "terms_needed", "compute_V", "compute_U", "check_hypotheses",
    "congruence_primes", "certify", "build_forms", "SEC9",
]

log = logging.getLogger(__name__)


class ConfigInvalid(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class EtaNotUnit(ValueError):
    pass


@dataclass(frozen=True)
class CertConfig:
    disc: int = -3
    n: int = 5
    k: int = 13
    m: int = 2
    t: int = -24
    precision_digits: int = 150
    prime_bound: int = 10_000
    denominator_digit_bound: int = 60
    T: int = 1
    terms: int | None = None
    threads: int = 1

    def __post_init__(self):
        errors = self.problems()
        if errors:
            raise ConfigInvalid(errors)

    def problems(self) -> list[str]:
        out = []
        field_ = ImagQuadField(self.disc)  # raises UnsupportedField
        if self.n not in (2 * self.m, 2 * self.m + 1):
            out.append(f"n = {self.n} must be 2m or 2m+1 (m = {self.m})")
        if self.n > 2 * self.k - 1:
            out.append(f"n = {self.n} exceeds 2k-1 = {2 * self.k - 1}")
        lo, hi = -2 * self.k - 2 * self.m, min(-6, -4 * self.n)
        if not lo <= self.t < hi:
            out.append(f"t = {self.t} outside {lo} <= t < {hi}")
        if self.t % field_.unit_order:
            out.append(f"unit order {field_.unit_order} does not divide t = {self.t}")
        if self.precision_digits < 60:
            out.append(f"precision_digits = {self.precision_digits} < 60")
        if self.T < 1:
            out.append("T must be a positive integer")
        if self.n % 4 == 2 and self.T == 1:
            out.append("n = 2 mod 4 needs T = p from an explicit gamma(h) = -p witness")
        if self.prime_bound < 2:
            out.append("prime_bound must be at least 2")
        if self.denominator_digit_bound < 10:
            out.append("denominator_digit_bound must be at least 10")
        if self.terms is not None and self.terms < 50:
            out.append("terms must be at least 50")
        if self.threads < 1:
            out.append("threads must be positive")
        return out

    @property
    def field(self) -> ImagQuadField:
        return ImagQuadField(self.disc)

    @property
    def u(self) -> int:
        """Infinity-type exponent of the character attached to the CM form g."""
        return -2 * self.k - 2 * self.m - self.t

    @property
    def lift(self) -> LiftContext:
        return LiftContext(self.n, self.m, self.k, self.disc)

    def bc_points(self) -> list[Fraction]:
        return std_L_points(self.lift, Fraction(2 * self.n) + Fraction(self.t, 2))

    def conv_points(self) -> list[int]:
        pts = shift_identity_points(self.u, self.bc_points())
        return [int(p) for p in pts]

    def echo(self) -> dict:
        """Parameters that determine the result (thread count excluded)."""
        out = asdict(self)
        out.pop("threads")
        return out


SEC9 = CertConfig()


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class CertificationReport:
    ell: int
    checks: list = field(default_factory=list)
    depth_b: int = 0
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return all(c.passed for c in self.checks) and self.depth_b >= 1

    @property
    def status(self) -> str:
        if self.certified:
            return "Certified"
        failed = next((c for c in self.checks if not c.passed), None)
        return f"Rejected({failed.name if failed else 'b < 1'})"

    def as_dict(self) -> dict:
        return {
            "ell": self.ell,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "depth": self.depth_b,
            "status": self.status,
            "notes": list(self.notes),
        }


@dataclass
class Factor:
    label: str
    value: ExactScalar

    def as_dict(self) -> dict:
        v = self.value
        return {"label": self.label, "value": str(v), "factored": v.factored()}


@dataclass
class ProductResult:
    value: ExactScalar
    factors: list

    def val(self, ell: int):
        return self.value.val(ell)

    def as_dict(self) -> dict:
        q = self.value.rational
        return {
            "value": str(self.value),
            "num_factors": [[p, e] for p, e in factor(abs(q.numerator))] if q else [],
            "den_factors": [[p, e] for p, e in factor(q.denominator)],
            "sign": -1 if q < 0 else 1,
            "sqrt": self.value.sqrt_disc,
        }


# ---------------------------------------------------------------------------
# forms and L-value evaluation


def _meta_spec(name, degree, conductor, shifts, weight) -> LFunctionSpec:
    return LFunctionSpec(name, degree, conductor, shifts, weight, local_factor=lambda p: (1,))


def terms_needed(config: CertConfig) -> int:
    """Coefficient count covering every evaluation in the run, using the
    largest candidate conductor for each L-function."""
    w = 2 * config.k
    D = config.field.D
    digits = config.precision_digits
    need = 0
    for N in sym2_conductors(D):
        for off in (1, 2):
            spec = _meta_spec("sym2", 3, N, (("C", 0), ("R", -w + off)), 2 * w - 2)
            for s in [w] + [j + w - 1 for j in range(2, config.n + 1)]:
                need = max(need, plan_terms(spec, s, digits).n_max)
    lp = -config.u + 1
    for N in (D, D * D):
        spec = _meta_spec("conv", 4, N, (("C", 0), ("C", -(lp - 1))), w + lp - 2)
        for j in config.conv_points():
            need = max(need, plan_terms(spec, j, digits).n_max)
    return int(need * 1.05) + 10


def build_forms(config: CertConfig) -> tuple[QExpansion, QExpansion]:
    """The eigenform phi of weight 2k (level one) and the CM form g."""
    if config.n % 2 == 0:
        raise Unsupported("even n needs a form of level D_K; only the level-one case is automated")
    w = 2 * config.k
    if dim_cusp_forms_level1(w) != 1:
        raise EtaNotUnit(f"S_{w}(SL_2(Z)) has dimension {dim_cusp_forms_level1(w)}; the congruence "
                         f"module generator is only known to be a unit in dimension 1")
    N = config.terms or terms_needed(config)
    phi = level1_eigenform(w, N)
    if config.u >= 0:
        raise ValueError(f"u = {config.u} gives no cusp form")
    g = cm_form(HeckeCharSpec(config.field, -config.u), N)
    return phi, g


def _eval_task(task):
    kind, j, phi, g, digits, disc, mdd = task
    if kind == "sym2":
        return lalg_sym2(phi, j, digits, disc, max_den_digits=mdd)
    return lalg_conv(phi, g, j, digits, max_den_digits=mdd)


def _evaluate(tasks, threads: int):
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_eval_task, tasks))
    return [_eval_task(t) for t in tasks]


def compute_V(config: CertConfig, phi: QExpansion | None = None, g: QExpansion | None = None
              ) -> ProductResult:
    """prod_{i=2..n} L_alg(i + 2k - 1, Sym^2 phi x chi_K^(i+1))."""
    if phi is None:
        phi, g = build_forms(config)
    js = list(range(2, config.n + 1))
    tasks = [("sym2", j, phi, g, config.precision_digits, config.disc,
              config.denominator_digit_bound) for j in js]
    values = _evaluate(tasks, config.threads)
    total = ExactScalar(1)
    factors = []
    w = phi.weight
    for j, v in zip(js, values):
        total = total * v
        tw = sym2_twist_for(config.disc, j)
        factors.append(Factor(f"L_alg({j + w - 1}, Sym2 x {tw.tag()})", v))
    return ProductResult(total, factors)


def compute_U(config: CertConfig, phi: QExpansion | None = None, g: QExpansion | None = None
              ) -> ProductResult:
    """prod_j L_alg(j, phi x g) over the convolution points times
    prod_{i=2..n} L(i, chi_K^i) / pi^i."""
    if phi is None:
        phi, g = build_forms(config)
    js = config.conv_points()
    tasks = [("conv", j, phi, g, config.precision_digits, config.disc,
              config.denominator_digit_bound) for j in js]
    values = _evaluate(tasks, config.threads)
    total = ExactScalar(1)
    factors = []
    for j, v in zip(js, values):
        total = total * v
        factors.append(Factor(f"L_alg({j}, phi x g)", v))
    chi = DirichletCharacter.kronecker(config.disc)
    for i in range(2, config.n + 1):
        d = dirichlet_L_critical(i, chi.power(i)).algebraic()
        total = total * d
        factors.append(Factor(f"L_alg({i}, {chi.power(i).tag()})", d))
    return ProductResult(total, factors)


# ---------------------------------------------------------------------------
# hypotheses


def check_hypotheses(ell: int, config: CertConfig, V: ProductResult, U: ProductResult,
                     phi: QExpansion | None = None) -> CertificationReport:
    rep = CertificationReport(ell)
    fld = config.field
    k, m, n, t = config.k, config.m, config.n, config.t
    bound = 2 * k + 2 * m
    if not is_prime(ell):
        rep.checks.append(Check("ell prime", False, f"{ell} is not prime"))
        return rep

    rep.checks.append(Check("ell > 2k+2m", ell > bound, f"{ell} vs {bound}"))
    bad = 2 * fld.class_number * fld.D  # i(phi) = 1 at level one
    rep.checks.append(Check("ell does not divide 2 h_K D_K i(phi)", bad % ell != 0,
                            f"2*h_K*D_K*i(phi) = {bad}"))
    lo, hi = -2 * k - 2 * m, min(-6, -4 * n)
    ok = lo <= t < hi and t % fld.unit_order == 0
    rep.checks.append(Check("t range", ok, f"{lo} <= {t} < {hi}, unit order {fld.unit_order}"))
    N = config.T * fld.D * fld.class_number  # unramified character: Nm(cond) = 1
    units = unit_group_order_mod(fld, N)
    v = val_p(Fraction(config.T * units), ell)
    rep.checks.append(Check("val(T #(O_K/N O_K)^x) = 0", v == 0,
                            f"N = {N}, T = {config.T}, #(O_K/N)^x = {units}, val = {v}"))
    vu = U.val(ell)
    rep.checks.append(Check("val(U) = 0", vu == 0, f"val_{ell}(U) = {vu}"))
    b = V.val(ell)
    rep.depth_b = int(b) if Fraction(b).denominator == 1 and b > 0 else 0
    rep.checks.append(Check("b = val(V) >= 1", b >= 1, f"val_{ell}(V) = {b}"))
    if phi is not None and (2 * fld.D) % ell:
        sw = nonvanishing_sweep(phi, ell, config.prime_bound, config.disc)
        rep.checks.append(Check("lift coefficient nonzero mod ell", sw.found, sw.message()))
        if phi.truncation >= ell:
            a = phi.coeffs[ell] % ell
            rep.notes.append(f"ordinary at {ell}: {'yes' if a else 'no'} (a({ell}) = {a} mod {ell})")
    else:
        rep.checks.append(Check("lift coefficient nonzero mod ell", False,
                                "sweep not run" if phi is None else f"{ell} divides 2 D_K"))
    rep.notes.append("eta_phi is a unit: the cusp form space is one-dimensional")
    rep.notes.append("the volume constant A_3 is not defined precisely enough to check")
    return rep


@dataclass
class CertificationRun:
    config: CertConfig
    V: ProductResult
    U: ProductResult
    reports: list

    @property
    def certified(self) -> list[int]:
        return [r.ell for r in self.reports if r.certified]

    def as_dict(self) -> dict:
        return {
            "config_echo": self.config.echo(),
            "lalg_sym2": [f.as_dict() for f in self.V.factors],
            "lalg_conv": [f.as_dict() for f in self.U.factors if "phi x g" in f.label],
            "dirichlet": [f.as_dict() for f in self.U.factors if "phi x g" not in f.label],
            "V": self.V.as_dict(),
            "U": self.U.as_dict(),
            "reports": [r.as_dict() for r in self.reports],
            "certified": self.certified,
        }


def candidate_primes(config: CertConfig, V: ProductResult) -> list[int]:
    num = abs(V.value.rational.numerator)
    bound = 2 * config.k + 2 * config.m
    return [p for p, _ in factor(num) if p > bound] if num else []


def congruence_primes(config: CertConfig, phi=None, g=None) -> CertificationRun:
    if phi is None:
        phi, g = build_forms(config)
    V = compute_V(config, phi, g)
    U = compute_U(config, phi, g)
    reports = [check_hypotheses(ell, config, V, U, phi) for ell in candidate_primes(config, V)]
    return CertificationRun(config, V, U, sorted(reports, key=lambda r: r.ell))


def certify(config: CertConfig = SEC9) -> CertificationRun:
    return congruence_primes(config)


def default_threads() -> int:
    return os.cpu_count() or 1

