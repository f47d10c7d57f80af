"""Command-line front end: `congr <subcommand> ...`.

Exit codes: 0 on success (for `certify`, at least one prime certified),
1 on computation errors, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

import mpmath

from . import certify as cert
from .exact import DirichletCharacter, dirichlet_L_critical
from .heckechar import HeckeCharSpec, ImagQuadField, UnitObstruction, UnsupportedField, cm_form
from .ikeda import LiftContext, lift_coeff, nonvanishing_sweep
from .lseries import afe_eval, dirichlet_spec, zeta_spec
from .lseries.lalg import conv_selected, lalg_conv, lalg_sym2, sym2_selected, sym2_twist_for
from .qexp import delta, eisenstein, level1_eigenform

__all__ = ["main", "run", "load_config", "emit_report", "RunConfig", "UsageError", "PRESETS"]

log = logging.getLogger("congr")

MIN_DIGITS = 60


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    config_path: str | None = None
    precision_digits: int = 150
    threads: int = 1
    output: str = "text"


# ---------------------------------------------------------------------------
# configuration files

# section -> allowed keys (CertConfig field names)
CONFIG_SCHEMA = {
    "field": {"disc"},
    "lift": {"n", "m", "k"},
    "character": {"t"},
    "precision": {"precision_digits", "denominator_digit_bound", "terms"},
    "checks": {"prime_bound", "T"},
}

PRESETS = {"sec9": "sec9.toml"}


def _preset_text(name: str) -> str:
    return resources.files("congr.presets").joinpath(PRESETS[name]).read_text()


def _resolve_config(path: str) -> tuple[str, str]:
    p = Path(path)
    if p.is_file():
        return p.read_text(), str(p)
    stem = p.name.removesuffix(".toml")
    if stem in PRESETS and not p.parent.parts:
        return _preset_text(stem), f"preset:{stem}"
    raise UsageError(f"config file not found: {path}")


def parse_config_text(text: str, overrides: dict | None = None) -> cert.CertConfig:
    """Validate sectioned key = value text against the schema; every problem
    is reported at once."""
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise cert.ConfigInvalid([f"malformed config: {exc}"]) from exc
    errors = []
    values = {}
    for section, body in data.items():
        if section not in CONFIG_SCHEMA:
            errors.append(f"unknown section [{section}]")
            continue
        if not isinstance(body, dict):
            errors.append(f"[{section}] must be a table")
            continue
        for key, v in body.items():
            if key not in CONFIG_SCHEMA[section]:
                errors.append(f"unknown key {section}.{key}")
            elif isinstance(v, bool) or not isinstance(v, int):
                errors.append(f"{section}.{key} must be an integer, got {v!r}")
            else:
                values[key] = v
    values.update(overrides or {})
    if errors:
        raise cert.ConfigInvalid(errors)
    return cert.CertConfig(**values)


def load_config(path: str, overrides: dict | None = None) -> cert.CertConfig:
    text, _ = _resolve_config(path)
    return parse_config_text(text, overrides)


# ---------------------------------------------------------------------------
# report emission


def emit_report(run: cert.CertificationRun, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(run.as_dict(), sort_keys=True, indent=2) + "\n").encode()
    lines = [f"config: {json.dumps(run.config.echo(), sort_keys=True)}", "", "Sym^2 algebraic parts:"]
    lines += [f"  {f.label} = {f.value.factored()}" for f in run.V.factors]
    lines += ["", "Convolution and Dirichlet algebraic parts:"]
    lines += [f"  {f.label} = {f.value.factored()}" for f in run.U.factors]
    lines += ["", f"V = {run.V.value.factored()}", f"U = {run.U.value.factored()}", ""]
    for r in run.reports:
        lines.append(f"ell = {r.ell}: {r.status}, depth b = {r.depth_b}")
        for c in r.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        for n in r.notes:
            lines.append(f"  note: {n}")
    lines += ["", f"certified: {run.certified}"]
    return ("\n".join(lines) + "\n").encode()


# ---------------------------------------------------------------------------
# subcommands


def _form(name: str, terms: int):
    if name == "s26":
        return level1_eigenform(26, terms)
    if name == "delta":
        return delta(terms)
    if name in ("e4", "e6", "e8", "e10", "e12", "e14"):
        return eisenstein(int(name[1:]), terms)
    if name.startswith("f") and name[1:].isdigit():
        return level1_eigenform(int(name[1:]), terms)
    raise UsageError(f"unknown form {name!r} (s26, delta, e4..e14, f<weight>)")


def cmd_qexp(args, rc: RunConfig, out) -> int:
    f = _form(args.form, max(args.terms, 6))
    start = 1 if f.is_cuspidal() else 0
    if rc.output == "json":
        out.write(json.dumps({"form": args.form, "weight": f.weight,
                              "coeffs": [str(c) for c in f.coeffs[start:args.terms + start]]}) + "\n")
        return 0
    for n in range(start, start + args.terms):
        out.write(f"{f.coeffs[n]}\n")
    return 0


def cmd_cmform(args, rc: RunConfig, out) -> int:
    field_ = ImagQuadField(args.disc)
    g = cm_form(HeckeCharSpec(field_, -args.u), args.terms)
    if rc.output == "json":
        out.write(json.dumps({"weight": g.weight, "level": g.level,
                              "coeffs": list(g.coeffs[1:])}) + "\n")
        return 0
    out.write(f"# weight {g.weight}, level {g.level}, character {g.character.tag()}\n")
    for n in range(1, args.terms + 1):
        out.write(f"{n} {g.coeffs[n]}\n")
    return 0


LVALUE_SCHEMA = {"kind", "disc", "form", "twist_disc", "u", "terms"}


def _spec_from_file(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"spec file not found: {path}")
    try:
        data = tomllib.loads(p.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"malformed spec file: {exc}") from exc
    unknown = sorted(set(data) - LVALUE_SCHEMA)
    if unknown:
        raise UsageError(f"unknown keys in spec file: {', '.join(unknown)}")
    kind = data.get("kind")
    if kind == "zeta":
        return zeta_spec()
    if kind == "dirichlet":
        return dirichlet_spec(DirichletCharacter.kronecker(data["disc"]))
    terms = data.get("terms", 3000)
    if kind == "sym2":
        f = _form(data.get("form", "s26"), terms)
        twist = data.get("twist_disc")
        return sym2_selected(f, None if twist is None else DirichletCharacter.kronecker(twist))[0]
    if kind == "conv":
        f = _form(data.get("form", "s26"), terms)
        g = cm_form(HeckeCharSpec(ImagQuadField(data.get("disc", -3)), -data.get("u", -6)), terms)
        return conv_selected(f, g)[0]
    raise UsageError(f"spec kind must be zeta, dirichlet, sym2 or conv, got {kind!r}")


def cmd_lvalue(args, rc: RunConfig, out) -> int:
    s = mpmath.mpmathify(args.s)
    spec = _spec_from_file(args.spec)
    v = afe_eval(spec, s, rc.precision_digits)
    if rc.output == "json":
        out.write(json.dumps({"spec": spec.name, "s": args.s, "value": mpmath.nstr(v.value, rc.precision_digits),
                              "abs_error_bound": mpmath.nstr(v.abs_error_bound, 5),
                              "terms": v.terms}, sort_keys=True) + "\n")
        return 0
    out.write(f"{spec.name}: {v}\n")
    return 0


def cmd_lalg(args, rc: RunConfig, out) -> int:
    disc = args.disc
    if args.which == "dirichlet":
        chi = DirichletCharacter.kronecker(disc).power(args.j)
        val = dirichlet_L_critical(args.j, chi).algebraic()
        label = f"L({args.j}, {chi.tag()}) / pi^{args.j}"
    else:
        f = level1_eigenform(args.weight, args.terms)
        if args.which == "sym2":
            val = lalg_sym2(f, args.j, rc.precision_digits, disc)
            label = f"L_alg({args.j + args.weight - 1}, Sym2 x {sym2_twist_for(disc, args.j).tag()})"
        else:
            g = cm_form(HeckeCharSpec(ImagQuadField(disc), -args.u), args.terms)
            val = lalg_conv(f, g, args.j, rc.precision_digits)
            label = f"L_alg({args.j}, f x g)"
    if rc.output == "json":
        out.write(json.dumps({"label": label, "value": str(val), "factored": val.factored()},
                             sort_keys=True) + "\n")
    else:
        out.write(f"{label} = {val.factored()}\n")
    return 0


def cmd_ikeda(args, rc: RunConfig, out) -> int:
    ctx = LiftContext(args.n, args.m, args.k, args.disc)
    f = level1_eigenform(ctx.form_weight, args.terms)
    if args.action == "coeff":
        c = lift_coeff(args.gamma, ctx, f)
        out.write(f"c(gamma = {args.gamma}) = {c}\n")
        return 0
    res = nonvanishing_sweep(f, args.ell, args.prime_bound, args.disc)
    out.write(res.message() + "\n")
    return 0 if res.found else 1


def cmd_certify(args, rc: RunConfig, out) -> int:
    overrides = {"precision_digits": rc.precision_digits, "threads": rc.threads}
    if args.terms is not None:
        overrides["terms"] = args.terms
    config = load_config(args.config, overrides)
    run = cert.congruence_primes(config)
    if args.json:
        Path(args.json).write_bytes(emit_report(run, "json"))
    out.write(emit_report(run, "json" if rc.output == "json" and not args.json else "text").decode())
    return 0 if run.certified else 1


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS,
                        help="working precision (>= 60)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    p = _Parser(prog="congr", description="Congruence primes for Ikeda lifts on U(n, n).",
                parents=[common])
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub_add = sub.add_parser
    sub.add_parser = lambda *a, **kw: sub_add(*a, parents=[common], **kw)

    q = sub.add_parser("qexp", help="q-expansion coefficients")
    q.add_argument("--form", default="s26")
    q.add_argument("--terms", type=int, default=10)

    c = sub.add_parser("cmform", help="CM form attached to an unramified Hecke character")
    c.add_argument("--disc", type=int, default=-3)
    c.add_argument("--u", type=int, default=-6)
    c.add_argument("--terms", type=int, default=20)

    lv = sub.add_parser("lvalue", help="evaluate an L-function from a spec file")
    lv.add_argument("--spec", required=True)
    lv.add_argument("--s", required=True)

    la = sub.add_parser("lalg", help="algebraic part of a critical value")
    la.add_argument("--which", choices=("sym2", "conv", "dirichlet"), required=True)
    la.add_argument("--j", type=int, required=True)
    la.add_argument("--weight", type=int, default=26)
    la.add_argument("--disc", type=int, default=-3)
    la.add_argument("--u", type=int, default=-6)
    la.add_argument("--terms", type=int, default=4500)

    ik = sub.add_parser("ikeda", help="lift coefficients and the non-vanishing sweep")
    ik.add_argument("action", choices=("coeff", "sweep"))
    ik.add_argument("--gamma", type=int, default=-5)
    ik.add_argument("--ell", type=int, default=31)
    ik.add_argument("--prime-bound", type=int, default=10_000)
    ik.add_argument("--n", type=int, default=5)
    ik.add_argument("--m", type=int, default=2)
    ik.add_argument("--k", type=int, default=13)
    ik.add_argument("--disc", type=int, default=-3)
    ik.add_argument("--terms", type=int, default=1000)

    ce = sub.add_parser("certify", help="certify congruence primes")
    ce.add_argument("--config", default="sec9", help="config file or preset name (sec9)")
    ce.add_argument("--json", help="write the JSON report here")
    ce.add_argument("--terms", type=int, default=None)
    return p


def _env_int(name: str) -> int | None:
    v = os.environ.get(name)
    if v is None or v == "":
        return None
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {v!r}") from None


def _first(*values):
    return next(v for v in values if v is not None)


COMMANDS = {"qexp": cmd_qexp, "cmform": cmd_cmform, "lvalue": cmd_lvalue, "lalg": cmd_lalg,
            "ikeda": cmd_ikeda, "certify": cmd_certify}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        digits = _first(getattr(args, "digits", None), _env_int("CONGR_DIGITS"), 150)
        threads = _first(getattr(args, "threads", None), _env_int("CONGR_THREADS"),
                         cert.default_threads())
        fmt = getattr(args, "format", "text")
        verbose = getattr(args, "verbose", 0)
        if digits < MIN_DIGITS:
            raise UsageError(f"precision must be at least {MIN_DIGITS} digits, got {digits}")
        if threads < 1:
            raise UsageError("threads must be positive")
        logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2),
                            format="%(levelname)s %(name)s: %(message)s", stream=err)
        rc = RunConfig(args.subcommand, getattr(args, "config", None), digits, threads, fmt)
        return COMMANDS[args.subcommand](args, rc, out)
    except (UsageError, cert.ConfigInvalid, UnsupportedField, UnitObstruction) as exc:
        err.write(f"congr: error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # computation errors
        err.write(f"congr: {type(exc).__name__}: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())

