import json
import time
from fractions import Fraction

import pytest

import acceptance_log
from congr import cli
from congr.certify import CertConfig, build_forms, compute_U, compute_V
from congr.heckechar import HeckeCharSpec, ImagQuadField, cm_form
from congr.qexp import newform_s26


@pytest.fixture(scope="session")
def phi():
    return newform_s26(1000)


@pytest.fixture(scope="session")
def g():
    return cm_form(HeckeCharSpec(ImagQuadField(-3), 6), 1000)


@pytest.fixture(scope="session")
def phi_long():
    return newform_s26(10_000)


@pytest.fixture(scope="session")
def g_long():
    return cm_form(HeckeCharSpec(ImagQuadField(-3), 6), 10_000)


@pytest.fixture(scope="session")
def sec9_report(tmp_path_factory):
    """The preset certification run through the CLI: (exit code, JSON bytes, stdout)."""
    import io

    out_path = tmp_path_factory.mktemp("sec9") / "r.json"
    buf, err = io.StringIO(), io.StringIO()
    start = time.perf_counter()
    code = cli.run(["certify", "--config", "sec9.toml", "--json", str(out_path), "--threads", "1"],
                   out=buf, err=err)
    acceptance_log.TIMINGS["sec9 certify"] = time.perf_counter() - start
    return code, out_path.read_bytes(), buf.getvalue()


def _table(factors):
    out = {}
    for f in factors:
        out[f["label"]] = Fraction(f["value"].split("*")[0])
    return out


@pytest.fixture(scope="session")
def sec9_tables(sec9_report):
    data = json.loads(sec9_report[1])
    return _table(data["lalg_sym2"]), _table(data["lalg_conv"])


@pytest.fixture(scope="session")
def tables_200():
    start = time.perf_counter()
    config = CertConfig(precision_digits=200)
    phi, g = build_forms(config)
    V = compute_V(config, phi, g)
    U = compute_U(config, phi, g)
    sym2 = {f.label: f.value.rational for f in V.factors}
    conv = {f.label: f.value.rational for f in U.factors if "phi x g" in f.label}
    acceptance_log.TIMINGS["tables at 200 digits"] = time.perf_counter() - start
    return sym2, conv


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_log.lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
