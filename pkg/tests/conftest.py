import functools
import time
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from fhopuc import opuc, szego, weight
from fhopuc.numerics import Precision

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@dataclass
class Case:
    name: str
    spec: weight.WeightSpec
    moments: weight.MomentTable
    state: opuc.OpucState
    data: szego.SzegoData


@functools.lru_cache(maxsize=None)
def build_case(name: str, n_max: int = 201, bits: int = 113) -> Case:
    prec = Precision(bits)
    spec = weight.preset(name)
    mt = weight.moments(spec, n_max + 1, prec)
    st = opuc.levinson(mt, n_max)
    return Case(name, spec, mt, st, szego.build_szego(spec, prec))


@pytest.fixture(scope="session")
def case():
    """Factory for cached 113-bit states: case("fig3") etc."""
    return build_case


_START = {}


def pytest_sessionstart(session):
    _START["t"] = time.time()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
    elapsed = time.time() - _START.get("t", time.time())
    status = "PASS" if elapsed < 300 else "FAIL"
    terminalreporter.write_line(f"suite runtime {elapsed:.0f} s ({status} for the 5 min budget of criterion 10)")
