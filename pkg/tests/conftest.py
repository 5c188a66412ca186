import pytest

from mixedfrac.green_kernel import GreenSpec
from mixedfrac.spectral import build_quadrature, compute_basis
from mixedfrac.temporal import TemporalConfig


@pytest.fixture(scope="session")
def basis_k1():
    return compute_basis(GreenSpec(1, 0.0), build_quadrature(128), 20)


@pytest.fixture(scope="session")
def reference_temporal():
    return TemporalConfig(0.5, 1.5, 1.0, 1.0)


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """``record(label, ok, detail)`` logs one PASS/FAIL line and returns ``ok``."""

    def record(label, ok, detail=""):
        line = f"ACCEPTANCE {label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: s.split(":")[0]):
            terminalreporter.write_line(line)
