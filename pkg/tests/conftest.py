"""Shared fixtures: tolerances, the NNGQC family corpus and a seeded RNG."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from geomgate.experiments import REFERENCE_OMEGA0, u1_family, u2_family
from geomgate.pulses import NngqcFamily

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

OMEGA0 = REFERENCE_OMEGA0
TAU = np.pi / OMEGA0


def random_families(seed: int = 20240611, count: int = 3) -> list[NngqcFamily]:
    """Seeded random NNGQC families with the jump instant strictly inside the pulse."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        area = rng.uniform(0.6, 2.5) * np.pi
        chi0 = rng.uniform(0.1, 0.9) * area
        phi0, phi1 = rng.uniform(-np.pi, np.pi, size=2)
        out.append(NngqcFamily(OMEGA0, chi0, phi0, phi1, area / OMEGA0))
    return out


def nngqc_corpus() -> dict[str, NngqcFamily]:
    corpus = {"U1": u1_family(OMEGA0), "U2": u2_family(OMEGA0)}
    corpus.update({f"random{k}": f for k, f in enumerate(random_families())})
    return corpus


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def haar_unitary(rng, d=2):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def close_up_to_phase(u, v, tol):
    from geomgate.gates import phase_insensitive_distance
    return phase_insensitive_distance(u, v) <= tol


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} | {detail}")
