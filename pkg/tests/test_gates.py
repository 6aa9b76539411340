import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geomgate.gates import (U1, U1_BOUNDARIES, U2, U2_BOUNDARIES, BoundaryValues,
                            DegenerateDecompositionWarning, OrthogonalUnitariesWarning, ZxzAngles,
                            controlled_pair, dg_primitive, dg_sequence, extract_zxz,
                            ideal_two_qubit_target, ngqc_gate, nngqc_gate,
                            phase_insensitive_distance, rotation, rx, rz, zxz_gate)
from geomgate.quantum import I2, SX, SY, SZ, ket, operator_schmidt_weight, unitarity_defect
from conftest import close_up_to_phase, haar_unitary

angle = st.floats(-4 * np.pi, 4 * np.pi, allow_nan=False)
boundaries = st.builds(BoundaryValues, angle, angle, angle, angle, angle)


def test_rotation_convention():
    np.testing.assert_allclose(rx(np.pi), -1j * SX, atol=1e-15)
    np.testing.assert_allclose(rz(np.pi / 2), np.diag(np.exp([-1j * np.pi / 4, 1j * np.pi / 4])))
    np.testing.assert_allclose(rotation((0, 1, 0), 2 * np.pi), -I2, atol=1e-15)


def test_boundary_values_reject_nan():
    with pytest.raises(ValueError):
        BoundaryValues(np.nan, 0, 0, 0, 0)


class TestNngqcGate:
    def test_u1_closed_form(self):
        w = np.exp(1j * np.pi / 4)
        expected = np.array([[w, -w], [np.conj(w), np.conj(w)]]) / np.sqrt(2)
        np.testing.assert_allclose(nngqc_gate(U1_BOUNDARIES), expected, atol=1e-15)

    def test_identity(self):
        np.testing.assert_allclose(nngqc_gate(BoundaryValues(0, 0, 0, 0, 0)), I2, atol=1e-15)

    @pytest.mark.parametrize("phi", [0.3, -1.1, 2.5])
    def test_z_special_case(self, phi):
        # the closed form gives -exp(-i eta_minus Z / 2) with eta_minus = -phi
        u = nngqc_gate(BoundaryValues(np.pi, 0, 0, 0, -phi))
        np.testing.assert_allclose(u, -rz(-phi), atol=1e-14)
        assert close_up_to_phase(u, rz(-phi), 1e-14)

    @pytest.mark.parametrize("chi_minus", [0.4, 1.9])
    def test_x_special_case(self, chi_minus):
        u = nngqc_gate(BoundaryValues(np.pi, 0.7, chi_minus, -np.pi, 0))
        np.testing.assert_allclose(u, -rx(chi_minus), atol=1e-14)

    @given(boundaries)
    def test_unitary(self, b):
        assert unitarity_defect(nngqc_gate(b)) < 1e-13

    def test_unitary_dense_sample(self, rng):
        vals = rng.uniform(-4 * np.pi, 4 * np.pi, size=(10_000, 5))
        worst = max(unitarity_defect(nngqc_gate(BoundaryValues(*v))) for v in vals)
        assert worst < 1e-13


class TestExtract:
    def test_u1(self):
        a = extract_zxz(U1_BOUNDARIES)
        np.testing.assert_allclose([a.theta, a.alpha, a.beta], [np.pi / 2, -np.pi / 2, 0], atol=1e-14)

    def test_u2(self):
        a = extract_zxz(U2_BOUNDARIES)
        np.testing.assert_allclose([a.theta, a.alpha, a.beta], [np.pi / 2] * 3, atol=1e-14)

    def test_identity_degenerate(self):
        with pytest.warns(DegenerateDecompositionWarning):
            a = extract_zxz(BoundaryValues(0, 0, 0, 0, 0))
        np.testing.assert_allclose([a.theta, a.alpha, a.beta], [0, 0, 0], atol=1e-14)

    def test_half_turn_degenerate(self):
        b = BoundaryValues(np.pi, 0.7, np.pi, -np.pi, 0)
        with pytest.warns(DegenerateDecompositionWarning):
            a = extract_zxz(b)
        assert a.theta == pytest.approx(np.pi)
        assert close_up_to_phase(zxz_gate(a), nngqc_gate(b), 1e-12)

    @given(boundaries)
    def test_roundtrip(self, b):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateDecompositionWarning)
            a = extract_zxz(b)
        assert 0 <= a.theta <= np.pi
        assert close_up_to_phase(zxz_gate(a), nngqc_gate(b), 1e-10)


class TestZxz:
    def test_u1_matches_closed_form(self):
        assert phase_insensitive_distance(zxz_gate(U1), nngqc_gate(U1_BOUNDARIES)) <= 1e-12
        diff = np.max(np.abs(zxz_gate(U1) - nngqc_gate(U1_BOUNDARIES)))
        assert diff <= 1e-12

    @given(angle, angle)
    def test_diagonal(self, a, b):
        np.testing.assert_allclose(zxz_gate(ZxzAngles(0, a, b)), rz(a + b), atol=1e-13)

    def test_half_turn(self):
        np.testing.assert_allclose(zxz_gate(ZxzAngles(np.pi, 0, 0)), -1j * SX, atol=1e-15)

    def test_u2_is_hadamard(self):
        h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        assert close_up_to_phase(zxz_gate(U2), h, 1e-14)


class TestNgqc:
    def test_u1_realization(self):
        u = ngqc_gate(2 * np.pi / 3, np.arccos(-1 / np.sqrt(3)), np.pi / 4)
        assert phase_insensitive_distance(u, zxz_gate(U1)) <= 1e-10

    def test_printed_parameters_are_not_u1(self):
        # (3pi/4, 7pi/20, pi/4) is a 3pi/2 rotation, so it cannot equal the 2pi/3 rotation U1
        u = ngqc_gate(3 * np.pi / 4, 7 * np.pi / 20, np.pi / 4)
        assert phase_insensitive_distance(u, zxz_gate(U1)) > 0.5

    @given(angle, angle)
    def test_zero_gamma(self, mu, eta0):
        np.testing.assert_allclose(ngqc_gate(0, mu, eta0), I2, atol=1e-15)

    def test_z_axis(self):
        np.testing.assert_allclose(ngqc_gate(np.pi / 2, 0, 0), 1j * SZ, atol=1e-15)

    @given(st.floats(0, np.pi), angle, angle)
    def test_eigenphases(self, gamma, mu, eta0):
        ev = np.sort(np.angle(np.linalg.eigvals(ngqc_gate(gamma, mu, eta0))))
        target = np.sort(np.angle(np.exp([1j * gamma, -1j * gamma])))
        np.testing.assert_allclose(np.exp(1j * ev), np.exp(1j * target), atol=1e-10)


class TestDg:
    def test_pi_primitive(self):
        np.testing.assert_allclose(dg_primitive(np.pi, 0), [[0, -1j], [-1j, 0]], atol=1e-15)

    @given(angle)
    def test_zero_area(self, phi):
        np.testing.assert_allclose(dg_primitive(0, phi), I2)

    @given(angle)
    def test_z_pair(self, alpha):
        u = dg_primitive(np.pi, alpha / 4) @ dg_primitive(np.pi, -alpha / 4)
        assert close_up_to_phase(u, rz(alpha), 1e-12)

    def test_u1_total_area(self):
        seq = dg_sequence(U1)
        assert sum(a for a, _ in seq) == pytest.approx(2.5 * np.pi, abs=1e-14)

    def test_identity_empty(self):
        assert dg_sequence(ZxzAngles(0, 0, 0)) == []

    def test_x_pi(self):
        assert dg_sequence(ZxzAngles(np.pi, 0, 0)) == [(np.pi, 0.0)]

    @given(st.floats(0, np.pi), angle, angle)
    def test_echo_composition(self, theta, alpha, beta):
        u = I2
        for area, phi in dg_sequence(ZxzAngles(theta, alpha, beta)):
            u = dg_primitive(area, phi) @ u
        assert close_up_to_phase(u, zxz_gate(ZxzAngles(theta, alpha, beta)), 1e-10)


class TestTwoQubit:
    def test_identity_pair(self):
        np.testing.assert_array_equal(controlled_pair(I2, I2), np.eye(4))

    def test_cnot(self):
        np.testing.assert_array_equal(controlled_pair(I2, SX), np.eye(4)[[0, 1, 3, 2]])

    def test_distinct_blocks_entangle(self, rng):
        for _ in range(20):
            u0, u1 = haar_unitary(rng), haar_unitary(rng)
            assert operator_schmidt_weight(controlled_pair(u0, u1)) > 1e-6

    def test_equal_blocks_up_to_phase_are_product(self, rng):
        u = haar_unitary(rng)
        # diag(1, e^{i phi}) (x) u
        assert operator_schmidt_weight(controlled_pair(u, np.exp(0.7j) * u)) < 1e-12

    def test_target_column(self):
        out = ideal_two_qubit_target() @ ket(2, 4)
        expected = np.exp(1j * np.pi / 4) / np.sqrt(2) * (ket(2, 4) + ket(3, 4))
        np.testing.assert_allclose(out, expected, atol=1e-15)

    def test_target_unitary(self):
        assert unitarity_defect(ideal_two_qubit_target()) < 1e-15


class TestDistance:
    def test_global_phase(self, rng):
        u = haar_unitary(rng)
        assert phase_insensitive_distance(u, np.exp(1j * np.pi / 7) * u) <= 1e-12

    def test_orthogonal(self):
        with pytest.warns(OrthogonalUnitariesWarning):
            assert phase_insensitive_distance(I2, SX) > 0.5

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            phase_insensitive_distance(I2, np.eye(4))

    def test_symmetric(self, rng):
        u, v = haar_unitary(rng), haar_unitary(rng)
        assert phase_insensitive_distance(u, v) == pytest.approx(phase_insensitive_distance(v, u))

    def test_pauli_pairs_orthogonal(self):
        for a, b in [(SX, SY), (SY, SZ)]:
            with pytest.warns(OrthogonalUnitariesWarning):
                phase_insensitive_distance(a, b)
