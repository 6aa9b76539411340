import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from geomgate.dynamics import drive_hamiltonian
from geomgate.quantum import (HADAMARD, I2, SX, SZ, TOL, adjoint, check_density, hermiticity_defect,
                              ket, normalize, operator_schmidt_weight, projector, tensor,
                              unitarity_defect)
from conftest import haar_unitary

finite = st.floats(-10, 10, allow_nan=False)
complex_mats = arrays(complex, (3, 3), elements=st.complex_numbers(max_magnitude=10, allow_nan=False,
                                                                   allow_infinity=False))


def test_tolerance_constant():
    assert TOL == 1e-10


class TestTensor:
    def test_identity(self):
        np.testing.assert_array_equal(tensor(I2, I2), np.eye(4))

    def test_projector_product(self):
        np.testing.assert_array_equal(tensor(np.diag([1, 0]), np.diag([0, 1])), np.diag([0, 1, 0, 0]))

    def test_involution(self):
        xx = tensor(SX, SX)
        np.testing.assert_allclose(xx @ xx, np.eye(4))

    def test_three_factors_ordering(self):
        assert tensor(I2, I2, SZ).shape == (8, 8)
        np.testing.assert_array_equal(tensor(ket(1, 2), ket(0, 2)), ket(2, 4))

    @given(complex_mats, complex_mats, complex_mats, complex_mats)
    def test_mixed_product(self, a, b, c, d):
        np.testing.assert_allclose(tensor(a, b) @ tensor(c, d), tensor(a @ c, b @ d), atol=1e-8)


class TestAdjoint:
    def test_identity(self):
        np.testing.assert_array_equal(adjoint(I2), I2)

    @given(complex_mats)
    def test_involution(self, a):
        np.testing.assert_array_equal(adjoint(adjoint(a)), a)

    @given(st.floats(0, 1e6), finite)
    def test_drive_hamiltonian_hermitian(self, rabi, phase):
        h = drive_hamiltonian(rabi, phase)
        np.testing.assert_allclose(adjoint(h), h)
        assert hermiticity_defect(h) == 0


class TestUnitarityDefect:
    def test_identity(self):
        assert unitarity_defect(I2) == 0

    def test_hadamard(self):
        assert unitarity_defect(HADAMARD) <= 1e-15

    def test_diag(self):
        assert unitarity_defect(np.diag([1, 0.5])) == pytest.approx(0.75)

    def test_haar(self, rng):
        for d in (2, 4, 9):
            assert unitarity_defect(haar_unitary(rng, d)) < 1e-13


class TestStates:
    def test_normalize(self):
        psi = normalize([3, 4j])
        assert abs(np.linalg.norm(psi) - 1) <= 1e-12

    def test_normalize_zero(self):
        with pytest.raises(ValueError):
            normalize([0, 0])

    def test_projector(self):
        p = projector([1, 1])
        np.testing.assert_allclose(p, np.full((2, 2), 0.5))

    def test_check_density_accepts(self):
        check_density(np.diag([0.3, 0.7]).astype(complex))

    @pytest.mark.parametrize("rho, msg", [
        (np.diag([0.5, 0.6]), "trace"),
        (np.array([[0.5, 0.1], [0.2, 0.5]]), "Hermitian"),
        (np.diag([1.2, -0.2]), "negative"),
        (np.array([[np.nan, 0], [0, 1]]), "non-finite"),
        (np.ones((2, 3)) / 3, "square"),
    ])
    def test_check_density_rejects(self, rho, msg):
        with pytest.raises(ValueError, match=msg):
            check_density(rho)


class TestSchmidtWeight:
    def test_product_is_zero(self, rng):
        u = tensor(haar_unitary(rng), haar_unitary(rng))
        assert operator_schmidt_weight(u) < 1e-12

    def test_cnot_positive(self):
        cnot = np.eye(4)[[0, 1, 3, 2]]
        assert operator_schmidt_weight(cnot) == pytest.approx(0.5)
