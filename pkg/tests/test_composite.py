"""Tests for ptlab/shared/composite.py"""
import numpy as np
import pytest

from ptlab.shared.composite import (
    local_evolve, marginal_statistics, marginal_trajectory, metric_factorization_residual,
    no_signalling_report, product_state, tensor_frame,
)
from ptlab.shared.dynamics import hamiltonian
from ptlab.shared.errors import DimensionMismatch, FrameMismatch, NotPhysical
from ptlab.shared.frames import physical_inner, random_state, state
from ptlab.shared.two_level import PAULI_ARRAYS, TwoLevelParams, two_level_frame


@pytest.fixture
def composite(pt_frame):
    return tensor_frame(pt_frame, two_level_frame(TwoLevelParams(2.5, 0.3)))


class TestTensorFrame:
    """Tests for the joint frame."""

    def test_biorthogonal(self, composite):
        """The Kronecker-product frame should be biorthogonal."""
        assert composite.joint.biorthogonality_residual() <= 1e-10
        assert composite.dims == (2, 2)

    def test_metric_factorizes(self, composite):
        """g_joint = g_A (x) g_B."""
        assert metric_factorization_residual(composite) <= 1e-10

    def test_product_state_inner(self, composite):
        """Physical norm of a product state is the product of the factor norms."""
        s = product_state(composite, [0.6, 0.8j], [1.0, 1.0])
        assert physical_inner(composite.joint, s, s).real == pytest.approx(2.0)


class TestMarginalStatistics:
    """Tests for B-side outcome statistics."""

    def test_product_state(self, composite):
        """On product states the B marginal is the single-system distribution."""
        s = product_state(composite, [0.3, 0.7j], [0.6, 0.8])
        pv = marginal_statistics(composite, s, PAULI_ARRAYS['z'])
        assert np.allclose(pv.eigenvalues, [-1.0, 1.0])
        assert np.allclose(pv.p, [0.64, 0.36], atol=1e-10)

    def test_entangled_state(self, composite):
        """Bell-type coefficients give a uniform sigma_z marginal."""
        s = state(composite.joint, [1, 0, 0, 1])
        assert np.allclose(marginal_statistics(composite, s, PAULI_ARRAYS['z']).p, [0.5, 0.5], atol=1e-10)

    def test_non_hermitian(self, composite):
        """Non-Hermitian B arrays should raise NotPhysical."""
        s = state(composite.joint, [1, 0, 0, 1])
        with pytest.raises(NotPhysical):
            marginal_statistics(composite, s, [[0, 1], [0, 0]])

    def test_shape(self, composite):
        """B arrays must be N_B x N_B."""
        s = state(composite.joint, [1, 0, 0, 1])
        with pytest.raises(DimensionMismatch):
            marginal_statistics(composite, s, np.eye(4))


class TestNoSignalling:
    """Tests for local evolution and no-signalling."""

    def test_local_phases(self, composite):
        """c[a, b] picks up exp(-i E_a t)."""
        h_a = hamiltonian(composite.frame_a, [1.0, -1.0])
        s = state(composite.joint, [1, 1, 1, 1])
        out = local_evolve(composite, h_a, s, 0.5)
        phases = np.exp(-0.5j * np.array([1.0, 1.0, -1.0, -1.0]))
        assert np.allclose(out.c, phases)

    def test_wrong_factor(self, composite):
        """Hamiltonians must live in the A factor frame."""
        h_b = hamiltonian(composite.frame_b, [1.0, -1.0])
        s = state(composite.joint, [1, 0, 0, 1])
        with pytest.raises(FrameMismatch):
            local_evolve(composite, h_b, s, 1.0)

    def test_deviation_small(self, rng, composite):
        """B marginals should not move under local evolution on A."""
        h_a = hamiltonian(composite.frame_a, [0.8, -0.4])
        s = random_state(composite.joint, rng)
        for axis in ('x', 'y', 'z'):
            assert no_signalling_report(composite, s, h_a, PAULI_ARRAYS[axis], np.linspace(0, 5, 20)) <= 1e-9

    def test_trajectory_table(self, composite):
        """One row per time and outcome."""
        h_a = hamiltonian(composite.frame_a, [0.8, -0.4])
        s = state(composite.joint, [0.5, 0.3 + 0.1j, -0.2 + 0.4j, 0.5])
        df = marginal_trajectory(composite, s, h_a, PAULI_ARRAYS['x'], [0.0, 1.0, 2.0])
        assert list(df.columns) == ['t', 'outcome', 'probability', 'deviation']
        assert len(df) == 6
        assert df['deviation'].max() <= 1e-9
