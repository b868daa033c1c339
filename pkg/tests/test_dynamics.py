"""Tests for ptlab/shared/dynamics.py"""
import numpy as np
import pytest

from ptlab.shared.dynamics import (
    evolve, hamiltonian, hamiltonian_from_observable, metric_unitarity_residual, propagator,
    propagator_matexp, trajectory,
)
from ptlab.shared.errors import DimensionMismatch, FrameMismatch, ValidationError
from ptlab.shared.frames import metric, physical_inner, random_state, state, state_from_vector
from ptlab.shared.linalg import eig
from ptlab.shared.observables import observable_from_array, random_hermitian
from ptlab.shared.two_level import TwoLevelParams, two_level_frame


class TestHamiltonian:
    """Tests for Hamiltonian construction."""

    def test_eigen_relation(self, skew_frame):
        """H |phi_n> = E_n |phi_n>."""
        h = hamiltonian(skew_frame, [1.0, -1.0])
        assert np.allclose(h.matrix() @ skew_frame.u_matrix, skew_frame.u_matrix * [1.0, -1.0])

    def test_non_hermitian_real_spectrum(self, skew_frame):
        """H should be non-Hermitian with a real spectrum."""
        m = hamiltonian(skew_frame, [1.0, -1.0]).matrix()
        assert not np.allclose(m, m.conj().T)
        assert np.allclose(eig(m).eigenvalues, [-1.0, 1.0])

    def test_complex_energies(self, skew_frame):
        """Energies with imaginary parts should raise ValidationError."""
        with pytest.raises(ValidationError):
            hamiltonian(skew_frame, [1.0 + 0.1j, -1.0])

    def test_energy_count(self, skew_frame):
        """One energy per basis vector."""
        with pytest.raises(DimensionMismatch):
            hamiltonian(skew_frame, [1.0, 2.0, 3.0])

    def test_from_observable(self, rng, random_frames):
        """Hamiltonians read off a physical observable should reproduce its operator form."""
        frame = random_frames[2]
        obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
        h = hamiltonian_from_observable(obs)
        assert np.allclose(h.matrix(), obs.matrix_form, atol=1e-10)
        assert np.allclose(np.sort(h.energies), np.linalg.eigvalsh(obs.f_array))

    def test_from_non_physical(self, skew_frame):
        """Non-Hermitian coefficient arrays should be refused."""
        with pytest.raises(ValidationError):
            hamiltonian_from_observable(observable_from_array(skew_frame, [[0, 1], [0, 0]]))


class TestPropagator:
    """Tests for the propagator."""

    def test_matexp_agrees(self, rng, random_frames):
        """Spectral and matrix-exponential propagators should agree."""
        for frame in random_frames:
            h = hamiltonian(frame, rng.uniform(-2, 2, frame.dim))
            for t in (0.0, 0.3, 2.5):
                assert np.allclose(propagator(h, t), propagator_matexp(h, t), atol=1e-9)

    def test_metric_unitary(self, rng, random_frames):
        """U^+ g U = g."""
        for frame in random_frames:
            h = hamiltonian(frame, rng.uniform(-2, 2, frame.dim))
            assert metric_unitarity_residual(propagator(h, 1.7), metric(frame)) <= 1e-9

    def test_not_dirac_unitary(self, skew_frame):
        """U is generally not unitary in the Dirac inner product."""
        u_t = propagator(hamiltonian(skew_frame, [1.0, -1.0]), 1.0)
        assert not np.allclose(u_t.conj().T @ u_t, np.eye(2))

    def test_quarter_angle_frame(self):
        """At xi = pi/2 with E = (0, 1) U is far from unitary yet preserves g."""
        frame = two_level_frame(TwoLevelParams(np.pi / 2, 0.0))
        u_t = propagator(hamiltonian(frame, [0.0, 1.0]), 1.0)
        assert np.abs(u_t.conj().T @ u_t - np.eye(2)).max() > 1e-3
        assert metric_unitarity_residual(u_t, metric(frame)) <= 1e-10

    def test_non_finite_time(self, skew_frame):
        """Non-finite times should raise ValidationError."""
        with pytest.raises(ValidationError):
            propagator(hamiltonian(skew_frame, [1.0, -1.0]), np.inf)


class TestEvolve:
    """Tests for state evolution."""

    def test_phases(self, skew_frame):
        """c_n(t) = c_n(0) exp(-i E_n t)."""
        h = hamiltonian(skew_frame, [1.0, -2.0])
        st = evolve(h, state(skew_frame, [0.6, 0.8]), 0.5)
        assert np.allclose(st.c, [0.6 * np.exp(-0.5j), 0.8 * np.exp(1.0j)])

    def test_group_law(self, rng, random_frames):
        """Evolving by t1 then t2 should equal evolving by t1 + t2."""
        for frame in random_frames:
            h = hamiltonian(frame, rng.uniform(-2, 2, frame.dim))
            s = random_state(frame, rng)
            assert np.allclose(evolve(h, evolve(h, s, 0.4), 1.3).c, evolve(h, s, 1.7).c, atol=1e-12)

    def test_matches_propagator(self, rng, random_frames):
        """Evolving coefficients should match U(t) on the reference vector."""
        frame = random_frames[3]
        h = hamiltonian(frame, rng.uniform(-1, 1, frame.dim))
        s = random_state(frame, rng)
        st = evolve(h, s, 0.9)
        assert np.allclose(st.vector(), propagator(h, 0.9) @ s.vector(), atol=1e-10)

    def test_pairwise_inner_products(self, rng, random_frames):
        """<phi~_t|psi_t> should be conserved."""
        frame = random_frames[4]
        h = hamiltonian(frame, rng.uniform(-3, 3, frame.dim))
        a, b = random_state(frame, rng), random_state(frame, rng)
        start = physical_inner(frame, a, b, method="associated")
        for t in np.linspace(0.0, 10.0, 25):
            now = physical_inner(frame, evolve(h, a, t), evolve(h, b, t), method="associated")
            assert abs(now - start) <= 1e-10

    def test_frame_mismatch(self, skew_frame, identity_frame):
        """States must be expanded in the Hamiltonian eigenframe."""
        h = hamiltonian(skew_frame, [1.0, -1.0])
        with pytest.raises(FrameMismatch):
            evolve(h, state(identity_frame, [1, 0]), 1.0)

    def test_reexpanded_state(self, rng, random_frames):
        """States moved into the eigenframe of a derived Hamiltonian evolve like U(t)."""
        frame = random_frames[1]
        obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
        h = hamiltonian_from_observable(obs)
        s = random_state(frame, rng)
        moved = state_from_vector(h.frame, s.vector())
        assert np.allclose(evolve(h, moved, 1.3).vector(), propagator_matexp(h, 1.3) @ s.vector(), atol=1e-9)


class TestTrajectory:
    """Tests for the trajectory table."""

    def test_columns(self, skew_frame):
        """Columns should be t, re/im per coefficient and physical_norm."""
        h = hamiltonian(skew_frame, [1.0, -1.0])
        df = trajectory(h, state(skew_frame, [0.6, 0.8]), [0.0, 1.0, 2.0])
        assert list(df.columns) == ['t', 're_c1', 'im_c1', 're_c2', 'im_c2', 'physical_norm']
        assert len(df) == 3

    def test_norm_conserved(self, skew_frame):
        """physical_norm should stay constant."""
        h = hamiltonian(skew_frame, [1.0, -1.0])
        df = trajectory(h, state(skew_frame, [0.6, 0.8]), np.linspace(0, 20, 50))
        assert np.allclose(df['physical_norm'], 1.0, atol=1e-12)
