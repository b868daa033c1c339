"""Tests for ptlab/shared/observables.py"""
import numpy as np
import pytest

from ptlab.shared.errors import DimensionMismatch, FrameMismatch, NotPhysical, ValidationError
from ptlab.shared.frames import metric, random_frame, random_state, state
from ptlab.shared.linalg import eig, is_hermitian
from ptlab.shared.observables import (
    expectation, expectation_metric_form, make_rng, mixed_expectation, observable_from_array,
    outcome_probabilities, random_hermitian, reality_check, sample_from_probabilities,
    sample_outcomes, to_hermitian,
)
from ptlab.shared.two_level import PAULI_ARRAYS, TwoLevelParams, pauli, two_level_frame


class TestObservableFromArray:
    """Tests for observable construction."""

    def test_operator_form(self, skew_frame):
        """matrix_form should equal u f u^-1."""
        f = np.array([[1.0, 0.5j], [-0.5j, 2.0]])
        obs = observable_from_array(skew_frame, f)
        u = skew_frame.u_matrix
        assert np.allclose(obs.matrix_form, u @ f @ np.linalg.inv(u))

    def test_physical_flag(self, skew_frame):
        """Hermitian arrays are physical, others are not."""
        assert observable_from_array(skew_frame, PAULI_ARRAYS['y']).is_physical
        assert not observable_from_array(skew_frame, [[0, 1], [0, 0]]).is_physical

    def test_shape_check(self, skew_frame):
        """Arrays of the wrong shape should raise DimensionMismatch."""
        with pytest.raises(DimensionMismatch):
            observable_from_array(skew_frame, np.eye(3))


class TestExpectation:
    """Tests for expectation values."""

    def test_two_level_example(self, pt_frame):
        """<sigma_z> in c = (0.6, 0.8i) should be 0.36 - 0.64."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['z'])
        s = state(pt_frame, [0.6, 0.8j])
        assert expectation(obs, s) == pytest.approx(-0.28, abs=1e-12)

    def test_unnormalised_state(self, pt_frame):
        """Expectations should not depend on the overall scale of c."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['x'])
        assert expectation(obs, state(pt_frame, [3.0, 4.0j])) == pytest.approx(
            expectation(obs, state(pt_frame, [0.6, 0.8j])))

    def test_metric_form_agrees(self, rng, random_pairs):
        """<psi|g F|psi>/<psi|g|psi> should match the coefficient form."""
        for frame, s in random_pairs:
            obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
            assert expectation_metric_form(obs, s) == pytest.approx(expectation(obs, s), abs=1e-10)

    def test_not_physical(self, skew_frame):
        """Non-Hermitian arrays should raise NotPhysical."""
        obs = observable_from_array(skew_frame, [[0, 1], [0, 0]])
        with pytest.raises(NotPhysical):
            expectation(obs, state(skew_frame, [1, 0]))

    def test_non_physical_witness(self, pt_frame):
        """A non-Hermitian f_array has a visibly complex raw expectation and is refused."""
        obs = observable_from_array(pt_frame, [[0, 1], [0, 0]])
        s = state(pt_frame, [1 / np.sqrt(2), 1j / np.sqrt(2)])
        psi, g = s.vector(), metric(pt_frame).g
        raw = np.vdot(psi, g @ obs.matrix_form @ psi) / np.vdot(psi, g @ psi)
        assert abs(raw.imag) > 1e-8
        with pytest.raises(NotPhysical):
            expectation(obs, s)

    def test_frame_mismatch(self, skew_frame, identity_frame):
        """State and observable from different frames should raise FrameMismatch."""
        obs = observable_from_array(skew_frame, PAULI_ARRAYS['z'])
        with pytest.raises(FrameMismatch):
            expectation(obs, state(identity_frame, [1, 0]))

    def test_mixed(self, pt_frame):
        """Mixtures should weight the pure-state expectations."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['z'])
        up, down = state(pt_frame, [1, 0]), state(pt_frame, [0, 1])
        assert mixed_expectation(obs, [up, down], [0.25, 0.75]) == pytest.approx(-0.5)

    def test_mixed_weights(self, pt_frame):
        """Weights must be non-negative and sum to one."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['z'])
        up = state(pt_frame, [1, 0])
        with pytest.raises(ValidationError):
            mixed_expectation(obs, [up, up], [0.7, 0.7])
        with pytest.raises(DimensionMismatch):
            mixed_expectation(obs, [up], [0.5, 0.5])


class TestOutcomeProbabilities:
    """Tests for outcome probabilities."""

    def test_two_level_example(self, pt_frame):
        """sigma_z on c = (0.6, 0.8i) gives p(-1) = 0.64, p(+1) = 0.36."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['z'])
        pv = outcome_probabilities(obs, state(pt_frame, [0.6, 0.8j]))
        assert np.allclose(pv.eigenvalues, [-1.0, 1.0])
        assert np.allclose(pv.p, [0.64, 0.36], atol=1e-12)

    def test_normalised(self, rng, random_pairs):
        """Probabilities should be non-negative and sum to one."""
        for frame, s in random_pairs:
            pv = outcome_probabilities(observable_from_array(frame, random_hermitian(frame.dim, rng)), s)
            assert abs(pv.p.sum() - 1.0) <= 1e-10
            assert np.all(pv.p >= -1e-12)

    def test_mean_matches_expectation(self, rng, random_pairs):
        """sum_k p_k f_k should equal the expectation value."""
        for frame, s in random_pairs:
            obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
            pv = outcome_probabilities(obs, s)
            assert float(np.dot(pv.p, pv.eigenvalues)) == pytest.approx(expectation(obs, s), abs=1e-9)

    def test_degenerate_cluster(self, rng):
        """A doubly degenerate outcome should collect |c_1|^2 + |c_2|^2."""
        frame = random_frame(3, rng)
        s = state(frame, [0.6, 0.0, 0.8j])
        obs = observable_from_array(frame, np.diag([1.0, 1.0, -1.0]))
        pv = outcome_probabilities(obs, s)
        assert np.allclose(pv.eigenvalues, [-1.0, 1.0])
        assert np.allclose(pv.p, [0.64, 0.36], atol=1e-10)

    def test_small_scale_outcomes(self, identity_frame):
        """Distinct eigenvalues of a small-norm observable should stay separate outcomes."""
        obs = observable_from_array(identity_frame, np.diag([1e-9, 2e-9]))
        pv = outcome_probabilities(obs, state(identity_frame, [0.6, 0.8]))
        assert len(pv.eigenvalues) == 2
        assert np.allclose(pv.p, [0.36, 0.64], atol=1e-12)

    def test_as_rows(self, identity_frame):
        """as_rows should pair eigenvalues with probabilities."""
        obs = observable_from_array(identity_frame, PAULI_ARRAYS['z'])
        rows = outcome_probabilities(obs, state(identity_frame, [1, 0])).as_rows()
        assert rows[0] == pytest.approx((-1.0, 0.0))
        assert rows[1] == pytest.approx((1.0, 1.0))


class TestSampling:
    """Tests for seeded outcome sampling."""

    def test_generator(self):
        """make_rng should wrap PCG64 with the given seed."""
        expected = np.random.Generator(np.random.PCG64(7)).random(5)
        assert np.array_equal(make_rng(7).random(5), expected)

    def test_reproducible(self, pt_frame):
        """Same seed should give the same counts."""
        obs = observable_from_array(pt_frame, PAULI_ARRAYS['x'])
        s = state(pt_frame, [0.6, 0.8j])
        assert np.array_equal(sample_outcomes(obs, s, 5000, seed=3), sample_outcomes(obs, s, 5000, seed=3))

    def test_total(self):
        """Counts should add up to n_samples."""
        counts = sample_from_probabilities(np.array([0.2, 0.5, 0.3]), 12345, seed=1)
        assert counts.sum() == 12345

    def test_certain_outcome(self):
        """A probability-one outcome should collect every sample."""
        counts = sample_from_probabilities(np.array([0.0, 1.0, 0.0]), 1000, seed=0)
        assert counts.tolist() == [0, 1000, 0]

    def test_fair_coin(self):
        """p = (1/2, 1/2) over 10^6 draws should land within five standard deviations of 5 * 10^5."""
        counts = sample_from_probabilities(np.array([0.5, 0.5]), 1_000_000, seed=0)
        assert abs(int(counts[0]) - 500_000) <= 5 * 500

    def test_negative_samples(self):
        """Negative sample counts should raise ValidationError."""
        with pytest.raises(ValidationError):
            sample_from_probabilities(np.array([1.0]), -1, seed=0)

    def test_frame_independent_counts(self, identity_frame, pt_frame):
        """Hermitian and PT frames should give identical counts for one seed."""
        f = np.array([[0.3, 0.4 - 0.2j], [0.4 + 0.2j, -0.5]])
        c = [0.8, 0.36 + 0.48j]
        a = sample_outcomes(observable_from_array(identity_frame, f), state(identity_frame, c), 100000, seed=7)
        b = sample_outcomes(observable_from_array(pt_frame, f), state(pt_frame, c), 100000, seed=7)
        assert np.array_equal(a, b)


class TestRealityCheck:
    """Tests for quasi-Hermiticity and the Hermitian counterpart."""

    def test_physical_passes(self, rng, random_frames):
        """Physical observables satisfy F^+ g = g F."""
        for frame in random_frames:
            obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
            ok, resid = reality_check(obs.matrix_form, metric(frame))
            assert ok and resid <= 1e-9

    def test_non_physical_fails(self, pt_frame):
        """A non-Hermitian coefficient array fails the check."""
        obs = observable_from_array(pt_frame, [[0, 1], [0, 0]])
        ok, _ = reality_check(obs.matrix_form, metric(pt_frame))
        assert not ok

    def test_shape_mismatch(self, pt_frame):
        """Matrix and metric shapes must agree."""
        with pytest.raises(DimensionMismatch):
            reality_check(np.eye(3), metric(pt_frame))

    def test_to_hermitian(self, rng, random_frames):
        """The similarity transform should be Hermitian and isospectral."""
        for frame in random_frames:
            obs = observable_from_array(frame, random_hermitian(frame.dim, rng))
            h = to_hermitian(obs)
            assert is_hermitian(h, tol=1e-10)
            assert np.allclose(np.linalg.eigvalsh(0.5 * (h + h.conj().T)),
                               eig(obs.matrix_form).eigenvalues.real, atol=1e-9)

    def test_pauli_counterpart(self):
        """The counterpart of sigma_z in a PT frame is diag(1, -1)."""
        frame = two_level_frame(TwoLevelParams(2.0, 1.0))
        obs = observable_from_array(frame, PAULI_ARRAYS['z'])
        assert np.allclose(to_hermitian(obs), np.diag([1.0, -1.0]), atol=1e-12)

    def test_quarter_angle_counterpart(self):
        """At xi = pi/2, eta = 0 the counterpart of sigma_z is diag(1, -1)."""
        frame = two_level_frame(TwoLevelParams(np.pi / 2, 0.0))
        obs = observable_from_array(frame, PAULI_ARRAYS['z'])
        assert np.allclose(to_hermitian(obs), np.diag([1.0, -1.0]), atol=1e-12)

    def test_quarter_angle_sigma_y(self):
        """sigma_y at xi = pi/2, eta = 0 satisfies the reality condition of its frame."""
        params = TwoLevelParams(np.pi / 2, 0.0)
        ok, resid = reality_check(pauli('y', params), metric(two_level_frame(params)))
        assert ok and resid <= 1e-9
