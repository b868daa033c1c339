"""
Physical observables in a biorthogonal frame and their measurement statistics.

An observable is specified by its coefficient array f_nm in a frame; its
operator form is F = sum f_nm |phi_n><chi_m| = u f u^-1. It is physical when
f is Hermitian, even though F generally is not.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ptlab.shared.errors import (
    DegenerateBasis, DimensionMismatch, FrameMismatch, NotPhysical, Singular, ValidationError,
)
from ptlab.shared.frames import (
    BiorthogonalFrame, MetricOp, StateCoeffs, associated_state, metric,
)
from ptlab.shared.linalg import adjoint, condition, eig, freeze, inverse, max_abs
from ptlab.shared.utils import load_config

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
_tol = config.get('tolerances', {})
HERMITICITY_TOL = float(_tol.get('hermiticity', 1e-12))
REALITY_TOL = float(_tol.get('reality', 1e-9))
CLUSTER_REL = float(_tol.get('cluster_rel', 1e-8))
PROB_CLAMP = float(_tol.get('probability_clamp', 1e-12))
IMAG_RESIDUE = float(_tol.get('imag_residue', 1e-10))
CONDITION_CAP = float(_tol.get('condition_cap', 1e12))
SUM_TOL = 1e-10

_sampling = config.get('sampling', {})
BIT_GENERATOR = _sampling.get('bit_generator', 'PCG64')


@dataclass(frozen=True, eq=False)
class ObservableRep:
    frame: BiorthogonalFrame
    f_array: np.ndarray
    matrix_form: np.ndarray

    @property
    def is_physical(self) -> bool:
        return max_abs(self.f_array - adjoint(self.f_array)) <= HERMITICITY_TOL


@dataclass(frozen=True)
class ProbabilityVector:
    eigenvalues: np.ndarray
    p: np.ndarray

    def as_rows(self) -> List[Tuple[float, float]]:
        return [(float(e), float(q)) for e, q in zip(self.eigenvalues, self.p)]


def observable_from_array(frame: BiorthogonalFrame, f_array) -> ObservableRep:
    """Wraps f_nm with its cached operator form u f u^-1 (u^-1 = v^dagger)."""
    f = np.asarray(f_array, dtype=complex)
    if f.shape != (frame.dim, frame.dim):
        raise DimensionMismatch(f"f_array shape {f.shape} does not match frame dimension {frame.dim}")
    matrix = frame.u_matrix @ f @ adjoint(frame.v_matrix)
    obs = ObservableRep(frame=frame, f_array=freeze(f), matrix_form=freeze(matrix))
    if not obs.is_physical:
        logger.debug("Observable coefficient array is not Hermitian; flagged non-physical")
    return obs


def _require_physical(obs: ObservableRep) -> None:
    if not obs.is_physical:
        resid = max_abs(obs.f_array - adjoint(obs.f_array))
        raise NotPhysical(f"f_array is not Hermitian (max |conj(f_mn) - f_nm| = {resid:.3e})")


def _require_same_frame(obs: ObservableRep, s: StateCoeffs) -> None:
    if not obs.frame.same_as(s.frame):
        raise FrameMismatch("Observable and state live in different frames")


def _real_or_raise(val: complex, what: str) -> float:
    if abs(val.imag) > IMAG_RESIDUE * max(1.0, abs(val.real)):
        raise NotPhysical(f"{what} has imaginary residue {val.imag:.3e}")
    return float(val.real)


def expectation(obs: ObservableRep, s: StateCoeffs) -> float:
    """<F> = sum conj(c_n) c_m f_nm / sum conj(c_n) c_n."""
    _require_physical(obs)
    _require_same_frame(obs, s)
    c = s.c
    val = complex(np.vdot(c, obs.f_array @ c) / np.vdot(c, c))
    return _real_or_raise(val, "Expectation value")


def expectation_metric_form(obs: ObservableRep, s: StateCoeffs) -> float:
    """<psi|g F|psi> / <psi|g|psi> evaluated on reference-basis vectors."""
    _require_physical(obs)
    _require_same_frame(obs, s)
    g = metric(obs.frame).g
    psi = s.vector()
    val = complex(np.vdot(psi, g @ obs.matrix_form @ psi) / np.vdot(psi, g @ psi))
    return _real_or_raise(val, "Expectation value")


def mixed_expectation(obs: ObservableRep, states: Sequence[StateCoeffs], weights: Sequence[float]) -> float:
    """Expectation in a classical mixture of pure states."""
    w = np.asarray(weights, dtype=float)
    if len(states) != w.size or w.size == 0:
        raise DimensionMismatch(f"{len(states)} states but {w.size} weights")
    if np.any(w < 0) or abs(w.sum() - 1.0) > SUM_TOL:
        raise ValidationError("Mixture weights must be non-negative and sum to 1")
    return float(sum(wi * expectation(obs, s) for wi, s in zip(w, states)))


def _clusters(values: np.ndarray, scale: float) -> List[List[int]]:
    """Groups sorted eigenvalue indices whose neighbours lie within CLUSTER_REL * scale."""
    tol = CLUSTER_REL * scale if scale > 0 else CLUSTER_REL
    groups: List[List[int]] = [[0]]
    for i in range(1, len(values)):
        if abs(values[i] - values[groups[-1][-1]]) <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def outcome_probabilities(obs: ObservableRep, s: StateCoeffs) -> ProbabilityVector:
    """
    Outcome eigenvalues and probabilities.

    Uses the eigenvectors |f_k> of the operator form F and their associated
    states g|f_k>. For an eigenvalue cluster spanned by the columns of V the
    probability is <psi~|V (V^+ g V)^-1 V^+ g|psi> / <psi~|psi>, which reduces
    to <f~_k|psi><psi~|f_k> / (<psi~|psi><f~_k|f_k>) for a single eigenvector.

    Raises:
        NotPhysical: f_array not Hermitian
        DegenerateBasis: eigenvectors of a cluster are numerically dependent
    """
    _require_physical(obs)
    _require_same_frame(obs, s)

    es = eig(obs.matrix_form)
    values = es.eigenvalues.real
    vectors = es.right_eigenvectors
    g = metric(obs.frame).g

    psi = s.vector()
    psi_tilde = associated_state(obs.frame, s)
    norm = np.vdot(psi_tilde, psi).real

    scale = float(np.linalg.norm(obs.matrix_form, 2))
    eigenvalues, probs = [], []
    for group in _clusters(values, scale):
        v = vectors[:, group]
        gram = adjoint(v) @ g @ v
        if condition(gram) >= CONDITION_CAP:
            raise DegenerateBasis(f"Eigenvectors for eigenvalue {values[group[0]]:.6g} are dependent")
        overlaps = adjoint(v) @ psi_tilde  # <f~_k|psi>^* pairing, g is Hermitian
        p = np.vdot(overlaps, np.linalg.solve(gram, overlaps)).real / norm
        eigenvalues.append(float(np.mean(values[group])))
        probs.append(p)

    p = np.array(probs)
    if np.any(p < -PROB_CLAMP):
        raise Singular(f"Negative probability {p.min():.3e} beyond clamp {PROB_CLAMP:.0e}")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > SUM_TOL:
        logger.warning(f"Probabilities sum to {total:.12f}")
    return ProbabilityVector(eigenvalues=np.array(eigenvalues), p=p)


def make_rng(seed: int) -> np.random.Generator:
    """Seeded generator on the configured bit generator (PCG64 by default)."""
    bit_gen = getattr(np.random, BIT_GENERATOR)
    return np.random.Generator(bit_gen(int(seed)))


def sample_from_probabilities(p: np.ndarray, n_samples: int, seed: int) -> np.ndarray:
    """
    Counts from n_samples inverse-CDF draws.

    Uniform draws depend on the seed only, so probability vectors that agree to
    rounding give identical counts unless a draw lands within that rounding of
    a CDF boundary.
    """
    if n_samples < 0:
        raise ValidationError("n_samples must be non-negative")
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    u = make_rng(seed).random(n_samples)
    idx = np.minimum(np.searchsorted(cdf, u, side='right'), len(p) - 1)
    return np.bincount(idx, minlength=len(p))


def sample_outcomes(obs: ObservableRep, s: StateCoeffs, n_samples: int, seed: int) -> np.ndarray:
    """Seeded multinomial draw of outcome counts, ordered as outcome_probabilities."""
    pv = outcome_probabilities(obs, s)
    counts = sample_from_probabilities(pv.p, n_samples, seed)
    logger.debug(f"Sampled {n_samples} outcomes with seed {seed}: {counts.tolist()}")
    return counts


def reality_check(m, g: MetricOp) -> Tuple[bool, float]:
    """Quasi-Hermiticity M^+ g = g M; returns (passes, max residual)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != g.g.shape:
        raise DimensionMismatch(f"Matrix shape {m.shape} does not match metric shape {g.g.shape}")
    resid = max_abs(adjoint(m) @ g.g - g.g @ m)
    return resid <= REALITY_TOL, resid


def to_hermitian(obs: ObservableRep) -> np.ndarray:
    """Hermitian counterpart u^-1 F u in the reference basis."""
    u = obs.frame.u_matrix
    return inverse(u) @ obs.matrix_form @ u


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (a + adjoint(a))
