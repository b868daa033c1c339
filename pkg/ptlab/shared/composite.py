"""
Bipartite systems on the tensor product of two physical Hilbert spaces.

Kronecker ordering: A is the outer (slow) factor, so joint index = a * N_B + b.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List

import numpy as np
import pandas as pd

from ptlab.shared.dynamics import HamiltonianSpec
from ptlab.shared.errors import (
    DegenerateBasis, DimensionMismatch, FrameMismatch, IllConditioned, NotPhysical,
)
from ptlab.shared.frames import BiorthogonalFrame, StateCoeffs, frame_from_matrices, metric, state
from ptlab.shared.linalg import adjoint, max_abs
from ptlab.shared.observables import ProbabilityVector, observable_from_array, outcome_probabilities
from ptlab.shared.utils import load_config

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
HERMITICITY_TOL = float(config.get('tolerances', {}).get('hermiticity', 1e-12))
NO_SIGNALLING_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CompositeFrame:
    frame_a: BiorthogonalFrame
    frame_b: BiorthogonalFrame
    joint: BiorthogonalFrame

    @property
    def dims(self) -> tuple:
        return self.frame_a.dim, self.frame_b.dim


def tensor_frame(a: BiorthogonalFrame, b: BiorthogonalFrame) -> CompositeFrame:
    """
    Joint frame with u = u_A (x) u_B and v = v_A (x) v_B.

    Raises:
        IllConditioned: the Kronecker product fails frame validation
    """
    try:
        joint = frame_from_matrices(np.kron(a.u_matrix, b.u_matrix), np.kron(a.v_matrix, b.v_matrix))
    except DegenerateBasis as e:
        raise IllConditioned(f"Joint frame rejected: {e}") from e
    return CompositeFrame(frame_a=a, frame_b=b, joint=joint)


def product_state(cf: CompositeFrame, c_a, c_b) -> StateCoeffs:
    return state(cf.joint, np.kron(np.asarray(c_a, dtype=complex), np.asarray(c_b, dtype=complex)))


def metric_factorization_residual(cf: CompositeFrame) -> float:
    """max |g_joint - g_A (x) g_B|."""
    return max_abs(metric(cf.joint).g - np.kron(metric(cf.frame_a).g, metric(cf.frame_b).g))


def _check_joint(cf: CompositeFrame, s: StateCoeffs) -> None:
    if not cf.joint.same_as(s.frame):
        raise FrameMismatch("Joint state is not expanded in the composite frame")


def marginal_statistics(cf: CompositeFrame, c_joint: StateCoeffs, obs_b_array) -> ProbabilityVector:
    """
    B-side outcome statistics of 1 (x) F_B on a joint state.

    Evaluated with the joint-frame eigenvector machinery; the N_A-fold
    degenerate eigenvalues of 1 (x) F_B are merged per B eigenvalue.
    """
    _check_joint(cf, c_joint)
    f_b = np.asarray(obs_b_array, dtype=complex)
    n_a, n_b = cf.dims
    if f_b.shape != (n_b, n_b):
        raise DimensionMismatch(f"obs_b_array shape {f_b.shape}, expected ({n_b}, {n_b})")
    if max_abs(f_b - adjoint(f_b)) > HERMITICITY_TOL:
        raise NotPhysical("obs_b_array is not Hermitian")

    joint_obs = observable_from_array(cf.joint, np.kron(np.eye(n_a), f_b))
    return outcome_probabilities(joint_obs, c_joint)


def local_evolve(cf: CompositeFrame, h_a: HamiltonianSpec, c_joint: StateCoeffs, t: float) -> StateCoeffs:
    """Joint coefficients under H_A (x) 1: c[a, b] -> exp(-i E_a t) c[a, b]."""
    if not h_a.frame.same_as(cf.frame_a):
        raise FrameMismatch("Hamiltonian frame is not the A factor of the composite frame")
    _check_joint(cf, c_joint)
    n_a, n_b = cf.dims
    phases = np.exp(-1j * h_a.energies * t)
    c = (phases[:, None] * c_joint.c.reshape(n_a, n_b)).reshape(-1)
    return state(cf.joint, c)


def marginal_trajectory(cf: CompositeFrame, c_joint: StateCoeffs, h_a: HamiltonianSpec,
                        obs_b_array, times: Iterable[float]) -> pd.DataFrame:
    """
    B-marginal outcome probabilities along a local evolution on A.

    Returns:
        DataFrame with columns t, outcome, probability, deviation (from t = 0)
    """
    base = marginal_statistics(cf, c_joint, obs_b_array)
    rows: List[dict] = []
    for t in times:
        pv = marginal_statistics(cf, local_evolve(cf, h_a, c_joint, float(t)), obs_b_array)
        if pv.p.shape != base.p.shape:
            raise DegenerateBasis("Outcome clustering changed along the evolution")
        for value, p, p0 in zip(pv.eigenvalues, pv.p, base.p):
            rows.append({'t': float(t), 'outcome': float(value), 'probability': float(p),
                         'deviation': float(abs(p - p0))})
    return pd.DataFrame(rows, columns=['t', 'outcome', 'probability', 'deviation'])


def no_signalling_report(cf: CompositeFrame, c_joint: StateCoeffs, h_a: HamiltonianSpec,
                         obs_b_array, times: Iterable[float]) -> float:
    """
    Max over times and B outcomes of |p_k(t) - p_k(0)| under local evolution on A.
    """
    df = marginal_trajectory(cf, c_joint, h_a, obs_b_array, times)
    deviation = float(df['deviation'].max()) if not df.empty else 0.0
    level = logging.INFO if deviation <= NO_SIGNALLING_TOL else logging.WARNING
    logger.log(level, f"No-signalling max deviation {deviation:.3e} over {df['t'].nunique()} times")
    return deviation
