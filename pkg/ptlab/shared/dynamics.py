"""Closed-system evolution under a Hamiltonian with real spectrum, hbar = 1."""
import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import pandas as pd

from ptlab.shared.errors import DimensionMismatch, FrameMismatch, ValidationError
from ptlab.shared.frames import (
    BiorthogonalFrame, MetricOp, StateCoeffs, frame_from_matrices, physical_inner, state,
)
from ptlab.shared.linalg import adjoint, matexp, max_abs
from ptlab.shared.observables import ObservableRep

logger = logging.getLogger(__name__)

EIGEN_RELATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class HamiltonianSpec:
    frame: BiorthogonalFrame
    energies: np.ndarray

    def matrix(self) -> np.ndarray:
        """H = u diag(E) u^-1."""
        u = self.frame.u_matrix
        return u @ np.diag(self.energies.astype(complex)) @ adjoint(self.frame.v_matrix)


def hamiltonian(frame: BiorthogonalFrame, energies: Iterable[float]) -> HamiltonianSpec:
    """
    Hamiltonian with eigenstates |phi_n> and real eigenvalues E_n.

    Raises:
        DimensionMismatch: len(energies) != N
        ValidationError: non-real or non-finite energies
    """
    e = np.asarray(list(energies))
    if np.iscomplexobj(e):
        if max_abs(e.imag) > 0.0:
            raise ValidationError("Energies must be real")
        e = e.real
    e = e.astype(float)
    if e.shape != (frame.dim,):
        raise DimensionMismatch(f"{e.size} energies for a frame of dimension {frame.dim}")
    if not np.all(np.isfinite(e)):
        raise ValidationError("Energies must be finite")

    h = HamiltonianSpec(frame=frame, energies=e)
    h.energies.setflags(write=False)

    # H |phi_n> = E_n |phi_n>
    u = frame.u_matrix
    resid = max_abs(h.matrix() @ u - u * e) / (max(1.0, max_abs(e)) * max(1.0, max_abs(u)))
    if resid > EIGEN_RELATION_TOL:
        raise ValidationError(f"Eigen relation residual {resid:.3e}")
    return h


def hamiltonian_from_observable(obs: ObservableRep) -> HamiltonianSpec:
    """
    Reads a physical observable as a Hamiltonian.

    Diagonalises the Hermitian array f = W diag(E) W^+ and returns the
    Hamiltonian on the eigenframe (u W, v W); states in obs.frame must be
    re-expanded with frames.state_from_vector before evolving.
    """
    if not obs.is_physical:
        raise ValidationError("Hamiltonian coefficient array must be Hermitian")
    energies, w = np.linalg.eigh(obs.f_array)
    eigen_frame = frame_from_matrices(obs.frame.u_matrix @ w, obs.frame.v_matrix @ w)
    return hamiltonian(eigen_frame, energies)


def _check_frame(h: HamiltonianSpec, s: StateCoeffs) -> None:
    if not h.frame.same_as(s.frame):
        raise FrameMismatch("State is not expanded in the Hamiltonian eigenframe")


def propagator(h: HamiltonianSpec, t: float) -> np.ndarray:
    """U(t) = u diag(exp(-i E_n t)) u^-1."""
    if not np.isfinite(t):
        raise ValidationError("Time must be finite")
    phases = np.exp(-1j * h.energies * t)
    return h.frame.u_matrix @ np.diag(phases) @ adjoint(h.frame.v_matrix)


def propagator_matexp(h: HamiltonianSpec, t: float) -> np.ndarray:
    """exp(-i H t) through the matrix exponential; cross-check path for propagator."""
    return matexp(-1j * t * h.matrix())


def metric_unitarity_residual(u_t: np.ndarray, g: MetricOp) -> float:
    """max |U^+ g U - g|."""
    return max_abs(adjoint(u_t) @ g.g @ u_t - g.g)


def evolve(h: HamiltonianSpec, s: StateCoeffs, t: float) -> StateCoeffs:
    """c_n(t) = c_n(0) exp(-i E_n t)."""
    _check_frame(h, s)
    if not np.isfinite(t):
        raise ValidationError("Time must be finite")
    return state(h.frame, s.c * np.exp(-1j * h.energies * t))


def trajectory(h: HamiltonianSpec, s: StateCoeffs, times: Iterable[float]) -> pd.DataFrame:
    """
    Evolves s over the given times.

    Returns:
        DataFrame with columns t, re_c1, im_c1, ..., re_cN, im_cN, physical_norm
    """
    rows = []
    for t in times:
        st = evolve(h, s, float(t))
        row = {'t': float(t)}
        for n, cn in enumerate(st.c, start=1):
            row[f're_c{n}'] = float(cn.real)
            row[f'im_c{n}'] = float(cn.imag)
        row['physical_norm'] = physical_inner(h.frame, st, st).real
        rows.append(row)
    df = pd.DataFrame(rows)
    if not df.empty:
        drift = float((df['physical_norm'] - df['physical_norm'].iloc[0]).abs().max())
        logger.info(f"Evolved {len(df)} time points; max physical-norm drift {drift:.3e}")
    return df
