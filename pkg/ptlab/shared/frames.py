"""
Biorthogonal frames {|phi_n>, |chi_n>} over the standard computational basis.

u_matrix holds the |phi_n> as columns, v_matrix the |chi_n>, normalised so that
v^dagger u = 1 (<chi_n|phi_m> = delta_nm). The associated-state map, the
physical inner product, the metric g = (u u^dagger)^-1 and Petermann factors
are all read off these two matrices.
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ptlab.shared.errors import (
    DegenerateBasis, DimensionMismatch, FrameMismatch, IndexOutOfRange, Singular, ValidationError,
)
from ptlab.shared.linalg import adjoint, condition, freeze, inverse, max_abs, random_well_conditioned
from ptlab.shared.utils import load_config, matrix_from_json, matrix_to_json

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
_tol = config.get('tolerances', {})
CONDITION_CAP = float(_tol.get('condition_cap', 1e12))
BIORTHO_TOL = float(_tol.get('biorthogonality', 1e-10))
METRIC_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BiorthogonalFrame:
    u_matrix: np.ndarray
    v_matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.u_matrix.shape[0]

    @property
    def chis(self) -> np.ndarray:
        return self.v_matrix

    def biorthogonality_residual(self) -> float:
        return max_abs(adjoint(self.v_matrix) @ self.u_matrix - np.eye(self.dim))

    def same_as(self, other: "BiorthogonalFrame") -> bool:
        return self is other or (
            self.dim == other.dim and np.array_equal(self.u_matrix, other.u_matrix)
        )


@dataclass(frozen=True, eq=False)
class StateCoeffs:
    frame: BiorthogonalFrame
    c: np.ndarray

    @property
    def physical_norm(self) -> float:
        return float(np.vdot(self.c, self.c).real)

    def vector(self) -> np.ndarray:
        """|psi> = sum_n c_n |phi_n> in the reference basis."""
        return self.frame.u_matrix @ self.c


@dataclass(frozen=True, eq=False)
class MetricOp:
    g: np.ndarray
    u_factor: np.ndarray  # g = (u u^dagger)^-1

    @property
    def g_inverse(self) -> np.ndarray:
        return self.u_factor @ adjoint(self.u_factor)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.g)

    def sqrt(self) -> np.ndarray:
        """Positive square root of g."""
        w, q = np.linalg.eigh(self.g)
        return q @ np.diag(np.sqrt(w)) @ adjoint(q)


def frame_from_matrices(u, v=None) -> BiorthogonalFrame:
    """
    Validates (u, v) as a biorthogonal frame; v is recomputed as (u^dagger)^-1 when absent.

    Raises:
        DimensionMismatch: u or v not square or of different shapes
        DegenerateBasis: columns of u are (numerically) linearly dependent
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
        raise DimensionMismatch(f"Frame needs N vectors of length N, got shape {u.shape}")

    cond = condition(u)
    if not np.isfinite(cond) or cond >= CONDITION_CAP:
        raise DegenerateBasis(f"Frame vectors nearly dependent (condition {cond:.3e})")

    if v is None:
        try:
            v = inverse(adjoint(u))
        except Singular as e:
            raise DegenerateBasis(str(e)) from e
    else:
        v = np.asarray(v, dtype=complex)
        if v.shape != u.shape:
            raise DimensionMismatch(f"v shape {v.shape} does not match u shape {u.shape}")

    frame = BiorthogonalFrame(u_matrix=freeze(u), v_matrix=freeze(v))
    resid = frame.biorthogonality_residual()
    if resid > BIORTHO_TOL:
        raise DegenerateBasis(f"Biorthogonality residual {resid:.3e} exceeds {BIORTHO_TOL:.0e}")
    return frame


def build_frame(phis: Sequence[Sequence[complex]]) -> BiorthogonalFrame:
    """
    Builds the biorthogonal frame whose phi vectors are the given list.

    Args:
        phis: N complex vectors of length N (the |phi_n> in the reference basis)

    Returns:
        Frame with v = (u^dagger)^-1, so <chi_n|phi_m> = delta_nm by construction
    """
    vectors = [np.asarray(p, dtype=complex).ravel() for p in phis]
    n = len(vectors)
    if n == 0 or any(vec.shape != (n,) for vec in vectors):
        raise DimensionMismatch(f"Expected {n} vectors of length {n}")
    return frame_from_matrices(np.column_stack(vectors))


def orthonormal_frame(n: int) -> BiorthogonalFrame:
    """Standard computational basis, chi_n = phi_n = e_n."""
    eye = np.eye(n, dtype=complex)
    return frame_from_matrices(eye, eye)


def random_frame(n: int, rng: np.random.Generator, max_condition: float = 50.0) -> BiorthogonalFrame:
    return frame_from_matrices(random_well_conditioned(n, rng, max_condition))


def state(frame: BiorthogonalFrame, c: Sequence[complex]) -> StateCoeffs:
    """Expansion coefficients c_n of |psi> = sum_n c_n |phi_n>."""
    arr = np.asarray(c, dtype=complex).ravel()
    if arr.shape != (frame.dim,):
        raise DimensionMismatch(f"State has {arr.size} coefficients, frame dimension is {frame.dim}")
    if not np.all(np.isfinite(arr)) or np.vdot(arr, arr).real <= 0.0:
        raise ValidationError("State coefficients must be finite and not all zero")
    return StateCoeffs(frame=frame, c=freeze(arr))


def state_from_vector(frame: BiorthogonalFrame, psi: Sequence[complex]) -> StateCoeffs:
    """Expands a reference-basis vector in the frame: c_n = <chi_n|psi>."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (frame.dim,):
        raise DimensionMismatch(f"Vector length {psi.size} does not match frame dimension {frame.dim}")
    return state(frame, adjoint(frame.v_matrix) @ psi)


def random_state(frame: BiorthogonalFrame, rng: np.random.Generator) -> StateCoeffs:
    c = rng.standard_normal(frame.dim) + 1j * rng.standard_normal(frame.dim)
    return state(frame, c / np.linalg.norm(c))


def _check_member(frame: BiorthogonalFrame, s: StateCoeffs) -> None:
    if not frame.same_as(s.frame):
        raise FrameMismatch("State was expanded in a different frame")


def associated_state(frame: BiorthogonalFrame, s: StateCoeffs) -> np.ndarray:
    """|psi~> = sum_n c_n |chi_n> in the reference basis."""
    if s.c.shape != (frame.dim,):
        raise DimensionMismatch(f"State has {s.c.size} coefficients, frame dimension is {frame.dim}")
    _check_member(frame, s)
    return frame.v_matrix @ s.c


def physical_inner(frame: BiorthogonalFrame, d: StateCoeffs, c: StateCoeffs,
                   method: str = "coefficients") -> complex:
    """
    Physical inner product <phi~|psi>.

    method='coefficients' sums conj(d_n) c_n; method='associated' pairs the
    associated state of d with the reference-basis vector of c.
    """
    _check_member(frame, d)
    _check_member(frame, c)
    if method == "coefficients":
        return complex(np.vdot(d.c, c.c))
    if method == "associated":
        return complex(np.vdot(associated_state(frame, d), c.vector()))
    raise ValueError(f"Unknown inner-product method '{method}'")


def metric(frame: BiorthogonalFrame) -> MetricOp:
    """
    Metric g = (u u^dagger)^-1, evaluated as v v^dagger (equal because v^dagger = u^-1).

    Raises:
        Singular: g fails positivity or the g u u^dagger = 1 check
    """
    v = frame.v_matrix
    g = v @ adjoint(v)
    g = 0.5 * (g + adjoint(g))

    w_min = float(np.min(np.linalg.eigvalsh(g)))
    if w_min <= 0.0:
        raise Singular(f"Metric is not positive definite (min eigenvalue {w_min:.3e})")

    u = frame.u_matrix
    resid = max_abs(g @ u @ adjoint(u) - np.eye(frame.dim))
    if resid > METRIC_TOL:
        raise Singular(f"Metric residual |g u u^+ - 1| = {resid:.3e}")

    logger.debug(f"Metric spectrum range [{w_min:.4g}, {float(np.max(np.linalg.eigvalsh(g))):.4g}]")
    return MetricOp(g=freeze(g), u_factor=frame.u_matrix)


def petermann(frame: BiorthogonalFrame, n: int) -> float:
    """
    Petermann factor K_n = <chi_n|chi_n><phi_n|phi_n> / |<chi_n|phi_n>|^2 (>= 1).

    Args:
        n: 1-based index, 1 <= n <= N
    """
    if not 1 <= n <= frame.dim:
        raise IndexOutOfRange(f"Index {n} outside 1..{frame.dim}")
    phi = frame.u_matrix[:, n - 1]
    chi = frame.v_matrix[:, n - 1]
    overlap = abs(np.vdot(chi, phi)) ** 2
    return float(np.vdot(chi, chi).real * np.vdot(phi, phi).real / overlap)


def petermann_factors(frame: BiorthogonalFrame) -> np.ndarray:
    return np.array([petermann(frame, n) for n in range(1, frame.dim + 1)])


# --- Serialization ---

def frame_to_json(frame: BiorthogonalFrame) -> Dict[str, Any]:
    return {
        'n': frame.dim,
        'u': matrix_to_json(frame.u_matrix),
        'v': matrix_to_json(frame.v_matrix),
    }


def frame_from_json(data: Dict[str, Any]) -> BiorthogonalFrame:
    """Loads {"n", "u", "v"}; v is optional and invariants are re-validated."""
    if 'u' not in data:
        raise DimensionMismatch("Frame JSON needs a 'u' matrix")
    u = matrix_from_json(data['u'])
    if 'n' in data and int(data['n']) != u.shape[0]:
        raise DimensionMismatch(f"Declared n={data['n']} but u has {u.shape[0]} rows")
    v: Optional[np.ndarray] = matrix_from_json(data['v']) if data.get('v') is not None else None
    return frame_from_matrices(u, v)
