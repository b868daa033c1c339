"""Dense complex linear algebra at desk scale (N <= 16)."""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from ptlab.shared.errors import ConvergenceFailure, DimensionMismatch, NonSquare, Singular
from ptlab.shared.utils import load_config

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
_tol = config.get('tolerances', {})
CONDITION_CAP = float(_tol.get('condition_cap', 1e12))
EIG_RESIDUAL = float(_tol.get('eig_residual', 1e-10))
INVERSE_RESIDUAL = 1e-10
MAX_DIM = 16
TAYLOR_MAX_TERMS = 200


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray  # columns, unit 2-norm
    residual_bound: float

    def reconstruct(self) -> np.ndarray:
        """V diag(lambda) V^-1; only meaningful for diagonalizable input."""
        v = self.right_eigenvectors
        return v @ np.diag(self.eigenvalues) @ inverse(v)


def as_square(m, name: str = "matrix") -> np.ndarray:
    """Coerces to a complex 2-D array and checks it is square."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConvergenceFailure(f"{name} contains NaN or Inf entries")
    return arr


def freeze(arr) -> np.ndarray:
    """Read-only complex copy, used for the immutable domain types."""
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def adjoint(m) -> np.ndarray:
    return np.asarray(m, dtype=complex).conj().T


def max_abs(m) -> float:
    arr = np.asarray(m)
    return float(np.max(np.abs(arr))) if arr.size else 0.0


def is_hermitian(m, tol: float = 1e-12) -> bool:
    arr = np.asarray(m, dtype=complex)
    return max_abs(arr - arr.conj().T) <= tol


def condition(m) -> float:
    """2-norm condition estimate; inf for exactly singular input."""
    arr = as_square(m)
    s = np.linalg.svd(arr, compute_uv=False)
    if s[-1] == 0.0:
        return float('inf')
    return float(s[0] / s[-1])


def _sorted_eig(arr: np.ndarray):
    try:
        w, v = sla.eig(arr)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise ConvergenceFailure(f"Eigendecomposition failed: {e}") from e

    order = np.lexsort((np.round(w.imag, 12), np.round(w.real, 12)))
    w = w[order]
    v = v[:, order]
    norms = np.linalg.norm(v, axis=0)
    return w, v / np.where(norms > 0, norms, 1.0)


def _residual_bound(arr: np.ndarray, w: np.ndarray, v: np.ndarray) -> float:
    scale = np.linalg.norm(arr, 2)
    resid = np.linalg.norm(arr @ v - v * w, axis=0)
    return float(np.max(resid) / scale) if scale > 0 else float(np.max(resid, initial=0.0))


def eig(m) -> EigenSystem:
    """
    Eigendecomposition of a general complex matrix.

    Eigenvalues are sorted by (real, imaginary) ascending; ties are broken on
    values rounded to 12 decimals so that floating-point noise does not reorder
    them. Eigenvectors are normalised to unit 2-norm.

    When the residual contract fails, entries below eps * |M|_2 are zeroed
    and the decomposition is retried once. The residual is always measured
    against the original matrix.

    Raises:
        NonSquare: input is not square
        ConvergenceFailure: LAPACK failed or the residual contract is violated
    """
    arr = as_square(m)
    n = arr.shape[0]
    if n > MAX_DIM:
        raise DimensionMismatch(f"eig supports N <= {MAX_DIM}, got {n}")

    w, v = _sorted_eig(arr)
    bound = _residual_bound(arr, w, v)
    if bound > EIG_RESIDUAL:
        cutoff = np.finfo(float).eps * np.linalg.norm(arr, 2)
        cleaned = np.where(np.abs(arr) < cutoff, 0.0, arr)
        if np.any(cleaned != arr):
            logger.debug(f"Eigen residual {bound:.3e}; retrying with entries below {cutoff:.1e} zeroed")
            w, v = _sorted_eig(cleaned)
            bound = _residual_bound(arr, w, v)
    if bound > EIG_RESIDUAL:
        raise ConvergenceFailure(f"Eigen residual {bound:.3e} exceeds {EIG_RESIDUAL:.0e}")

    return EigenSystem(eigenvalues=w, right_eigenvectors=v, residual_bound=bound)


def inverse(m) -> np.ndarray:
    """
    Inverts a square matrix, refusing inputs whose condition estimate reaches the cap.

    Raises:
        Singular: condition estimate >= CONDITION_CAP, exact rank deficiency, or
            a product residual |A A^-1 - 1|_max above INVERSE_RESIDUAL
    """
    arr = as_square(m)
    cond = condition(arr)
    if not np.isfinite(cond) or cond >= CONDITION_CAP:
        raise Singular(f"Condition estimate {cond:.3e} exceeds cap {CONDITION_CAP:.0e}")

    try:
        inv = sla.inv(arr)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise Singular(f"Inversion failed: {e}") from e

    resid = max_abs(arr @ inv - np.eye(arr.shape[0]))
    if not np.isfinite(resid) or resid > INVERSE_RESIDUAL:
        logger.warning(f"Inverse residual {resid:.3e} (condition {cond:.3e})")
        raise Singular(f"Inverse residual {resid:.3e} exceeds {INVERSE_RESIDUAL:.0e} (condition {cond:.3e})")
    return inv


def _expm_taylor(arr: np.ndarray) -> np.ndarray:
    # Scaling and squaring around a truncated Taylor series
    norm = np.linalg.norm(arr, 1)
    squarings = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0.5 else 0
    scaled = arr / (2 ** squarings)

    result = np.eye(arr.shape[0], dtype=complex)
    term = np.eye(arr.shape[0], dtype=complex)
    for k in range(1, TAYLOR_MAX_TERMS + 1):
        term = term @ scaled / k
        result = result + term
        if max_abs(term) <= 1e-17 * max(1.0, max_abs(result)):
            break
    else:
        raise ConvergenceFailure(f"Taylor series did not converge in {TAYLOR_MAX_TERMS} terms")

    for _ in range(squarings):
        result = result @ result
    return result


def matexp(m, method: str = "pade") -> np.ndarray:
    """
    Matrix exponential.

    Args:
        m: square complex matrix
        method: 'pade' (scipy scaling-and-squaring Pade), 'eig' (diagonalizable
            inputs only) or 'taylor' (adaptive truncation, used as a cross-check)

    Raises:
        ConvergenceFailure: non-finite result or series cap exceeded
    """
    arr = as_square(m)
    if method == "pade":
        result = sla.expm(arr)
    elif method == "eig":
        es = eig(arr)
        v = es.right_eigenvectors
        result = v @ np.diag(np.exp(es.eigenvalues)) @ inverse(v)
    elif method == "taylor":
        result = _expm_taylor(arr)
    else:
        raise ValueError(f"Unknown matexp method '{method}'")

    if not np.all(np.isfinite(result)):
        raise ConvergenceFailure("Matrix exponential produced non-finite entries")
    return np.asarray(result, dtype=complex)


def random_complex(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Ginibre-style random complex matrix."""
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def random_well_conditioned(n: int, rng: np.random.Generator, max_condition: float = 50.0,
                            attempts: int = 100) -> np.ndarray:
    """Random invertible matrix whose condition estimate stays below max_condition."""
    for _ in range(attempts):
        m = np.eye(n) + 0.5 * random_complex(n, rng)
        if condition(m) < max_condition:
            return m
    raise ConvergenceFailure(f"No {n}x{n} draw below condition {max_condition} in {attempts} attempts")
