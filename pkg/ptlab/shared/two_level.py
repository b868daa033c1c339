"""
Explicit two-level construction parameterised by the angle pair (xi, eta).

The frame is fixed by the symmetric normalisation
<phi_1|phi_1> = <phi_2|phi_2> = <chi_1|chi_1> = <chi_2|chi_2> together with
<chi_n|phi_m> = delta_nm; xi = pi, eta = 0 is the standard orthonormal basis.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ptlab.shared.errors import DimensionMismatch, IllConditioned, ValidationError
from ptlab.shared.dynamics import HamiltonianSpec, hamiltonian_from_observable
from ptlab.shared.frames import BiorthogonalFrame, StateCoeffs, frame_from_matrices, state
from ptlab.shared.observables import ObservableRep, observable_from_array
from ptlab.shared.utils import load_config

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
SIN_HALF_XI_FLOOR = float(config.get('two_level', {}).get('sin_half_xi_floor', 1e-6))
TWO_PI = 2.0 * np.pi

AXES = ('x', 'y', 'z')

# Coefficient arrays of the Pauli triplet in any frame
PAULI_ARRAYS = {
    'x': np.array([[0, 1], [1, 0]], dtype=complex),
    'y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'z': np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class TwoLevelParams:
    xi: float
    eta: float

    def __post_init__(self):
        if not np.isfinite(self.eta) or not 0.0 <= self.eta < TWO_PI:
            raise ValidationError(f"eta={self.eta} outside [0, 2*pi)")
        if not np.isfinite(self.xi) or not 0.0 < self.xi < TWO_PI:
            raise ValidationError(f"xi={self.xi} outside (0, 2*pi)")
        if np.sin(self.xi / 2) < SIN_HALF_XI_FLOOR:
            raise IllConditioned(
                f"xi={self.xi} gives sin(xi/2) below floor {SIN_HALF_XI_FLOOR:.0e}"
            )


@dataclass(frozen=True)
class BlochObservableCoeffs:
    t: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.t, self.x, self.y, self.z)):
            raise ValidationError("Bloch observable coefficients must be finite")

    @property
    def radius(self) -> float:
        return float(np.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2))

    def f_array(self) -> np.ndarray:
        """t*1 + x*sx + y*sy + z*sz as a coefficient array."""
        return (self.t * np.eye(2, dtype=complex) + self.x * PAULI_ARRAYS['x']
                + self.y * PAULI_ARRAYS['y'] + self.z * PAULI_ARRAYS['z'])


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValidationError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi < TWO_PI:
            raise ValidationError(f"phi={self.phi} outside [0, 2*pi)")


def two_level_frame(p: TwoLevelParams) -> BiorthogonalFrame:
    """Frame whose columns follow the explicit (xi, eta) formulas for phi and chi."""
    c = np.cos(p.xi / 4)
    s = np.sin(p.xi / 4)
    norm = 1.0 / np.sqrt(2.0 * np.sin(p.xi / 2))
    w = np.exp(1j * p.eta)

    phi_1 = norm * np.array([c + s, (c - s) * w])
    phi_2 = norm * np.array([c - s, (c + s) * w])
    chi_1 = norm * np.array([c + s, -(c - s) * w])
    chi_2 = -norm * np.array([c - s, -(c + s) * w])

    return frame_from_matrices(np.column_stack([phi_1, phi_2]), np.column_stack([chi_1, chi_2]))


def pauli(axis: str, p: TwoLevelParams) -> np.ndarray:
    """
    Extended Pauli matrix for the (xi, eta) frame.

    sigma_x is Hermitian for every (xi, eta); sigma_y and sigma_z carry
    csc(xi/2) and cot(xi/2) entries and reduce to the standard matrices at
    xi = pi, eta = 0. Each equals u * PAULI_ARRAYS[axis] * u^-1 for the frame
    of two_level_frame(p).
    """
    if axis not in AXES:
        raise ValidationError(f"Unknown axis '{axis}', expected one of {AXES}")
    csc = 1.0 / np.sin(p.xi / 2)
    cot = np.cos(p.xi / 2) / np.sin(p.xi / 2)
    w = np.exp(1j * p.eta)

    if axis == 'x':
        return np.array([[0, np.conj(w)], [w, 0]], dtype=complex)
    if axis == 'y':
        return np.array([[1j * cot, -1j * csc * np.conj(w)],
                         [1j * csc * w, -1j * cot]], dtype=complex)
    # (2,1) entry carries e^{+i eta}; required for sigma_z = u diag(1,-1) u^-1
    return np.array([[csc, -cot * np.conj(w)],
                     [cot * w, -csc]], dtype=complex)


def observable_from_bloch(b: BlochObservableCoeffs, p: TwoLevelParams) -> ObservableRep:
    """t*1 + x*sigma_x + y*sigma_y + z*sigma_z in the (xi, eta) frame."""
    return observable_from_array(two_level_frame(p), b.f_array())


def bloch_state(a: BlochAngles, frame: BiorthogonalFrame) -> StateCoeffs:
    """c = (cos(theta/2), sin(theta/2) e^{i phi})."""
    if frame.dim != 2:
        raise DimensionMismatch(f"Bloch states need a two-level frame, got dimension {frame.dim}")
    return state(frame, [np.cos(a.theta / 2), np.sin(a.theta / 2) * np.exp(1j * a.phi)])


def pt_hamiltonian(b: BlochObservableCoeffs, p: TwoLevelParams) -> HamiltonianSpec:
    """HamiltonianSpec for the sextet (t, x, y, z, xi, eta); energies t -/+ r."""
    return hamiltonian_from_observable(observable_from_bloch(b, p))


def parameter_grid(n_xi: int, n_eta: int) -> List[TwoLevelParams]:
    """n_xi x n_eta grid over the open xi interval (0, 2*pi) and eta in [0, 2*pi)."""
    xis = np.linspace(0.0, TWO_PI, n_xi + 2)[1:-1]
    etas = np.linspace(0.0, TWO_PI, n_eta, endpoint=False)
    return [TwoLevelParams(float(xi), float(eta)) for xi in xis for eta in etas]
