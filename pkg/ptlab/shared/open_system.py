"""
Driven qubit with incoherent gain and loss, modelled by a Lindblad master equation.

Conventions: e_1 is the upper level, sigma_z = diag(1, -1), sigma_+ = |e_1><e_2|,
sigma_- = |e_2><e_1|. Superoperators act on column-stacked density matrices,
vec(A rho B) = (B^T (x) A) vec(rho).
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from ptlab.shared.errors import NotPhysical, PositivityViolation, StepTooLarge, ValidationError
from ptlab.shared.linalg import adjoint, as_square, eig, max_abs
from ptlab.shared.utils import load_config

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
_open = config.get('open_system', {})
TOL_IM = float(_open.get('tol_im', 1e-8))
EP_EIGENVALUE_GAP = float(_open.get('ep_eigenvalue_gap', 1e-6))
EP_VECTOR_ANGLE = float(_open.get('ep_vector_angle', 1e-3))
OSCILLATION_NOISE_FLOOR = float(_open.get('oscillation_noise_floor', 1e-6))
POSITIVITY_FLOOR = float(_open.get('positivity_floor', 1e-6))
DT_SCALE = float(_open.get('dt_scale', 0.01))

DENSITY_TOL = 1e-10
DENSITY_EIG_FLOOR = 1e-9
TRACE_DRIFT_TOL = 1e-8
ZERO_MODE_TOL = 1e-9
SETTLE_FACTOR = 20.0

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

LABELS = ('oscillatory', 'exceptional', 'overdamped')
SCAN_COLUMNS = ['gamma', 'label', 'max_im_eig', 'osc_flag', 'concordant', 'spectral_gap',
                'dimer_real', 'trace_error', 'steady_state_error']


@dataclass(frozen=True)
class LindbladModel:
    kappa: float
    gamma_gain: float
    gamma_loss: float

    def __post_init__(self):
        for name in ('kappa', 'gamma_gain', 'gamma_loss'):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValidationError(f"{name}={val} must be finite and >= 0")

    @property
    def balanced(self) -> bool:
        return self.gamma_gain == self.gamma_loss

    @property
    def gamma(self) -> float:
        return max(self.gamma_gain, self.gamma_loss)

    def hamiltonian(self) -> np.ndarray:
        return self.kappa * SIGMA_X

    def jump_operators(self) -> List[np.ndarray]:
        return [np.sqrt(self.gamma_gain) * SIGMA_PLUS, np.sqrt(self.gamma_loss) * SIGMA_MINUS]

    def max_step(self) -> float:
        return DT_SCALE / max(self.kappa, self.gamma, 1.0)


def balanced_model(kappa: float, gamma: float) -> LindbladModel:
    return LindbladModel(kappa=kappa, gamma_gain=gamma, gamma_loss=gamma)


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)


@dataclass(frozen=True)
class RegimeClass:
    label: str
    spectral_gap: float
    oscillation_frequency: float
    max_im_eig: float


def density_matrix(rho) -> DensityMatrix:
    """
    Validated density matrix.

    Raises:
        NotPhysical: not Hermitian within 1e-10 or an eigenvalue below -1e-9
        ValidationError: trace differs from 1 by more than 1e-10
    """
    arr = as_square(rho, "rho")
    if max_abs(arr - adjoint(arr)) > DENSITY_TOL:
        raise NotPhysical("Density matrix is not Hermitian")
    tr = np.trace(arr)
    if abs(tr - 1.0) > DENSITY_TOL:
        raise ValidationError(f"Density matrix trace {tr.real:.12f} != 1")
    lowest = float(np.linalg.eigvalsh(0.5 * (arr + adjoint(arr)))[0])
    if lowest < -DENSITY_EIG_FLOOR:
        raise NotPhysical(f"Density matrix eigenvalue {lowest:.3e} is negative")
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return DensityMatrix(rho=out)


def pure_density(c) -> DensityMatrix:
    """|psi><psi| for a normalised copy of c."""
    v = np.asarray(c, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise ValidationError("Zero state vector")
    v = v / norm
    return density_matrix(np.outer(v, v.conj()))


def maximally_mixed(n: int = 2) -> DensityMatrix:
    return density_matrix(np.eye(n, dtype=complex) / n)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order='F')


def unvec(v: np.ndarray, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((n, n), order='F')


def liouvillian(m: LindbladModel) -> np.ndarray:
    """
    Superoperator of rho -> -i[H, rho] + sum_j (L_j rho L_j^+ - {L_j^+ L_j, rho}/2)
    in the column-stacked basis.
    """
    h = m.hamiltonian()
    n = h.shape[0]
    eye = np.eye(n, dtype=complex)
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for jump in m.jump_operators():
        jdj = adjoint(jump) @ jump
        sup += np.kron(jump.conj(), jump) - 0.5 * np.kron(eye, jdj) - 0.5 * np.kron(jdj.T, eye)
    return sup


def trace_preservation_residual(sup: np.ndarray) -> float:
    """max |vec(1)^+ L|; zero for a trace-preserving generator."""
    n = int(round(np.sqrt(sup.shape[0])))
    return max_abs(vec(np.eye(n)).conj() @ sup)


def steady_state(m: LindbladModel) -> DensityMatrix:
    """Normalised right null vector of the Liouvillian."""
    sup = liouvillian(m)
    es = eig(sup)
    k = int(np.argmin(np.abs(es.eigenvalues)))
    rho = unvec(es.right_eigenvectors[:, k], 2)
    rho = rho / np.trace(rho)
    return density_matrix(0.5 * (rho + adjoint(rho)))


def bloch_vector(rho) -> Tuple[float, float, float]:
    """(<sigma_x>, <sigma_y>, <sigma_z>)."""
    r = np.asarray(getattr(rho, 'rho', rho), dtype=complex)
    return (float(np.trace(r @ SIGMA_X).real),
            float(np.trace(r @ SIGMA_Y).real),
            float(np.trace(r @ SIGMA_Z).real))


def purity(rho) -> float:
    r = np.asarray(getattr(rho, 'rho', rho), dtype=complex)
    return float(np.trace(r @ r).real)


def bloch_block_eigenvalues(kappa: float, gamma: float) -> np.ndarray:
    """
    Closed-form Liouvillian spectrum of the balanced model, read off the
    Bloch equations: x decays at gamma, (y, z) form a damped rotation block.
    """
    disc = np.sqrt(complex(gamma ** 2 - 16.0 * kappa ** 2))
    vals = np.array([0.0, -gamma, (-3.0 * gamma - disc) / 2.0, (-3.0 * gamma + disc) / 2.0], dtype=complex)
    return vals[np.lexsort((np.round(vals.imag, 12), np.round(vals.real, 12)))]


def dimer_spectrum(kappa: float, gamma: float) -> np.ndarray:
    """Eigenvalues -/+ sqrt(kappa^2 - gamma^2) of the classical dimer [[i gamma, kappa], [kappa, -i gamma]]."""
    root = np.sqrt(complex(kappa ** 2 - gamma ** 2))
    return np.array([-root, root])


def _check_sample(t: float, rho: np.ndarray) -> None:
    lowest = float(np.linalg.eigvalsh(0.5 * (rho + adjoint(rho)))[0])
    if lowest < -POSITIVITY_FLOOR:
        raise PositivityViolation(f"Eigenvalue {lowest:.3e} at t={t:.6g}; integrator failed")


def evolve_density(m: LindbladModel, rho0: DensityMatrix, t_max: float, dt: float) -> List[Tuple[float, DensityMatrix]]:
    """
    Fixed-step classical RK4 integration of the master equation.

    The step is shortened to t_max / ceil(t_max / dt) so the last sample
    lands on t_max.

    Raises:
        StepTooLarge: dt above 0.01 / max(kappa, gamma, 1)
        PositivityViolation: an eigenvalue of rho drops below -1e-6
    """
    if not np.isfinite(t_max) or t_max < 0:
        raise ValidationError(f"t_max={t_max} must be finite and >= 0")
    if not np.isfinite(dt) or dt <= 0:
        raise ValidationError(f"dt={dt} must be positive")
    cap = m.max_step()
    if dt > cap * (1.0 + 1e-12):
        raise StepTooLarge(f"dt={dt:.3e} exceeds {cap:.3e}")

    sup = liouvillian(m)
    n = rho0.rho.shape[0]
    steps = int(np.ceil(t_max / dt - 1e-9)) if t_max > 0 else 0
    h = t_max / steps if steps else 0.0

    x = vec(rho0.rho)
    samples = [(0.0, rho0)]
    worst_trace = 0.0
    for k in range(1, steps + 1):
        k1 = sup @ x
        k2 = sup @ (x + 0.5 * h * k1)
        k3 = sup @ (x + 0.5 * h * k2)
        k4 = sup @ (x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

        t = k * h
        rho = unvec(x, n)
        _check_sample(t, rho)
        worst_trace = max(worst_trace, abs(np.trace(rho) - 1.0))
        rho = rho.copy()
        rho.setflags(write=False)
        samples.append((t, DensityMatrix(rho=rho)))

    if worst_trace > TRACE_DRIFT_TOL:
        logger.warning(f"Trace drift {worst_trace:.3e} over {steps} steps")
    logger.debug(f"Integrated {steps} RK4 steps of {h:.3e} for {m}")
    return samples


def bloch_trajectory(samples: Iterable[Tuple[float, DensityMatrix]]) -> pd.DataFrame:
    rows = []
    for t, d in samples:
        x, y, z = bloch_vector(d)
        rows.append({'t': t, 'x': x, 'y': y, 'z': z, 'purity': purity(d)})
    return pd.DataFrame(rows, columns=['t', 'x', 'y', 'z', 'purity'])


def _min_pair_angle(block: np.ndarray) -> float:
    angles = [np.arccos(min(1.0, abs(np.vdot(block[:, i], block[:, j]))))
              for i in range(block.shape[1]) for j in range(i + 1, block.shape[1])]
    return float(min(angles))


def _has_coalescence(sup: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> bool:
    """
    True when some eigenvalue cluster (members within EP_EIGENVALUE_GAP) has
    fewer independent eigenvectors than members.

    The geometric multiplicity is the nullity of sup - lambda*1, counted from
    its singular values; LAPACK's eigenvector basis for a repeated eigenvalue
    is arbitrary and may come back parallel even when the eigenvalue is not
    defective. Near-parallel returned vectors are still required.
    """
    n = sup.shape[0]
    tol = 10.0 * EP_EIGENVALUE_GAP * max(float(np.linalg.norm(sup, 2)), 1.0)
    seen = set()
    for i in range(len(values)):
        if i in seen:
            continue
        members = [j for j in range(len(values)) if abs(values[j] - values[i]) <= EP_EIGENVALUE_GAP]
        seen.update(members)
        if len(members) < 2:
            continue
        centre = values[members].mean()
        sv = np.linalg.svd(sup - centre * np.eye(n), compute_uv=False)
        nullity = int(np.sum(sv <= tol))
        if nullity < len(members) and _min_pair_angle(vectors[:, members]) < EP_VECTOR_ANGLE:
            logger.debug(f"Defective cluster at {centre:.6g}: {len(members)} eigenvalues, nullity {nullity}")
            return True
    return False


def classify_regime(m: LindbladModel) -> RegimeClass:
    """
    Spectral classification of the Liouvillian.

    Coalescence (a defective eigenvalue cluster) is reported as 'exceptional'
    ahead of the imaginary-part test, since rounding splits a defective pair
    into a complex pair of size ~sqrt(eps).
    """
    sup = liouvillian(m)
    es = eig(sup)
    values = es.eigenvalues
    decaying = values[np.abs(values) > ZERO_MODE_TOL]

    max_im = float(np.max(np.abs(decaying.imag))) if decaying.size else 0.0
    gap = float(np.min(-decaying.real)) if decaying.size else 0.0

    if _has_coalescence(sup, values, es.right_eigenvectors):
        label = 'exceptional'
    elif max_im > TOL_IM:
        label = 'oscillatory'
    else:
        label = 'overdamped'
    return RegimeClass(label=label, spectral_gap=gap,
                       oscillation_frequency=max_im if label == 'oscillatory' else 0.0,
                       max_im_eig=max_im)


def sign_changes(times, signal, t_skip: float, floor: float = OSCILLATION_NOISE_FLOOR) -> int:
    """
    Sign changes of d(signal)/dt after t_skip, counted between same-sign
    lobes whose peak exceeds the noise floor.
    """
    t = np.asarray(times, dtype=float)
    if t.size < 3:
        return 0
    ds = np.gradient(np.asarray(signal, dtype=float), t)
    ds = ds[t >= t_skip]

    lobes: List[int] = []
    start = 0
    for i in range(1, ds.size + 1):
        if i == ds.size or np.sign(ds[i]) != np.sign(ds[start]):
            seg = ds[start:i]
            if seg.size and np.max(np.abs(seg)) > floor:
                sign = int(np.sign(seg[np.argmax(np.abs(seg))]))
                if not lobes or lobes[-1] != sign:
                    lobes.append(sign)
            start = i
    return max(len(lobes) - 1, 0)


def detect_oscillation(times, z, t_skip: float, floor: float = OSCILLATION_NOISE_FLOOR, y=None) -> bool:
    """
    Trajectory-only oscillation test on <sigma_z>(t), and on <sigma_y>(t) when given.

    A component oscillates when its derivative changes sign at least twice
    above the floor after t_skip; a sum of two decaying exponentials changes
    sign at most once. y and z are phase-shifted against each other,
    so one of them can keep an extra lobe above the floor.
    """
    signals = [z] if y is None else [z, y]
    return any(sign_changes(times, s, t_skip, floor) >= 2 for s in signals)


def transient_time(m: LindbladModel) -> float:
    return 2.0 / max(m.gamma, m.kappa)


def settle_time(regime: RegimeClass, m: LindbladModel) -> float:
    """SETTLE_FACTOR relaxation times of the slowest decaying mode."""
    rate = regime.spectral_gap if regime.spectral_gap > ZERO_MODE_TOL else max(m.kappa, 1.0)
    return SETTLE_FACTOR / rate


def regime_scan(kappa: float, gamma_grid: Iterable[float], rho0: Optional[DensityMatrix] = None,
                t_max: Optional[float] = None, dt: Optional[float] = None) -> pd.DataFrame:
    """
    Spectral and trajectory classification of the balanced model over gamma.

    Args:
        kappa: drive strength
        gamma_grid: ascending gain = loss rates
        rho0: initial state, default |e_1><e_1|
        t_max: trajectory length, default 20 relaxation times per point
        dt: RK4 step, default the largest allowed per point

    Returns:
        DataFrame with columns gamma, label, max_im_eig, osc_flag, concordant, spectral_gap,
        dimer_real, trace_error, steady_state_error
    """
    grid = [float(g) for g in gamma_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("gamma grid must be strictly ascending")
    rho0 = rho0 or pure_density([1.0, 0.0])
    mixed = np.eye(2) / 2.0

    rows = []
    for gamma in grid:
        m = balanced_model(kappa, gamma)
        regime = classify_regime(m)
        samples = evolve_density(m, rho0, t_max if t_max is not None else settle_time(regime, m),
                                 dt if dt is not None else m.max_step())
        traj = bloch_trajectory(samples)
        osc = detect_oscillation(traj['t'], traj['z'], transient_time(m), y=traj['y'])
        trace_err = max(abs(d.trace - 1.0) for _, d in samples)
        dimer = dimer_spectrum(kappa, gamma)

        rows.append({
            'gamma': gamma,
            'label': regime.label,
            'max_im_eig': regime.max_im_eig,
            'osc_flag': osc,
            'concordant': osc == (regime.label == 'oscillatory'),
            'spectral_gap': regime.spectral_gap,
            'dimer_real': bool(max_abs(dimer.imag) <= TOL_IM),
            'trace_error': trace_err,
            'steady_state_error': max_abs(samples[-1][1].rho - mixed),
        })
        logger.debug(f"gamma={gamma:.4g}: {regime.label}, osc_flag={osc}")

    df = pd.DataFrame(rows, columns=SCAN_COLUMNS)
    flips = int((df['label'] == 'oscillatory').astype(int).diff().abs().sum()) if len(df) > 1 else 0
    logger.info(f"Scanned {len(df)} gamma values at kappa={kappa}; {flips} oscillatory flips, "
                f"{int((~df['concordant']).sum())} discordant points")
    return df
