import hashlib
import json
import logging
import os
import tempfile
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import yaml

DEFAULTS: Dict[str, Any] = {
    'results_dir': 'data/results',
    'log_dir': 'data/logs',
    'tolerances': {
        'biorthogonality': 1e-10,
        'hermiticity': 1e-12,
        'reality': 1e-9,
        'cluster_rel': 1e-8,
        'probability_clamp': 1e-12,
        'imag_residue': 1e-10,
        'condition_cap': 1e12,
        'eig_residual': 1e-10,
    },
    'two_level': {
        'sin_half_xi_floor': 1e-6,
    },
    'sampling': {
        'bit_generator': 'PCG64',
        'default_seed': 0,
    },
    'open_system': {
        'tol_im': 1e-8,
        'ep_eigenvalue_gap': 1e-6,
        'ep_vector_angle': 1e-3,
        'oscillation_noise_floor': 1e-6,
        'positivity_floor': 1e-6,
        'dt_scale': 0.01,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], val)
        else:
            merged[key] = val
    return merged


def load_config() -> Dict[str, Any]:
    """Loads configuration from config.yaml in project root."""
    # Find project root (3 levels up from this file)
    root_dir = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    config_path = os.path.join(root_dir, 'config.yaml')

    if not os.path.exists(config_path):
        return _merge(DEFAULTS, {})

    try:
        with open(config_path, 'r', encoding='utf-8') as f:
            config = yaml.safe_load(f)
            return _merge(DEFAULTS, config or {})
    except Exception as e:
        logging.error(f"Failed to load config: {e}")
        return _merge(DEFAULTS, {})


def setup_logging(script_name: str, log_dir: Optional[str] = None) -> str:
    """Configures logging to file and console."""
    log_dir = log_dir or load_config()['log_dir']
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, f"{script_name}.log")

    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, mode='a', encoding='utf-8'),
            logging.StreamHandler()
        ],
        force=True,
    )
    return log_file


def parse_complex(val: Union[Sequence[float], float, int, complex, str, None]) -> complex:
    """Converts a JSON scalar, an [re, im] pair or a string like '1+2j' to complex."""
    if val is None or val == '':
        return 0j
    if isinstance(val, (list, tuple)):
        if len(val) != 2:
            raise ValueError(f"Expected [re, im] pair, got {val!r}")
        return complex(float(val[0]), float(val[1]))
    if isinstance(val, (int, float, complex)):
        return complex(val)
    return complex(str(val).replace(' ', '').replace('i', 'j'))


def matrix_to_json(m: np.ndarray) -> List[List[List[float]]]:
    """Nested [re, im] pairs, row-major."""
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    if not rows:
        raise ValueError("Empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("Ragged matrix rows")
    return np.array([[parse_complex(z) for z in row] for row in rows], dtype=complex)


def vector_to_json(v: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def vector_from_json(items: Sequence[Any]) -> np.ndarray:
    return np.array([parse_complex(z) for z in items], dtype=complex)


def config_digest(config: Dict[str, Any]) -> str:
    """Generates a stable hash of a resolved run configuration."""
    # Canonical form: sorted keys, no whitespace
    raw_str = json.dumps(config, sort_keys=True, separators=(',', ':'), default=str)
    return hashlib.md5(raw_str.encode()).hexdigest()


def write_atomic(path: str, text: str) -> str:
    """Writes text to path via a temp file in the same directory and a rename."""
    target_dir = os.path.dirname(os.path.abspath(path))
    os.makedirs(target_dir, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=target_dir, prefix='.tmp_', suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path
