import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ptlab.shared.errors import ConfigError
from ptlab.shared.frames import BiorthogonalFrame, frame_from_json
from ptlab.shared.two_level import TwoLevelParams, two_level_frame
from ptlab.shared.utils import load_config, matrix_from_json, vector_from_json

logger = logging.getLogger(__name__)

# --- Constants ---
config = load_config()
DEFAULT_SEED = int(config.get('sampling', {}).get('default_seed', 0))

# Config file schema contract: required keys, optional keys with defaults
RUN_SCHEMAS: Dict[str, Tuple[Tuple[str, ...], Dict[str, Any]]] = {
    'measure': (('frame', 'f_array', 'state'), {'n_samples': 0, 'seed': DEFAULT_SEED, 'output': None}),
    'evolve': (('frame', 'energies', 'state', 'times'), {'output': None}),
    'distinguish': (('f_array', 'state', 'frames'), {'n_samples': 1000000, 'seed': DEFAULT_SEED, 'output': None}),
    'nosignal': (('frame_a', 'frame_b', 'state', 'energies_a', 'obs_b', 'times'), {'output': None}),
}

FRAME_KEYS = {'xi', 'eta', 'n', 'u', 'v'}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    params: Dict[str, Any] = field(default_factory=dict)


def default_run_config(subcommand: str) -> Dict[str, Any]:
    """Returns the optional keys of a subcommand initialized to their defaults."""
    if subcommand not in RUN_SCHEMAS:
        raise ConfigError(f"No config schema for subcommand '{subcommand}'")
    return dict(RUN_SCHEMAS[subcommand][1])


def _frame_errors(spec: Any, key: str) -> List[str]:
    if not isinstance(spec, dict):
        return [f"'{key}' must be an object, got {type(spec).__name__}"]
    errors = []
    unknown = set(spec) - FRAME_KEYS
    if unknown:
        errors.append(f"'{key}': unknown keys {sorted(unknown)}")
    if 'xi' in spec or 'eta' in spec:
        if 'u' in spec:
            errors.append(f"'{key}': give either xi/eta or u, not both")
        for name in ('xi', 'eta'):
            if not isinstance(spec.get(name), (int, float)):
                errors.append(f"'{key}': '{name}' must be a number in radians")
    elif 'u' not in spec:
        errors.append(f"'{key}': needs xi/eta or a 'u' matrix")
    return errors


def _is_matrix(val: Any) -> bool:
    return isinstance(val, list) and len(val) > 0 and all(isinstance(r, list) for r in val)


def _is_number_list(val: Any) -> bool:
    return isinstance(val, list) and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)


def _times_errors(spec: Any) -> List[str]:
    if _is_number_list(spec) and spec:
        return []
    if isinstance(spec, dict) and set(spec) == {'start', 'stop', 'num'}:
        if not isinstance(spec['num'], int) or spec['num'] < 1:
            return ["'times.num' must be a positive integer"]
        return []
    return ["'times' must be a non-empty number list or {start, stop, num}"]


def validate_run_config(cfg: Dict[str, Any], subcommand: str) -> List[str]:
    """
    Validates a run config dictionary against the subcommand schema.

    Args:
        cfg: Parsed JSON config
        subcommand: Subcommand the config is meant for

    Returns:
        List of error messages (empty if valid)
    """
    if subcommand not in RUN_SCHEMAS:
        return [f"No config schema for subcommand '{subcommand}'"]
    if not isinstance(cfg, dict):
        return [f"Config must be a JSON object, got {type(cfg).__name__}"]

    required, optional = RUN_SCHEMAS[subcommand]
    errors = []

    unknown = set(cfg) - set(required) - set(optional)
    if unknown:
        errors.append(f"Unknown keys {sorted(unknown)}")
    for key in required:
        if key not in cfg:
            errors.append(f"Missing required key '{key}'")

    for key in ('frame', 'frame_a', 'frame_b'):
        if key in cfg:
            errors.extend(_frame_errors(cfg[key], key))
    if 'frames' in cfg:
        if not isinstance(cfg['frames'], list) or len(cfg['frames']) < 2:
            errors.append("'frames' must list at least two frames")
        else:
            for i, spec in enumerate(cfg['frames']):
                errors.extend(_frame_errors(spec, f"frames[{i}]"))

    for key in ('f_array', 'obs_b'):
        if key in cfg and not _is_matrix(cfg[key]):
            errors.append(f"'{key}' must be a nested list matrix")
    if 'state' in cfg and not (isinstance(cfg['state'], list) and cfg['state']):
        errors.append("'state' must be a non-empty coefficient list")
    for key in ('energies', 'energies_a'):
        if key in cfg and not (_is_number_list(cfg[key]) and cfg[key]):
            errors.append(f"'{key}' must be a non-empty list of real numbers")
    if 'times' in cfg:
        errors.extend(_times_errors(cfg['times']))

    for key in ('n_samples', 'seed'):
        val = cfg.get(key)
        if val is not None and (not isinstance(val, int) or isinstance(val, bool) or val < 0):
            errors.append(f"'{key}' must be a non-negative integer, got {val!r}")
    if cfg.get('output') is not None and not isinstance(cfg['output'], str):
        errors.append("'output' must be a path string")

    return errors


def load_run_config(path: str, subcommand: str) -> RunConfig:
    """
    Reads and validates a JSON run config, filling optional defaults.

    Raises:
        ConfigError: unreadable file or schema violations (all listed)
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e

    errors = validate_run_config(raw, subcommand)
    if errors:
        logger.warning(f"Config {path} failed validation: {len(errors)} errors")
        raise ConfigError("; ".join(errors))

    params = default_run_config(subcommand)
    params.update(raw)
    logger.info(f"Loaded {subcommand} config from {path}")
    return RunConfig(subcommand=subcommand, params=params)


def parse_frame(spec: Dict[str, Any]) -> BiorthogonalFrame:
    """Frame from {"xi", "eta"} (two-level) or {"u"} / {"n", "u", "v"}."""
    errors = _frame_errors(spec, 'frame')
    if errors:
        raise ConfigError("; ".join(errors))
    if 'xi' in spec:
        return two_level_frame(TwoLevelParams(float(spec['xi']), float(spec['eta'])))
    try:
        return frame_from_json(spec)
    except ValueError as e:
        raise ConfigError(f"Bad frame matrix: {e}") from e


def parse_times(spec: Any) -> np.ndarray:
    errors = _times_errors(spec)
    if errors:
        raise ConfigError("; ".join(errors))
    if isinstance(spec, dict):
        return np.linspace(float(spec['start']), float(spec['stop']), int(spec['num']))
    return np.asarray(spec, dtype=float)


def parse_matrix(val: Any, key: str) -> np.ndarray:
    try:
        return matrix_from_json(val)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"'{key}': {e}") from e


def parse_vector(val: Any, key: str) -> np.ndarray:
    try:
        return vector_from_json(val)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"'{key}': {e}") from e
