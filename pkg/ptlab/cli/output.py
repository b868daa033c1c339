"""Run headers and atomic result files shared by the subcommands."""
import io
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from ptlab import __version__
from ptlab.shared.utils import config_digest, load_config, write_atomic

logger = logging.getLogger(__name__)

# --- Configuration ---
config = load_config()
RESULTS_DIR = config.get('results_dir', 'data/results')


@dataclass
class CommandResult:
    subcommand: str
    resolved: Dict[str, Any]
    seed: Optional[int] = None
    table: Optional[pd.DataFrame] = None
    payload: Optional[Dict[str, Any]] = None
    verdict: Optional[bool] = None
    summary: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def suffix(self) -> str:
        return '.csv' if self.table is not None else '.json'


def build_header(result: CommandResult) -> Dict[str, Any]:
    """Everything needed to re-run: subcommand, resolved config, seed, digest, version."""
    return {
        'subcommand': result.subcommand,
        'config': result.resolved,
        'seed': result.seed,
        'config_digest': config_digest({'subcommand': result.subcommand, 'config': result.resolved,
                                        'seed': result.seed}),
        'version': __version__,
    }


def render(result: CommandResult) -> str:
    header = build_header(result)
    if result.table is not None:
        buf = io.StringIO()
        buf.write('# ' + json.dumps(header, sort_keys=True) + '\n')
        result.table.to_csv(buf, index=False, float_format='%.17g', lineterminator='\n')
        return buf.getvalue()
    doc = {'header': header}
    doc.update(result.payload or {})
    return json.dumps(doc, indent=2, sort_keys=True) + '\n'


def default_output_path(result: CommandResult) -> str:
    return os.path.join(RESULTS_DIR, f"{result.subcommand}{result.suffix}")


def write_result(result: CommandResult, output: Optional[str] = None) -> str:
    """Renders the result in full, then writes it atomically."""
    path = output or default_output_path(result)
    text = render(result)
    write_atomic(path, text)
    logger.info(f"Wrote {result.subcommand} output to {path}")
    return path
