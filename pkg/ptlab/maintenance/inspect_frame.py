import json
import os
import sys

import numpy as np
import pandas as pd

from ptlab.shared.errors import PTLabError
from ptlab.shared.frames import metric, petermann_factors
from ptlab.shared.linalg import condition
from ptlab.shared.run_config import parse_frame


def frame_report(frame) -> pd.DataFrame:
    """One row per basis index: Petermann factor, metric eigenvalue, column norms."""
    g = metric(frame)
    return pd.DataFrame({
        'n': np.arange(1, frame.dim + 1),
        'petermann': petermann_factors(frame),
        'metric_eigenvalue': g.eigenvalues(),
        '|phi_n|': np.linalg.norm(frame.u_matrix, axis=0),
        '|chi_n|': np.linalg.norm(frame.v_matrix, axis=0),
    })


def inspect_frame(file_path):
    if not os.path.exists(file_path):
        print(f"Error: File not found at {file_path}")
        return 1

    print(f"--- INSPECTING: {os.path.basename(file_path)} ---")

    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        # Accept a bare frame, a run config or a pauli result
        spec = data.get('frame', data)
        frame = parse_frame(spec)
    except (OSError, json.JSONDecodeError, AttributeError) as e:
        print(f"Failed to read file: {e}")
        return 1
    except PTLabError as e:
        print(f"Invalid frame: {type(e).__name__}: {e}")
        return e.exit_code

    print(f"\nDimension:                {frame.dim}")
    print(f"Condition estimate of u:  {condition(frame.u_matrix):.6e}")
    print(f"Biorthogonality residual: {frame.biorthogonality_residual():.3e}\n")
    print(frame_report(frame).to_markdown(index=False, floatfmt='.6g'))
    print("\n--- END OF REPORT ---")
    return 0


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("Usage: python -m ptlab.maintenance.inspect_frame <frame.json>")
    else:
        sys.exit(inspect_frame(sys.argv[1]))
