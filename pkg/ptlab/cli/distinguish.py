"""
Statistical indistinguishability of frames.

Measures one coefficient array on one coefficient state in every listed frame
with a shared seed; the count vectors must match exactly.
"""
import logging
import sys

import numpy as np

from ptlab.cli.output import CommandResult
from ptlab.shared.frames import frame_to_json, state
from ptlab.shared.linalg import condition
from ptlab.shared.observables import (
    expectation, observable_from_array, outcome_probabilities, sample_from_probabilities,
)
from ptlab.shared.run_config import load_run_config, parse_frame, parse_matrix, parse_vector
from ptlab.shared.utils import vector_to_json

logger = logging.getLogger(__name__)

PROBABILITY_SPREAD_TOL = 1e-10


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('distinguish', parents=[parent], help="Compare measurement counts across frames")
    p.add_argument("--config", required=True, metavar="FILE", help="JSON run config")
    p.add_argument("--seed", type=int, default=None, help="Override the config seed")
    p.add_argument("--samples", type=int, default=None, help="Override n_samples")
    p.set_defaults(handler=run_distinguish)


def run_distinguish(args) -> CommandResult:
    rc = load_run_config(args.config, 'distinguish')
    params = rc.params
    if args.seed is not None:
        params['seed'] = args.seed
    if args.samples is not None:
        params['n_samples'] = args.samples
    seed, n_samples = int(params['seed']), int(params['n_samples'])

    f = parse_matrix(params['f_array'], 'f_array')
    c = parse_vector(params['state'], 'state')

    reports, probs, counts = [], [], []
    for i, spec in enumerate(params['frames']):
        frame = parse_frame(spec)
        obs = observable_from_array(frame, f)
        s = state(frame, c)
        pv = outcome_probabilities(obs, s)
        k = sample_from_probabilities(pv.p, n_samples, seed)
        probs.append(pv.p)
        counts.append(k)
        reports.append({
            'index': i,
            'frame': frame_to_json(frame),
            'condition': condition(frame.u_matrix),
            'eigenvalues': pv.eigenvalues.tolist(),
            'probabilities': pv.p.tolist(),
            'counts': k.tolist(),
            'expectation': expectation(obs, s),
        })
        logger.debug(f"Frame {i}: p={pv.p.tolist()} counts={k.tolist()}")

    same_shape = all(p.shape == probs[0].shape for p in probs)
    spread = float(np.max(np.ptp(np.vstack(probs), axis=0))) if same_shape else float('inf')
    identical = same_shape and all(np.array_equal(k, counts[0]) for k in counts)
    verdict = identical and spread <= PROBABILITY_SPREAD_TOL

    return CommandResult(
        subcommand='distinguish',
        resolved=params,
        seed=seed,
        payload={
            'state': vector_to_json(c),
            'frames': reports,
            'counts_identical': identical,
            'max_probability_spread': spread,
            'verdict': 'PASS' if verdict else 'FAIL',
        },
        verdict=verdict,
        summary=[
            ('Frames', str(len(reports))),
            ('Samples per frame', f"{n_samples:,}"),
            ('Counts identical', str(identical)),
            ('Max probability spread', f"{spread:.2e}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['distinguish'] + sys.argv[1:]))
