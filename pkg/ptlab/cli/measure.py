"""Outcome probabilities and seeded counts of a physical observable."""
import sys

import numpy as np
import pandas as pd

from ptlab.cli.output import CommandResult
from ptlab.shared.frames import state
from ptlab.shared.observables import (
    expectation, observable_from_array, outcome_probabilities, sample_from_probabilities,
)
from ptlab.shared.run_config import load_run_config, parse_frame, parse_matrix, parse_vector


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('measure', parents=[parent], help="Measurement statistics from a run config")
    p.add_argument("--config", required=True, metavar="FILE", help="JSON run config")
    p.add_argument("--seed", type=int, default=None, help="Override the config seed")
    p.add_argument("--samples", type=int, default=None, help="Override n_samples")
    p.set_defaults(handler=run_measure)


def run_measure(args) -> CommandResult:
    rc = load_run_config(args.config, 'measure')
    params = rc.params
    if args.seed is not None:
        params['seed'] = args.seed
    if args.samples is not None:
        params['n_samples'] = args.samples

    frame = parse_frame(params['frame'])
    obs = observable_from_array(frame, parse_matrix(params['f_array'], 'f_array'))
    s = state(frame, parse_vector(params['state'], 'state'))

    pv = outcome_probabilities(obs, s)
    n_samples = int(params['n_samples'])
    counts = (sample_from_probabilities(pv.p, n_samples, params['seed']) if n_samples
              else np.zeros(len(pv.p), dtype=int))
    mean = expectation(obs, s)

    df = pd.DataFrame({'eigenvalue': pv.eigenvalues, 'probability': pv.p, 'count': counts})
    return CommandResult(
        subcommand='measure',
        resolved=params,
        seed=params['seed'],
        table=df,
        summary=[
            ('Outcomes', str(len(df))),
            ('Expectation', f"{mean:.12f}"),
            ('sum p_k f_k', f"{float(np.dot(pv.p, pv.eigenvalues)):.12f}"),
            ('Samples', f"{n_samples:,}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['measure'] + sys.argv[1:]))
