"""Closed-system trajectory of expansion coefficients."""
import sys

from ptlab.cli.output import CommandResult
from ptlab.shared.dynamics import hamiltonian, trajectory
from ptlab.shared.frames import state
from ptlab.shared.run_config import load_run_config, parse_frame, parse_times, parse_vector


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('evolve', parents=[parent], help="Evolve a state under a real-spectrum Hamiltonian")
    p.add_argument("--config", required=True, metavar="FILE", help="JSON run config")
    p.set_defaults(handler=run_evolve)


def run_evolve(args) -> CommandResult:
    rc = load_run_config(args.config, 'evolve')
    params = rc.params

    frame = parse_frame(params['frame'])
    h = hamiltonian(frame, params['energies'])
    s = state(frame, parse_vector(params['state'], 'state'))
    df = trajectory(h, s, parse_times(params['times']))

    drift = float((df['physical_norm'] - df['physical_norm'].iloc[0]).abs().max())
    return CommandResult(
        subcommand='evolve',
        resolved=params,
        table=df,
        summary=[
            ('Time points', str(len(df))),
            ('Physical norm', f"{df['physical_norm'].iloc[0]:.12f}"),
            ('Max norm drift', f"{drift:.2e}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['evolve'] + sys.argv[1:]))
