"""B-marginal statistics under a local PT evolution on A."""
import sys

from ptlab.cli.output import CommandResult
from ptlab.shared.composite import NO_SIGNALLING_TOL, marginal_trajectory, tensor_frame
from ptlab.shared.dynamics import hamiltonian
from ptlab.shared.frames import state
from ptlab.shared.run_config import (
    load_run_config, parse_frame, parse_matrix, parse_times, parse_vector,
)


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('nosignal', parents=[parent], help="No-signalling check on a bipartite system")
    p.add_argument("--config", required=True, metavar="FILE", help="JSON run config")
    p.set_defaults(handler=run_nosignal)


def run_nosignal(args) -> CommandResult:
    rc = load_run_config(args.config, 'nosignal')
    params = rc.params

    cf = tensor_frame(parse_frame(params['frame_a']), parse_frame(params['frame_b']))
    h_a = hamiltonian(cf.frame_a, params['energies_a'])
    s = state(cf.joint, parse_vector(params['state'], 'state'))
    df = marginal_trajectory(cf, s, h_a, parse_matrix(params['obs_b'], 'obs_b'),
                             parse_times(params['times']))

    deviation = float(df['deviation'].max())
    return CommandResult(
        subcommand='nosignal',
        resolved=params,
        table=df,
        verdict=deviation <= NO_SIGNALLING_TOL,
        summary=[
            ('Dimensions', f"{cf.frame_a.dim} x {cf.frame_b.dim}"),
            ('Times', str(df['t'].nunique())),
            ('Max marginal deviation', f"{deviation:.2e}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['nosignal'] + sys.argv[1:]))
