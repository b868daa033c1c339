"""Oscillatory/overdamped regime scan over the gain-loss rate."""
import sys

import numpy as np

from ptlab.cli.output import CommandResult
from ptlab.shared.errors import ValidationError
from ptlab.shared.open_system import regime_scan


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('scan', parents=[parent], help="Regime scan over gamma")
    p.add_argument("--kappa", type=float, required=True, help="Drive strength")
    p.add_argument("--gamma-min", type=float, required=True)
    p.add_argument("--gamma-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="Grid points, endpoints included")
    p.set_defaults(handler=run_scan)


def transition_points(df) -> list:
    """Grid gammas where the oscillatory label switches on or off."""
    osc = (df['label'] == 'oscillatory').to_numpy()
    return [float(df['gamma'].iloc[i]) for i in range(1, len(osc)) if osc[i] != osc[i - 1]]


def run_scan(args) -> CommandResult:
    if args.steps < 2:
        raise ValidationError("--steps must be at least 2")
    if args.gamma_min < 0 or args.gamma_max <= args.gamma_min:
        raise ValidationError("Need 0 <= gamma-min < gamma-max")

    grid = np.linspace(args.gamma_min, args.gamma_max, args.steps)
    df = regime_scan(args.kappa, grid)
    flips = transition_points(df)

    return CommandResult(
        subcommand='scan',
        resolved={'kappa': args.kappa, 'gamma_min': args.gamma_min,
                  'gamma_max': args.gamma_max, 'steps': args.steps},
        table=df,
        summary=[
            ('Grid points', str(len(df))),
            ('Label flips at gamma', ", ".join(f"{g:.4g}" for g in flips) or "none"),
            ('Lindblad transition (4 kappa)', f"{4 * args.kappa:.4g}"),
            ('Dimer exceptional point (kappa)', f"{args.kappa:.4g}"),
            ('Discordant at gamma', ", ".join(f"{g:.4g}" for g in df.loc[~df['concordant'], 'gamma']) or "none"),
            ('Max trace error', f"{df['trace_error'].max():.2e}"),
            ('Max steady-state error', f"{df['steady_state_error'].max():.2e}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['scan'] + sys.argv[1:]))
