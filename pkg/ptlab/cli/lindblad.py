"""Bloch-vector trajectory of the balanced gain/loss qubit."""
import sys

from ptlab.cli.output import CommandResult
from ptlab.shared.open_system import (
    balanced_model, bloch_trajectory, classify_regime, evolve_density, pure_density,
)


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('lindblad', parents=[parent], help="Integrate the master equation")
    p.add_argument("--kappa", type=float, required=True, help="Drive strength")
    p.add_argument("--gamma", type=float, required=True, help="Gain = loss rate")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--dt", type=float, default=None, help="RK4 step (default: largest allowed)")
    p.set_defaults(handler=run_lindblad)


def run_lindblad(args) -> CommandResult:
    m = balanced_model(args.kappa, args.gamma)
    dt = args.dt if args.dt is not None else m.max_step()
    samples = evolve_density(m, pure_density([1.0, 0.0]), args.tmax, dt)
    df = bloch_trajectory(samples)
    regime = classify_regime(m)

    last = df.iloc[-1]
    return CommandResult(
        subcommand='lindblad',
        resolved={'kappa': args.kappa, 'gamma': args.gamma, 'tmax': args.tmax, 'dt': dt},
        table=df,
        summary=[
            ('Regime', regime.label),
            ('Spectral gap', f"{regime.spectral_gap:.6f}"),
            ('Final Bloch vector', f"({last['x']:+.3e}, {last['y']:+.3e}, {last['z']:+.3e})"),
            ('Final purity', f"{last['purity']:.8f}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['lindblad'] + sys.argv[1:]))
