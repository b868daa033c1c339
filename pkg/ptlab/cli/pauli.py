"""Extended Pauli matrix of the (xi, eta) two-level frame."""
import sys

import numpy as np

from ptlab.cli.output import CommandResult
from ptlab.shared.linalg import eig, is_hermitian
from ptlab.shared.two_level import AXES, TwoLevelParams, pauli, two_level_frame
from ptlab.shared.frames import frame_to_json
from ptlab.shared.utils import matrix_to_json, vector_to_json


def add_parser(subparsers, parent) -> None:
    p = subparsers.add_parser('pauli', parents=[parent], help="Extended Pauli matrix for a (xi, eta) frame")
    p.add_argument("--xi", type=float, required=True, help="Frame angle xi in (0, 2*pi), radians")
    p.add_argument("--eta", type=float, default=0.0, help="Frame phase eta in [0, 2*pi), radians")
    p.add_argument("--axis", choices=AXES, required=True)
    p.set_defaults(handler=run_pauli)


def run_pauli(args) -> CommandResult:
    params = TwoLevelParams(args.xi, args.eta)
    matrix = pauli(args.axis, params)
    values = eig(matrix).eigenvalues

    return CommandResult(
        subcommand='pauli',
        resolved={'xi': args.xi, 'eta': args.eta, 'axis': args.axis},
        payload={
            'axis': args.axis,
            'matrix': matrix_to_json(matrix),
            'eigenvalues': vector_to_json(values),
            'hermitian': is_hermitian(matrix),
            'frame': frame_to_json(two_level_frame(params)),
        },
        summary=[
            ('Axis', f"sigma_{args.axis}"),
            ('Eigenvalues', ", ".join(f"{v.real:+.12f}" for v in values)),
            ('Hermitian', str(is_hermitian(matrix))),
            ('max |Im eig|', f"{float(np.max(np.abs(values.imag))):.2e}"),
        ],
    )


if __name__ == "__main__":
    from ptlab.cli import run
    sys.exit(run(['pauli'] + sys.argv[1:]))
