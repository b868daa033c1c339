"""
Command-line front end: `python -m ptlab <subcommand> [options]`.

Exit codes: 0 success, 1 validation error, 2 numerical failure or a FAIL verdict.
"""
import argparse
import logging
import sys
from typing import List, Optional

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from ptlab.cli import distinguish, evolve, lindblad, measure, nosignal, pauli, scan
from ptlab.cli.output import CommandResult, write_result
from ptlab.shared.errors import PTLabError
from ptlab.shared.utils import setup_logging

logger = logging.getLogger(__name__)

SUBCOMMANDS = (pauli, measure, evolve, distinguish, nosignal, lindblad, scan)


def build_parser() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--output", metavar="PATH", default=None,
                        help="Output file (default: results_dir/<subcommand>.<csv|json>)")

    parser = argparse.ArgumentParser(prog="ptlab", description="Biorthogonal quantum mechanics toolkit")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for module in SUBCOMMANDS:
        module.add_parser(subparsers, parent)
    return parser


def _print_summary(console: Console, result: CommandResult, path: str) -> None:
    table = Table(show_header=False, box=None)
    for label, value in result.summary:
        table.add_row(label, value)
    table.add_row("Output", path)
    if result.verdict is not None:
        color = "green" if result.verdict else "red"
        table.add_section()
        table.add_row("Verdict", f"[bold {color}]{'PASS' if result.verdict else 'FAIL'}[/bold {color}]")
    console.print(Panel(table, title=f"[bold cyan]{result.subcommand}[/bold cyan]", expand=False))


def run(argv: Optional[List[str]] = None) -> int:
    """Parses argv, dispatches to a subcommand and returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1

    setup_logging(args.subcommand)
    console = Console(stderr=True)

    try:
        result = args.handler(args)
        path = write_result(result, args.output or result.resolved.get('output'))
    except PTLabError as e:
        logger.error(f"{args.subcommand} failed: {type(e).__name__}: {e}")
        console.print(f"[bold red]{type(e).__name__}:[/bold red] {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"{args.subcommand} I/O failure: {type(e).__name__}: {e}")
        console.print(f"[bold red]{type(e).__name__}:[/bold red] {e}")
        return 1

    _print_summary(console, result, path)
    if result.verdict is not None:
        print('PASS' if result.verdict else 'FAIL')
        if not result.verdict:
            logger.warning(f"{args.subcommand} verdict FAIL")
            return 2
    return 0


def main() -> None:
    sys.exit(run())
