"""
Superalgebra Invariant Engine - command line

Usage: python app.py <command> [flags]

Commands: verify-lemma4, verify-star3, invariants, conjecture6, radial,
membership, zoo export|import, selftest. Every flag may also be set through
an SLC_<FLAG> environment variable; explicit flags win.
"""

import argparse
import sys
from typing import Dict, List, Optional

from constants import (
    VALID_ALGEBRAS,
    VALID_DEFORM_TERMS,
    VALID_MODULES,
    VALID_OUTPUTS,
    VALID_WEIGHT_FILTERS,
    VALID_ZOO_ACTIONS,
    Command,
    ExitCode,
)
from src.config import CANDIDATES, InvalidConfigError, build_config
from src.pipelines import PipelineRunner

COMMAND_HELP: Dict[str, str] = {
    Command.VERIFY_LEMMA4.value: "Quantization defect on all monomial pairs of po(0|m)",
    Command.VERIFY_STAR3.value: "Lowest ħ-component of the moments against r_k",
    Command.INVARIANTS.value: "Basis of the degree-d invariants of an algebra module",
    Command.CONJECTURE6.value: "Invariants of po(0|m) against lowest components of moment products",
    Command.RADIAL.value: "Radial parts of r_k and of the invariants of po(0|m)",
    Command.MEMBERSHIP.value: "Membership of an invariant in the algebra generated by r_k",
    Command.ZOO.value: "Export or import an algebra in the exchange format",
    Command.SELFTEST.value: "Small instance of every pipeline",
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    # Defaults stay None so environment overrides are not masked
    parser.add_argument("--m", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--degree", type=int)
    parser.add_argument("--algebra", choices=VALID_ALGEBRAS)
    parser.add_argument("--module", choices=VALID_MODULES)
    parser.add_argument("--weight-filter", dest="weight_filter", choices=VALID_WEIGHT_FILTERS)
    parser.add_argument("--deform-term", dest="deform_term", choices=VALID_DEFORM_TERMS)
    parser.add_argument("--output", choices=VALID_OUTPUTS)
    parser.add_argument("--cache-dir", dest="cache_dir")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int)
    parser.add_argument("--candidate", choices=CANDIDATES)
    parser.add_argument("--path")


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so main() owns the exit code; subparsers inherit the class"""

    def error(self, message):
        raise _ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="app.py", description="Exact invariants of Lie superalgebras on purely odd superspaces")
    sub = parser.add_subparsers(dest="command", required=True)
    for command, help_text in COMMAND_HELP.items():
        cmd_parser = sub.add_parser(command, help=help_text)
        if command == Command.ZOO.value:
            cmd_parser.add_argument("zoo_action", choices=VALID_ZOO_ACTIONS)
        _add_common_flags(cmd_parser)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = build_config(vars(args))
    except (_ArgumentError, InvalidConfigError) as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return ExitCode.INVALID_INPUT.value

    report = PipelineRunner(config).run()
    print(report.render(config.output))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
