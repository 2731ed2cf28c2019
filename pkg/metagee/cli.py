# SPDX-FileCopyrightText: 2024 metagee contributors
#
# SPDX-License-Identifier: MIT

"""
`metagee.cli`
================================================================================

Command line interface. Exit status is 0 when every check passes, 1 when a
check fails and 2 for spec or usage errors.

* Author(s): metagee contributors

"""

import argparse
import logging
import sys

from . import MetageeError, Tolerances, __version__
from .report import (
    BUILTIN_NAMES,
    CONSTRUCTED_NAMES,
    builtin_examples,
    find_example,
    resolve_spec,
    run_all,
    write_angle_csv,
)
from .slant import UNCLASSIFIED, classify
from .submanifold import GridSample
from .warped import check_identity

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser():
    """The argument parser with every subcommand."""
    parser = argparse.ArgumentParser(
        prog="metagee",
        description="Verify metallic and Golden submanifold geometry on sampled immersions.",
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress at DEBUG level.")
    commands = parser.add_subparsers(dest="command", required=True)

    def spec_command(name, help_text):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("spec", help="Spec file, or the name of a builtin example.")
        command.add_argument("--grid", type=_positive_int, help="Points per parameter.")
        return command

    verify = spec_command("verify", "Classify and check every applicable identity.")
    verify.add_argument(
        "--tol-scale", type=_positive_float, default=1.0, help="Scale every tolerance."
    )
    verify.add_argument("--json", action="store_true", help="Emit the report as JSON.")

    spec_command("classify", "Classify the submanifold.")

    angles = spec_command("angles", "Tabulate slant angles over the grid.")
    angles.add_argument("--csv", required=True, help="Output CSV path, or - for standard output.")

    identity = spec_command("identity", "Check one identity.")
    identity.add_argument(
        "--id",
        required=True,
        dest="tag",
        help="Identity tag; case is ignored when that is unambiguous.",
    )
    identity.add_argument(
        "--tol-scale", type=_positive_float, default=1.0, help="Scale every tolerance."
    )

    examples = commands.add_parser("examples", help="List or run the builtin examples.")
    group = examples.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true", help="List example names.")
    group.add_argument("--run", metavar="NAME", help="Run one example, or all builtin examples.")
    return parser


def _spec(args):
    spec = resolve_spec(args.spec)
    if args.grid is not None:
        spec = spec.with_grid(args.grid)
    return spec


def _verify(args):
    report = run_all(_spec(args), Tolerances(args.tol_scale))
    print(report.to_json() if args.json else report.to_text())
    return EXIT_PASS if report.passed else EXIT_FAIL


def _classify(args):
    result = classify(_spec(args))
    print(result.label)
    for name, profile in result.profiles.items():
        print(
            "  %s: %s, angle %.12f rad (%s)"
            % (name, profile.kind, profile.angles.mean, profile.angles.verdict)
        )
    for note in result.diagnostics:
        print("  note: %s" % note)
    return EXIT_FAIL if result.label == UNCLASSIFIED else EXIT_PASS


def _angles(args):
    spec = _spec(args)
    sample = GridSample(spec)
    if args.csv == "-":
        write_angle_csv(spec, sys.stdout, sample)
    else:
        with open(args.csv, "w", newline="", encoding="utf-8") as out:
            write_angle_csv(spec, out, sample)
    return EXIT_PASS


def _identity(args):
    result = check_identity(_spec(args), args.tag, tolerances=Tolerances(args.tol_scale))
    print(
        "%s %s  residual %.3e  tol %.1e  (%s)"
        % (result.verdict, result.tag, result.residual, result.tolerance, result.statement)
    )
    if result.note:
        print("  %s" % result.note)
    return EXIT_PASS if result.passed else EXIT_FAIL


def _examples(args):
    if args.list:
        for name in BUILTIN_NAMES + CONSTRUCTED_NAMES:
            print(name)
        return EXIT_PASS
    specs = builtin_examples() if args.run == "all" else [find_example(args.run)]
    status = EXIT_PASS
    for spec in specs:
        report = run_all(spec)
        print("%-36s %-16s %s" % (spec.name, report.classification.label, report.overall))
        if not report.passed:
            status = EXIT_FAIL
    return status


_COMMANDS = {
    "verify": _verify,
    "classify": _classify,
    "angles": _angles,
    "identity": _identity,
    "examples": _examples,
}


def main(argv=None):
    """
    Run the command line interface.

    :param list argv: Arguments without the program name. Defaults to ``sys.argv[1:]``.
    :return: The exit status.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("metagee %s: %s", __version__, args.command)
    try:
        return _COMMANDS[args.command](args)
    except (MetageeError, ValueError, OSError) as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_ERROR
