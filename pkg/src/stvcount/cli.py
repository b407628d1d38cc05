"""Command-line interface.

Subcommands: ``count`` (one deterministic count, canonical transcript),
``simulate`` (per-candidate election probabilities over seeded trials),
``compare`` (paired-seed comparison of two rule variants), and ``seed``
(derive a ceremony record from entropy text).

Exit codes: 0 success, 1 input or validation problems, 2 internal invariant
failure. Variant divergence is a finding, not an error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engine import EngineInvariantError, run_count
from .formats import (
    BallotFormatError,
    ManifestError,
    load_election,
    write_comparison,
    write_probability_report,
    write_transcript,
)
from .model import LastParcelRule, RuleConfig, ValidationError
from .randomness import (
    CeremonyError,
    PrngStream,
    SeedCeremonyRecord,
    derive_seed,
)
from .simulate import compare_variants, run_trials

_RULE_TOKENS = [rule.value for rule in LastParcelRule]


class _Parser(argparse.ArgumentParser):
    # Usage problems are input problems: exit 1, keeping 2 for engine faults.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _CliError(message)


class _CliError(Exception):
    pass


def _add_contest_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--manifest", required=True, help="candidate manifest JSON")
    parser.add_argument("--ballots", required=True, help="ballot CSV")
    parser.add_argument(
        "--decimals",
        type=int,
        default=8,
        help="decimal places for transfer-value rounding (default 8)",
    )


def _add_seed_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--seed-text", help="ceremony entropy text")
    group.add_argument("--seed-file", help="ceremony record JSON file")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stvcount", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    count = sub.add_parser("count", help="run one count and write its transcript")
    _add_contest_arguments(count)
    _add_seed_arguments(count)
    count.add_argument(
        "--last-parcel",
        choices=_RULE_TOKENS,
        default=LastParcelRule.EXCLUSION_TRIGGERED_ONLY.value,
    )
    count.add_argument("--out", required=True, help="transcript output path")

    simulate = sub.add_parser("simulate", help="estimate election probabilities")
    _add_contest_arguments(simulate)
    _add_seed_arguments(simulate)
    simulate.add_argument(
        "--last-parcel",
        choices=_RULE_TOKENS,
        default=LastParcelRule.EXCLUSION_TRIGGERED_ONLY.value,
    )
    simulate.add_argument("--trials", type=int, default=10000)
    simulate.add_argument("--out", required=True, help="probability CSV path")

    compare = sub.add_parser("compare", help="compare two rule variants")
    _add_contest_arguments(compare)
    _add_seed_arguments(compare)
    compare.add_argument(
        "--last-parcel-a",
        choices=_RULE_TOKENS,
        default=LastParcelRule.EXCLUSION_TRIGGERED_ONLY.value,
    )
    compare.add_argument(
        "--last-parcel-b",
        choices=_RULE_TOKENS,
        default=LastParcelRule.PRIOR_TRANSFER_BLOCK.value,
    )
    compare.add_argument("--trials", type=int, default=10000)
    compare.add_argument("--out", required=True, help="comparison JSON path")

    seed = sub.add_parser("seed", help="derive a seed ceremony record")
    seed.add_argument("--text", required=True, help="ceremony entropy text")
    seed.add_argument("--out", required=True, help="ceremony record path")

    return parser


def _ceremony_from_args(args) -> SeedCeremonyRecord:
    if args.seed_text is not None:
        return derive_seed(args.seed_text)
    return SeedCeremonyRecord.from_json(Path(args.seed_file).read_text("utf-8"))


def _election_from_args(args):
    return load_election(
        Path(args.manifest).read_text("utf-8"),
        Path(args.ballots).read_text("utf-8"),
    )


def _rules(token: str, decimals: int) -> RuleConfig:
    return RuleConfig(
        last_parcel_rule=LastParcelRule.from_token(token),
        rounding_decimal_places=decimals,
    )


def _cmd_count(args) -> int:
    election = _election_from_args(args)
    ceremony = _ceremony_from_args(args)
    rules = _rules(args.last_parcel, args.decimals)
    transcript = run_count(election, rules, PrngStream(ceremony.derived_seed))
    Path(args.out).write_text(write_transcript(transcript), "utf-8")
    for cand in transcript.elected:
        print(cand)
    return 0


def _cmd_simulate(args) -> int:
    election = _election_from_args(args)
    ceremony = _ceremony_from_args(args)
    rules = _rules(args.last_parcel, args.decimals)
    if args.trials < 1:
        raise _CliError("--trials must be at least 1")
    report = run_trials(election, rules, ceremony, args.trials)
    Path(args.out).write_text(write_probability_report(report), "utf-8")
    print(ceremony.to_json(), end="")
    return 0


def _cmd_compare(args) -> int:
    election = _election_from_args(args)
    ceremony = _ceremony_from_args(args)
    rules_a = _rules(args.last_parcel_a, args.decimals)
    rules_b = _rules(args.last_parcel_b, args.decimals)
    if args.trials < 1:
        raise _CliError("--trials must be at least 1")
    comparison = compare_variants(election, rules_a, rules_b, ceremony, args.trials)
    Path(args.out).write_text(write_comparison(comparison), "utf-8")
    if comparison.first_divergent_count is None:
        print("variants agree on every count")
    else:
        print(f"variants diverge first at count {comparison.first_divergent_count}")
    return 0


def _cmd_seed(args) -> int:
    record = derive_seed(args.text)
    Path(args.out).write_text(record.to_json(), "utf-8")
    print(record.seed_hex)
    return 0


_COMMANDS = {
    "count": _cmd_count,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "seed": _cmd_seed,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        ManifestError,
        BallotFormatError,
        ValidationError,
        CeremonyError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EngineInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
