"""Monte Carlo estimation, exact enumeration oracle, and variant comparison.

Trial i of a simulation runs the engine on the substream labelled
``trial-i``, so trials are independent yet individually replayable and the
aggregate is the same whatever order trials execute in. The oracle drives
the identical engine through a chooser that enumerates every alternative of
every random decision instead of drawing one, weighting each execution path
by its exact probability in rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .engine import (
    CountRecord,
    CountResult,
    DrawRecord,
    Transcript,
    run_count,
)
from .model import Election, RuleConfig
from .randomness import SeedCeremonyRecord, fork_substream


class EnumerationBudgetError(RuntimeError):
    """The election has too many random branch points to enumerate."""


class _ChoicePointReached(Exception):
    """Internal: the scripted tape ran out at a choice with this many options."""

    def __init__(self, n_alternatives: int):
        self.n_alternatives = n_alternatives


def _nth_combination(size: int, n: int, index: int) -> tuple[int, ...]:
    """The ``index``-th n-subset of range(size) in lexicographic order."""
    result: list[int] = []
    x = 0
    for remaining in range(n, 0, -1):
        while math.comb(size - x - 1, remaining - 1) <= index:
            index -= math.comb(size - x - 1, remaining - 1)
            x += 1
        result.append(x)
        x += 1
    return tuple(result)


class EnumerationChooser:
    """Chooser that replays a scripted tape of alternative indexes.

    When the tape is exhausted at a genuine choice point (more than one
    alternative), raises _ChoicePointReached so the enumeration driver can
    fork one branch per alternative. Single-alternative decisions never
    branch, and consume nothing.
    """

    def __init__(self, tape: Sequence[int]):
        self._tape = tuple(tape)
        self._position = 0

    def _next(self, n_alternatives: int) -> int:
        if n_alternatives == 1:
            return 0
        if self._position == len(self._tape):
            raise _ChoicePointReached(n_alternatives)
        value = self._tape[self._position]
        self._position += 1
        return value

    def pick_index(self, n_alternatives: int, context: str = "") -> int:
        return self._next(n_alternatives)

    def pick_subset(self, size: int, n: int, context: str = "") -> tuple[int, ...]:
        if not 0 <= n <= size:
            raise ValueError(f"cannot pick {n} of {size}")
        if n == 0:
            return ()
        if n == size:
            return tuple(range(size))
        return _nth_combination(size, n, self._next(math.comb(size, n)))

    def drain_draws(self) -> list[DrawRecord]:
        return []


def exact_probabilities(
    election: Election,
    rules: RuleConfig,
    branch_budget: int = 10**6,
) -> dict[str, Fraction]:
    """Exact per-candidate election probabilities by exhaustive enumeration.

    Every random decision (paper sampling, every tie draw) branches over all
    its alternatives; each complete path contributes its exact probability to
    the candidates it elects. Refuses with EnumerationBudgetError when the
    product of branch factors along any path would exceed ``branch_budget``.
    """
    totals: dict[str, Fraction] = {c: Fraction(0) for c in election.candidate_ids}
    threshold = Fraction(1, branch_budget)
    stack: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    while stack:
        tape, probability = stack.pop()
        try:
            result = run_count(
                election, rules, EnumerationChooser(tape), record=False
            )
        except _ChoicePointReached as point:
            child_probability = probability / point.n_alternatives
            if child_probability < threshold:
                raise EnumerationBudgetError(
                    "branch-factor product exceeds "
                    f"{branch_budget} along an execution path"
                ) from None
            for alternative in range(point.n_alternatives):
                stack.append((tape + (alternative,), child_probability))
        else:
            for cand in result.elected:
                totals[cand] += probability
    if sum(totals.values()) != election.seats:
        raise RuntimeError("enumeration paths do not cover probability 1")
    return totals


@dataclass(frozen=True)
class CandidateStats:
    elected_count: int
    probability: float
    mean_final_tally: float
    std_error: float


@dataclass(frozen=True)
class SimulationReport:
    """Aggregate of N seeded trials under one rule config."""

    trials: int
    rules: RuleConfig
    ceremony: SeedCeremonyRecord
    stats: dict[str, CandidateStats]

    @property
    def probabilities(self) -> dict[str, float]:
        return {cand: s.probability for cand, s in self.stats.items()}


def _trial_stream(ceremony: SeedCeremonyRecord, index: int):
    return fork_substream(ceremony.derived_seed, f"trial-{index}")


def run_trials(
    election: Election,
    rules: RuleConfig,
    ceremony: SeedCeremonyRecord,
    trials: int,
) -> SimulationReport:
    """Estimate per-candidate election probabilities over seeded trials."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    elected_counts = {c: 0 for c in election.candidate_ids}
    tally_sums = {c: 0 for c in election.candidate_ids}
    for i in range(trials):
        result = run_count(election, rules, _trial_stream(ceremony, i), record=False)
        for cand in result.elected:
            elected_counts[cand] += 1
        for cand, tally in result.final_tallies.items():
            tally_sums[cand] += tally
    if sum(elected_counts.values()) != election.seats * trials:
        raise RuntimeError("trials did not each elect exactly `seats` candidates")
    stats = {}
    for cand in election.candidate_ids:
        p = elected_counts[cand] / trials
        stats[cand] = CandidateStats(
            elected_count=elected_counts[cand],
            probability=p,
            mean_final_tally=tally_sums[cand] / trials,
            std_error=math.sqrt(p * (1.0 - p) / trials),
        )
    return SimulationReport(
        trials=trials, rules=rules, ceremony=ceremony, stats=stats
    )


@dataclass(frozen=True)
class CandidateDelta:
    probability_a: float
    probability_b: float
    delta: float
    paired_std_error: float
    elected_both: int
    elected_only_a: int
    elected_only_b: int


@dataclass(frozen=True)
class VariantComparison:
    """Paired-seed comparison of two rule configs on one election.

    Trial i of both variants shares the substream labelled ``trial-i``
    (common random numbers), so outcome differences are attributable to the
    rules rather than to sampling luck.
    """

    trials: int
    rules_a: RuleConfig
    rules_b: RuleConfig
    deltas: dict[str, CandidateDelta]
    first_divergent_count: int | None
    divergence_detail: dict | None


def _action_summary(record: CountRecord, places: int) -> dict:
    summary: dict = {
        "count": record.index,
        "kind": record.kind.value,
        "source": record.source,
        "papers_distributed": record.papers_distributed,
    }
    if record.kind.value == "surplus":
        summary["transfer_value"] = (
            None
            if record.transfer_value is None
            else f"{record.transfer_value:.{places}f}"
        )
        summary["last_parcel_papers"] = record.last_parcel_papers
        summary["non_exhausted_papers"] = record.non_exhausted_papers
    return summary


def _find_divergence(
    a: Transcript, b: Transcript
) -> tuple[int | None, dict | None]:
    for record_a, record_b in zip(a.counts, b.counts):
        if record_a != record_b:
            return record_a.index, {
                "a": _action_summary(record_a, a.rules.rounding_decimal_places),
                "b": _action_summary(record_b, b.rules.rounding_decimal_places),
            }
    if len(a.counts) != len(b.counts):
        index = min(len(a.counts), len(b.counts)) + 1
        return index, {
            "a": {"counts": len(a.counts)},
            "b": {"counts": len(b.counts)},
        }
    return None, None


def compare_variants(
    election: Election,
    rules_a: RuleConfig,
    rules_b: RuleConfig,
    ceremony: SeedCeremonyRecord,
    trials: int,
) -> VariantComparison:
    """Run paired trials under both rule configs and report the differences.

    Also runs trial 0 with full transcripts and reports the first count at
    which they diverge. Divergence is a finding, never an error.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    candidates = election.candidate_ids
    count_a = {c: 0 for c in candidates}
    count_b = {c: 0 for c in candidates}
    count_both = {c: 0 for c in candidates}
    for i in range(trials):
        result_a = run_count(
            election, rules_a, _trial_stream(ceremony, i), record=False
        )
        result_b = run_count(
            election, rules_b, _trial_stream(ceremony, i), record=False
        )
        elected_a = set(result_a.elected)
        elected_b = set(result_b.elected)
        for cand in elected_a:
            count_a[cand] += 1
        for cand in elected_b:
            count_b[cand] += 1
        for cand in elected_a & elected_b:
            count_both[cand] += 1

    deltas = {}
    for cand in candidates:
        p_a = count_a[cand] / trials
        p_b = count_b[cand] / trials
        only_a = count_a[cand] - count_both[cand]
        only_b = count_b[cand] - count_both[cand]
        # Variance of the per-trial paired difference d in {-1, 0, 1}.
        mean_d = (only_a - only_b) / trials
        var_d = (only_a + only_b) / trials - mean_d * mean_d
        deltas[cand] = CandidateDelta(
            probability_a=p_a,
            probability_b=p_b,
            delta=p_a - p_b,
            paired_std_error=math.sqrt(max(var_d, 0.0) / trials),
            elected_both=count_both[cand],
            elected_only_a=only_a,
            elected_only_b=only_b,
        )

    transcript_a = run_count(election, rules_a, _trial_stream(ceremony, 0))
    transcript_b = run_count(election, rules_b, _trial_stream(ceremony, 0))
    first_divergent, detail = _find_divergence(transcript_a, transcript_b)
    return VariantComparison(
        trials=trials,
        rules_a=rules_a,
        rules_b=rules_b,
        deltas=deltas,
        first_divergent_count=first_divergent,
        divergence_detail=detail,
    )
