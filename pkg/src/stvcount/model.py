"""Core domain types for a single STV contest."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence


class LastParcelRule(enum.Enum):
    """Which transfers feed an elected candidate's redistributable parcel.

    EXCLUSION_TRIGGERED_ONLY: only papers received in the transfer(s) at the
    count where the candidate reached quota count. When several candidates
    were elected together at an earlier count, all of their surplus transfers
    up to the quota-attaining one are a single logical transfer.

    PRIOR_TRANSFER_BLOCK: additionally walks back from the preceding count,
    accumulating the uninterrupted run of surplus-transfer counts (stopping at
    the first count where anyone was elected or excluded), and includes papers
    received at those counts too.

    Enum values are the official functional-specification clause tokens used
    on the command line.
    """

    EXCLUSION_TRIGGERED_ONLY = "clause-1.4.14.1"
    PRIOR_TRANSFER_BLOCK = "pseudocode-1.4.14.2"

    @classmethod
    def from_token(cls, token: str) -> "LastParcelRule":
        for rule in cls:
            if rule.value == token:
                return rule
        raise ValueError(f"unknown last-parcel rule {token!r}")


#: Fixed tie-break policy: countback over prior tallies, then a random draw.
TIE_BREAK_POLICY = "countback-then-random"
#: Fixed surplus ordering: pending surpluses distribute largest first.
SURPLUS_ORDER_POLICY = "largest-first"


@dataclass(frozen=True)
class Candidate:
    """A candidate; ``id`` is the unique token used throughout the count."""

    id: str
    name: str = ""

    @property
    def display_name(self) -> str:
        return self.name or self.id


@dataclass(frozen=True)
class BallotPaper:
    """One ballot paper: an ordered preference list over candidate ids.

    Papers always carry weight 1; fractional surplus transfers move a sampled
    subset of papers rather than attaching weights.
    """

    paper_id: int
    preferences: tuple[str, ...]


@dataclass(frozen=True)
class Election:
    candidates: tuple[Candidate, ...]
    seats: int
    ballots: tuple[BallotPaper, ...]

    @property
    def candidate_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.candidates)

    @property
    def num_ballots(self) -> int:
        return len(self.ballots)


@dataclass(frozen=True)
class RuleConfig:
    """Variant switches selecting between count behaviours.

    The tie-break chain (countback, then random draw) and the surplus order
    (largest first) are fixed policies, not configurable.
    """

    last_parcel_rule: LastParcelRule = LastParcelRule.EXCLUSION_TRIGGERED_ONLY
    rounding_decimal_places: int = 8

    def __post_init__(self) -> None:
        if self.rounding_decimal_places < 0:
            raise ValueError("rounding_decimal_places must be non-negative")


class ValidationError(ValueError):
    """Carries the complete list of structural violations found."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def compute_droop_quota(num_ballots: int, seats: int) -> int:
    """Droop quota: floor(ballots / (seats + 1)) + 1."""
    if num_ballots < 1:
        raise ValueError("ballot count must be at least 1")
    if seats < 1:
        raise ValueError("seat count must be at least 1")
    return num_ballots // (seats + 1) + 1


def validate_election(
    candidates: Sequence[Candidate | str],
    seats: int,
    ballots: Sequence[BallotPaper],
) -> Election:
    """Assemble a structurally valid Election or raise with every violation.

    Validation is idempotent: feeding a valid election's own components back
    in yields an equal election.
    """
    normalized = tuple(
        c if isinstance(c, Candidate) else Candidate(id=c, name=c) for c in candidates
    )
    violations: list[str] = []

    seen_ids: set[str] = set()
    for cand in normalized:
        if cand.id in seen_ids:
            violations.append(f"duplicate candidate id {cand.id!r}")
        seen_ids.add(cand.id)

    if seats < 1:
        violations.append(f"seats must be at least 1, got {seats}")
    elif seats >= len(normalized):
        violations.append(
            f"seats ({seats}) must be fewer than candidates ({len(normalized)}): "
            "an everyone-elected contest is rejected as degenerate"
        )

    if not ballots:
        violations.append("no ballots")

    declared = {c.id for c in normalized}
    seen_papers: set[int] = set()
    for paper in ballots:
        if paper.paper_id in seen_papers:
            violations.append(f"duplicate paper id {paper.paper_id}")
        seen_papers.add(paper.paper_id)
        if not paper.preferences:
            violations.append(f"empty preference list on paper {paper.paper_id}")
            continue
        seen_prefs: set[str] = set()
        for cand_id in paper.preferences:
            if cand_id not in declared:
                violations.append(
                    f"unknown candidate {cand_id!r} on paper {paper.paper_id}"
                )
            if cand_id in seen_prefs:
                violations.append(
                    f"duplicate preference {cand_id!r} on paper {paper.paper_id}"
                )
            seen_prefs.add(cand_id)

    if violations:
        raise ValidationError(violations)
    return Election(candidates=normalized, seats=seats, ballots=tuple(ballots))
