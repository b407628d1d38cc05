from __future__ import annotations

import pytest

from stvcount import BallotPaper, RuleConfig, validate_election
from stvcount.model import LastParcelRule


def make_ballots(spec):
    """Build papers from [(preference string, copies), ...] with sequential ids."""
    papers = []
    paper_id = 0
    for prefs, copies in spec:
        for _ in range(copies):
            paper_id += 1
            papers.append(BallotPaper(paper_id, tuple(prefs.split())))
    return papers


def make_election(candidates, seats, spec):
    return validate_election(candidates.split(), seats, make_ballots(spec))


RULES_TRIGGER_ONLY = RuleConfig(LastParcelRule.EXCLUSION_TRIGGERED_ONLY)
RULES_PRIOR_BLOCK = RuleConfig(LastParcelRule.PRIOR_TRANSFER_BLOCK)


@pytest.fixture
def divergence_election():
    """Contest whose last-parcel variants elect different final candidates.

    W is elected on first preferences (count 1); W's surplus gives R a
    2-paper parcel (count 2); excluding E pushes R over quota (count 3).
    R's surplus at count 4 is the divergent count: the quota-attaining
    exclusion parcel holds 4 papers, the prior surplus block 2 more. The
    sampled papers resurface when M is excluded (count 5) and decide the
    X-versus-Y race for the last seat. Exact win probabilities: X = 1/3
    under clause-1.4.14.1, X = 4/5 under pseudocode-1.4.14.2.
    """
    return make_election(
        "W R M X Y E",
        3,
        [
            ("W R M X", 5),
            ("W Y", 3),
            ("W", 7),
            ("R", 8),
            ("M", 5),
            ("X", 8),
            ("Y", 7),
            ("E R M", 2),
            ("E R M Y", 1),
            ("E R", 1),
        ],
    )
