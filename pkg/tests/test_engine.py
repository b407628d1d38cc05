from __future__ import annotations

import hashlib
from decimal import Decimal

import pytest
from hypothesis import given, settings, strategies as st

from stvcount import (
    BallotPaper,
    EngineInvariantError,
    Parcel,
    RuleConfig,
    compute_droop_quota,
    run_count,
    validate_election,
)
from stvcount.engine import (
    CountEvent,
    StreamChooser,
    TransferKind,
    apply_rounding,
    compute_last_parcel,
    countback_tiebreak,
    distribute_exclusion,
    plan_surplus_distribution,
    select_exclusion,
    select_papers_for_transfer,
)
from stvcount.model import LastParcelRule
from stvcount.randomness import PrngStream

from conftest import RULES_PRIOR_BLOCK, RULES_TRIGGER_ONLY, make_ballots, make_election

FP = TransferKind.FIRST_PREFERENCES
SU = TransferKind.SURPLUS
EX = TransferKind.EXCLUSION


def seed_for(text: str) -> bytes:
    return hashlib.sha256(text.encode()).digest()


def chooser_for(text: str) -> StreamChooser:
    return StreamChooser(PrngStream(seed_for(text)))


def opaque_papers(count: int, first_id: int) -> tuple[BallotPaper, ...]:
    return tuple(BallotPaper(first_id + i, ("Z",)) for i in range(count))


def papers_with_next(next_pref: str, count: int, first_id: int) -> list[BallotPaper]:
    """Papers held by elected candidate S whose next preference is fixed."""
    return [BallotPaper(first_id + i, ("S", next_pref)) for i in range(count)]


class TestCountback:
    def test_prior_count_resolves(self):
        assert countback_tiebreak(["X", "Y"], [{"X": 4, "Y": 5}]) == "X"

    def test_three_way_walk(self):
        # Most recent count restricts {A,B,C} to {A,B}; the next one back
        # separates them.
        history = [{"A": 2, "B": 1, "C": 9}, {"A": 3, "B": 3, "C": 4}]
        assert countback_tiebreak(["A", "B", "C"], history) == "B"

    def test_equal_histories_unresolved(self):
        history = [{"A": 1, "B": 1}, {"A": 2, "B": 2}]
        assert countback_tiebreak(["A", "B"], history) is None

    def test_equal_count_does_not_restrict(self):
        # The weaker candidate surfaces at an early count even when recent
        # counts are all equal.
        history = [{"A": 3, "B": 3, "C": 2}, {"A": 4, "B": 4, "C": 4}]
        assert countback_tiebreak(["A", "B", "C"], history) == "C"

    def test_needs_two_candidates(self):
        with pytest.raises(ValueError):
            countback_tiebreak(["A"], [])


class TestSelectExclusion:
    def test_unique_minimum(self):
        chooser = chooser_for("unused")
        assert select_exclusion({"A": 5, "B": 7}, [], chooser) == "A"
        assert chooser.stream.position == 0

    def test_countback_pattern_earlier_count_decides(self):
        # Three-way tie now; one candidate was strictly lower two counts ago.
        chooser = chooser_for("unused")
        tallies = {"A": 5, "B": 5, "C": 5}
        history = [{"A": 3, "B": 3, "C": 2}, {"A": 4, "B": 4, "C": 4}]
        assert select_exclusion(tallies, history, chooser) == "C"
        assert chooser.stream.position == 0

    def test_identical_histories_resolved_by_draw_reproducibly(self):
        tallies = {"A": 5, "B": 5}
        history = [{"A": 5, "B": 5}]
        picks = {select_exclusion(tallies, history, chooser_for("draw")) for _ in range(3)}
        assert len(picks) == 1
        other = select_exclusion(tallies, history, chooser_for("other-seed"))
        assert other in {"A", "B"}


class TestDistributeExclusion:
    def test_paper_follows_next_continuing(self):
        paper = BallotPaper(1, ("E", "A", "B"))
        groups, exhausted = distribute_exclusion([paper], {"A", "B"})
        assert groups == {"A": [paper]}
        assert exhausted == []

    def test_paper_with_no_continuing_preference_exhausts(self):
        paper = BallotPaper(1, ("E",))
        groups, exhausted = distribute_exclusion([paper], {"A", "B"})
        assert groups == {}
        assert exhausted == [paper]

    def test_skips_non_continuing(self):
        paper = BallotPaper(1, ("E", "A", "B"))
        groups, _ = distribute_exclusion([paper], {"B"})
        assert groups == {"B": [paper]}


class TestSelectPapers:
    def test_zero_papers_consumes_nothing(self):
        chooser = chooser_for("sample")
        assert select_papers_for_transfer(opaque_papers(4, 1), 0, chooser) == []
        assert chooser.stream.position == 0

    def test_whole_group_normalized_consumes_nothing(self):
        chooser = chooser_for("sample")
        papers = list(reversed(opaque_papers(4, 1)))
        got = select_papers_for_transfer(papers, 4, chooser)
        assert [p.paper_id for p in got] == [1, 2, 3, 4]
        assert chooser.stream.position == 0

    def test_matches_reference_partial_shuffle(self):
        # Independent re-implementation of the documented sampling: a partial
        # Fisher-Yates over id-sorted papers, one bounded draw per pick.
        seed = seed_for("reference-pair")
        position = 0

        def reference_below(n):
            nonlocal position
            limit = ((1 << 64) // n) * n
            while True:
                digest = hashlib.sha256(seed + position.to_bytes(8, "big")).digest()
                position += 1
                value = int.from_bytes(digest[:8], "big")
                if value < limit:
                    return value % n

        indexes = list(range(4))
        for i in range(2):
            j = i + reference_below(4 - i)
            indexes[i], indexes[j] = indexes[j], indexes[i]
        expected = sorted(indexes[:2])

        chooser = StreamChooser(PrngStream(seed))
        got = select_papers_for_transfer(opaque_papers(4, 0), 2, chooser)
        assert [p.paper_id for p in got] == expected

    def test_pairs_uniform_over_many_trials(self):
        # All 6 pairs from 4 papers at 1/6 each: per-pair 3-sigma band and a
        # chi-square at the 0.001 level (critical value 20.515, 5 dof).
        papers = opaque_papers(4, 1)
        chooser = chooser_for("pair-frequencies")
        counts: dict[tuple[int, int], int] = {}
        trials = 60_000
        for _ in range(trials):
            got = select_papers_for_transfer(papers, 2, chooser)
            key = tuple(p.paper_id for p in got)
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == 6
        expected = trials / 6
        three_sigma = 3 * (trials * (1 / 6) * (5 / 6)) ** 0.5
        for pair, count in counts.items():
            assert abs(count - expected) <= three_sigma, (pair, count)
        chi_square = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi_square < 20.515


class TestApplyRounding:
    def test_tie_on_fraction_prefers_larger_integer(self):
        # Four entitlements share fraction .6; the three largest integer
        # parts round up and the smallest rounds down.
        entitlements = {
            "MONAGHAN": Decimal("9.6"),
            "GRELLMAN": Decimal("7.6"),
            "BAKER": Decimal("5.6"),
            "THOMAS": Decimal("3.6"),
        }
        chooser = chooser_for("unused")
        got = apply_rounding(entitlements, 27, [], chooser)
        assert got == {"MONAGHAN": 10, "GRELLMAN": 8, "BAKER": 6, "THOMAS": 3}
        assert chooser.stream.position == 0

    def test_integers_unchanged(self):
        entitlements = {"A": Decimal("3"), "B": Decimal("2")}
        assert apply_rounding(entitlements, 5, [], chooser_for("x")) == {"A": 3, "B": 2}

    def test_larger_fraction_rounds_up_first(self):
        entitlements = {"A": Decimal("1.2"), "B": Decimal("2.7")}
        assert apply_rounding(entitlements, 4, [], chooser_for("x")) == {"A": 1, "B": 3}

    def test_full_tie_countback_decides(self):
        entitlements = {"P": Decimal("1.5"), "Q": Decimal("1.5")}
        history = [{"P": 4, "Q": 5}, {"P": 7, "Q": 6}]
        chooser = chooser_for("unused")
        got = apply_rounding(entitlements, 3, history, chooser)
        assert got == {"P": 2, "Q": 1}
        assert chooser.stream.position == 0

    def test_full_tie_draw_replays(self):
        entitlements = {"P": Decimal("1.5"), "Q": Decimal("1.5")}
        history = [{"P": 5, "Q": 5}]
        first = apply_rounding(entitlements, 3, history, chooser_for("tie"))
        second = apply_rounding(entitlements, 3, history, chooser_for("tie"))
        assert first == second
        assert sorted(first.values()) == [1, 2]

    def test_inconsistent_target_is_internal_error(self):
        with pytest.raises(EngineInvariantError):
            apply_rounding({"A": Decimal("1.5")}, 3, [], chooser_for("x"))


class TestPlanSurplus:
    def test_transfer_value_point_two_rounds_three_up(self):
        # Surplus 27 over a 135-paper parcel: transfer value is exactly 0.2,
        # entitlements 9.6/7.6/5.6/3.6/0.6, and the three largest integer
        # parts take the round-ups.
        papers = (
            papers_with_next("A", 48, 1000)
            + papers_with_next("B", 38, 2000)
            + papers_with_next("C", 28, 3000)
            + papers_with_next("D", 18, 4000)
            + papers_with_next("P", 3, 5000)
        )
        plan = plan_surplus_distribution(
            papers,
            27,
            {"A", "B", "C", "D", "P"},
            decimal_places=8,
            tally_history=[],
            chooser=chooser_for("unused"),
        )
        assert plan.transfer_value == Decimal("0.20000000")
        assert plan.allocations == {"A": 10, "B": 8, "C": 6, "D": 3, "P": 0}
        assert plan.papers_to_move == 27

    def test_surplus_covering_parcel_moves_whole_groups(self):
        papers = papers_with_next("A", 2, 10) + papers_with_next("B", 2, 20)
        plan = plan_surplus_distribution(
            papers,
            5,
            {"A", "B"},
            decimal_places=8,
            tally_history=[],
            chooser=chooser_for("unused"),
        )
        assert plan.transfer_value == Decimal(1)
        assert plan.allocations == {"A": 2, "B": 2}

    def test_half_value_tie_resolved_by_integer_part(self):
        # Hand-enumerated: raw 1.5 and 3.5, one round-up, B's larger integer
        # part wins, so allocations are A:1, B:4.
        papers = papers_with_next("A", 3, 10) + papers_with_next("B", 7, 20)
        plan = plan_surplus_distribution(
            papers,
            5,
            {"A", "B"},
            decimal_places=8,
            tally_history=[],
            chooser=chooser_for("unused"),
        )
        assert plan.transfer_value == Decimal("0.50000000")
        assert plan.allocations == {"A": 1, "B": 4}

    def test_exhausted_papers_excluded_from_denominator(self):
        papers = papers_with_next("A", 4, 10) + [
            BallotPaper(90 + i, ("S",)) for i in range(4)
        ]
        plan = plan_surplus_distribution(
            papers,
            2,
            {"A"},
            decimal_places=8,
            tally_history=[],
            chooser=chooser_for("unused"),
        )
        assert plan.transfer_value == Decimal("0.50000000")
        assert plan.allocations == {"A": 2}
        assert len(plan.exhausted) == 4

    def test_all_exhausted_parcel_moves_nothing(self):
        papers = [BallotPaper(i, ("S",)) for i in range(5)]
        plan = plan_surplus_distribution(
            papers,
            3,
            {"A"},
            decimal_places=8,
            tally_history=[],
            chooser=chooser_for("unused"),
        )
        assert plan.transfer_value is None
        assert plan.allocations == {}
        assert len(plan.exhausted) == 5

    def test_rejects_nonpositive_surplus(self):
        with pytest.raises(ValueError):
            plan_surplus_distribution(
                opaque_papers(3, 1),
                0,
                {"A"},
                decimal_places=8,
                tally_history=[],
                chooser=chooser_for("x"),
            )


def count_events(*spec) -> list[CountEvent]:
    return [
        CountEvent(kind, source, tuple(newly)) for kind, source, newly in spec
    ]


class TestComputeLastParcel:
    def exclusion_run_history(self):
        """Surplus parcels 79/0/4 at counts 9-11, exclusion parcel 99 at 12."""
        events = count_events(
            (FP, None, ()),
            (EX, "e1", ()), (EX, "e2", ()), (EX, "e3", ()),
            (EX, "e4", ()), (EX, "e5", ()), (EX, "e6", ()),
            (EX, "e7", ("n", "t", "c")),
            (SU, "n", ()), (SU, "t", ()), (SU, "c", ()),
            (EX, "h", ("R", "K")),
        )
        history = [
            Parcel(9, "n", SU, opaque_papers(79, 1000)),
            Parcel(10, "t", SU, opaque_papers(0, 2000)),
            Parcel(11, "c", SU, opaque_papers(4, 3000)),
            Parcel(12, "h", EX, opaque_papers(99, 4000)),
        ]
        return history, events

    def test_exclusion_after_surplus_run(self):
        history, events = self.exclusion_run_history()
        trigger_only = compute_last_parcel(
            history, 12, LastParcelRule.EXCLUSION_TRIGGERED_ONLY, events
        )
        assert sum(p.size for p in trigger_only) == 99
        prior_block = compute_last_parcel(
            history, 12, LastParcelRule.PRIOR_TRANSFER_BLOCK, events
        )
        assert sum(p.size for p in prior_block) == 182

    def test_short_surplus_run_before_exclusion(self):
        # Surpluses of 0 and 7 at counts 13-14, then an exclusion parcel of
        # 110 at count 15.
        events = count_events(
            (FP, None, ()),
            *[(EX, f"e{i}", ()) for i in range(2, 12)],
            (EX, "b", ("p", "q")),
            (SU, "p", ()), (SU, "q", ()),
            (EX, "r", ("G",)),
        )
        history = [
            Parcel(13, "p", SU, opaque_papers(0, 1)),
            Parcel(14, "q", SU, opaque_papers(7, 100)),
            Parcel(15, "r", EX, opaque_papers(110, 200)),
        ]
        trigger_only = compute_last_parcel(
            history, 15, LastParcelRule.EXCLUSION_TRIGGERED_ONLY, events
        )
        assert sum(p.size for p in trigger_only) == 110
        prior_block = compute_last_parcel(
            history, 15, LastParcelRule.PRIOR_TRANSFER_BLOCK, events
        )
        assert sum(p.size for p in prior_block) == 117

    def test_elected_on_first_preferences_takes_all_papers(self):
        events = count_events((FP, None, ("W",)))
        history = [Parcel(1, None, FP, opaque_papers(20, 1))]
        for rule in LastParcelRule:
            got = compute_last_parcel(history, 1, rule, events)
            assert sum(p.size for p in got) == 20

    def test_variants_agree_without_preceding_surpluses(self):
        # Quota attained at an exclusion directly after another exclusion:
        # the walk-back stops immediately, so both rules agree.
        events = count_events(
            (FP, None, ()),
            (EX, "e1", ()),
            (EX, "e2", ("R",)),
        )
        history = [
            Parcel(1, None, FP, opaque_papers(6, 0)),
            Parcel(2, "e1", EX, opaque_papers(3, 100)),
            Parcel(3, "e2", EX, opaque_papers(5, 200)),
        ]
        results = {
            rule: sorted(
                p.received_at_count
                for p in compute_last_parcel(history, 3, rule, events)
            )
            for rule in LastParcelRule
        }
        assert results[LastParcelRule.EXCLUSION_TRIGGERED_ONLY] == [3]
        assert results[LastParcelRule.PRIOR_TRANSFER_BLOCK] == [3]

    def test_simultaneous_elections_count_as_one_transfer(self):
        # P and Q elected together at count 2; their surpluses distribute at
        # counts 3 and 4, and the candidate reaches quota at count 4. Under
        # the trigger-only rule both distributions feed the parcel.
        events = count_events(
            (FP, None, ("P", "Q")),
            (SU, "P", ()),
            (SU, "Q", ("R",)),
        )
        history = [
            Parcel(1, None, FP, opaque_papers(4, 0)),
            Parcel(2, "P", SU, opaque_papers(3, 100)),
            Parcel(3, "Q", SU, opaque_papers(5, 200)),
        ]
        got = compute_last_parcel(
            history, 3, LastParcelRule.EXCLUSION_TRIGGERED_ONLY, events
        )
        assert sorted(p.received_at_count for p in got) == [2, 3]

    def test_surplus_from_solo_election_takes_single_parcel(self):
        events = count_events(
            (FP, None, ("P",)),
            (EX, "e1", ()),
            (SU, "P", ("R",)),
        )
        history = [
            Parcel(1, None, FP, opaque_papers(4, 0)),
            Parcel(2, "e1", EX, opaque_papers(2, 100)),
            Parcel(3, "P", SU, opaque_papers(5, 200)),
        ]
        got = compute_last_parcel(
            history, 3, LastParcelRule.EXCLUSION_TRIGGERED_ONLY, events
        )
        assert sorted(p.received_at_count for p in got) == [3]

    def test_prior_block_stops_at_election_event(self):
        # The count immediately before the attaining exclusion is a surplus
        # count at which someone was elected: it is a boundary.
        events = count_events(
            (FP, None, ("P",)),
            (SU, "P", ("Q",)),
            (EX, "e1", ("R",)),
        )
        history = [
            Parcel(2, "P", SU, opaque_papers(3, 100)),
            Parcel(3, "e1", EX, opaque_papers(5, 200)),
        ]
        got = compute_last_parcel(
            history, 3, LastParcelRule.PRIOR_TRANSFER_BLOCK, events
        )
        assert sorted(p.received_at_count for p in got) == [3]


class TestRunCount:
    def test_landslide_single_count(self):
        election = make_election("A B", 1, [("A", 3), ("B", 1)])
        transcript = run_count(election, RuleConfig(), PrngStream(seed_for("s")))
        assert transcript.quota == 3
        assert transcript.elected == ("A",)
        assert len(transcript.counts) == 1
        assert transcript.counts[0].newly_elected == ("A",)

    def test_exclusion_can_elect_recipient(self, divergence_election):
        transcript = run_count(
            divergence_election, RULES_TRIGGER_ONLY, PrngStream(seed_for("s"))
        )
        count3 = transcript.counts[2]
        assert count3.kind is EX
        assert count3.excluded == "E"
        assert count3.newly_elected == ("R",)

    def test_variants_diverge_at_surplus_after_exclusion(self, divergence_election):
        seed = seed_for("paired")
        trigger_only = run_count(
            divergence_election, RULES_TRIGGER_ONLY, PrngStream(seed)
        )
        prior_block = run_count(
            divergence_election, RULES_PRIOR_BLOCK, PrngStream(seed)
        )
        assert trigger_only.counts[:3] == prior_block.counts[:3]
        a4, b4 = trigger_only.counts[3], prior_block.counts[3]
        assert (a4.last_parcel_papers, b4.last_parcel_papers) == (4, 6)
        assert a4.transfer_value == Decimal("0.66666667")
        assert b4.transfer_value == Decimal("0.40000000")

    def test_candidate_elected_on_first_preferences_redistributes_everything(
        self, divergence_election
    ):
        transcript = run_count(
            divergence_election, RULES_TRIGGER_ONLY, PrngStream(seed_for("s"))
        )
        count2 = transcript.counts[1]
        assert count2.kind is SU and count2.source == "W"
        assert count2.last_parcel_papers == 15
        assert count2.non_exhausted_papers == 8
        assert count2.papers_distributed == 3
        assert count2.tallies["W"] == transcript.quota

    def test_final_seat_filled_below_quota(self, divergence_election):
        transcript = run_count(
            divergence_election, RULES_TRIGGER_ONLY, PrngStream(seed_for("s"))
        )
        final = transcript.counts[-1]
        winner = transcript.elected[-1]
        assert final.tallies[winner] < transcript.quota

    def test_two_candidate_race_matches_majority(self):
        for a_votes, b_votes, seed_text in [(3, 1, "x"), (2, 5, "y"), (4, 4, "z")]:
            election = make_election("A B", 1, [("A", a_votes), ("B", b_votes)])
            result = run_count(
                election, RuleConfig(), PrngStream(seed_for(seed_text)), record=False
            )
            winner = result.elected[0]
            if a_votes > b_votes:
                assert winner == "A"
            elif b_votes > a_votes:
                assert winner == "B"
            else:
                assert winner in {"A", "B"}

    def test_determinism_same_seed(self, divergence_election):
        seed = seed_for("repeat")
        first = run_count(divergence_election, RULES_PRIOR_BLOCK, PrngStream(seed))
        second = run_count(divergence_election, RULES_PRIOR_BLOCK, PrngStream(seed))
        assert first == second

    def test_draws_logged_with_positions(self, divergence_election):
        transcript = run_count(
            divergence_election, RULES_TRIGGER_ONLY, PrngStream(seed_for("s"))
        )
        draws = [d for record in transcript.counts for d in record.draws]
        assert draws, "sampling must consume recorded draws"
        positions = [d.position for d in draws]
        assert positions == sorted(positions)
        for draw in draws:
            assert 0 <= draw.value < draw.n

    def test_record_false_returns_compact_result(self, divergence_election):
        result = run_count(
            divergence_election,
            RULES_TRIGGER_ONLY,
            PrngStream(seed_for("s")),
            record=False,
        )
        assert len(result.elected) == 3
        assert result.quota == 12
        assert sum(result.final_tallies.values()) <= divergence_election.num_ballots

    def test_zero_decimal_places_degenerate_transfer_value_rejected(self):
        # Transfer value 1/9 rounds to 0 at 0 decimal places.
        election = make_election(
            "A B C D",
            2,
            [("A B", 3), ("A C", 3), ("A D", 3), ("B", 4), ("C", 4), ("D", 4)],
        )
        # Q = floor(21/3)+1 = 8; A holds 9 first preferences, surplus 1 of 9.
        with pytest.raises(EngineInvariantError):
            run_count(
                election,
                RuleConfig(rounding_decimal_places=0),
                PrngStream(seed_for("s")),
            )


def election_strategy():
    names = "ABCDEF"

    @st.composite
    def build(draw):
        n = draw(st.integers(2, 6))
        candidates = list(names[:n])
        seats = draw(st.integers(1, n - 1))
        n_ballots = draw(st.integers(1, 35))
        ballots = []
        for paper_id in range(1, n_ballots + 1):
            length = draw(st.integers(1, n))
            perm = draw(st.permutations(candidates))
            ballots.append(BallotPaper(paper_id, tuple(perm[:length])))
        return validate_election(candidates, seats, ballots)

    return build()


@settings(max_examples=120, deadline=None)
@given(election=election_strategy(), seed_text=st.text(min_size=1, max_size=8))
def test_count_invariants_hold(election, seed_text):
    rules = RULES_PRIOR_BLOCK if len(seed_text) % 2 else RULES_TRIGGER_ONLY
    transcript = run_count(
        election, rules, PrngStream(seed_for(seed_text)), check_papers=True
    )
    total = election.num_ballots
    quota = compute_droop_quota(total, election.seats)

    assert len(transcript.elected) == election.seats
    assert len(set(transcript.elected)) == election.seats

    elected_so_far: set[str] = set()
    gone: set[str] = set()
    previous_tallies: dict[str, int] = {}
    for record in transcript.counts:
        # Conservation after every count, with zero rounding loss.
        assert (
            sum(record.tallies.values()) + record.exhausted_total == total
        ), record
        assert record.rounding_loss == 0
        # Nobody both elected and excluded; no receipts for closed candidates.
        for cand in record.received:
            assert cand not in gone
        if record.excluded:
            assert record.excluded not in elected_so_far
            gone.add(record.excluded)
        for cand in record.newly_elected:
            assert cand not in gone
            elected_so_far.add(cand)
            gone.add(cand)
        # An elected candidate's tally never rises again.
        for cand in elected_so_far - set(record.newly_elected):
            assert record.tallies[cand] <= previous_tallies[cand]
        previous_tallies = record.tallies

    # Quota retention: after a surplus distribution the source sits at the
    # quota plus any undistributable exhausted residue, and stays there.
    for i, record in enumerate(transcript.counts):
        if record.kind is SU and record.transfer_value is not None:
            if record.transfer_value < 1:
                assert record.tallies[record.source] == quota
            else:
                assert record.tallies[record.source] >= quota
            for later in transcript.counts[i + 1 :]:
                assert later.tallies[record.source] == record.tallies[record.source]


@settings(max_examples=60, deadline=None)
@given(election=election_strategy(), seed_text=st.text(min_size=1, max_size=8))
def test_surplus_queue_largest_first(election, seed_text):
    # Surplus distributions between election events proceed in non-increasing
    # surplus order.
    transcript = run_count(
        election, RULES_TRIGGER_ONLY, PrngStream(seed_for(seed_text))
    )
    quota = transcript.quota
    run: list[int] = []
    previous: dict[str, int] = {}
    for record in transcript.counts:
        if record.kind is SU:
            surplus = previous[record.source] - quota
            run.append(surplus)
            assert all(a >= b for a, b in zip(run, run[1:])), run
        else:
            run = []
        if record.newly_elected:
            run = []
        previous = record.tallies
