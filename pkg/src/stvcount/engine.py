"""Randomized STV count execution.

One count run is strictly sequential: every random decision flows through a
single ``Chooser`` so the whole execution is a deterministic function of
(election, rules, seed). A ``StreamChooser`` drives production counts from a
hash stream and logs every draw with its stream position; the simulation
module supplies an enumerating chooser to the same engine for the exact
probability oracle.

Counting mechanics, in brief: count 1 distributes first preferences. After
every count, each continuing candidate at or above quota is elected at that
count. Pending surpluses are then distributed one per count, largest surplus
first; when none are pending and seats remain, the lowest continuing
candidate is excluded and all their papers redistribute in a single count.
Papers always move at value 1: a surplus moves an integer number of papers,
chosen per recipient group by rounding the group's entitlement and sampling
that many papers uniformly at random.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterable, Mapping, Protocol, Sequence

from .model import (
    BallotPaper,
    Election,
    LastParcelRule,
    RuleConfig,
    compute_droop_quota,
)
from .randomness import PrngStream


class EngineInvariantError(RuntimeError):
    """Internal bookkeeping failure (conservation or provenance violated)."""


class TransferKind(enum.Enum):
    FIRST_PREFERENCES = "first-preferences"
    SURPLUS = "surplus"
    EXCLUSION = "exclusion"


class CandidateStatus(enum.Enum):
    CONTINUING = "continuing"
    ELECTED = "elected"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class Parcel:
    """Papers a candidate received in one transfer event."""

    received_at_count: int
    source: str | None
    kind: TransferKind
    papers: tuple[BallotPaper, ...]

    @property
    def size(self) -> int:
        return len(self.papers)


@dataclass(frozen=True)
class CountEvent:
    """Per-count summary consumed by the last-parcel computation."""

    kind: TransferKind
    source: str | None
    newly_elected: tuple[str, ...]


@dataclass(frozen=True)
class DrawRecord:
    """One bounded draw: stream position before the draw, bound, outcome."""

    position: int
    n: int
    value: int
    context: str


@dataclass(frozen=True)
class CountRecord:
    """Action plus post-action tally snapshot for one count."""

    index: int
    kind: TransferKind
    source: str | None
    transfer_value: Decimal | None
    last_parcel_papers: int | None
    non_exhausted_papers: int | None
    papers_distributed: int
    received: dict[str, int]
    exhausted_this_count: int
    tallies: dict[str, int]
    statuses: dict[str, str]
    exhausted_total: int
    rounding_loss: int
    newly_elected: tuple[str, ...]
    excluded: str | None
    draws: tuple[DrawRecord, ...]


@dataclass(frozen=True)
class Transcript:
    """Full record of one count execution; the unit of determinism."""

    rules: RuleConfig
    seed_hex: str | None
    seats: int
    total_ballots: int
    quota: int
    candidates: tuple[str, ...]
    counts: tuple[CountRecord, ...]
    elected: tuple[str, ...]


@dataclass(frozen=True)
class CountResult:
    """Lightweight outcome used by the simulation harness."""

    elected: tuple[str, ...]
    final_tallies: dict[str, int]
    num_counts: int
    quota: int


class Chooser(Protocol):
    """Source of the count's random decisions.

    ``pick_index`` returns a uniform integer below ``n_alternatives``;
    ``pick_subset`` returns a uniform n-subset of range(size) as sorted
    indexes. ``drain_draws`` yields and clears the draw log accumulated
    since the last drain.
    """

    def pick_index(self, n_alternatives: int, context: str = "") -> int: ...

    def pick_subset(
        self, size: int, n: int, context: str = ""
    ) -> tuple[int, ...]: ...

    def drain_draws(self) -> list[DrawRecord]: ...


class StreamChooser:
    """Chooser backed by a hash stream.

    Subset selection is a partial Fisher-Yates shuffle consuming exactly one
    bounded draw per selected element; the trivial cases n=0 and n=size
    consume nothing. Each bounded draw is logged with the stream position it
    started at so any third party can replay it in isolation.
    """

    def __init__(self, stream: PrngStream, record_draws: bool = True):
        self.stream = stream
        self._record = record_draws
        self._draws: list[DrawRecord] = []

    def pick_index(self, n_alternatives: int, context: str = "") -> int:
        position = self.stream.position
        value = self.stream.next_below(n_alternatives)
        if self._record:
            self._draws.append(DrawRecord(position, n_alternatives, value, context))
        return value

    def pick_subset(self, size: int, n: int, context: str = "") -> tuple[int, ...]:
        if not 0 <= n <= size:
            raise ValueError(f"cannot pick {n} of {size}")
        if n == 0:
            return ()
        if n == size:
            return tuple(range(size))
        indexes = list(range(size))
        for i in range(n):
            j = i + self.pick_index(size - i, context)
            indexes[i], indexes[j] = indexes[j], indexes[i]
        return tuple(sorted(indexes[:n]))

    def drain_draws(self) -> list[DrawRecord]:
        drained = self._draws
        self._draws = []
        return drained


def countback_tiebreak(
    tied: Iterable[str], tally_history: Sequence[Mapping[str, int]]
) -> str | None:
    """Resolve a lowest-tally tie by prior progressive totals.

    Walks completed counts backwards, at each count restricting the tied set
    to the members holding the minimum tally there. A singleton resolves the
    tie; if the walk passes the first count with two or more members left,
    returns None (caller draws randomly). Equal tallies at a count leave the
    set unchanged, so one candidate being weaker at any earlier count is
    enough to single them out.
    """
    remaining = sorted(set(tied))
    if len(remaining) < 2:
        raise ValueError("a tie needs at least two candidates")
    for snapshot in reversed(tally_history):
        lowest = min(snapshot[c] for c in remaining)
        remaining = [c for c in remaining if snapshot[c] == lowest]
        if len(remaining) == 1:
            return remaining[0]
    return None


def _strongest_subset(
    tied: Sequence[str], tally_history: Sequence[Mapping[str, int]]
) -> list[str]:
    """Mirror of the countback walk keeping maximum-tally members."""
    remaining = sorted(tied)
    for snapshot in reversed(tally_history):
        highest = max(snapshot[c] for c in remaining)
        remaining = [c for c in remaining if snapshot[c] == highest]
        if len(remaining) == 1:
            break
    return remaining


def _pick_strongest(
    tied: Sequence[str],
    tally_history: Sequence[Mapping[str, int]],
    chooser: Chooser,
    context: str,
) -> str:
    strongest = _strongest_subset(tied, tally_history)
    if len(strongest) == 1:
        return strongest[0]
    return strongest[chooser.pick_index(len(strongest), context)]


def select_exclusion(
    tallies: Mapping[str, int],
    tally_history: Sequence[Mapping[str, int]],
    chooser: Chooser,
) -> str:
    """Pick the candidate to exclude: lowest tally, countback, random draw.

    ``tallies`` holds the continuing candidates' current tallies;
    ``tally_history`` the snapshots of the counts before the current one.
    """
    if not tallies:
        raise ValueError("no continuing candidates")
    lowest = min(tallies.values())
    tied = sorted(c for c, t in tallies.items() if t == lowest)
    if len(tied) == 1:
        return tied[0]
    resolved = countback_tiebreak(tied, tally_history)
    if resolved is not None:
        return resolved
    return tied[chooser.pick_index(len(tied), "exclusion-tie")]


def distribute_exclusion(
    papers: Iterable[BallotPaper], continuing: Iterable[str]
) -> tuple[dict[str, list[BallotPaper]], list[BallotPaper]]:
    """Group papers by their next continuing preference.

    Papers naming no continuing candidate form the exhausted list. Also used
    for the first-preference distribution (everyone is then continuing) and
    for grouping a surplus parcel before sampling.
    """
    continuing_set = set(continuing)
    groups: dict[str, list[BallotPaper]] = {}
    exhausted: list[BallotPaper] = []
    for paper in papers:
        for cand in paper.preferences:
            if cand in continuing_set:
                groups.setdefault(cand, []).append(paper)
                break
        else:
            exhausted.append(paper)
    return groups, exhausted


def select_papers_for_transfer(
    papers: Sequence[BallotPaper], n: int, chooser: Chooser, context: str = ""
) -> list[BallotPaper]:
    """Uniformly random n-subset of ``papers``, normalized by paper id.

    Consumes exactly n bounded draws via the chooser, except the trivial
    cases n=0 and n=len(papers) which consume none.
    """
    pool = sorted(papers, key=lambda p: p.paper_id)
    chosen = chooser.pick_subset(len(pool), n, context)
    return [pool[i] for i in chosen]


def apply_rounding(
    entitlements: Mapping[str, Decimal],
    target_total: int,
    tally_history: Sequence[Mapping[str, int]],
    chooser: Chooser,
) -> dict[str, int]:
    """Round per-recipient entitlements to integers summing to target_total.

    target_total - sum(floors) recipients round up, prioritized by largest
    fractional part; ties prefer the larger integer part, then the stronger
    candidate in a countback over prior tallies, then a random draw. Everyone
    else rounds down. The caller must supply entitlements consistent with the
    target (sum of floors <= target <= sum of ceilings).
    """
    floors: dict[str, int] = {}
    fractions: dict[str, Decimal] = {}
    for cand, raw in entitlements.items():
        if raw < 0:
            raise EngineInvariantError(f"negative entitlement for {cand}: {raw}")
        whole = int(raw)
        floors[cand] = whole
        fractions[cand] = raw - whole

    floor_sum = sum(floors.values())
    ceiling_sum = floor_sum + sum(1 for f in fractions.values() if f > 0)
    if not floor_sum <= target_total <= ceiling_sum:
        raise EngineInvariantError(
            f"rounding target {target_total} outside [{floor_sum}, {ceiling_sum}]"
        )

    need = target_total - floor_sum
    result = dict(floors)
    if need == 0:
        return result

    # Tiers of identical (fraction, integer part), strongest first.
    tiers: dict[tuple[Decimal, int], list[str]] = {}
    for cand, frac in fractions.items():
        if frac > 0:
            tiers.setdefault((frac, floors[cand]), []).append(cand)
    for (frac, whole), members in sorted(
        tiers.items(), key=lambda kv: (-kv[0][0], -kv[0][1])
    ):
        if need == 0:
            break
        if len(members) <= need:
            for cand in members:
                result[cand] += 1
            need -= len(members)
        else:
            pool = sorted(members)
            while need > 0:
                winner = _pick_strongest(pool, tally_history, chooser, "rounding-tie")
                result[winner] += 1
                pool.remove(winner)
                need -= 1
    return result


@dataclass(frozen=True)
class SurplusPlan:
    """Per-recipient paper counts for one surplus distribution.

    ``transfer_value`` is None when every parcel paper is exhausted, in which
    case nothing moves and the surplus stays with the elected candidate.
    """

    transfer_value: Decimal | None
    allocations: dict[str, int]
    groups: dict[str, list[BallotPaper]]
    exhausted: list[BallotPaper]

    @property
    def papers_to_move(self) -> int:
        return sum(self.allocations.values())


def plan_surplus_distribution(
    papers: Sequence[BallotPaper],
    surplus: int,
    continuing: Iterable[str],
    *,
    decimal_places: int,
    tally_history: Sequence[Mapping[str, int]],
    chooser: Chooser,
) -> SurplusPlan:
    """Decide how many parcel papers each continuing candidate receives.

    Parcel papers group by next continuing preference; papers with none are
    the exhausted group, excluded from the transfer-value denominator and
    never moved. transfer_value = min(1, surplus / non-exhausted papers),
    rounded half-up to ``decimal_places``. At transfer value 1 every group
    moves whole; otherwise group entitlements (group size x transfer value)
    are rounded so exactly ``surplus`` papers move.
    """
    if surplus <= 0:
        raise ValueError("surplus must be positive")
    if not papers:
        raise ValueError("empty parcel")
    groups, exhausted = distribute_exclusion(papers, continuing)
    non_exhausted = sum(len(g) for g in groups.values())
    if non_exhausted == 0:
        return SurplusPlan(None, {}, {}, exhausted)

    scale = 10**decimal_places
    if surplus >= non_exhausted:
        transfer_value = Decimal(1)
        allocations = {cand: len(group) for cand, group in groups.items()}
        return SurplusPlan(transfer_value, allocations, groups, exhausted)

    # Round half-up of surplus * scale / non_exhausted, in exact integers.
    tv_scaled = (2 * surplus * scale + non_exhausted) // (2 * non_exhausted)
    if tv_scaled == 0:
        raise EngineInvariantError(
            f"transfer value rounds to zero at {decimal_places} decimal places"
        )
    transfer_value = Decimal(tv_scaled).scaleb(-decimal_places)
    entitlements = {
        cand: Decimal(len(group) * tv_scaled).scaleb(-decimal_places)
        for cand, group in groups.items()
    }
    allocations = apply_rounding(entitlements, surplus, tally_history, chooser)
    return SurplusPlan(transfer_value, allocations, groups, exhausted)


def compute_last_parcel(
    history: Sequence[Parcel],
    elected_at: int,
    rule: LastParcelRule,
    count_events: Sequence[CountEvent],
) -> list[Parcel]:
    """Select the parcels whose papers a surplus distribution may move.

    ``count_events`` describes every completed count (index c at position
    c-1); the walk needs it because parcels alone cannot show counts at which
    the candidate received nothing.

    A candidate elected on first preferences redistributes from all their
    papers. Otherwise EXCLUSION_TRIGGERED_ONLY takes the parcels received at
    the quota-attaining count; when that count distributed the surplus of one
    of several candidates elected together earlier, the surplus transfers of
    that whole group (up to the attaining count) are one logical transfer and
    all their parcels are taken. PRIOR_TRANSFER_BLOCK instead walks back from
    the preceding count through the uninterrupted run of surplus-transfer
    counts at which nobody was elected or excluded, and includes parcels
    received at those counts as well.
    """

    def event(count: int) -> CountEvent:
        return count_events[count - 1]

    trigger = event(elected_at)
    if trigger.kind is TransferKind.FIRST_PREFERENCES:
        return [p for p in history if p.received_at_count == elected_at]

    counts = {elected_at}
    if rule is LastParcelRule.EXCLUSION_TRIGGERED_ONLY:
        if trigger.kind is TransferKind.SURPLUS:
            source_elected_at = next(
                c
                for c in range(1, elected_at)
                if trigger.source in event(c).newly_elected
            )
            peers = set(event(source_elected_at).newly_elected)
            counts = {
                c
                for c in range(1, elected_at + 1)
                if event(c).kind is TransferKind.SURPLUS
                and event(c).source in peers
            }
    elif rule is LastParcelRule.PRIOR_TRANSFER_BLOCK:
        count = elected_at - 1
        while (
            count >= 1
            and event(count).kind is TransferKind.SURPLUS
            and not event(count).newly_elected
        ):
            counts.add(count)
            count -= 1
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown rule {rule!r}")

    return [p for p in history if p.received_at_count in counts]


class _CountState:
    """Mutable state of one count run."""

    def __init__(self, election: Election, rules: RuleConfig, chooser: Chooser):
        self.election = election
        self.rules = rules
        self.chooser = chooser
        self.candidate_order = {c: i for i, c in enumerate(election.candidate_ids)}
        self.quota = compute_droop_quota(election.num_ballots, election.seats)
        self.tally: dict[str, int] = {c: 0 for c in election.candidate_ids}
        self.status: dict[str, CandidateStatus] = {
            c: CandidateStatus.CONTINUING for c in election.candidate_ids
        }
        self.continuing: set[str] = set(election.candidate_ids)
        self.holdings: dict[str, dict[int, BallotPaper]] = {
            c: {} for c in election.candidate_ids
        }
        self.parcel_history: dict[str, list[Parcel]] = {
            c: [] for c in election.candidate_ids
        }
        self.events: list[CountEvent] = []
        self.snapshots: list[dict[str, int]] = []
        self.exhausted: list[BallotPaper] = []
        self.elected_order: list[str] = []
        self.elected_at: dict[str, int] = {}
        # (surplus, election sequence, candidate); popped largest surplus
        # first, earlier-elected first on equal surpluses.
        self.pending_surpluses: list[tuple[int, int, str]] = []
        self.count_index = 0

    def receive(self, recipient: str, parcel: Parcel) -> None:
        self.holdings[recipient].update((p.paper_id, p) for p in parcel.papers)
        self.parcel_history[recipient].append(parcel)
        self.tally[recipient] += parcel.size

    def recipients_in_order(self, groups: Mapping[str, list[BallotPaper]]) -> list[str]:
        return sorted(groups, key=self.candidate_order.__getitem__)


def run_count(
    election: Election,
    rules: RuleConfig,
    randomness: PrngStream | Chooser,
    *,
    record: bool = True,
    check_papers: bool = False,
):
    """Execute one complete count.

    ``randomness`` is normally a fresh PrngStream; any Chooser is accepted so
    the enumeration oracle can drive the same engine. Returns a Transcript,
    or a CountResult when ``record`` is false (the fast path for simulation).
    ``check_papers`` additionally verifies after every count that each paper
    sits with exactly one holder.
    """
    seed_hex: str | None = None
    if isinstance(randomness, PrngStream):
        seed_hex = randomness.seed.hex()
        chooser: Chooser = StreamChooser(randomness, record_draws=record)
    else:
        chooser = randomness

    state = _CountState(election, rules, chooser)
    records: list[CountRecord] = []
    total = election.num_ballots
    # Each count elects, excludes, or drains one pending surplus, so the
    # count total is bounded; anything past this is an engine defect.
    max_counts = 3 * len(election.candidates) + 2

    def conservation_check() -> int:
        tallied = sum(state.tally.values()) + len(state.exhausted)
        loss = total - tallied
        if loss != 0:
            raise EngineInvariantError(
                f"conservation violated at count {state.count_index}: "
                f"tallies + exhausted = {tallied}, expected {total}"
            )
        if check_papers:
            seen: set[int] = set()
            for cand in election.candidate_ids:
                held = state.holdings[cand]
                if seen & held.keys():
                    raise EngineInvariantError("paper held twice")
                seen |= held.keys()
            exhausted_ids = {p.paper_id for p in state.exhausted}
            if seen & exhausted_ids or len(seen) + len(exhausted_ids) != total:
                raise EngineInvariantError(
                    f"paper provenance violated at count {state.count_index}"
                )
        return loss

    def mark_elected(cand: str) -> None:
        state.status[cand] = CandidateStatus.ELECTED
        state.continuing.discard(cand)
        state.elected_order.append(cand)
        state.elected_at[cand] = state.count_index
        surplus = state.tally[cand] - state.quota
        if surplus > 0:
            state.pending_surpluses.append(
                (surplus, len(state.elected_order), cand)
            )

    def order_by_strength(cands: list[str]) -> list[str]:
        """Tally descending; ties by countback over prior counts, then draw."""
        ordered: list[str] = []
        by_tally: dict[int, list[str]] = {}
        for cand in cands:
            by_tally.setdefault(state.tally[cand], []).append(cand)
        history = state.snapshots
        for tally_value in sorted(by_tally, reverse=True):
            tier = sorted(by_tally[tally_value])
            while len(tier) > 1:
                winner = _pick_strongest(
                    tier, history, chooser, "election-order-tie"
                )
                ordered.append(winner)
                tier.remove(winner)
            ordered.extend(tier)
        return ordered

    def finish_count(
        kind: TransferKind,
        source: str | None,
        received: dict[str, int],
        exhausted_this_count: int,
        transfer_value: Decimal | None = None,
        last_parcel_papers: int | None = None,
        non_exhausted_papers: int | None = None,
        excluded: str | None = None,
    ) -> bool:
        """Close out a count; returns True when the election is decided."""
        newly = order_by_strength(
            [c for c in state.continuing if state.tally[c] >= state.quota]
        )
        for cand in newly:
            mark_elected(cand)
        done = len(state.elected_order) == election.seats
        if not done and len(state.continuing) == election.seats - len(
            state.elected_order
        ):
            remainder = order_by_strength(sorted(state.continuing))
            for cand in remainder:
                mark_elected(cand)
            newly = newly + remainder
            done = True

        state.events.append(CountEvent(kind, source, tuple(newly)))
        state.snapshots.append(dict(state.tally))
        loss = conservation_check()
        if record:
            records.append(
                CountRecord(
                    index=state.count_index,
                    kind=kind,
                    source=source,
                    transfer_value=transfer_value,
                    last_parcel_papers=last_parcel_papers,
                    non_exhausted_papers=non_exhausted_papers,
                    papers_distributed=sum(received.values()),
                    received=received,
                    exhausted_this_count=exhausted_this_count,
                    tallies=dict(state.tally),
                    statuses={
                        c: state.status[c].value for c in election.candidate_ids
                    },
                    exhausted_total=len(state.exhausted),
                    rounding_loss=loss,
                    newly_elected=tuple(newly),
                    excluded=excluded,
                    draws=tuple(chooser.drain_draws()),
                )
            )
        else:
            chooser.drain_draws()
        return done

    def first_preferences() -> bool:
        state.count_index = 1
        groups, exhausted_now = distribute_exclusion(
            election.ballots, state.continuing
        )
        if exhausted_now:
            raise EngineInvariantError("ballot exhausted at first preferences")
        received: dict[str, int] = {}
        for cand in state.recipients_in_order(groups):
            parcel = Parcel(1, None, TransferKind.FIRST_PREFERENCES, tuple(groups[cand]))
            state.receive(cand, parcel)
            received[cand] = parcel.size
        return finish_count(TransferKind.FIRST_PREFERENCES, None, received, 0)

    def surplus_count(source: str, surplus: int) -> bool:
        state.count_index += 1
        parcels = compute_last_parcel(
            state.parcel_history[source],
            state.elected_at[source],
            rules.last_parcel_rule,
            state.events,
        )
        parcel_papers = [p for parcel in parcels for p in parcel.papers]
        plan = plan_surplus_distribution(
            parcel_papers,
            surplus,
            state.continuing,
            decimal_places=rules.rounding_decimal_places,
            tally_history=state.snapshots,
            chooser=chooser,
        )
        received: dict[str, int] = {}
        moved = 0
        for recipient in state.recipients_in_order(plan.groups):
            n = plan.allocations.get(recipient, 0)
            if n == 0:
                continue
            chosen = select_papers_for_transfer(
                plan.groups[recipient],
                n,
                chooser,
                context=f"surplus-sample:{source}->{recipient}",
            )
            state.receive(
                recipient,
                Parcel(state.count_index, source, TransferKind.SURPLUS, tuple(chosen)),
            )
            source_holdings = state.holdings[source]
            for paper in chosen:
                del source_holdings[paper.paper_id]
            received[recipient] = len(chosen)
            moved += len(chosen)
        state.tally[source] -= moved
        return finish_count(
            TransferKind.SURPLUS,
            source,
            received,
            0,
            transfer_value=plan.transfer_value,
            last_parcel_papers=len(parcel_papers),
            non_exhausted_papers=len(parcel_papers) - len(plan.exhausted),
        )

    def exclusion_count() -> bool:
        excluded = select_exclusion(
            {c: state.tally[c] for c in state.continuing},
            state.snapshots[:-1],
            chooser,
        )
        state.count_index += 1
        state.status[excluded] = CandidateStatus.EXCLUDED
        state.continuing.discard(excluded)
        papers = list(state.holdings[excluded].values())
        if len(papers) != state.tally[excluded]:
            raise EngineInvariantError(
                f"excluded candidate {excluded} holds {len(papers)} papers "
                f"but tallies {state.tally[excluded]}"
            )
        groups, exhausted_now = distribute_exclusion(papers, state.continuing)
        received: dict[str, int] = {}
        for recipient in state.recipients_in_order(groups):
            parcel = Parcel(
                state.count_index, excluded, TransferKind.EXCLUSION, tuple(groups[recipient])
            )
            state.receive(recipient, parcel)
            received[recipient] = parcel.size
        state.exhausted.extend(exhausted_now)
        state.holdings[excluded].clear()
        state.tally[excluded] = 0
        return finish_count(
            TransferKind.EXCLUSION,
            excluded,
            received,
            len(exhausted_now),
            excluded=excluded,
        )

    done = first_preferences()
    while not done:
        if state.count_index >= max_counts:
            raise EngineInvariantError("count did not terminate")
        if state.pending_surpluses:
            entry = min(state.pending_surpluses, key=lambda e: (-e[0], e[1]))
            state.pending_surpluses.remove(entry)
            surplus, _, source = entry
            done = surplus_count(source, surplus)
        else:
            done = exclusion_count()

    elected = tuple(state.elected_order)
    if len(elected) != election.seats:
        raise EngineInvariantError(
            f"elected {len(elected)} candidates for {election.seats} seats"
        )
    if record:
        return Transcript(
            rules=rules,
            seed_hex=seed_hex,
            seats=election.seats,
            total_ballots=total,
            quota=state.quota,
            candidates=election.candidate_ids,
            counts=tuple(records),
            elected=elected,
        )
    return CountResult(
        elected=elected,
        final_tallies=dict(state.tally),
        num_counts=state.count_index,
        quota=state.quota,
    )
