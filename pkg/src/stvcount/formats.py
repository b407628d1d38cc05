"""File formats: candidate manifest, ballot CSV, transcript, reports.

The manifest is JSON ({"seats": N, "candidates": [...]}); ballots are a
headerless UTF-8 CSV with one preference list per row. Transcripts serialize
to canonical JSON: fixed field set, sorted keys, and vote quantities printed
as fixed-point decimals with the configured number of places, so equal
transcripts are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence, TYPE_CHECKING

from .model import BallotPaper, Candidate, ValidationError, validate_election
from .model import SURPLUS_ORDER_POLICY, TIE_BREAK_POLICY
from .engine import CountRecord, Transcript

if TYPE_CHECKING:  # pragma: no cover
    from .simulate import SimulationReport, VariantComparison


class ManifestError(ValueError):
    """Malformed candidate manifest."""


class BallotFormatError(ValueError):
    """Malformed ballot file; message carries the offending row number."""


def parse_candidate_manifest(text: str) -> tuple[list[Candidate], int]:
    """Parse the JSON manifest into (ordered candidates, seats)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    for key in ("seats", "candidates"):
        if key not in doc:
            raise ManifestError(f"manifest missing field {key!r}")
    seats = doc["seats"]
    if not isinstance(seats, int) or isinstance(seats, bool):
        raise ManifestError("seats must be an integer")
    raw_candidates = doc["candidates"]
    if not isinstance(raw_candidates, list) or not all(
        isinstance(c, str) for c in raw_candidates
    ):
        raise ManifestError("candidates must be an array of strings")
    seen: set[str] = set()
    for cand in raw_candidates:
        if cand in seen:
            raise ManifestError(f"duplicate candidate id {cand!r}")
        seen.add(cand)
    return [Candidate(id=c, name=c) for c in raw_candidates], seats


def parse_ballot_file(
    text: str, candidates: Sequence[Candidate | str]
) -> list[BallotPaper]:
    """Parse ballot CSV rows into papers; row number n is paper id n.

    Cells hold candidate ids in preference order; trailing empty cells are
    permitted. Unknown ids, duplicate preferences, blank rows, and interior
    empty cells are errors reported with their row number.
    """
    declared = {c.id if isinstance(c, Candidate) else c for c in candidates}
    papers: list[BallotPaper] = []
    reader = csv.reader(io.StringIO(text))
    for row_number, row in enumerate(reader, start=1):
        cells = list(row)
        while cells and cells[-1].strip() == "":
            cells.pop()
        if not cells:
            raise BallotFormatError(f"empty ballot row, row {row_number}")
        preferences: list[str] = []
        for cell in cells:
            cand = cell.strip()
            if not cand:
                raise BallotFormatError(
                    f"blank preference before end of row, row {row_number}"
                )
            if cand not in declared:
                raise BallotFormatError(
                    f"unknown candidate {cand!r}, row {row_number}"
                )
            if cand in preferences:
                raise BallotFormatError(
                    f"duplicate preference {cand!r}, row {row_number}"
                )
            preferences.append(cand)
        papers.append(BallotPaper(paper_id=row_number, preferences=tuple(preferences)))
    if not papers:
        raise BallotFormatError("no ballots")
    return papers


def load_election(manifest_text: str, ballots_text: str):
    """Parse and validate a complete contest from its two input files."""
    candidates, seats = parse_candidate_manifest(manifest_text)
    papers = parse_ballot_file(ballots_text, candidates)
    return validate_election(candidates, seats, papers)


def _votes(papers: int, places: int) -> str:
    return f"{papers:.{places}f}"


def _count_to_dict(record: CountRecord, places: int) -> dict:
    action: dict = {"kind": record.kind.value}
    if record.source is not None:
        action["source"] = record.source
    if record.kind.value == "surplus":
        action["transfer_value"] = (
            None
            if record.transfer_value is None
            else f"{record.transfer_value:.{places}f}"
        )
        action["last_parcel_papers"] = record.last_parcel_papers
        action["non_exhausted_papers"] = record.non_exhausted_papers
    action["papers_distributed"] = record.papers_distributed
    return {
        "count": record.index,
        "action": action,
        "received": {
            cand: {"papers": n, "votes": _votes(n, places)}
            for cand, n in record.received.items()
        },
        "exhausted_this_count": record.exhausted_this_count,
        "tallies": {
            cand: _votes(t, places) for cand, t in record.tallies.items()
        },
        "statuses": dict(record.statuses),
        "exhausted_total": record.exhausted_total,
        "rounding_loss": _votes(record.rounding_loss, places),
        "elected": list(record.newly_elected),
        "excluded": record.excluded,
        "draws": [
            {
                "position": d.position,
                "n": d.n,
                "value": d.value,
                "context": d.context,
            }
            for d in record.draws
        ],
    }


def write_transcript(transcript: Transcript) -> str:
    """Serialize a transcript to canonical JSON text."""
    places = transcript.rules.rounding_decimal_places
    doc = {
        "format": "stv-transcript-v1",
        "rules": {
            "last_parcel_rule": transcript.rules.last_parcel_rule.value,
            "rounding_decimal_places": places,
            "tie_break": TIE_BREAK_POLICY,
            "surplus_order": SURPLUS_ORDER_POLICY,
        },
        "seed": transcript.seed_hex,
        "seats": transcript.seats,
        "total_ballots": transcript.total_ballots,
        "quota": transcript.quota,
        "candidates": list(transcript.candidates),
        "counts": [_count_to_dict(r, places) for r in transcript.counts],
        "elected": list(transcript.elected),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_probability_report(report: "SimulationReport") -> str:
    """Render a simulation report as CSV.

    Rows sort by probability descending, then candidate id.
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["candidate", "trials_elected", "probability", "mean_final_tally"])
    rows = sorted(
        report.stats.items(), key=lambda kv: (-kv[1].probability, kv[0])
    )
    for cand, stats in rows:
        writer.writerow(
            [
                cand,
                stats.elected_count,
                f"{stats.probability:.6f}",
                f"{stats.mean_final_tally:.6f}",
            ]
        )
    return out.getvalue()


def write_comparison(comparison: "VariantComparison") -> str:
    """Serialize a variant comparison to canonical JSON text."""
    doc = {
        "format": "stv-variant-comparison-v1",
        "trials": comparison.trials,
        "rules_a": {
            "last_parcel_rule": comparison.rules_a.last_parcel_rule.value,
            "rounding_decimal_places": comparison.rules_a.rounding_decimal_places,
        },
        "rules_b": {
            "last_parcel_rule": comparison.rules_b.last_parcel_rule.value,
            "rounding_decimal_places": comparison.rules_b.rounding_decimal_places,
        },
        "per_candidate": {
            cand: {
                "probability_a": f"{delta.probability_a:.6f}",
                "probability_b": f"{delta.probability_b:.6f}",
                "delta": f"{delta.delta:.6f}",
                "paired_std_error": f"{delta.paired_std_error:.6f}",
                "elected_both": delta.elected_both,
                "elected_only_a": delta.elected_only_a,
                "elected_only_b": delta.elected_only_b,
            }
            for cand, delta in comparison.deltas.items()
        },
        "first_divergent_count": comparison.first_divergent_count,
        "divergence_detail": comparison.divergence_detail,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
