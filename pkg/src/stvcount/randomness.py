"""Verifiable, replayable randomness for the count.

Every random choice in a count is drawn from a deterministic stream whose
seed is derived from public entropy (for example, transcribed dice rolls at
a seed ceremony). The construction is deliberately primitive so that anyone
can re-implement it from this description, in any language, and reproduce
every draw bit for bit:

* seed        = SHA-256(entropy text as UTF-8 bytes), 32 bytes
* value(i)    = first 8 bytes, big-endian unsigned, of
                SHA-256(seed || i as 8-byte big-endian integer)
* substream   = a fresh stream with seed SHA-256(seed || label as UTF-8)

Bounded draws use rejection sampling, never a bare modulo, so the result is
exactly uniform. A stream's ``counter`` is the number of 64-bit values
consumed so far; draw records elsewhere store this position so a third party
can replay any single decision without re-running the whole count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

ALGORITHM = "sha256-ctr-v1"

_UINT64 = 1 << 64


class CeremonyError(ValueError):
    """Raised for unusable ceremony input or a malformed ceremony record."""


@dataclass(frozen=True)
class SeedCeremonyRecord:
    """Public record tying a derived seed to the entropy that produced it."""

    entropy_input: str
    derived_seed: bytes
    algorithm: str = ALGORITHM

    @property
    def seed_hex(self) -> str:
        return self.derived_seed.hex()

    def to_json(self) -> str:
        doc = {
            "entropy_input": self.entropy_input,
            "derived_seed_hex": self.seed_hex,
            "algorithm": self.algorithm,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SeedCeremonyRecord":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CeremonyError(f"ceremony record is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise CeremonyError("ceremony record must be a JSON object")
        for key in ("entropy_input", "derived_seed_hex", "algorithm"):
            if key not in doc:
                raise CeremonyError(f"ceremony record missing field {key!r}")
        if doc["algorithm"] != ALGORITHM:
            raise CeremonyError(f"unsupported algorithm {doc['algorithm']!r}")
        record = derive_seed(doc["entropy_input"])
        if record.seed_hex != doc["derived_seed_hex"]:
            raise CeremonyError(
                "derived_seed_hex does not match the entropy input; "
                f"expected {record.seed_hex}"
            )
        return record


def derive_seed(entropy_input: str) -> SeedCeremonyRecord:
    """Derive a 32-byte seed from public entropy text.

    Empty input is rejected: a ceremony must contribute entropy.
    """
    if not entropy_input:
        raise CeremonyError("entropy input is empty")
    digest = hashlib.sha256(entropy_input.encode("utf-8")).digest()
    return SeedCeremonyRecord(entropy_input=entropy_input, derived_seed=digest)


class PrngStream:
    """Counter-mode SHA-256 stream of 64-bit values.

    Single consumer: ``counter`` advances with every raw value drawn.
    ``next_below`` is unbiased via rejection sampling and consumes at most a
    handful of raw values (expected < 2 for any bound up to 2**63).
    """

    __slots__ = ("seed", "counter", "_base")

    def __init__(self, seed: bytes, counter: int = 0):
        if len(seed) != 32:
            raise ValueError(f"seed must be 32 bytes, got {len(seed)}")
        if counter < 0:
            raise ValueError("counter must be non-negative")
        self.seed = bytes(seed)
        self.counter = counter
        # Pre-absorbed seed; copied per draw so each value hashes seed||counter.
        self._base = hashlib.sha256(self.seed)

    @property
    def position(self) -> int:
        """Number of raw 64-bit values consumed so far."""
        return self.counter

    def next_raw(self) -> int:
        """Return the next raw 64-bit value and advance the counter."""
        h = self._base.copy()
        h.update(self.counter.to_bytes(8, "big"))
        self.counter += 1
        return int.from_bytes(h.digest()[:8], "big")

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection sampling."""
        if n < 1:
            raise ValueError("bound must be a positive integer")
        limit = (_UINT64 // n) * n
        while True:
            value = self.next_raw()
            if value < limit:
                return value % n


def fork_substream(seed: bytes, label: str) -> PrngStream:
    """Derive an independent, replayable stream for ``label``.

    Distinct labels give computationally independent streams; the same
    (seed, label) pair always gives the same stream.
    """
    return PrngStream(hashlib.sha256(bytes(seed) + label.encode("utf-8")).digest())
