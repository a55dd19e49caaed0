"""Per-run result records shared by all simulation schemes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .channel import Direction, UsageLedger
from .protocol import Transcript


@dataclass(frozen=True)
class DecodeEvent:
    """One block decode that did not return what was sent.

    stage: which message of the scheme it happened in, index: position of the
    message within that stage (column number, round number, ...).
    """

    stage: str
    index: int
    direction: Direction


@dataclass
class SimulationReport:
    """Everything a Monte Carlo harness needs from one simulated run.

    alice/bob are the transcript each party ends up believing in; ok flags
    compare them against the noiseless reference.  block_profile lists the
    info-bit size of every coded block that crossed a channel, which is what
    the union-bound accounting consumes.
    """

    scheme: str
    n: int
    alice: Transcript
    bob: Transcript
    alice_ok: bool
    bob_ok: bool
    ledger: UsageLedger
    rate: Fraction
    decode_log: list[DecodeEvent] = field(default_factory=list)
    block_profile: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.alice_ok and self.bob_ok
