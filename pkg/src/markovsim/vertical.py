"""Column-wise coded exchange of independent protocol rows.

A region of the protocol is laid out as a matrix: each row is a stretch of
consecutive rounds that can be evaluated independently of the other rows
(because each row after the first starts at a stuck function, or its starting
input is known).  Columns are then exchanged alternately: Alice codes and
sends column t of her A bits, Bob decodes it, computes his B column, codes it
back.  Each column is one coded block over all rows, which is where the
error-exponent gain over bit-by-bit coding comes from.

Also home to the transmission-function descriptions (the 2-bit encoding of
arbitrary functions and the 1-bit encoding of additive ones), the offline
chain evaluator, and the non-interactive baseline scheme built from them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .bits import bits_to_ints, ints_to_bits
from .channel import ChannelPair, Direction, UsageLedger, rate_of
from .coding import CodeSpec, decode_payload, encode_payload, payload_blocks
from .protocol import Protocol, Transcript, eval_fn_array, simulate_reference
from .report import DecodeEvent, SimulationReport


class FnDescMode(enum.Enum):
    TWO_BIT = "two_bit"
    ONE_BIT_ADDITIVE = "one_bit_additive"


def describe_functions(fns, mode: FnDescMode) -> np.ndarray:
    """Binary description of a function sequence.

    TWO_BIT spends two bits per function (00, 01, 10, 11 for the four codes
    in order).  ONE_BIT_ADDITIVE spends one bit, the XOR offset, and rejects
    stuck functions.
    """
    fns = np.asarray(fns, dtype=np.uint8)
    if mode is FnDescMode.TWO_BIT:
        return ints_to_bits(fns - 1, 2)
    if np.any(fns >= 3):
        raise ValueError("one-bit descriptions exist only for additive functions")
    return (fns - 1).astype(np.uint8)


def functions_from_bits(bits, mode: FnDescMode) -> np.ndarray:
    """Inverse of describe_functions; total on any bit pattern."""
    bits = np.asarray(bits, dtype=np.uint8)
    if mode is FnDescMode.TWO_BIT:
        return (bits_to_ints(bits, 2) + 1).astype(np.uint8)
    return (bits + 1).astype(np.uint8)


def offline_simulate(f, g, b0: int) -> Transcript:
    """Evaluate a chain segment locally (no channel) from input bit b0."""
    a, b = _kernels.markov_chain(
        np.asarray(f, dtype=np.uint8), np.asarray(g, dtype=np.uint8), b0
    )
    return Transcript(a, b)


@dataclass(frozen=True)
class VerticalPlan:
    rows: int
    width: int
    code: CodeSpec

    def __post_init__(self):
        if self.rows < 1 or self.width < 1:
            raise ValueError("plan needs at least one row and one column")


@dataclass(frozen=True)
class RowState:
    """Input bit consumed by each row's first Alice function.

    Rows that begin at a stuck function ignore their entry, so any value
    works there; zeros() is the conventional choice.
    """

    start_bits: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "start_bits", np.asarray(self.start_bits, dtype=np.uint8).copy()
        )

    @classmethod
    def zeros(cls, rows: int) -> "RowState":
        return cls(np.zeros(rows, np.uint8))


@dataclass
class RegionView:
    """One party's belief about the region transcript, as (rows, width) bits."""

    a: np.ndarray
    b: np.ndarray


@dataclass
class VerticalResult:
    alice: RegionView
    bob: RegionView
    decode_log: list[DecodeEvent] = field(default_factory=list)
    bob_tail: Optional[np.ndarray] = None
    block_profile: list[int] = field(default_factory=list)


def run_vertical_exchange(
    f_rows: np.ndarray,
    g_rows: np.ndarray,
    rs: RowState,
    plan: VerticalPlan,
    ch: ChannelPair,
    ledger: UsageLedger,
    alice_tail: Optional[np.ndarray] = None,
) -> VerticalResult:
    """Interactively evaluate all rows, one coded column at a time.

    f_rows, g_rows: (rows, width) function codes.  Column t of A bits is
    computed from the previously decoded B column (the row-state bits for
    t = 1), coded, transmitted; Bob answers with his B column the same way.
    Decode failures are logged and the wrong bits propagate; nothing aborts.

    alice_tail, if given, rides along as extra payload inside Alice's final
    column block; Bob's decode of it is returned as bob_tail.
    """
    f_rows = np.asarray(f_rows, dtype=np.uint8)
    g_rows = np.asarray(g_rows, dtype=np.uint8)
    rows, width = plan.rows, plan.width
    if f_rows.shape != (rows, width) or g_rows.shape != (rows, width):
        raise ValueError("function matrices must match the plan shape")
    if rs.start_bits.size != rows:
        raise ValueError("row state must hold one bit per row")

    alice = RegionView(np.empty((rows, width), np.uint8), np.empty((rows, width), np.uint8))
    bob = RegionView(np.empty((rows, width), np.uint8), np.empty((rows, width), np.uint8))
    log: list[DecodeEvent] = []
    profile: list[int] = []
    bob_tail = None

    prev_b_alice = rs.start_bits
    for t in range(width):
        a_col = eval_fn_array(f_rows[:, t], prev_b_alice)
        alice.a[:, t] = a_col
        payload = a_col
        if alice_tail is not None and t == width - 1:
            payload = np.concatenate([a_col, np.asarray(alice_tail, np.uint8)])
        profile += payload_blocks(plan.code, payload.size)
        sent = ch.transmit(
            Direction.A_TO_B, encode_payload(plan.code, payload), ledger
        )
        got = decode_payload(plan.code, sent, payload.size)
        if not np.array_equal(got, payload):
            log.append(DecodeEvent("vertical_a", t + 1, Direction.A_TO_B))
        bob.a[:, t] = got[:rows]
        if alice_tail is not None and t == width - 1:
            bob_tail = got[rows:]

        b_col = eval_fn_array(g_rows[:, t], bob.a[:, t])
        bob.b[:, t] = b_col
        profile += payload_blocks(plan.code, b_col.size)
        sent = ch.transmit(
            Direction.B_TO_A, encode_payload(plan.code, b_col), ledger
        )
        got = decode_payload(plan.code, sent, b_col.size)
        if not np.array_equal(got, b_col):
            log.append(DecodeEvent("vertical_b", t + 1, Direction.B_TO_A))
        alice.b[:, t] = got
        prev_b_alice = alice.b[:, t]

    return VerticalResult(alice, bob, log, bob_tail, profile)


def finish_report(
    scheme: str,
    p: Protocol,
    alice_view: Transcript,
    bob_view: Transcript,
    ledger: UsageLedger,
    decode_log: list[DecodeEvent],
    block_profile: list[int],
) -> SimulationReport:
    """Compare both views against the noiseless reference and wrap up."""
    ref = simulate_reference(p)
    alice_ok = np.array_equal(alice_view.a, ref.a) and np.array_equal(
        alice_view.b, ref.b
    )
    bob_ok = np.array_equal(bob_view.a, ref.a) and np.array_equal(bob_view.b, ref.b)
    return SimulationReport(
        scheme=scheme,
        n=p.n,
        alice=alice_view,
        bob=bob_view,
        alice_ok=alice_ok,
        bob_ok=bob_ok,
        ledger=ledger,
        rate=rate_of(ledger, p.n),
        decode_log=decode_log,
        block_profile=block_profile,
    )


def run_baseline(p: Protocol, ch: ChannelPair, code: CodeSpec) -> SimulationReport:
    """Non-interactive simulation: Alice ships all her functions, Bob runs
    the whole chain alone and ships back his half of the transcript.

    Costs 2n + n coded info bits, hence rate 2/3 with the identity code.
    """
    ledger = UsageLedger()
    log: list[DecodeEvent] = []
    profile: list[int] = []

    desc = describe_functions(p.f, FnDescMode.TWO_BIT)
    profile += payload_blocks(code, desc.size)
    sent = ch.transmit(Direction.A_TO_B, encode_payload(code, desc), ledger)
    got = decode_payload(code, sent, desc.size)
    if not np.array_equal(got, desc):
        log.append(DecodeEvent("descriptions", 1, Direction.A_TO_B))
    f_hat = functions_from_bits(got, FnDescMode.TWO_BIT)

    bob_view = offline_simulate(f_hat, p.g, 0)

    profile += payload_blocks(code, p.n)
    sent = ch.transmit(Direction.B_TO_A, encode_payload(code, bob_view.b), ledger)
    b_hat = decode_payload(code, sent, p.n)
    if not np.array_equal(b_hat, bob_view.b):
        log.append(DecodeEvent("transcript_b", 1, Direction.B_TO_A))

    prev_b = np.concatenate([[np.uint8(0)], b_hat[:-1]])
    alice_view = Transcript(eval_fn_array(p.f, prev_b), b_hat)
    return finish_report("baseline", p, alice_view, bob_view, ledger, log, profile)
