"""Simulation scheme with equal blocks and a block-end predictor.

The rounds are cut into n/m consecutive blocks of m.  Within one block, look
at the latest stuck function on each side: everything after it is additive,
so the block's final B bit collapses to a closed form, a handful of XORs of
known offsets plus one parity only the other side knows.  Three short coded
rounds per block (Bob's last-stuck index, Alice's last-stuck index, one
parity bit) therefore let Alice predict every block's closing B bit before
any block content is exchanged.  Those predictions make the blocks
independent rows, and the content itself then runs as a vertical column
exchange.

Budget: with field width w = ceil(log2(m+1)) the predictor spends
(n/m)(2w+1) info bits.  The parity round absorbs Bob's stuck value: he sends
p_b XOR v_b when the deciding stuck is his, plain p_b when it is Alice's, so
v_b never needs its own bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .bits import bits_to_ints, ints_to_bits, xor_reduce
from .channel import ChannelPair, Direction, UsageLedger
from .coding import CodeSpec, decode_payload, encode_payload, payload_blocks
from .protocol import Protocol, Transcript, TransmitFn
from .report import DecodeEvent, SimulationReport
from .scheme_random import ceil_isqrt
from .vertical import RowState, VerticalPlan, finish_report, run_vertical_exchange


def summarize_block_bob(g_slice) -> tuple[int, int]:
    """(s_b, v_b): 1-based index of Bob's last stuck function in the block
    and its stuck output; (0, 0) when the block has none."""
    g_slice = np.asarray(g_slice, dtype=np.uint8)
    stuck = np.flatnonzero(g_slice >= 3)
    if stuck.size == 0:
        return 0, 0
    s = int(stuck[-1]) + 1
    return s, int(g_slice[s - 1]) - 3


def summarize_block_alice(f_slice) -> int:
    """1-based index of Alice's last stuck function in the block, 0 if none."""
    f_slice = np.asarray(f_slice, dtype=np.uint8)
    stuck = np.flatnonzero(f_slice >= 3)
    return 0 if stuck.size == 0 else int(stuck[-1]) + 1


class ParityBranch(enum.Enum):
    AT_ALICE = "at_alice"
    AT_BOB_OR_NONE = "at_bob_or_none"


def parity_bob(g_slice, s: int, branch: ParityBranch) -> int:
    """XOR of Bob's additive offsets over the branch's index range.

    AT_ALICE covers s..m (the round at s included, since Bob's g_s then maps
    Alice's stuck bit additively); AT_BOB_OR_NONE covers s+1..m.  Ranges are
    clipped, so an s beyond the block is an empty parity, not an error.  A
    stuck g inside the range is a caller bug.
    """
    g_slice = np.asarray(g_slice, dtype=np.uint8)
    lo = s - 1 if branch is ParityBranch.AT_ALICE else s
    lo = max(lo, 0)
    window = g_slice[lo:]
    assert not np.any(window >= 3), "parity range crosses a stuck g"
    return xor_reduce(window - 1)


def predict_last(
    prev_b: int, f_slice, s_a: int, s_b: int, v_b: int, p_b: int
) -> int:
    """Closing B bit of a block from its summaries and Bob's parity.

    prev_b is the B bit entering the block (used only when s_a = s_b = 0).
    f_slice must be Alice's true functions with no stuck one past s_a; s_b,
    v_b, p_b may come from decoded (possibly wrong) messages and only steer
    the value, never the validity.
    """
    f_slice = np.asarray(f_slice, dtype=np.uint8)
    m = f_slice.size
    if not 0 <= s_a <= m:
        raise ValueError("s_a must lie in 0..m")
    assert not np.any(f_slice[s_a:] >= 3), "f has a stuck function past s_a"
    a_off = np.where(f_slice <= 2, f_slice - 1, 0).astype(np.uint8)
    s = max(s_a, s_b)
    if s == 0:
        return prev_b ^ p_b ^ xor_reduce(a_off)
    if s_a > s_b:
        a_s = int(f_slice[s_a - 1]) - 3
        return a_s ^ p_b ^ xor_reduce(a_off[s_a:])
    return v_b ^ p_b ^ xor_reduce(a_off[min(s, m):])


@dataclass(frozen=True)
class PredictorMessages:
    """The three wire payloads, one field per block: Bob's last-stuck
    indices, Alice's, and Bob's folded parity bits."""

    s_bob: np.ndarray
    s_alice: np.ndarray
    sigma: np.ndarray


@dataclass
class PredictorResult:
    ends: np.ndarray  # Alice's predicted closing B bit of every block
    messages: PredictorMessages
    n_info: int
    decode_log: list[DecodeEvent] = field(default_factory=list)
    block_profile: list[int] = field(default_factory=list)


def predictor_exchange(
    p: Protocol, m: int, code: CodeSpec, ch: ChannelPair, ledger: UsageLedger
) -> PredictorResult:
    """Run the three predictor rounds for all n/m blocks of ``p`` at once.

    Requires m to divide the protocol length.  Decoded values are used as
    received; corrupt fields shift predictions and surface later as
    transcript mismatch.
    """
    n = p.n
    if n % m:
        raise ValueError("block length must divide the protocol length")
    blocks = n // m
    width = m.bit_length()
    f_rows = p.f.reshape(blocks, m)
    g_rows = p.g.reshape(blocks, m)

    log: list[DecodeEvent] = []
    profile: list[int] = []

    def send(payload, direction, stage):
        profile.extend(payload_blocks(code, payload.size))
        sent = ch.transmit(direction, encode_payload(code, payload), ledger)
        got = decode_payload(code, sent, payload.size)
        if not np.array_equal(got, payload):
            log.append(DecodeEvent(stage, 1, direction))
        return got

    summaries = [summarize_block_bob(g_rows[i]) for i in range(blocks)]
    s_bob = np.array([s for s, _ in summaries], np.int64)
    round1 = ints_to_bits(s_bob, width)
    s_bob_hat = bits_to_ints(send(round1, Direction.B_TO_A, "predictor_s_bob"), width)

    s_alice = np.array([summarize_block_alice(f_rows[i]) for i in range(blocks)], np.int64)
    round2 = ints_to_bits(s_alice, width)
    s_alice_hat = bits_to_ints(
        send(round2, Direction.A_TO_B, "predictor_s_alice"), width
    )

    sigma = np.empty(blocks, np.uint8)
    for i in range(blocks):
        s_b, v_b = summaries[i]
        if s_alice_hat[i] > s_b:
            sigma[i] = parity_bob(g_rows[i], int(s_alice_hat[i]), ParityBranch.AT_ALICE)
        else:
            sigma[i] = v_b ^ parity_bob(g_rows[i], s_b, ParityBranch.AT_BOB_OR_NONE)
    sigma_hat = send(sigma, Direction.B_TO_A, "predictor_parity")

    ends = np.empty(blocks, np.uint8)
    prev = 0
    for i in range(blocks):
        # sigma already carries v_b in the branches that need it
        prev = predict_last(
            prev, f_rows[i], int(s_alice[i]), int(s_bob_hat[i]), 0, int(sigma_hat[i])
        )
        ends[i] = prev

    return PredictorResult(
        ends=ends,
        messages=PredictorMessages(s_bob, s_alice, sigma),
        n_info=blocks * (2 * width + 1),
        decode_log=log,
        block_profile=profile,
    )


def run_scheme2(
    p: Protocol, ch: ChannelPair, code: CodeSpec, m: int | None = None
) -> SimulationReport:
    """Simulate ``p`` over ``ch`` with the equal-block predictor scheme.

    m defaults to ceil(sqrt(n)); the protocol is padded with stuck rounds to
    a multiple of m and the padding is stripped from the reported views.
    """
    n = p.n
    if m is None:
        m = ceil_isqrt(n)
    if m < 1:
        raise ValueError("block length must be positive")
    n_pad = m * (-(-n // m))
    if n_pad > n:
        pad = np.full(n_pad - n, int(TransmitFn.MU3), np.uint8)
        padded = Protocol(np.concatenate([p.f, pad]), np.concatenate([p.g, pad]))
    else:
        padded = p
    blocks = n_pad // m

    ledger = UsageLedger()
    pred = predictor_exchange(padded, m, code, ch, ledger)

    starts = np.concatenate([[np.uint8(0)], pred.ends[:-1]])
    res = run_vertical_exchange(
        padded.f.reshape(blocks, m),
        padded.g.reshape(blocks, m),
        RowState(starts),
        VerticalPlan(blocks, m, code),
        ch,
        ledger,
    )

    report = finish_report(
        "scheme2",
        p,
        Transcript(res.alice.a.reshape(-1)[:n], res.alice.b.reshape(-1)[:n]),
        Transcript(res.bob.a.reshape(-1)[:n], res.bob.b.reshape(-1)[:n]),
        ledger,
        pred.decode_log + res.decode_log,
        pred.block_profile + res.block_profile,
    )
    return report
