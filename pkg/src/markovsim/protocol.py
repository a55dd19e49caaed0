"""Two-party protocols where each message is a one-bit function of the bit
last received.

Alice sends A_i = f_i(B_{i-1}) and Bob answers B_i = g_i(A_i), starting from
the convention B_0 = 0.  Every f_i and g_i is one of four functions of a bit:
identity, negation, constant 0, constant 1.  The two constant functions are
"stuck": their output ignores the input, which is what the simulation schemes
exploit.  The other two are "additive", output = input XOR offset.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels


class TransmitFn(enum.IntEnum):
    """Function codes; the integer value doubles as the wire digit."""

    MU1 = 1  # y -> y
    MU2 = 2  # y -> y ^ 1
    MU3 = 3  # y -> 0
    MU4 = 4  # y -> 1


@dataclass(frozen=True)
class Additive:
    offset: int


@dataclass(frozen=True)
class Stuck:
    value: int


FnKind = Union[Additive, Stuck]


def eval_fn(fn: int, bit: int) -> int:
    """Apply one transmission function to one bit."""
    fn = int(fn)
    if fn <= 2:
        return (bit ^ (fn - 1)) & 1
    return fn - 3


def classify_fn(fn: int) -> FnKind:
    fn = int(fn)
    if fn <= 2:
        return Additive(fn - 1)
    return Stuck(fn - 3)


def eval_fn_array(codes: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Vectorized eval_fn over parallel arrays of codes and input bits."""
    codes = np.asarray(codes, dtype=np.uint8)
    inputs = np.asarray(inputs, dtype=np.uint8)
    return np.where(codes <= 2, (inputs ^ (codes - 1)) & 1, (codes - 3) & 1).astype(
        np.uint8
    )


def _as_fn_codes(seq) -> np.ndarray:
    arr = np.asarray(seq, dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("function sequence must be one dimensional")
    if arr.size == 0:
        raise ValueError("protocol length must be at least 1")
    if arr.min() < 1 or arr.max() > 4:
        raise ValueError("function codes must lie in 1..4")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Protocol:
    """Alice's functions ``f`` and Bob's functions ``g``, one pair per round.

    Arrays are uint8 codes 1..4 and are frozen after construction, so a
    Protocol can be shared across trials and threads.
    """

    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f", _as_fn_codes(self.f))
        object.__setattr__(self, "g", _as_fn_codes(self.g))
        if self.f.size != self.g.size:
            raise ValueError("f and g must have the same length")

    @property
    def n(self) -> int:
        return self.f.size


@dataclass(frozen=True)
class Transcript:
    """The 2n exchanged bits, split into Alice's messages and Bob's."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.uint8).copy()
        b = np.asarray(self.b, dtype=np.uint8).copy()
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("transcript halves must be 1-d and equally long")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.size


def simulate_reference(p: Protocol) -> Transcript:
    """Noiseless transcript of ``p`` from B_0 = 0.

    This is the ground truth every scheme run is compared against.
    """
    a, b = _kernels.markov_chain(p.f, p.g, 0)
    return Transcript(a, b)


def gen_uniform_protocol(n: int, seed) -> Protocol:
    """Protocol with all 2n functions drawn iid uniform over the four codes."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    f = rng.integers(1, 5, n, dtype=np.uint8)
    g = rng.integers(1, 5, n, dtype=np.uint8)
    return Protocol(f, g)


def serialize_protocol(p: Protocol) -> str:
    """One-line text form, e.g. ``f=13 g=24``."""
    return "f={} g={}".format(
        "".join(str(int(v)) for v in p.f), "".join(str(int(v)) for v in p.g)
    )


def parse_protocol(line: str) -> Protocol:
    """Inverse of serialize_protocol.  Raises ValueError on malformed input."""
    tokens = line.split()
    if len(tokens) != 2 or not tokens[0].startswith("f=") or not tokens[1].startswith("g="):
        raise ValueError(f"expected 'f=<digits> g=<digits>', got {line!r}")
    digits_f, digits_g = tokens[0][2:], tokens[1][2:]
    for name, digits in (("f", digits_f), ("g", digits_g)):
        if not digits or any(c not in "1234" for c in digits):
            raise ValueError(f"{name} digits must be a nonempty string over 1..4")
    if len(digits_f) != len(digits_g):
        raise ValueError("f and g must have the same length")
    f = np.frombuffer(digits_f.encode(), dtype=np.uint8) - ord("0")
    g = np.frombuffer(digits_g.encode(), dtype=np.uint8) - ord("0")
    return Protocol(f, g)
