"""Block codes for the noisy links plus random-coding error exponents.

Three code families share one interface: identity (no protection), odd-length
repetition with majority decoding, and seeded random linear codes with exact
maximum-likelihood decoding.  ML search is exhaustive over the codebook, so
random-linear info blocks are capped at ML_SEARCH_CAP bits; longer payloads
are split into consecutive sub-blocks, and the union-bound accounting treats
the sub-blocks as additional independent blocks.

Exponent conventions: rates and gallager_e0 / gallager_exponent values are in
bits.  The block-error bound for l independently coded blocks of b info bits
each at rate R is min(1, l * exp(-(b/R) * Er_nats)) with Er_nats = Er * ln 2,
which is computed here as l * 2**(-(b/R) * Er).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from . import _kernels
from .bits import int_to_bits

ML_SEARCH_CAP = 20


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Repetition:
    r: int

    def __post_init__(self):
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError("repetition factor must be odd and positive")


@dataclass(frozen=True)
class RandomLinear:
    """Rate-``rate`` code over info blocks of ``k`` bits.

    The generator matrix is Bernoulli(1/2), drawn from ``code_seed``; a seed
    of None marks a spec whose matrix is to be drawn per run.  Decoding is
    exact ML with ties broken toward the lexicographically smallest info word.
    """

    k: int
    rate: Fraction
    code_seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "rate", Fraction(self.rate))
        if not 1 <= self.k <= ML_SEARCH_CAP:
            raise ValueError(f"info block length must lie in 1..{ML_SEARCH_CAP}")
        if not 0 < self.rate <= 1:
            raise ValueError("code rate must lie in (0, 1]")

    @property
    def nc(self) -> int:
        return -(-self.k * self.rate.denominator // self.rate.numerator)


CodeSpec = Union[Identity, Repetition, RandomLinear]


def nominal_rate(code: CodeSpec) -> Fraction:
    if isinstance(code, Identity):
        return Fraction(1)
    if isinstance(code, Repetition):
        return Fraction(1, code.r)
    return code.rate


def _require_seed(code: RandomLinear) -> int:
    if code.code_seed is None:
        raise ValueError("random linear code needs a concrete seed before use")
    return code.code_seed


@functools.lru_cache(maxsize=64)
def _rlc_matrix(k: int, nc: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    G = rng.integers(0, 2, size=(k, nc), dtype=np.uint8)
    G.flags.writeable = False
    return G


@functools.lru_cache(maxsize=16)
def _rlc_codebook(k: int, nc: int, seed: int) -> np.ndarray:
    # row index equals the info word read MSB-first; built by doubling from
    # the least significant index bit upward
    gp = np.atleast_2d(_kernels.pack_bits(_rlc_matrix(k, nc, seed)))
    cb = np.zeros((1, gp.shape[1]), dtype=np.uint64)
    for s in range(k):
        cb = np.concatenate([cb, cb ^ gp[k - 1 - s]], axis=0)
    cb.flags.writeable = False
    return cb


def encode(code: CodeSpec, info) -> np.ndarray:
    """Codeword for a single info block (for RandomLinear, exactly k bits)."""
    info = np.asarray(info, dtype=np.uint8)
    if isinstance(code, Identity):
        return info.copy()
    if isinstance(code, Repetition):
        return np.repeat(info, code.r)
    if info.size != code.k:
        raise ValueError(f"info block must be exactly {code.k} bits")
    G = _rlc_matrix(code.k, code.nc, _require_seed(code))
    return ((info.astype(np.int64) @ G) & 1).astype(np.uint8)


def decode(code: CodeSpec, received) -> np.ndarray:
    """Info estimate from one received codeword."""
    received = np.asarray(received, dtype=np.uint8)
    if isinstance(code, Identity):
        return received.copy()
    if isinstance(code, Repetition):
        if received.size % code.r:
            raise ValueError("received length is not a multiple of r")
        return (
            received.reshape(-1, code.r).sum(axis=1) > code.r // 2
        ).astype(np.uint8)
    if received.size != code.nc:
        raise ValueError(f"received block must be exactly {code.nc} bits")
    cb = _rlc_codebook(code.k, code.nc, _require_seed(code))
    idx = _kernels.ml_decode_index(cb, np.atleast_1d(_kernels.pack_bits(received)))
    return int_to_bits(idx, code.k)


def payload_blocks(code: CodeSpec, info_len: int) -> list[int]:
    """Info-bit sizes of the coded blocks a payload of info_len bits becomes."""
    if info_len == 0:
        return []
    if isinstance(code, RandomLinear):
        return [code.k] * (-(-info_len // code.k))
    return [info_len]


def coded_length(code: CodeSpec, info_len: int) -> int:
    if isinstance(code, Identity):
        return info_len
    if isinstance(code, Repetition):
        return info_len * code.r
    return len(payload_blocks(code, info_len)) * code.nc


def encode_payload(code: CodeSpec, bits) -> np.ndarray:
    """Encode an arbitrary-length payload, splitting and zero-padding
    RandomLinear info blocks as needed."""
    bits = np.asarray(bits, dtype=np.uint8)
    if not isinstance(code, RandomLinear):
        return encode(code, bits)
    if bits.size == 0:
        return bits.copy()
    pad = (-bits.size) % code.k
    if pad:
        bits = np.concatenate([bits, np.zeros(pad, np.uint8)])
    G = _rlc_matrix(code.k, code.nc, _require_seed(code))
    return ((bits.reshape(-1, code.k).astype(np.int64) @ G) & 1).astype(
        np.uint8
    ).reshape(-1)


def decode_payload(code: CodeSpec, received, info_len: int) -> np.ndarray:
    """Decode a payload produced by encode_payload back to info_len bits."""
    received = np.asarray(received, dtype=np.uint8)
    if received.size != coded_length(code, info_len):
        raise ValueError("received length does not match the payload layout")
    if isinstance(code, Identity):
        return received.copy()
    if isinstance(code, Repetition):
        return decode(code, received)
    if info_len == 0:
        return np.empty(0, np.uint8)
    cb = _rlc_codebook(code.k, code.nc, _require_seed(code))
    chunks = _kernels.pack_bits(received.reshape(-1, code.nc))
    out = np.empty((chunks.shape[0], code.k), np.uint8)
    for i in range(chunks.shape[0]):
        idx = _kernels.ml_decode_index(cb, chunks[i])
        out[i] = int_to_bits(idx, code.k)
    return out.reshape(-1)[:info_len]


# ---------------------------------------------------------------------------
# error exponents


@dataclass(frozen=True)
class ExponentQuery:
    rate: float
    epsilon: float

    def __post_init__(self):
        if not 0 <= self.rate < 1:
            raise ValueError("rate must lie in [0, 1)")
        if not 0 <= self.epsilon < 0.5:
            raise ValueError("epsilon must lie in [0, 0.5)")


def gallager_e0(rho: float, eps: float) -> float:
    """E0(rho) for the BSC with a uniform input, in bits."""
    if not 0 <= rho <= 1:
        raise ValueError("rho must lie in [0, 1]")
    inner = eps ** (1.0 / (1.0 + rho)) + (1.0 - eps) ** (1.0 / (1.0 + rho))
    return rho - (1.0 + rho) * math.log2(inner)


@functools.lru_cache(maxsize=4096)
def _exponent(rate: float, eps: float) -> float:
    if eps == 0.0:
        # E0(rho) = rho, so the maximum of rho(1 - R) sits at rho = 1
        return 1.0 - rate
    lo, hi = 0.0, 1.0
    best = 0.0
    for npts in (513, 65, 65, 65):
        rho = np.linspace(lo, hi, npts)
        inner = eps ** (1.0 / (1.0 + rho)) + (1.0 - eps) ** (1.0 / (1.0 + rho))
        vals = rho - (1.0 + rho) * np.log2(inner) - rho * rate
        i = int(np.argmax(vals))
        best = float(vals[i])
        step = (hi - lo) / (npts - 1)
        lo = max(0.0, rho[i] - step)
        hi = min(1.0, rho[i] + step)
    return max(0.0, best)


def gallager_exponent(q: ExponentQuery) -> float:
    """Random-coding exponent max over rho in [0,1] of E0(rho) - rho*rate.

    Strictly positive below capacity, zero at and above it.  Units: bits.
    """
    return _exponent(float(q.rate), float(q.epsilon))


def lemma1_bound(l: int, b: int, rate, eps: float) -> float:
    """Union bound on the probability that any of ``l`` independently coded
    blocks of ``b`` info bits decodes wrongly at code rate ``rate``.

    Returns min(1, l * 2**(-(b/rate) * Er)).  At eps = 0 decoding is always
    exact and the bound is reported as 0.  Rates at or above channel capacity
    are rejected since the exponent premise fails there.
    """
    if l < 1 or b < 1:
        raise ValueError("need at least one block of at least one bit")
    rate = float(rate)
    if not 0 < rate <= 1:
        raise ValueError("rate must lie in (0, 1]")
    if eps == 0:
        return 0.0
    cap = 1.0 - (-eps * math.log2(eps) - (1 - eps) * math.log2(1 - eps))
    if rate >= cap:
        raise ValueError(
            f"rate {rate} is not below the channel limit 1 - h(eps) = {cap:.6f}"
        )
    er = _exponent(rate, float(eps))
    return min(1.0, l * 2.0 ** (-(b / rate) * er))


def union_bound_profile(blocks, rate, eps: float) -> float:
    """lemma1_bound generalized to a mixed profile of block sizes."""
    blocks = list(blocks)
    if not blocks or eps == 0:
        return 0.0
    rate = float(rate)
    er = _exponent(rate, float(eps))
    total = sum(2.0 ** (-(b / rate) * er) for b in blocks)
    return min(1.0, total)


# ---------------------------------------------------------------------------
# spec strings


def parse_code_spec(text: str) -> CodeSpec:
    """Parse 'identity', 'repR' (odd R) or 'rlc:k=K,rate=R[,seed=S]'."""
    text = text.strip()
    if text == "identity":
        return Identity()
    if text.startswith("rep"):
        try:
            r = int(text[3:])
        except ValueError:
            raise ValueError(f"bad repetition spec {text!r}") from None
        return Repetition(r)
    if text.startswith("rlc:"):
        fields = {}
        for part in text[4:].split(","):
            key, _, value = part.partition("=")
            if not value:
                raise ValueError(f"bad random linear field {part!r}")
            fields[key.strip()] = value.strip()
        unknown = set(fields) - {"k", "rate", "seed"}
        if unknown or "k" not in fields or "rate" not in fields:
            raise ValueError(f"random linear spec needs k= and rate=, got {text!r}")
        seed = int(fields["seed"]) if "seed" in fields else None
        return RandomLinear(int(fields["k"]), Fraction(fields["rate"]), seed)
    raise ValueError(f"unknown code spec {text!r}")
