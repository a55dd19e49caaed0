"""Monte Carlo harness: estimate scheme failure rates over a config grid.

One cell per (n, epsilon) pair.  Every trial derives its protocol seed,
noise seed and code-matrix seed from (master seed, cell index, trial index),
so any cell of any run can be reproduced bit-exactly in isolation, and the
whole result table is a pure function of the config.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelPair, shannon_capacity
from .coding import (
    CodeSpec,
    RandomLinear,
    nominal_rate,
    parse_code_spec,
    union_bound_profile,
)
from .protocol import Protocol, gen_uniform_protocol
from .report import SimulationReport
from .scheme_random import run_scheme1
from .scheme_regular import run_scheme2
from .vertical import run_baseline

SCHEMES = ("baseline", "scheme1", "scheme2")


def wilson_interval(failures: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1 or not 0 <= failures <= trials:
        raise ValueError("need 0 <= failures <= trials, trials >= 1")
    ph = failures / trials
    denom = 1 + z * z / trials
    center = (ph + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    eps_values: tuple[float, ...]
    scheme: str
    code: str
    trials: int
    seed: int = 0
    m_override: Optional[int] = None
    protocols: Optional[tuple[Protocol, ...]] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not self.n_values or not self.eps_values:
            raise ValueError("need at least one n and one epsilon")
        if self.protocols is not None:
            lengths = {q.n for q in self.protocols}
            if len(lengths) != 1:
                raise ValueError("fixed protocols must all share one length")
            object.__setattr__(self, "n_values", (lengths.pop(),))


@dataclass(frozen=True)
class ErrorEstimate:
    n: int
    epsilon: float
    scheme: str
    code: str
    trials: int
    failures: int
    p_hat: float
    wilson_lo: float
    wilson_hi: float
    mean_rate: float
    capacity: float
    lemma1_bound: float


CSV_COLUMNS = (
    "n",
    "epsilon",
    "scheme",
    "code",
    "trials",
    "failures",
    "p_hat",
    "wilson_lo",
    "wilson_hi",
    "mean_rate",
    "capacity",
    "lemma1_bound",
)


def validate_config(cfg: ExperimentConfig) -> CodeSpec:
    """Check the target information rate against the channel limit.

    At any epsilon > 0 a code rate at or above 1 - h(epsilon) cannot yield a
    vanishing error probability, so such configs are rejected outright.
    Noiseless runs are exempt: every decode is exact at epsilon = 0.
    """
    code = parse_code_spec(cfg.code)
    rb = nominal_rate(code)
    for eps in cfg.eps_values:
        if eps == 0:
            continue
        cap = shannon_capacity(eps)
        if float(rb) >= cap:
            raise ValueError(
                f"code rate {rb} is not below 1 - h({eps}) = {cap:.6f}; "
                "pick a lower-rate code or a smaller epsilon"
            )
    return code


def run_trial(
    scheme: str,
    protocol: Protocol,
    eps: float,
    code: CodeSpec,
    noise_seed: int,
    m_override: Optional[int] = None,
) -> SimulationReport:
    ch = ChannelPair(eps, noise_seed)
    if scheme == "baseline":
        return run_baseline(protocol, ch, code)
    if scheme == "scheme1":
        return run_scheme1(protocol, ch, code)
    return run_scheme2(protocol, ch, code, m=m_override)


def run_experiment(cfg: ExperimentConfig) -> list[ErrorEstimate]:
    code = validate_config(cfg)
    rb = nominal_rate(code)
    rows = []
    cell = 0
    for n in cfg.n_values:
        for eps in cfg.eps_values:
            failures = 0
            rates = []
            bounds = []
            for t in range(cfg.trials):
                ss = np.random.SeedSequence(entropy=(cfg.seed, cell, t))
                p_seed, noise_seed, code_seed = (
                    int(x) for x in ss.generate_state(3, np.uint64)
                )
                if cfg.protocols is not None:
                    protocol = cfg.protocols[t % len(cfg.protocols)]
                else:
                    protocol = gen_uniform_protocol(n, p_seed)
                concrete = code
                if isinstance(code, RandomLinear) and code.code_seed is None:
                    concrete = replace(code, code_seed=code_seed)
                report = run_trial(
                    cfg.scheme, protocol, eps, concrete, noise_seed, cfg.m_override
                )
                failures += not report.ok
                rates.append(float(report.rate))
                bounds.append(union_bound_profile(report.block_profile, rb, eps))
            lo, hi = wilson_interval(failures, cfg.trials)
            rows.append(
                ErrorEstimate(
                    n=n,
                    epsilon=eps,
                    scheme=cfg.scheme,
                    code=cfg.code,
                    trials=cfg.trials,
                    failures=failures,
                    p_hat=failures / cfg.trials,
                    wilson_lo=lo,
                    wilson_hi=hi,
                    mean_rate=math.fsum(rates) / cfg.trials,
                    capacity=shannon_capacity(eps),
                    lemma1_bound=math.fsum(bounds) / cfg.trials,
                )
            )
            cell += 1
    return rows


def _row_dict(row: ErrorEstimate) -> dict:
    return {c: getattr(row, c) for c in CSV_COLUMNS}


def emit(rows: Sequence[ErrorEstimate], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([_row_dict(r) for r in rows], indent=2) + "\n"
    if fmt != "csv":
        raise ValueError("format must be csv or json")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_row_dict(r)[c] for c in CSV_COLUMNS])
    return buf.getvalue()
