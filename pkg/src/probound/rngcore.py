"""Seeded randomness, trial execution, and statistical verdicts.

Every Monte Carlo experiment in this package draws from counter-based
Philox4x64 streams keyed by ``(master_seed, stream_index)``.  Trial i
always sees the byte stream of key ``(master_seed, i)``, so results are
bit-identical across platforms, reruns, and worker counts.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Any, Callable

import numpy as np

Trial = Callable[[np.random.Generator], bool]

CONSISTENT = "CONSISTENT"
REFUTED = "REFUTED"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_CONFIDENCE = 0.99
DEFAULT_TRIALS = 100_000

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """One independent random stream, keyed by (master_seed, stream_index).

    Philox is counter-based: distinct keys give streams with no shared
    state, and the same key reproduces the same bytes everywhere.
    """

    master_seed: int
    stream_index: int

    def _key(self) -> list[int]:
        return [self.master_seed & _MASK64, self.stream_index & _MASK64]

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self._key()))

    def raw64(self, n: int) -> list[int]:
        """First n raw 64-bit words of the stream (golden-test hook)."""
        return [int(x) for x in np.random.Philox(key=self._key()).random_raw(n)]


@dataclass(frozen=True)
class Estimate:
    """Aggregated Monte Carlo result for a Boolean trial."""

    trials: int
    successes: int
    p_hat: float
    one_sided_lower: float
    one_sided_upper: float
    confidence: float
    master_seed: int


@dataclass(frozen=True)
class Verdict:
    """Outcome of testing an Estimate against a claimed lower bound.

    CONSISTENT is the strongest positive outcome; no verdict proves a
    bound.  ``binding`` is False when the construction's premise failed,
    in which case the verdict is reported but carries no weight.
    """

    claimed_bound: float
    status: str
    margin: float
    binding: bool = True


def _wilson_bounds(successes: int, trials: int, z: float) -> tuple[float, float]:
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    spread = z * np.sqrt((p * (1.0 - p) + z2 / (4 * trials)) / trials) / denom
    lower = 0.0 if successes == 0 else max(0.0, center - spread)
    upper = 1.0 if successes == trials else min(1.0, center + spread)
    return lower, upper


def wilson_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("wilson_interval undefined for trials = 0")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf((1.0 + confidence) / 2.0)
    return _wilson_bounds(successes, trials, z)


def _count_range(trial: Trial, master_seed: int, start: int, stop: int) -> int:
    # Fast path: one reusable Philox whose state is reset per trial.
    # Verified bit-identical to constructing RngStream(seed, i).generator()
    # fresh for every i (see tests).
    bitgen = np.random.Philox(key=[master_seed & _MASK64, 0])
    gen = np.random.Generator(bitgen)
    state = bitgen.state
    key = state["state"]["key"]
    counter = state["state"]["counter"]
    hits = 0
    for i in range(start, stop):
        key[1] = i
        counter[0] = 0
        counter[1] = 0
        counter[2] = 0
        counter[3] = 0
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        bitgen.state = state
        if trial(gen):
            hits += 1
    return hits


def run_trials(
    trial: Trial,
    trials: int,
    master_seed: int,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int = 1,
) -> Estimate:
    """Run ``trial`` on streams (master_seed, 0..trials-1) and aggregate.

    The trial receives a generator positioned at the start of its own
    stream and returns True on success.  Aggregation is an integer count,
    so the Estimate does not depend on execution order or ``workers``.
    Exceptions raised by the trial (malformed instances) propagate.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers <= 1:
        successes = _count_range(trial, master_seed, 0, trials)
    else:
        chunk = (trials + workers - 1) // workers
        spans = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = pool.map(lambda sp: _count_range(trial, master_seed, sp[0], sp[1]), spans)
            successes = sum(counts)
    p_hat = successes / trials
    z = NormalDist().inv_cdf(confidence)
    lower, upper = _wilson_bounds(successes, trials, z)
    return Estimate(
        trials=trials,
        successes=successes,
        p_hat=p_hat,
        one_sided_lower=lower,
        one_sided_upper=upper,
        confidence=confidence,
        master_seed=master_seed,
    )


def verdict_against_bound(est: Estimate, claimed: float, binding: bool = True) -> Verdict:
    """Compare an Estimate against a claimed success-probability lower bound."""
    if not 0.0 <= claimed <= 1.0:
        raise ValueError("claimed bound must lie in [0, 1]")
    if est.one_sided_upper < claimed:
        status = REFUTED
    elif est.one_sided_lower >= claimed:
        status = CONSISTENT
    elif claimed == 1.0 and est.successes == est.trials:
        # a claim of exactly 1 is only ever contradicted by an observed
        # failure; with none, the data is fully consistent with it
        status = CONSISTENT
    else:
        status = INCONCLUSIVE
    return Verdict(
        claimed_bound=claimed,
        status=status,
        margin=est.p_hat - claimed,
        binding=binding,
    )


def estimate_mean(
    sample: Callable[[np.random.Generator], float],
    trials: int,
    master_seed: int,
    confidence: float = DEFAULT_CONFIDENCE,
) -> tuple[float, float, float]:
    """Mean of a real-valued per-trial statistic with a normal-theory CI.

    Same stream discipline as run_trials.  Returns (mean, lower, upper).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    values = np.empty(trials, dtype=np.float64)
    bitgen = np.random.Philox(key=[master_seed & _MASK64, 0])
    gen = np.random.Generator(bitgen)
    state = bitgen.state
    key = state["state"]["key"]
    counter = state["state"]["counter"]
    for i in range(trials):
        key[1] = i
        counter[0] = 0
        counter[1] = 0
        counter[2] = 0
        counter[3] = 0
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        bitgen.state = state
        values[i] = sample(gen)
    mean = float(values.mean())
    if trials > 1:
        half = NormalDist().inv_cdf((1.0 + confidence) / 2.0) * float(values.std(ddof=1)) / np.sqrt(trials)
    else:
        half = float("inf")
    return mean, mean - half, mean + half


def describe_estimate(est: Estimate) -> dict[str, Any]:
    """Plain-dict view of an Estimate (report plumbing)."""
    return {
        "trials": est.trials,
        "successes": est.successes,
        "p_hat": est.p_hat,
        "ci_lower": est.one_sided_lower,
        "ci_upper": est.one_sided_upper,
        "confidence": est.confidence,
        "seed": est.master_seed,
    }
