"""Local-lemma premise checks and a constructive resampling solver.

A BadEventSystem is a product space of discrete variables plus a family
of bad events, each reading only the variables in its support.  Two
events are dependent exactly when their supports intersect; independent
supports make the events mutually independent under the product measure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .rngcore import RngStream

Assignment = Sequence[int]


@dataclass(frozen=True)
class BadEvent:
    support: tuple[int, ...]
    violated: Callable[[Assignment], bool]  # must read support variables only


@dataclass
class BadEventSystem:
    num_vars: int
    var_domains: tuple[int, ...]
    events: tuple[BadEvent, ...]
    var_dist: tuple[tuple[float, ...], ...] | None = None  # default uniform

    def __post_init__(self):
        if len(self.var_domains) != self.num_vars:
            raise ValueError("var_domains length must equal num_vars")
        if any(d < 1 for d in self.var_domains):
            raise ValueError("every variable domain must be non-empty")
        for ev in self.events:
            if not ev.support:
                raise ValueError("event support must be non-empty")
            if any(not 0 <= v < self.num_vars for v in ev.support):
                raise ValueError(f"support {ev.support} out of range")
        if self.var_dist is not None:
            if len(self.var_dist) != self.num_vars:
                raise ValueError("var_dist length must equal num_vars")
            for dom, dist in zip(self.var_domains, self.var_dist):
                if len(dist) != dom:
                    raise ValueError("distribution length must match domain size")
                if any(p < 0 for p in dist) or abs(sum(dist) - 1.0) > 1e-9:
                    raise ValueError("each var_dist row must be a probability vector")

    def assignment_space(self) -> int:
        return math.prod(self.var_domains)


def dependency_degree(sys: BadEventSystem) -> tuple[list[int], int]:
    """Per-event dependency counts and their maximum.

    Events i and j are dependent iff support(i) and support(j) intersect.
    """
    supports = [frozenset(ev.support) for ev in sys.events]
    degrees = []
    for i, si in enumerate(supports):
        degrees.append(sum(1 for j, sj in enumerate(supports) if j != i and si & sj))
    return degrees, max(degrees, default=0)


@dataclass(frozen=True)
class LllReport:
    p_max: float
    d_max: int
    premise_value: float
    premise_ok: bool
    bound: float  # claimed Pr[all events avoided]; non-binding if premise_ok is False
    n_events: int
    rule: str


E = math.e


def symmetric_lll(p: float, d: int, n_events: int) -> LllReport:
    """Symmetric local lemma: if e*p*(d+1) <= 1 then the probability of
    avoiding all n events is at least (1 - 1/(d+1))^n."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("event probability must lie in [0, 1]")
    premise = E * p * (d + 1)
    bound = (1.0 - 1.0 / (d + 1)) ** n_events if n_events else 1.0
    return LllReport(
        p_max=p,
        d_max=d,
        premise_value=premise,
        premise_ok=premise <= 1.0,
        bound=bound,
        n_events=n_events,
        rule="symmetric",
    )


def lopsided_lll(p: float, d: int, n_events: int) -> LllReport:
    """Lopsided local lemma: under negative correlation with non-neighbors,
    4*d*p <= 1 gives avoidance probability at least (1 - 2p)^n.

    The negative-correlation hypothesis is not machine-checkable in
    general; callers assert it (it holds for the random-permutation
    system used by the Latin-transversal construction).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("event probability must lie in [0, 1]")
    premise = 4.0 * d * p
    bound = max(0.0, 1.0 - 2.0 * p) ** n_events if n_events else 1.0
    return LllReport(
        p_max=p,
        d_max=d,
        premise_value=premise,
        premise_ok=premise <= 1.0,
        bound=bound,
        n_events=n_events,
        rule="lopsided",
    )


def event_probability(sys: BadEventSystem, index: int, max_size: int = 1 << 20) -> float:
    """Exact probability of one event by enumerating its support assignments."""
    ev = sys.events[index]
    support = ev.support
    size = math.prod(sys.var_domains[v] for v in support)
    if size > max_size:
        raise ValueError(f"support space {size} too large to enumerate")
    assignment = [0] * sys.num_vars
    total = 0.0
    for values in itertools.product(*(range(sys.var_domains[v]) for v in support)):
        for v, val in zip(support, values):
            assignment[v] = val
        if ev.violated(assignment):
            if sys.var_dist is None:
                total += 1.0 / size
            else:
                total += math.prod(sys.var_dist[v][val] for v, val in zip(support, values))
    return total


def exact_avoid_probability(sys: BadEventSystem, max_size: int = 1 << 20) -> float:
    """Exact Pr[no event violated] by full enumeration (small systems only)."""
    size = sys.assignment_space()
    if size > max_size:
        raise ValueError(f"assignment space {size} too large to enumerate")
    total = 0.0
    for assignment in itertools.product(*(range(d) for d in sys.var_domains)):
        if any(ev.violated(assignment) for ev in sys.events):
            continue
        if sys.var_dist is None:
            total += 1.0 / size
        else:
            total += math.prod(sys.var_dist[v][val] for v, val in enumerate(assignment))
    return total


DEFAULT_RESAMPLE_FACTOR = 64


@dataclass(frozen=True)
class MoserTardosResult:
    assignment: tuple[int, ...]
    resamples: int
    success: bool  # False when the resample budget ran out


def _sample_var(rng: np.random.Generator, dom: int, dist: tuple[float, ...] | None) -> int:
    if dist is None:
        return int(rng.integers(0, dom))
    return int(np.searchsorted(np.cumsum(dist), rng.random(), side="right"))


def moser_tardos(
    sys: BadEventSystem, seed: int, max_resamples: int | None = None
) -> MoserTardosResult:
    """Constructive local-lemma solver.

    Samples every variable from its distribution, then, while some event
    is violated, resamples exactly the support of the lowest-index
    violated event.  The default budget is 64*(#events + 1), a generous
    multiple of the resampling-algorithm expectation.
    """
    if max_resamples is None:
        max_resamples = DEFAULT_RESAMPLE_FACTOR * (len(sys.events) + 1)
    rng = RngStream(seed, 0).generator()
    dists = sys.var_dist or (None,) * sys.num_vars
    assignment = [_sample_var(rng, d, q) for d, q in zip(sys.var_domains, dists)]
    resamples = 0
    while True:
        violated_idx = next(
            (i for i, ev in enumerate(sys.events) if ev.violated(assignment)), None
        )
        if violated_idx is None:
            return MoserTardosResult(tuple(assignment), resamples, True)
        if resamples >= max_resamples:
            return MoserTardosResult(tuple(assignment), resamples, False)
        for v in sys.events[violated_idx].support:
            assignment[v] = _sample_var(rng, sys.var_domains[v], dists[v])
        resamples += 1
