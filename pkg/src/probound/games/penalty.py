"""Penalty games built from per-round distribution/test pairs.

Round i hands the agent a finite distribution P_i (atoms and weights);
the agent answers a number and is charged T_i(answer).  Every supplied
pair must satisfy sum_a P_i(a) * T_i(a) < 1, so the reference agent that
simply samples from P_i expects total penalty below the round count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..rngcore import estimate_mean
from .core import Continue, Environment, Halt

OFF_SUPPORT_CHARGE = 1.0  # rejection charge for answers outside the atoms


@dataclass(frozen=True)
class PenaltyTest:
    """One round's distribution and test, given on a shared atom list."""

    atoms: tuple[int, ...]
    probs: tuple[float, ...]
    charges: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.atoms) == len(self.probs) == len(self.charges)):
            raise ValueError("atoms, probs, charges must align")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError("atoms must be distinct")
        if any(p < 0 for p in self.probs) or abs(sum(self.probs) - 1.0) > 1e-9:
            raise ValueError("probs must form a distribution")
        if any(t < 0 for t in self.charges):
            raise ValueError("charges must be nonnegative")

    def expectation(self) -> float:
        return math.fsum(p * t for p, t in zip(self.probs, self.charges))

    def charge(self, action: int) -> float:
        try:
            return self.charges[self.atoms.index(action)]
        except ValueError:
            return OFF_SUPPORT_CHARGE


class PenaltyTestsEnv(Environment):
    mode = "penalty"

    def __init__(self, tests: Sequence[PenaltyTest]):
        if not tests:
            raise ValueError("need at least one round")
        for i, t in enumerate(tests):
            if t.expectation() >= 1.0:
                raise ValueError(
                    f"round {i}: sum_a P(a)T(a) = {t.expectation():.4f} must be < 1"
                )
        self.tests = tuple(tests)
        self.rounds = len(tests)

    def first_obs(self):
        return (self.tests[0].atoms, self.tests[0].probs)  # the agent sees P_1 only

    def actions(self, obs):
        atoms, _ = obs
        return atoms

    def step(self, history, action):
        done = len(history) + 1
        if done < self.rounds:
            nxt = self.tests[done]
            return Continue((nxt.atoms, nxt.probs))
        total = math.fsum(
            self.tests[i].charge(a) for i, (_, a) in enumerate(history)
        ) + self.tests[done - 1].charge(action)
        return Halt(total)


def penalty_tests_env(tests: Sequence[PenaltyTest]) -> PenaltyTestsEnv:
    return PenaltyTestsEnv(tests)


def sampling_agent(history, obs, rng) -> int:
    """The reference probabilistic agent: answer a draw from P_i."""
    atoms, probs = obs
    cum = np.cumsum(np.asarray(probs))
    return int(atoms[int(np.searchsorted(cum, rng.random(), side="right"))])


def greedy_min_agent(tests: Sequence[PenaltyTest]):
    """Deterministic per-round expected-penalty minimizer, built with full
    knowledge of the environment's test list.  Its per-round charge is at
    most the round's expectation, so its total stays under the round count."""
    choices = [t.atoms[min(range(len(t.atoms)), key=lambda i: t.charges[i])] for t in tests]

    def act(history, obs, rng):
        return choices[len(history)]

    return act


def play_penalty(env: PenaltyTestsEnv, agent, rng=None) -> float:
    """Total penalty of one full playout."""
    from .core import play

    transcript = play(agent, env, env.rounds + 1, rng)
    if transcript.penalty is None:
        raise RuntimeError("penalty game did not halt")
    return transcript.penalty


def estimate_penalty(
    env: PenaltyTestsEnv, agent, trials: int, seed: int, confidence: float = 0.99
) -> tuple[float, float, float]:
    """Monte Carlo mean total penalty for a (possibly randomized) agent."""
    return estimate_mean(lambda rng: play_penalty(env, agent, rng), trials, seed, confidence)
