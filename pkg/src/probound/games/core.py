"""Interactive agent/environment framework.

Environments are deterministic functions of the play history: given the
same (history, action) they always answer the same, so transcripts replay
bit-exactly.  Agents may be randomized, drawing only from the generator
handed to them; deterministic agents ignore it.

A win/no-halt environment answers Continue, Win, or Lose (the desk-scale
stand-in for "never halts" is a Timeout from the max_rounds guard, kept
distinct from Lose).  A penalty environment eventually answers Halt with
the total nonnegative penalty.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

History = Sequence[tuple[Any, int]]
Agent = Callable[[History, Any, "np.random.Generator | None"], int]


@dataclass(frozen=True)
class Continue:
    observation: Any


@dataclass(frozen=True)
class Win:
    pass


@dataclass(frozen=True)
class Lose:
    pass


@dataclass(frozen=True)
class Halt:
    penalty: float


StepResult = Continue | Win | Lose | Halt

WIN, LOSE, HALT, TIMEOUT = "win", "lose", "halt", "timeout"


class Environment:
    """Base class; subclasses implement first_obs/step/actions."""

    mode: str = "win-no-halt"

    def first_obs(self) -> Any:
        raise NotImplementedError

    def step(self, history: History, action: int) -> StepResult:
        raise NotImplementedError

    def actions(self, obs: Any) -> Iterable[int]:
        """Legal actions for the given observation (used by agent search)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Transcript:
    pairs: tuple[tuple[Any, int], ...]
    outcome: str
    rounds: int
    penalty: float | None = None


def play(
    agent: Agent,
    env: Environment,
    max_rounds: int,
    rng: np.random.Generator | None = None,
) -> Transcript:
    """Alternate agent and environment for up to max_rounds rounds."""
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    history: list[tuple[Any, int]] = []
    obs = env.first_obs()
    outcome = TIMEOUT
    penalty = None
    for _ in range(max_rounds):
        action = agent(history, obs, rng)
        result = env.step(history, action)
        history.append((obs, action))
        if isinstance(result, Continue):
            obs = result.observation
            continue
        if isinstance(result, Win):
            outcome = WIN
        elif isinstance(result, Lose):
            outcome = LOSE
        else:
            outcome = HALT
            penalty = result.penalty
        break
    return Transcript(tuple(history), outcome, len(history), penalty)


def table_agent(actions: Sequence[int]) -> Agent:
    """Deterministic agent playing a fixed action sequence."""

    def act(history, obs, rng):
        return int(actions[len(history)])

    return act


def replay(env: Environment, transcript: Transcript, max_rounds: int | None = None) -> Transcript:
    """Re-run a transcript's actions through the environment."""
    actions = [a for _, a in transcript.pairs]
    return play(table_agent(actions), env, max_rounds or max(len(actions), 1))


def uniform_choice_agent(history, obs, rng) -> int:
    """Picks uniformly from 1..obs (obs is a count, e.g. a vertex degree)."""
    return 1 + int(rng.integers(0, int(obs)))


def uniform_bit_agent(history, obs, rng) -> int:
    return int(rng.integers(0, 2))


def search_deterministic_agent(
    env: Environment, max_rounds: int, max_nodes: int = 1_000_000
) -> tuple[int, ...] | None:
    """Exhaustive action-tree search for a winning deterministic agent.

    Depth-first over env.actions(obs); returns the first winning action
    sequence found, or None if the capped tree contains no win.
    """
    budget = [max_nodes]

    def dfs(history: tuple, obs: Any, depth: int) -> tuple[int, ...] | None:
        if depth >= max_rounds:
            return None
        for action in env.actions(obs):
            if budget[0] <= 0:
                return None
            budget[0] -= 1
            result = env.step(history, action)
            if isinstance(result, Win):
                return (action,)
            if isinstance(result, (Lose, Halt)):
                continue
            sub = dfs(history + ((obs, action),), result.observation, depth + 1)
            if sub is not None:
                return (action,) + sub
        return None

    return dfs((), env.first_obs(), 0)
