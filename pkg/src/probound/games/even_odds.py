"""The even-odds guessing game.

Each round the environment secretly fixes a bit (any deterministic
function of the agent's past actions); the agent answers a bit and gains
a point when the sum is odd, losing one otherwise.  The agent sees
nothing.  It wins after N rounds with a score of at least ceil(sqrt(N)).

Because the environment's bit is fixed once the agent's prefix is fixed,
exactly half of the continuations of any prefix score the point, so the
fraction of winning deterministic agents is the binomial tail -- the same
for every adversary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .core import Continue, Environment, Lose, Win

Adversary = Callable[[tuple[int, ...]], int]

_MEMO_CAP = 400_000


def score_threshold(rounds: int) -> int:
    """Smallest integer at least sqrt(rounds) (exact integer arithmetic)."""
    t = math.isqrt(rounds)
    return t if t * t == rounds else t + 1


class EvenOddsEnv(Environment):
    mode = "win-no-halt"

    def __init__(self, rounds: int, adversary: Adversary):
        if rounds < 1:
            raise ValueError("need at least one round")
        self.rounds = rounds
        self.adversary = adversary
        self.threshold = score_threshold(rounds)
        self._scores: dict[tuple[int, ...], int] = {(): 0}

    def _score(self, actions: tuple[int, ...]) -> int:
        # memoized on the action prefix; the environment stays a pure
        # function of the history (the cap only bounds memory)
        memo = self._scores
        missing = []
        cur = actions
        while cur not in memo:
            missing.append(cur)
            cur = cur[:-1]
        s = memo[cur]
        for prefix in reversed(missing):
            e = self.adversary(prefix[:-1]) & 1
            s += 1 if e ^ (prefix[-1] & 1) else -1
            if len(memo) > _MEMO_CAP:
                memo.clear()
                memo[()] = 0
            memo[prefix] = s
        return s

    def first_obs(self):
        return None  # empty message

    def actions(self, obs):
        return (0, 1)

    def step(self, history, action):
        actions = tuple(a for _, a in history) + (int(action) & 1,)
        if len(actions) < self.rounds:
            return Continue(None)
        return Win() if self._score(actions) >= self.threshold else Lose()


def adversary_constant(bit: int) -> Adversary:
    return lambda actions: bit


def adversary_copy_last(actions: tuple[int, ...]) -> int:
    """Plays the agent's previous action (0 in the first round)."""
    return actions[-1] if actions else 0


def adversary_parity(actions: tuple[int, ...]) -> int:
    return sum(actions) & 1


NAMED_ADVERSARIES: dict[str, Adversary] = {
    "constant0": adversary_constant(0),
    "constant1": adversary_constant(1),
    "copy-last": adversary_copy_last,
    "parity": adversary_parity,
}


def even_odds_env(rounds: int, adversary: Adversary) -> EvenOddsEnv:
    return EvenOddsEnv(rounds, adversary)


def even_odds_win_fraction(rounds: int) -> Fraction:
    """Exact fraction of winning agents: the agent needs enough odd-sum
    rounds that 2*wins - N >= threshold, a plain binomial tail.

    Environment-independent: for every action prefix the environment's
    bit is fixed, so exactly half of the one-step continuations score.
    """
    t = score_threshold(rounds)
    need = (rounds + t + 1) // 2
    total = sum(math.comb(rounds, j) for j in range(need, rounds + 1))
    return Fraction(total, 2**rounds)


@dataclass(frozen=True)
class BruteForceResult:
    winner: tuple[int, ...] | None  # lexicographically first winning string
    win_fraction: Fraction
    agents: int


def brute_force_agent(
    env: Environment, rounds: int, max_strings: int = 1 << 24
) -> BruteForceResult:
    """Exhaustive search over all deterministic agents of an
    empty-observation binary-action game (agents are bit strings).

    Counts the exact number of winning strings and returns the
    lexicographically first winner, or None.
    """
    total = 2**rounds
    if total > max_strings:
        raise ValueError(f"2^{rounds} agents exceed the {max_strings} cap")
    wins = 0
    first: tuple[int, ...] | None = None

    def dfs(history: tuple, prefix: tuple[int, ...]) -> None:
        nonlocal wins, first
        depth = len(prefix)
        for action in (0, 1):
            result = env.step(history, action)
            if isinstance(result, Win):
                wins += 2 ** (rounds - depth - 1)
                if first is None:
                    padded = prefix + (action,) + (0,) * (rounds - depth - 1)
                    first = padded
            elif isinstance(result, Lose):
                continue
            else:
                if depth + 1 >= rounds:
                    raise RuntimeError("environment did not terminate after N rounds")
                dfs(history + ((None, action),), prefix + (action,))

    dfs((), ())
    return BruteForceResult(first, Fraction(wins, total), total)
