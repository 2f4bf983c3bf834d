"""The edge-contraction min-cut game.

Each round the environment announces how many edges the contracted
multigraph has; the agent names one (through a seeded relabeling) and the
environment contracts it, keeping parallel edges and dropping self-loops.
When two super-vertices remain, the agent wins exactly when the surviving
parallel edges number the true minimum cut.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..instances import Graph
from ..rngcore import RngStream
from .core import Continue, Environment, Lose, Win
from .walks import _relabel_permutation, is_connected


def exact_min_cut(g: Graph, max_vertices: int = 20) -> int:
    """Global minimum cut by brute force over bipartitions (n <= 20)."""
    n = g.n
    if n < 2:
        raise ValueError("min cut needs at least two vertices")
    if n > max_vertices:
        raise ValueError(f"brute force capped at {max_vertices} vertices")
    masks = [(1 << u) | (1 << v) for u, v in g.edges]
    best = None
    for side in range(1, 1 << (n - 1)):  # vertex n-1 fixed on the other side
        cut = 0
        for em in masks:
            overlap = side & em
            if overlap and overlap != em:
                cut += 1
        if best is None or cut < best:
            best = cut
    return best


class _Contraction:
    """Multigraph under contraction: labels plus a live edge list."""

    def __init__(self, g: Graph):
        self.label = list(range(g.n))
        self.edges = list(g.edges)
        self.groups = g.n

    def find(self, v: int) -> int:
        label = self.label
        while label[v] != v:
            label[v] = label[label[v]]
            v = label[v]
        return v

    def contract_edge(self, index: int) -> None:
        u, v = self.edges[index]
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            raise ValueError("cannot contract a self-loop")
        self.label[ru] = rv
        self.groups -= 1
        self.edges = [e for e in self.edges if self.find(e[0]) != self.find(e[1])]


def karger_cut_value(g: Graph, rng: np.random.Generator) -> int:
    """Contract uniformly random edges down to two groups; the surviving
    parallel edge count is the cut this run returns."""
    state = _Contraction(g)
    while state.groups > 2:
        state.contract_edge(int(rng.integers(0, len(state.edges))))
    return len(state.edges)


class KargerEnv(Environment):
    mode = "win-no-halt"

    def __init__(self, g: Graph, relabel_seed: int = 0):
        if g.n < 2:
            raise ValueError("need at least two vertices")
        if not is_connected(g):
            raise ValueError("contraction game needs a connected graph")
        self.graph = g
        self.relabel_seed = relabel_seed
        self.min_cut = exact_min_cut(g)

    def first_obs(self):
        return self.graph.m

    def actions(self, obs):
        return range(1, int(obs) + 1)

    def _replay(self, history, action) -> _Contraction | None:
        actions = [a for _, a in history] + [action]
        state = _Contraction(self.graph)
        for rnd, act in enumerate(actions, start=1):
            m = len(state.edges)
            if not 1 <= act <= m:
                return None
            perm = _relabel_permutation(self.relabel_seed, rnd, tuple(actions[: rnd - 1]), m)
            state.contract_edge(int(perm[act - 1]))
        return state

    def step(self, history, action):
        state = self._replay(history, action)
        if state is None:
            return Lose()
        if state.groups > 2:
            return Continue(len(state.edges))
        return Win() if len(state.edges) == self.min_cut else Lose()


def karger_env(g: Graph, relabel_seed: int = 0) -> KargerEnv:
    return KargerEnv(g, relabel_seed)


def karger_win_trial(g: Graph, min_cut: int):
    """Trial closure for run_trials: one uniform-edge contraction run.

    Distributionally identical to the uniform agent playing KargerEnv
    (the relabeling permutes edges bijectively), but without the
    history-replay overhead.
    """

    def trial(rng: np.random.Generator) -> bool:
        return karger_cut_value(g, rng) == min_cut

    return trial
