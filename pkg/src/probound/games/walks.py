"""Random-walk games and their exact analytics.

The walk analytics run in exact rational arithmetic (small graphs), so
statements like P^{2k}(u,u) >= P^{2k}(u,v) are checked without rounding.
The walk environments hand the agent only the current vertex degree; the
numbering of the incident edges is reshuffled every round by a seeded
deterministic relabeling, so agents cannot orient themselves.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..instances import Graph, certified_transitive_kind
from ..rngcore import RngStream, estimate_mean
from .core import Continue, Environment, Halt, Lose, Win


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    adj = g.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def is_bipartite(g: Graph) -> bool:
    adj = g.adjacency()
    color: dict[int, int] = {}
    for root in range(g.n):
        if root in color:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in color:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def transition_matrix(g: Graph) -> list[list[Fraction]]:
    """Simple-random-walk transition probabilities as exact rationals."""
    adj = g.adjacency()
    mat = [[Fraction(0)] * g.n for _ in range(g.n)]
    for v in range(g.n):
        if not adj[v]:
            mat[v][v] = Fraction(1)  # isolated vertex: walk stays put
            continue
        share = Fraction(1, len(adj[v]))
        for u in adj[v]:
            mat[v][u] = share
    return mat


def stationary_distribution(g: Graph) -> list[Fraction]:
    if g.m == 0:
        raise ValueError("stationary distribution needs at least one edge")
    two_m = 2 * g.m
    return [Fraction(d, two_m) for d in g.degrees()]


def _mat_mul(a, b, n):
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)
    ]


def exact_walk_distribution(g: Graph, start: int, steps: int) -> list[Fraction]:
    """Distribution of the walk after ``steps`` moves from ``start``."""
    if not 0 <= start < g.n:
        raise ValueError("start vertex out of range")
    mat = transition_matrix(g)
    dist = [Fraction(0)] * g.n
    dist[start] = Fraction(1)
    for _ in range(steps):
        nxt = [Fraction(0)] * g.n
        for v, p in enumerate(dist):
            if p:
                row = mat[v]
                for u in range(g.n):
                    if row[u]:
                        nxt[u] += p * row[u]
        dist = nxt
    return dist


def return_probability(g: Graph, u: int, steps: int) -> Fraction:
    """Exact probability the walk from u is back at u after ``steps``."""
    return exact_walk_distribution(g, u, steps)[u]


def mixing_time(g: Graph, max_steps: int = 4096) -> int:
    """Smallest t with max_{u,v} |P^t(u,v) - pi(v)| <= pi_min / 2.

    The factor-of-two tolerance fixes the informal "up to a factor of 2"
    convergence notion.  Requires a connected non-bipartite graph.
    """
    if not is_connected(g):
        raise ValueError("mixing time needs a connected graph")
    if is_bipartite(g):
        raise ValueError("bipartite graphs do not mix")
    pi = stationary_distribution(g)
    tol = min(pi) / 2
    mat = transition_matrix(g)
    power = mat
    for t in range(1, max_steps + 1):
        worst = max(abs(power[u][v] - pi[v]) for u in range(g.n) for v in range(g.n))
        if worst <= tol:
            return t
        power = _mat_mul(power, mat, g.n)
    raise RuntimeError(f"no mixing within {max_steps} steps")


def _relabel_permutation(seed: int, round_no: int, actions: tuple[int, ...], size: int):
    """Deterministic per-round permutation of the incident edge numbers."""
    h = 1469598103934665603
    for x in (round_no, *actions):
        h = ((h ^ (x + 1)) * 1099511628211) & ((1 << 64) - 1)
    return RngStream(seed, h).generator().permutation(size)


class _WalkEnv(Environment):
    """Shared mechanics: observation is the current degree, action i in
    1..degree moves along the i-th edge under the round's relabeling."""

    def __init__(self, g: Graph, start: int, relabel_seed: int):
        if not 0 <= start < g.n:
            raise ValueError("start vertex out of range")
        self.graph = g
        self.start = start
        self.relabel_seed = relabel_seed
        self.adj = g.adjacency()

    def first_obs(self):
        return len(self.adj[self.start])

    def actions(self, obs):
        return range(1, int(obs) + 1)

    def _path(self, history, action) -> list[int] | None:
        """Vertices visited after applying all actions; None on a bad action."""
        actions = [a for _, a in history] + [action]
        path = [self.start]
        v = self.start
        for rnd, act in enumerate(actions, start=1):
            nbrs = self.adj[v]
            if not 1 <= act <= len(nbrs):
                return None
            perm = _relabel_permutation(
                self.relabel_seed, rnd, tuple(actions[: rnd - 1]), len(nbrs)
            )
            v = nbrs[int(perm[act - 1])]
            path.append(v)
        return path


class GraphNavigationEnv(_WalkEnv):
    mode = "win-no-halt"

    def __init__(self, g: Graph, start: int, goal: int, rounds: int, relabel_seed: int):
        super().__init__(g, start, relabel_seed)
        self.goal = goal
        self.rounds = rounds

    def step(self, history, action):
        path = self._path(history, action)
        if path is None:
            return Lose()
        if len(history) + 1 < self.rounds:
            return Continue(len(self.adj[path[-1]]))
        return Win() if path[-1] == self.goal else Lose()


def graph_navigation_env(
    g: Graph, start: int, goal: int, rounds: int | None = None, relabel_seed: int = 0
) -> GraphNavigationEnv:
    """Win by standing on the goal after t_G rounds, seeing only degrees."""
    if not is_connected(g):
        raise ValueError("navigation needs a connected graph")
    if is_bipartite(g):
        raise ValueError("navigation needs a non-bipartite graph")
    if not 0 <= goal < g.n:
        raise ValueError("goal vertex out of range")
    t = mixing_time(g) if rounds is None else rounds
    return GraphNavigationEnv(g, start, goal, t, relabel_seed)


class CoverTimeEnv(_WalkEnv):
    mode = "penalty"

    def step(self, history, action):
        if self.graph.n <= 1:
            return Halt(0.0)
        path = self._path(history, action)
        if path is None:
            return Halt(float("inf"))  # illegal action: unbounded penalty
        if len(set(path)) == self.graph.n:
            return Halt(float(len(path) - 1))
        return Continue(len(self.adj[path[-1]]))


def cover_time_env(g: Graph, start: int, relabel_seed: int = 0) -> CoverTimeEnv:
    """Penalty = number of moves until every vertex has been visited."""
    if not is_connected(g):
        raise ValueError("cover time needs a connected graph")
    return CoverTimeEnv(g, start, relabel_seed)


def estimate_cover_time(
    g: Graph, start: int, trials: int, seed: int, confidence: float = 0.99
) -> tuple[float, float, float]:
    """Monte Carlo mean cover time of the uniform random walk, with CI."""
    if not is_connected(g):
        raise ValueError("cover time needs a connected graph")
    if g.n <= 1:
        return 0.0, 0.0, 0.0
    adj = [tuple(row) for row in g.adjacency()]
    n = g.n
    cap = 1_000_000

    def one_walk(rng) -> float:
        v = start
        seen = 1 << v
        full = (1 << n) - 1
        steps = 0
        while seen != full:
            nbrs = adj[v]
            v = nbrs[int(rng.integers(0, len(nbrs)))]
            seen |= 1 << v
            steps += 1
            if steps > cap:
                raise RuntimeError("cover walk exceeded step cap")
        return float(steps)

    return estimate_mean(one_walk, trials, seed, confidence)


def exact_cover_time(g: Graph, start: int) -> float:
    """Expected cover time by first-step analysis over (vertex, visited-set)
    states, solving one linear system per visited set."""
    if not is_connected(g):
        raise ValueError("cover time needs a connected graph")
    n = g.n
    if n <= 1:
        return 0.0
    adj = g.adjacency()
    full = (1 << n) - 1
    expect: dict[tuple[int, int], float] = {}
    masks = sorted(
        (m for m in range(1, full + 1)), key=lambda m: bin(m).count("1"), reverse=True
    )
    for mask in masks:
        members = [v for v in range(n) if mask & (1 << v)]
        if mask == full:
            for v in members:
                expect[(v, mask)] = 0.0
            continue
        idx = {v: i for i, v in enumerate(members)}
        size = len(members)
        a = np.eye(size)
        b = np.ones(size)
        for v in members:
            deg = len(adj[v])
            for u in adj[v]:
                if mask & (1 << u):
                    a[idx[v], idx[u]] -= 1.0 / deg
                else:
                    b[idx[v]] += expect[(u, mask | (1 << u))] / deg
        sol = np.linalg.solve(a, b)
        for v in members:
            expect[(v, mask)] = float(sol[idx[v]])
    return expect[(start, 1 << start)]


class VertexTransitiveEnv(_WalkEnv):
    mode = "win-no-halt"

    def __init__(self, g: Graph, start: int, rounds: int, relabel_seed: int):
        super().__init__(g, start, relabel_seed)
        self.rounds = rounds

    def step(self, history, action):
        path = self._path(history, action)
        if path is None:
            return Lose()
        if len(history) + 1 < self.rounds:
            return Continue(len(self.adj[path[-1]]))
        return Win() if path[-1] == self.start else Lose()


def vertex_transitive_env(g: Graph, start: int, k: int, relabel_seed: int = 0) -> VertexTransitiveEnv:
    """Return-to-start game over 2k rounds on a certified transitive graph."""
    kind = certified_transitive_kind(g)
    if kind is None:
        raise ValueError("graph is not one of the certified vertex-transitive kinds")
    if k < 1:
        raise ValueError("need k >= 1 (the game runs 2k rounds)")
    return VertexTransitiveEnv(g, start, 2 * k, relabel_seed)
