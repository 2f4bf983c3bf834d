"""The sixteen static randomized constructions.

Each builder returns a Construction: a sampler over a finite candidate
space, a success predicate (membership in the good set), a claimed
success-probability lower bound with its closed-form expression, and a
premise check.  Premise violations never raise; they set premise_ok to
False with a diagnostic, and the claimed bound is then non-binding.

Premise checks recompute the event probability p and dependency degree d
from the instance itself (not just the closed forms) and report both.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from . import lll
from .instances import (
    BinaryMatrix,
    CnfFormula,
    Graph,
    Hypergraph,
    IntMatrix,
    SetFamily,
    UnitVectors,
)
from .rngcore import Estimate, Verdict, run_trials, verdict_against_bound

E = math.e

Candidate = Any


class EnumerationError(RuntimeError):
    """Candidate space is not enumerable at desk scale."""


class SolutionError(RuntimeError):
    """post_process could not produce a valid solution from a candidate."""


def _identity(candidate: Candidate) -> Any:
    return candidate


@dataclass
class Construction:
    """A sampler, a good-set predicate, and a claimed probability bound."""

    name: str
    claimed_prob: float
    claimed_expr: str
    premise_ok: bool
    premise_msg: str
    sample: Callable[[np.random.Generator], Candidate]
    is_good: Callable[[Candidate], bool]
    post_process: Callable[[Candidate], Any] = _identity
    space_size: int | None = None
    enumerate_space: Callable[[], Iterator[tuple[Candidate, float]]] | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.claimed_prob <= 1.0:
            raise ValueError("claimed_prob must lie in [0, 1]")


def evaluate(
    c: Construction,
    trials: int,
    seed: int,
    confidence: float = 0.99,
    workers: int = 1,
) -> tuple[Estimate, Verdict]:
    """Monte Carlo estimate of the good fraction, tested against the claim.

    When the premise failed the verdict is still computed but marked
    non-binding.
    """
    est = run_trials(lambda g: c.is_good(c.sample(g)), trials, seed, confidence, workers)
    return est, verdict_against_bound(est, c.claimed_prob, binding=c.premise_ok)


def exact_good_fraction(c: Construction, max_size: int = 1 << 24) -> float:
    """Exact probability-weighted good fraction by full enumeration.

    This is the brute-force oracle behind the small-instance checks; it
    refuses (EnumerationError) when the space is too large, and callers
    fall back to Monte Carlo.
    """
    if c.enumerate_space is None or c.space_size is None:
        raise EnumerationError(f"{c.name}: candidate space is not enumerable")
    if c.space_size > max_size:
        raise EnumerationError(f"{c.name}: space of {c.space_size} exceeds {max_size}")
    return math.fsum(p for cand, p in c.enumerate_space() if c.is_good(cand))


# ---------------------------------------------------------------------------
# shared predicates (also used by tests and the CLI solver)


def clause_satisfied(clause: Sequence[int], assignment: Sequence[int]) -> bool:
    return any(
        (assignment[lit - 1] == 1) if lit > 0 else (assignment[-lit - 1] == 0) for lit in clause
    )


def cnf_satisfied(phi: CnfFormula, assignment: Sequence[int]) -> bool:
    return all(clause_satisfied(c, assignment) for c in phi.clauses)


def count_satisfied(phi: CnfFormula, assignment: Sequence[int]) -> int:
    return sum(1 for c in phi.clauses if clause_satisfied(c, assignment))


def no_monochromatic_edge(h: Hypergraph, colors: Sequence[int]) -> bool:
    return all(len({colors[v] for v in e}) > 1 for e in h.edges)


def is_proper_coloring(g: Graph, colors: Sequence[int]) -> bool:
    return all(colors[u] != colors[v] for u, v in g.edges)


def cut_weight(g: Graph, sides: Sequence[int]) -> float:
    w = g.weight_list()
    return math.fsum(w[i] for i, (u, v) in enumerate(g.edges) if sides[u] != sides[v])


def is_independent_set(g: Graph, vertices: Sequence[int]) -> bool:
    s = set(vertices)
    return all(not (u in s and v in s) for u, v in g.edges)


def is_dominating_set(g: Graph, vertices: Sequence[int]) -> bool:
    s = set(vertices)
    adj = g.adjacency()
    return all(v in s or any(u in s for u in adj[v]) for v in range(g.n))


def neighborhood_color_repeats(g: Graph, colors: Sequence[int]) -> int:
    """Largest number of same-colored vertices in any vertex's neighborhood."""
    adj = g.adjacency()
    worst = 0
    for v in range(g.n):
        counts: dict[int, int] = {}
        for u in adj[v]:
            counts[colors[u]] = counts.get(colors[u], 0) + 1
        if counts:
            worst = max(worst, max(counts.values()))
    return worst


def latin_entries(mat: IntMatrix, perm: Sequence[int]) -> list[int]:
    return [int(mat.entries[i, perm[i]]) for i in range(mat.n)]


def is_valid_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        return False
    edge_set = set(g.edges)
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        if (min(u, v), max(u, v)) not in edge_set:
            return False
    return True


def are_vertex_disjoint_cycles(g: Graph, cycles: Sequence[Sequence[int]]) -> bool:
    seen: set[int] = set()
    for cyc in cycles:
        if not is_valid_cycle(g, cyc):
            return False
        if seen & set(cyc):
            return False
        seen |= set(cyc)
    return True


# ---------------------------------------------------------------------------
# bad-event systems for the constructions the resampling solver supports


def ksat_event_system(phi: CnfFormula) -> lll.BadEventSystem:
    events = []
    for clause in phi.clauses:
        support = tuple(sorted(abs(l) - 1 for l in clause))
        events.append(
            lll.BadEvent(support, lambda a, c=clause: not clause_satisfied(c, a))
        )
    return lll.BadEventSystem(phi.num_vars, (2,) * phi.num_vars, tuple(events))


def hypergraph_2color_event_system(h: Hypergraph) -> lll.BadEventSystem:
    events = tuple(
        lll.BadEvent(e, lambda a, e=e: len({a[v] for v in e}) == 1) for e in h.edges
    )
    return lll.BadEventSystem(h.n, (2,) * h.n, events)


def frugal_event_system(g: Graph, beta: int, colors: int) -> lll.BadEventSystem:
    adj = g.adjacency()
    events = []
    for v in range(g.n):
        for group in itertools.combinations(adj[v], beta + 1):
            events.append(
                lll.BadEvent(group, lambda a, gr=group: len({a[u] for u in gr}) == 1)
            )
    return lll.BadEventSystem(g.n, (colors,) * g.n, tuple(events))


# ---------------------------------------------------------------------------
# builder helpers


def _uniform_tuples(domain: int, n: int) -> Callable[[], Iterator[tuple[Candidate, float]]]:
    def gen():
        p = 1.0 / domain**n
        for cand in itertools.product(range(domain), repeat=n):
            yield cand, p

    return gen


def _premise(ok: bool, msg: str) -> tuple[bool, str]:
    return ok, msg


def _int_ceil_root(x: int, r: int) -> int:
    """Smallest C >= 1 with C**r >= x (integer-exact ceil of x**(1/r))."""
    if x <= 1:
        return 1
    c = max(1, int(round(x ** (1.0 / r))))
    while c > 1 and (c - 1) ** r >= x:
        c -= 1
    while c**r < x:
        c += 1
    return c


def _clause_intersection_degrees(phi: CnfFormula) -> list[int]:
    cv = phi.clause_vars()
    return [sum(1 for j, other in enumerate(cv) if j != i and mine & other) for i, mine in enumerate(cv)]


# ---------------------------------------------------------------------------
# the sixteen constructions


def build_ksat(phi: CnfFormula, k: int) -> Construction:
    """Uniform assignments vs. satisfying a bounded-intersection k-CNF."""
    n, m = phi.num_vars, phi.m
    sizes_ok = all(len(c) == k for c in phi.clauses)
    degrees = _clause_intersection_degrees(phi)
    d_actual = max(degrees, default=0)
    d_allowed = math.floor(2**k / E) - 1
    p_actual = 2.0**-k
    numeric = E * p_actual * (d_actual + 1)
    ok = sizes_ok and k >= 3 and d_actual <= d_allowed and numeric <= 1.0
    msg = (
        f"k={k} (need >=3), uniform sizes: {sizes_ok}; "
        f"max clause intersections {d_actual} (allowed {d_allowed}); "
        f"e*p*(d+1) = {numeric:.4f} with p=2^-{k}"
    )
    claimed = (1.0 - E / 2**k) ** m

    def sample(rng):
        return rng.integers(0, 2, size=n)

    def is_good(cand):
        return cnf_satisfied(phi, cand)

    return Construction(
        name="ksat",
        claimed_prob=claimed,
        claimed_expr=f"(1 - e/2^{k})^{m}",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_uniform_tuples(2, n),
        params={"n": n, "m": m, "k": k},
    )


def build_hypergraph_color_union(h: Hypergraph) -> Construction:
    """Union-bound coloring: C = ceil((2m)^(1/(k-1))) colors, no mono edge.

    The color count is driven by the edge count m, which is what the
    union bound actually sums over.
    """
    m = h.m
    if m == 0:
        k = 0
        colors = 1
        ok, msg = True, "no edges; any coloring is good"
    else:
        lo, hi = h.edge_sizes()
        uniform = lo == hi
        k = lo
        colors = _int_ceil_root(2 * m, max(k - 1, 1))
        ok = uniform and k >= 2
        per_edge = (1.0 / colors) ** (k - 1) if k >= 2 else 1.0
        msg = (
            f"{k}-uniform: {uniform} (need k>=2); C={colors}; "
            f"per-edge mono probability {per_edge:.4g} vs 1/(2m)={1 / (2 * m):.4g}"
        )
    n = h.n

    def sample(rng):
        return rng.integers(0, colors, size=n)

    def is_good(cand):
        return no_monochromatic_edge(h, cand)

    return Construction(
        name="hyper-union",
        claimed_prob=0.5,
        claimed_expr="1/2 (union bound)",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=colors**n,
        enumerate_space=_uniform_tuples(colors, n),
        params={"n": n, "m": m, "k": k, "colors": colors},
    )


def build_hypergraph_2color_lll(h: Hypergraph) -> Construction:
    """Local-lemma 2-coloring of a hypergraph with bounded edge overlap."""
    m = h.m
    n = h.n
    if m == 0:
        claimed, ok, msg, k = 1.0, True, "no edges; any coloring is good", 0
    else:
        k = h.edge_sizes()[0]
        overlap = [
            sum(1 for j, f in enumerate(h.edges) if j != i and set(e) & set(f))
            for i, e in enumerate(h.edges)
        ]
        d_actual = max(overlap)
        d_allowed = 2 ** (k - 1) / E - 1
        p_actual = 2.0 ** (1 - k)
        numeric = E * p_actual * (d_actual + 1)
        ok = k >= 4 and d_actual <= d_allowed and numeric <= 1.0
        claimed = max(0.0, 1.0 - E / 2 ** (k - 1)) ** m
        msg = (
            f"min edge size k={k} (need >=4); max edge overlap {d_actual} "
            f"(allowed {d_allowed:.3f}); e*p*(d+1) = {numeric:.4f} with p=2^(1-{k})"
        )

    def sample(rng):
        return rng.integers(0, 2, size=n)

    def is_good(cand):
        return no_monochromatic_edge(h, cand)

    return Construction(
        name="hyper-lll",
        claimed_prob=claimed,
        claimed_expr=f"(1 - e/2^{max(k - 1, 0)})^{m}",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_uniform_tuples(2, n),
        params={"n": n, "m": m, "k": k},
    )


def _find_cycle(vertices: Sequence[int], adj: list[list[int]]) -> tuple[int, ...] | None:
    """A simple cycle inside the induced subgraph, or None if it is a forest.

    Union-find over the induced edges; the first edge closing a cycle is
    returned together with the tree path between its endpoints.
    """
    vset = set(vertices)
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree: dict[int, list[int]] = {v: [] for v in vertices}
    for v in vertices:
        for u in adj[v]:
            if u not in vset or u < v:
                continue
            ru, rv = find(u), find(v)
            if ru == rv:
                # BFS through tree edges from v to u
                prev = {v: None}
                queue = [v]
                while queue:
                    x = queue.pop(0)
                    if x == u:
                        break
                    for y in tree[x]:
                        if y not in prev:
                            prev[y] = x
                            queue.append(y)
                path = [u]
                while path[-1] != v:
                    path.append(prev[path[-1]])
                return tuple(path)
            parent[ru] = rv
            tree[u].append(v)
            tree[v].append(u)
    return None


def build_disjoint_cycles(g: Graph, k: int) -> Construction:
    """Partition a k-regular graph into c = floor(k / (3 ln k)) components,
    each meant to contain its own cycle.

    The good set uses the proof's sufficient condition: every vertex has
    a neighbor inside its own component.
    """
    n = g.n
    degrees = g.degrees()
    regular = all(d == k for d in degrees)
    c = max(1, math.floor(k / (3 * math.log(k)))) if k >= 2 else 1
    adj = g.adjacency()
    if c == 1:
        p_actual = 0.0
        d_actual = 0
        numeric = 0.0
        stated = regular and k >= 2
        claimed = 1.0 if stated else 0.0
        expr = "1 (single component; trivial)"
        msg = f"k={k} gives c=1; partition is trivial; k-regular: {regular}"
        ok = stated
    else:
        supports = [frozenset([v] + adj[v]) for v in range(n)]
        d_actual = max(
            (sum(1 for u in range(n) if u != v and supports[v] & supports[u]) for v in range(n)),
            default=0,
        )
        p_actual = (1.0 - 1.0 / c) ** k
        numeric = E * p_actual * (d_actual + 1)
        stated_value = E * (1 + (k + 1) ** 2) / k**3
        stated = regular and stated_value <= 1.0
        ok = stated and numeric <= 1.0
        claimed = (1.0 - 1.0 / k**2) ** n
        expr = f"(1 - 1/{k}^2)^{n}"
        msg = (
            f"k-regular: {regular}; c={c}; e*(1+(k+1)^2)/k^3 = {stated_value:.4f}; "
            f"actual p={p_actual:.4g}, actual d={d_actual}, e*p*(d+1) = {numeric:.4f}"
        )

    u_arr, v_arr = g.edge_arrays()

    def sample(rng):
        return rng.integers(0, c, size=n)

    def is_good(cand):
        if n == 0:
            return True
        comp = np.asarray(cand)
        same = comp[u_arr] == comp[v_arr]
        ok_v = np.zeros(n, dtype=bool)
        ok_v[u_arr[same]] = True
        ok_v[v_arr[same]] = True
        return bool(ok_v.all())

    def post_process(cand):
        comp = list(cand)
        cycles = []
        for cid in range(c):
            members = [v for v in range(n) if comp[v] == cid]
            cyc = _find_cycle(members, adj) if members else None
            if cyc is None:
                raise SolutionError(
                    f"component {cid} contains no cycle (size {len(members)})"
                )
            cycles.append(cyc)
        return tuple(cycles)

    return Construction(
        name="cycles",
        claimed_prob=claimed,
        claimed_expr=expr,
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        post_process=post_process,
        space_size=c**n,
        enumerate_space=_uniform_tuples(c, n),
        params={"n": n, "k": k, "c": c},
    )


def build_frugal_coloring(g: Graph, beta: int, colors: int) -> Construction:
    """Weakly frugal coloring: no color repeats more than beta times in any
    vertex's neighborhood (same color on adjacent vertices is allowed)."""
    if beta < 1 or colors < 1:
        raise ValueError("beta and colors must be positive")
    n = g.n
    degrees = g.degrees()
    delta = max(degrees, default=0)
    stated = delta > 2 * E and beta < delta and colors >= delta ** (1 + 4 / beta) / 2
    d_closed = (beta + 1) * delta * math.comb(delta, beta) if delta >= beta else 0
    p_actual = float(colors) ** -beta
    numeric = E * p_actual * (1 + d_closed)
    n_events = sum(math.comb(d, beta + 1) for d in degrees)
    if 0 < n_events <= 100_000:
        _, d_actual = lll.dependency_degree(frugal_event_system(g, beta, colors))
        actual_note = f"; actual d={d_actual}, e*p*(d+1) = {E * p_actual * (d_actual + 1):.4g}"
    else:
        actual_note = ""
    chain_note = "" if beta >= 4 else "; beta<4 is outside the 1/beta! <= 2^-beta chain"
    ok = stated and numeric <= 1.0
    msg = (
        f"Delta={delta} (need >2e={2 * E:.3f}); beta={beta} < Delta: {beta < delta}; "
        f"Q={colors} >= Delta^(1+4/beta)/2 = {delta ** (1 + 4 / beta) / 2 if delta else 0:.3f}: "
        f"{colors >= delta ** (1 + 4 / beta) / 2 if delta else True}; "
        f"e*Q^-beta*(1+(beta+1)*Delta*C(Delta,beta)) = {numeric:.4g}"
        f"{actual_note}{chain_note}"
    )
    claimed = 2.0 ** (-2 * n / beta)
    adj = [np.asarray(row, dtype=np.int64) for row in g.adjacency()]

    def sample(rng):
        return rng.integers(0, colors, size=n)

    def is_good(cand):
        col = np.asarray(cand)
        for nbrs in adj:
            if nbrs.size > beta:
                if np.bincount(col[nbrs], minlength=colors).max() > beta:
                    return False
        return True

    return Construction(
        name="frugal",
        claimed_prob=claimed,
        claimed_expr=f"2^(-2n/beta) = 2^(-{2 * n}/{beta})",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=colors**n,
        enumerate_space=_uniform_tuples(colors, n),
        params={"n": n, "beta": beta, "colors": colors, "delta": delta},
    )


def build_graph_coloring(g: Graph, k: int) -> Construction:
    """Uniform k-coloring vs. properness, for k at least twice the max degree."""
    if k < 1:
        raise ValueError("need at least one color")
    n = g.n
    d = max(g.degrees(), default=0)
    ok = k >= 2 * d
    msg = f"max degree d={d}; k={k} >= 2d: {ok}"
    claimed = ((k - d) / k) ** n if k > d else 0.0

    def sample(rng):
        return rng.integers(0, k, size=n)

    def is_good(cand):
        return is_proper_coloring(g, cand)

    return Construction(
        name="coloring",
        claimed_prob=claimed,
        claimed_expr=f"((k - d)/k)^n = ({k - d}/{k})^{n}",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=k**n,
        enumerate_space=_uniform_tuples(k, n),
        params={"n": n, "k": k, "d": d},
    )


def build_max_cut(g: Graph) -> Construction:
    """Uniform bipartition vs. cutting more than a third of the total weight."""
    n = g.n
    omega = g.total_weight()
    ok = omega > 0
    msg = f"total weight {omega:g} (need > 0)"
    u_arr, v_arr = g.edge_arrays()
    w_arr = np.asarray(g.weight_list(), dtype=np.float64)
    threshold = omega / 3.0

    def sample(rng):
        return rng.integers(0, 2, size=n)

    def is_good(cand):
        side = np.asarray(cand)
        return float(w_arr[side[u_arr] != side[v_arr]].sum()) > threshold

    return Construction(
        name="maxcut",
        claimed_prob=0.25,
        claimed_expr="1/4 (reverse Markov on expected cut = omega/2)",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_uniform_tuples(2, n),
        params={"n": n, "m": g.m, "omega": omega},
    )


def build_max_3sat(phi: CnfFormula) -> Construction:
    """Uniform assignment vs. satisfying more than 6m/7 of the clauses."""
    n, m = phi.num_vars, phi.m
    ok = all(len(c) == 3 for c in phi.clauses)
    msg = f"all clauses have exactly 3 distinct variables: {ok}"

    def sample(rng):
        return rng.integers(0, 2, size=n)

    def is_good(cand):
        if m == 0:
            return True
        return 7 * count_satisfied(phi, cand) > 6 * m

    return Construction(
        name="max3sat",
        claimed_prob=0.125,
        claimed_expr="1/8 (reverse Markov on expected 7m/8 satisfied)",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_uniform_tuples(2, n),
        params={"n": n, "m": m},
    )


def _pm_one_tuples(n: int) -> Callable[[], Iterator[tuple[Candidate, float]]]:
    def gen():
        p = 1.0 / 2**n
        for cand in itertools.product((-1, 1), repeat=n):
            yield cand, p

    return gen


def build_balance_matrix(mat: BinaryMatrix) -> Construction:
    """Random signs vs. keeping every entry of M@b within 4*sqrt(n ln n)."""
    n = mat.n
    ok = n >= 2
    msg = f"n={n} (need >= 2: the threshold degenerates at n=1)"
    threshold = 4.0 * math.sqrt(n * math.log(n)) if n >= 2 else 0.0
    claimed = max(0.0, 1.0 - 2.0 * n**-7) if n >= 2 else 0.0
    entries = mat.entries

    def sample(rng):
        return 1 - 2 * rng.integers(0, 2, size=n)

    def is_good(cand):
        b = np.asarray(cand, dtype=np.int64)
        return float(np.abs(entries @ b).max(initial=0)) <= threshold

    return Construction(
        name="balance-matrix",
        claimed_prob=claimed,
        claimed_expr=f"1 - 2n^-7 = 1 - 2*{n}^-7",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_pm_one_tuples(n),
        params={"n": n, "threshold": threshold},
    )


def build_balance_unit_vectors(vecs: UnitVectors) -> Construction:
    """Random signs vs. |sum eps_i v_i|^2 < 2n (strict, so the Markov
    bound of 1/2 is tight on boundary instances)."""
    n = vecs.n
    arr = vecs.vectors

    def sample(rng):
        return 1 - 2 * rng.integers(0, 2, size=n)

    def is_good(cand):
        eps = np.asarray(cand, dtype=np.float64)
        s = eps @ arr
        return float(s @ s) < 2.0 * n

    return Construction(
        name="balance-vectors",
        claimed_prob=0.5,
        claimed_expr="1/2 (Markov on |sum eps_i v_i|^2, mean n)",
        premise_ok=True,
        premise_msg="unit norms validated by the instance type",
        sample=sample,
        is_good=is_good,
        space_size=2**n,
        enumerate_space=_pm_one_tuples(n),
        params={"n": n},
    )


def build_independent_set(g: Graph) -> Construction:
    """Keep each vertex with probability 1/sqrt(n); good when enough
    vertices and few enough edges survive.  post_process deletes one
    endpoint per surviving edge, leaving an independent set."""
    n = g.n
    if n < 1:
        raise ValueError("need at least one vertex")
    m = g.m
    p = 1.0 / math.sqrt(n)
    x_min = 0.75 * math.sqrt(n)
    y_max = 2.0 * m / n
    u_arr, v_arr = g.edge_arrays()

    def sample(rng):
        return (rng.random(n) < p).astype(np.int8)

    def is_good(cand):
        keep = np.asarray(cand, dtype=bool)
        x = int(keep.sum())
        y = int((keep[u_arr] & keep[v_arr]).sum()) if m else 0
        return x > x_min and y <= y_max

    def post_process(cand):
        keep = set(np.flatnonzero(np.asarray(cand, dtype=bool)).tolist())
        for u, v in g.edges:
            if u in keep and v in keep:
                keep.discard(v)
        return tuple(sorted(keep))

    def enumerate_space():
        for cand in itertools.product((0, 1), repeat=n):
            ones = sum(cand)
            yield cand, p**ones * (1 - p) ** (n - ones)

    return Construction(
        name="indepset",
        claimed_prob=0.1,
        claimed_expr="1/10 (Hoeffding tail + Markov, combined)",
        premise_ok=True,
        premise_msg=f"n={n}, m={m}, keep probability 1/sqrt(n) = {p:.4f}",
        sample=sample,
        is_good=is_good,
        post_process=post_process,
        space_size=2**n,
        enumerate_space=enumerate_space,
        params={"n": n, "m": m, "p": p},
    )


def build_dominating_set(g: Graph) -> Construction:
    """Include vertices with probability ln(delta+1)/(delta+1); good when the
    picked set and its uncovered complement are both small.  post_process
    returns picked | uncovered, a dominating set."""
    n = g.n
    degrees = g.degrees()
    delta = min(degrees, default=0)
    ok = delta > 1
    p = math.log(delta + 1) / (delta + 1) if delta >= 1 else 0.5
    x_max = 3.0 * n * math.log(delta + 1) / (delta + 1) if delta >= 1 else 0.0
    y_max = 3.0 * n / (delta + 1) if delta >= 1 else 0.0
    msg = f"min degree delta={delta} (need > 1); p = ln(delta+1)/(delta+1) = {p:.4f}"
    u_arr, v_arr = g.edge_arrays()

    def _uncovered(keep: np.ndarray) -> np.ndarray:
        covered = np.zeros(n, dtype=bool)
        covered[v_arr[keep[u_arr]]] = True
        covered[u_arr[keep[v_arr]]] = True
        return ~keep & ~covered

    def sample(rng):
        return (rng.random(n) < p).astype(np.int8)

    def is_good(cand):
        keep = np.asarray(cand, dtype=bool)
        if int(keep.sum()) > x_max:
            return False
        return int(_uncovered(keep).sum()) <= y_max

    def post_process(cand):
        keep = np.asarray(cand, dtype=bool)
        out = keep | _uncovered(keep)
        return tuple(np.flatnonzero(out).tolist())

    def enumerate_space():
        for cand in itertools.product((0, 1), repeat=n):
            ones = sum(cand)
            yield cand, p**ones * (1 - p) ** (n - ones)

    return Construction(
        name="domset",
        claimed_prob=1.0 / 3.0,
        claimed_expr="1/3 (two Markov tails at 3x the means)",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        post_process=post_process,
        space_size=2**n,
        enumerate_space=enumerate_space,
        params={"n": n, "m": g.m, "delta": delta, "p": p},
    )


BLOOM_RATE = 0.878


def build_bloom(gset: SetFamily, n_bits: int) -> Construction:
    """Draw k = ceil(n_bits/m) hash tables over the member set; good when
    the filter's exact false-positive rate (w/n)^k stays below 0.878^k.

    The predicate uses the exact rate computed from the number of set
    bits w rather than sampled queries, which removes one Monte Carlo
    layer.  The 1/2 claim is asymptotic in n_bits.
    """
    m = gset.size
    k = math.ceil(n_bits / m) if m else 1
    ok = n_bits >= m
    msg = (
        f"m={m}, n_bits={n_bits} (need n_bits >= m); k = ceil(n/m) = {k}; "
        f"the 1/2 bound is asymptotic in n"
    )

    def sample(rng):
        if m == 0:
            return np.empty((k, 0), dtype=np.int64)
        return rng.integers(1, n_bits + 1, size=(k, m))

    def fp_rate(cand) -> float:
        tables = np.asarray(cand, dtype=np.int64).reshape(k, m)
        if tables.size == 0:
            return 0.0
        w = np.unique(tables).size
        return (w / n_bits) ** k

    def is_good(cand):
        return fp_rate(cand) <= BLOOM_RATE**k

    def enumerate_space():
        cells = k * m
        p = 1.0 / n_bits**cells
        for flat in itertools.product(range(1, n_bits + 1), repeat=cells):
            yield tuple(flat[i * m : (i + 1) * m] for i in range(k)), p

    return Construction(
        name="bloom",
        claimed_prob=0.5,
        claimed_expr=f"1/2 (good set: exact FP rate <= 0.878^{k})",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=n_bits ** (k * m) if m else 1,
        enumerate_space=enumerate_space,
        params={"m": m, "n_bits": n_bits, "k": k, "fp_bound": BLOOM_RATE**k},
    )


def bloom_filter_bits(cand, n_bits: int) -> np.ndarray:
    """Bit vector of the filter built from hash tables over the members."""
    tables = np.asarray(cand, dtype=np.int64)
    bits = np.zeros(n_bits + 1, dtype=bool)  # 1-indexed hash values
    if tables.size:
        bits[tables.ravel()] = True
    return bits[1:]


def build_latin_transversal(mat: IntMatrix, k: int) -> Construction:
    """Uniform permutation vs. all selected entries distinct, for matrices
    in which no value occupies more than k cells.

    The exactly-k reading of the multiplicity condition is unsatisfiable
    when k does not divide n^2 (e.g. n=33, k=2), so the premise checks
    multiplicity <= k, which is all the degree argument needs.
    """
    n = mat.n
    counts = mat.value_counts()
    max_mult = max(counts.values(), default=0)
    p = 1.0 / (n * (n - 1)) if n >= 2 else 1.0
    # conflict four-tuples (i, j, i', j'), i < i', j != j', equal entries
    by_value: dict[int, list[tuple[int, int]]] = {}
    for i in range(n):
        for j in range(n):
            by_value.setdefault(int(mat.entries[i, j]), []).append((i, j))
    tuples = []
    for cells in by_value.values():
        for (i, j), (i2, j2) in itertools.combinations(cells, 2):
            if i != i2 and j != j2:
                tuples.append((i, j, i2, j2) if i < i2 else (i2, j2, i, j))
    if tuples and len(tuples) <= 5000:
        rows = np.asarray([(t[0], t[2]) for t in tuples])
        cols = np.asarray([(t[1], t[3]) for t in tuples])
        share_row = (rows[:, None, :, None] == rows[None, :, None, :]).any(axis=(2, 3))
        share_col = (cols[:, None, :, None] == cols[None, :, None, :]).any(axis=(2, 3))
        adjacent = share_row | share_col
        np.fill_diagonal(adjacent, False)
        d_actual = int(adjacent.sum(axis=1).max())
    else:
        d_actual = 0
    numeric = 4.0 * d_actual * p
    stated = max_mult <= k and 16 * k <= n - 1 and n >= 3
    ok = stated and numeric <= 1.0
    exact_counts = sorted(counts.values())
    msg = (
        f"max value multiplicity {max_mult} (allowed k={k}; exact-k profile "
        f"{'yes' if exact_counts and exact_counts[0] == exact_counts[-1] == k else 'no'}); "
        f"16k <= n-1: {16 * k <= n - 1}; |T|={len(tuples)} conflict pairs, "
        f"actual d={d_actual} (closed form < 4nk={4 * n * k}), 4dp = {numeric:.4f}"
    )
    claimed = 2.0 ** (-4 * (k - 1))
    entries = mat.entries
    row_idx = np.arange(n)

    def sample(rng):
        return rng.permutation(n)

    def is_good(cand):
        perm = np.asarray(cand, dtype=np.int64)
        return np.unique(entries[row_idx, perm]).size == n

    def enumerate_space():
        p_each = 1.0 / math.factorial(n)
        for perm in itertools.permutations(range(n)):
            yield perm, p_each

    return Construction(
        name="latin",
        claimed_prob=claimed,
        claimed_expr=f"2^(-4(k-1)) = 2^-{4 * (k - 1)}",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=math.factorial(n) if n <= 13 else None,
        enumerate_space=enumerate_space,
        params={"n": n, "k": k, "max_mult": max_mult},
    )


def build_function_min(
    dist: Sequence[tuple[int, float]], fs: Sequence[Callable[[int], float]]
) -> Construction:
    """Draw one argument per function i.i.d. from the distribution; good
    when the summed function values stay within twice the expected total."""
    atoms = [a for a, _ in dist]
    probs = [q for _, q in dist]
    if not atoms or any(q < 0 for q in probs) or abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError("dist must be a finite probability distribution")
    n = len(fs)
    expectations = []
    finite = True
    for f in fs:
        total = Fraction(0)
        for a, q in dist:
            val = f(a)
            if q > 0 and math.isinf(val):
                finite = False
                break
            total += Fraction(q) * Fraction(val)
        if not finite:
            break
        expectations.append(total)
    if finite:
        tau = math.ceil(2 * sum(expectations))
        msg = f"E[f_i] all finite; tau = ceil(2 * {float(sum(expectations)):.6g}) = {tau}"
    else:
        tau = 0
        msg = "some E[f_i] is infinite on the support"
    cum = np.cumsum(np.asarray(probs, dtype=np.float64))
    atom_arr = np.asarray(atoms, dtype=np.int64)

    def sample(rng):
        idx = np.searchsorted(cum, rng.random(n), side="right")
        return atom_arr[idx]

    def is_good(cand):
        return sum(f(int(a)) for f, a in zip(fs, cand)) <= tau

    def enumerate_space():
        prob = {a: q for a, q in dist}
        for cand in itertools.product(atoms, repeat=n):
            yield cand, math.prod(prob[a] for a in cand)

    return Construction(
        name="funcmin",
        claimed_prob=0.5,
        claimed_expr=f"1/2 (Markov at tau = {tau})",
        premise_ok=finite,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=len(atoms) ** n,
        enumerate_space=enumerate_space,
        params={"n": n, "atoms": list(atoms), "tau": tau},
    )


def build_super_set(s: SetFamily, m: int) -> Construction:
    """Uniform size-2^(n-m) subset of the universe vs. covering S."""
    n_u = s.universe_bits
    size_s = s.size
    ok = 0 <= m <= n_u and size_s < 2 ** max(n_u - m - 1, 0)
    universe = 2**n_u
    size_t = 2 ** (n_u - m)
    msg = (
        f"m={m} <= n={n_u}: {m <= n_u}; |S|={size_s} < 2^(n-m-1)={2 ** max(n_u - m - 1, 0)}: "
        f"{size_s < 2 ** max(n_u - m - 1, 0)}; |T| = 2^(n-m) = {size_t}"
    )
    claimed = 2.0 ** (-(m + 1) * size_s)
    members = np.asarray(s.member_ints(), dtype=np.int64)

    def sample(rng):
        return np.sort(rng.choice(universe, size=size_t, replace=False))

    def is_good(cand):
        flags = np.zeros(universe, dtype=bool)
        flags[np.asarray(cand, dtype=np.int64)] = True
        return bool(flags[members].all()) if members.size else True

    def enumerate_space():
        p_each = 1.0 / math.comb(universe, size_t)
        for combo in itertools.combinations(range(universe), size_t):
            yield combo, p_each

    return Construction(
        name="superset",
        claimed_prob=claimed,
        claimed_expr=f"2^(-(m+1)|S|) = 2^-{(m + 1) * size_s}",
        premise_ok=ok,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=math.comb(universe, size_t),
        enumerate_space=enumerate_space,
        params={"n": n_u, "m": m, "size_s": size_s, "size_t": size_t},
    )


CONSTRUCTION_NAMES = (
    "ksat",
    "hyper-union",
    "hyper-lll",
    "cycles",
    "frugal",
    "coloring",
    "maxcut",
    "max3sat",
    "balance-matrix",
    "balance-vectors",
    "indepset",
    "domset",
    "bloom",
    "latin",
    "funcmin",
    "superset",
)
