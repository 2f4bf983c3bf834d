"""Two-phase oblivious packet routing on the Boolean hypercube.

Synchronous store-and-forward model: every node keeps one FIFO queue per
outgoing link, one packet crosses each directed edge per step, and each
packet routes bit-fixing (most significant differing bit first) to a
random intermediate node, then bit-fixing to its true destination.  The
two phases are per-packet and independent: a packet starts phase 2 the
moment it reaches its intermediate.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constructions import Construction
from .rngcore import RngStream

MAKESPAN_FACTOR = 14  # delivery bound checked: 14 * dim steps
DEFAULT_STEP_FACTOR = 100


@dataclass(frozen=True)
class HypercubeNet:
    dim: int

    @property
    def n_nodes(self) -> int:
        return 1 << self.dim

    def directed_edges(self) -> list[tuple[int, int]]:
        return [
            (u, u ^ (1 << b))
            for u in range(self.n_nodes)
            for b in range(self.dim - 1, -1, -1)
        ]


def bit_fixing_path(src: int, dst: int, dim: int) -> list[int]:
    """Node path correcting differing address bits from most significant
    to least; its length is the Hamming distance."""
    if not (0 <= src < 1 << dim and 0 <= dst < 1 << dim):
        raise ValueError(f"nodes must be < 2^{dim}")
    path = [src]
    cur = src
    for b in range(dim - 1, -1, -1):
        mask = 1 << b
        if (cur ^ dst) & mask:
            cur ^= mask
            path.append(cur)
    return path


@dataclass(frozen=True)
class RoutingRun:
    dim: int
    destinations: tuple[int, ...]
    intermediates: tuple[int, ...]
    delivery_time: tuple[int | None, ...]
    makespan: float  # max delivery time; inf when truncated
    steps: int
    truncated: bool


def _hops(path: Sequence[int]) -> list[tuple[int, int]]:
    return [(path[i], path[i + 1]) for i in range(len(path) - 1)]


def _packet_priorities(n: int, tie_seed: int | None) -> list[int]:
    """Tie rule for simultaneous arrivals: lower priority value first.

    Default is lowest packet id first; a seed derives a fixed priority
    permutation instead.  Either way the rule is deterministic.
    """
    if tie_seed is None:
        return list(range(n))
    perm = RngStream(tie_seed, 0).generator().permutation(n)
    priority = [0] * n
    for rank, pid in enumerate(int(x) for x in perm):
        priority[pid] = rank
    return priority


def simulate_two_phase(
    net: HypercubeNet,
    dest: Sequence[int],
    sigma: Sequence[int],
    tie_seed: int | None = None,
    max_steps: int | None = None,
) -> RoutingRun:
    dim = net.dim
    n = net.n_nodes
    if len(dest) != n or len(sigma) != n:
        raise ValueError(f"need one destination and one intermediate per node ({n})")
    if max_steps is None:
        max_steps = DEFAULT_STEP_FACTOR * max(dim, 1)

    routes = []
    for i in range(n):
        phase1 = _hops(bit_fixing_path(i, int(sigma[i]), dim))
        phase2 = _hops(bit_fixing_path(int(sigma[i]), int(dest[i]), dim))
        routes.append(phase1 + phase2)

    priority = _packet_priorities(n, tie_seed)
    delivered: list[int | None] = [None] * n
    pos = [0] * n
    queues: dict[tuple[int, int], deque[int]] = {}
    edge_order = net.directed_edges()

    def enqueue(arrivals: list[int]) -> None:
        arrivals.sort(key=lambda pid: priority[pid])
        for pid in arrivals:
            queues.setdefault(routes[pid][pos[pid]], deque()).append(pid)

    initial = []
    remaining = 0
    for i in range(n):
        if not routes[i]:
            delivered[i] = 0
        else:
            initial.append(i)
            remaining += 1
    enqueue(initial)

    steps = 0
    truncated = False
    while remaining:
        if steps >= max_steps:
            truncated = True
            break
        steps += 1
        movers = []
        for edge in edge_order:
            q = queues.get(edge)
            if q:
                movers.append(q.popleft())
        arrivals = []
        for pid in movers:
            pos[pid] += 1
            if pos[pid] == len(routes[pid]):
                delivered[pid] = steps
                remaining -= 1
            else:
                arrivals.append(pid)
        enqueue(arrivals)

    times = tuple(delivered)
    makespan = math.inf if truncated else float(max((t for t in times if t is not None), default=0))
    return RoutingRun(
        dim=dim,
        destinations=tuple(int(d) for d in dest),
        intermediates=tuple(int(s) for s in sigma),
        delivery_time=times,
        makespan=makespan,
        steps=steps,
        truncated=truncated,
    )


def named_permutation(name: str, dim: int) -> tuple[int, ...]:
    """Destination maps usable from the CLI: identity, reversal (bit
    reversal of the address), transpose (swap of the high and low halves
    of the address bits; equals reversal when dim is odd and small)."""
    n = 1 << dim
    if name == "identity":
        return tuple(range(n))
    if name == "reversal":
        return tuple(int(format(i, f"0{dim}b")[::-1], 2) for i in range(n))
    if name == "transpose":
        half = dim // 2
        out = []
        for i in range(n):
            bits = format(i, f"0{dim}b")
            out.append(int(bits[-half:] + bits[half:-half] + bits[:half], 2) if half else i)
        return tuple(out)
    raise ValueError(f"unknown permutation {name!r} (want identity|reversal|transpose)")


def build_routing_construction(
    net: HypercubeNet, dest: Sequence[int], tie_seed: int | None = None
) -> Construction:
    """Random intermediates vs. every packet delivered within 14*dim steps."""
    dim = net.dim
    n = net.n_nodes
    dest = tuple(int(d) for d in dest)
    if any(not 0 <= d < n for d in dest) or len(dest) != n:
        raise ValueError("destination map must send every node into the cube")
    is_perm = sorted(dest) == list(range(n))
    bound = MAKESPAN_FACTOR * dim
    msg = (
        f"destination map is a permutation: {is_perm}"
        + ("" if is_perm else " (the cited delivery guarantee presumes one)")
    )

    def sample(rng):
        return rng.integers(0, n, size=n)

    def is_good(cand):
        run = simulate_two_phase(net, dest, [int(x) for x in cand], tie_seed=tie_seed)
        return run.makespan <= bound

    def enumerate_space():
        import itertools

        p = 1.0 / n**n
        for cand in itertools.product(range(n), repeat=n):
            yield cand, p

    return Construction(
        name="routing",
        claimed_prob=1.0 - 1.0 / n,
        claimed_expr=f"1 - 1/N = 1 - 1/{n}",
        premise_ok=is_perm,
        premise_msg=msg,
        sample=sample,
        is_good=is_good,
        space_size=n**n,
        enumerate_space=enumerate_space,
        params={"dim": dim, "n_nodes": n, "makespan_bound": bound},
    )
