"""Validated problem instances, file parsers, and seeded generators.

File formats (one instance per file, whitespace-separated):
  - DIMACS CNF: header ``p cnf <vars> <clauses>``, clauses 0-terminated.
  - Edge list: first line ``n m``, then ``u v [w]`` per edge.
  - Hypergraph: first line ``n m``, then ``k v1 ... vk`` per edge.
  - Matrix: first line ``n``, then n CSV rows.
  - Set family: first line ``l m``, then one l-bit string per line.

Vertices and matrix indices are 0-based; DIMACS variables are 1-based at
the file boundary, as is conventional.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .rngcore import RngStream


class ParseError(ValueError):
    """Malformed instance text; carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class GenerationError(RuntimeError):
    """Instance generator could not satisfy its constraints."""


# ---------------------------------------------------------------------------
# instance types


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph, optionally edge-weighted."""

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise ValueError("weight count must match edge count")
            if any(w < 0 for w in self.weights):
                raise ValueError("edge weights must be nonnegative")
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def m(self) -> int:
        return len(self.edges)

    def weight_list(self) -> tuple[float, ...]:
        return self.weights if self.weights is not None else (1.0,) * self.m

    def total_weight(self) -> float:
        return math.fsum(self.weight_list())

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        return adj

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if self.m == 0:
            return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        norm = []
        for e in self.edges:
            if len(e) == 0:
                raise ValueError("empty hyperedge")
            if len(set(e)) != len(e):
                raise ValueError(f"repeated vertex in hyperedge {e}")
            if any(not 0 <= v < self.n for v in e):
                raise ValueError(f"hyperedge {e} out of range for n={self.n}")
            norm.append(tuple(sorted(e)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_sizes(self) -> tuple[int, int]:
        """(min, max) edge size; (0, 0) when there are no edges."""
        if not self.edges:
            return (0, 0)
        sizes = [len(e) for e in self.edges]
        return (min(sizes), max(sizes))

    def is_uniform(self) -> bool:
        lo, hi = self.edge_sizes()
        return lo == hi


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("variable count must be nonnegative")
        norm = []
        for clause in self.clauses:
            vars_seen = set()
            for lit in clause:
                if lit == 0:
                    raise ValueError("literal 0 is reserved as the clause terminator")
                if abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")
                if abs(lit) in vars_seen:
                    raise ValueError(f"variable {abs(lit)} appears twice in clause {clause}")
                vars_seen.add(abs(lit))
            norm.append(tuple(clause))
        object.__setattr__(self, "clauses", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def clause_vars(self) -> list[frozenset[int]]:
        return [frozenset(abs(lit) for lit in c) for c in self.clauses]


def _require_square(entries: np.ndarray) -> np.ndarray:
    arr = np.asarray(entries)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    return arr


class IntMatrix:
    """Square matrix of integers."""

    def __init__(self, entries):
        self.entries = _require_square(np.asarray(entries, dtype=np.int64))
        self.n = self.entries.shape[0]

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"IntMatrix(n={self.n})"

    def value_counts(self) -> dict[int, int]:
        vals, counts = np.unique(self.entries, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}


class BinaryMatrix:
    """Square matrix with 0/1 entries."""

    def __init__(self, entries):
        arr = _require_square(np.asarray(entries, dtype=np.int64))
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("binary matrix entries must be 0 or 1")
        self.entries = arr
        self.n = arr.shape[0]

    def __eq__(self, other):
        return isinstance(other, BinaryMatrix) and np.array_equal(self.entries, other.entries)

    def __repr__(self):
        return f"BinaryMatrix(n={self.n})"


UNIT_NORM_TOL = 1e-9


class UnitVectors:
    """n vectors in R^n, each of unit Euclidean norm (tolerance 1e-9)."""

    def __init__(self, vectors):
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected n vectors of dimension n")
        norms = np.linalg.norm(arr, axis=1)
        if np.abs(norms - 1.0).max(initial=0.0) > UNIT_NORM_TOL:
            raise ValueError("all vectors must have unit norm within 1e-9")
        self.vectors = arr
        self.n = arr.shape[0]

    def __eq__(self, other):
        return isinstance(other, UnitVectors) and np.array_equal(self.vectors, other.vectors)


@dataclass(frozen=True)
class SetFamily:
    """A set of distinct l-bit strings over universe {0,1}^l."""

    universe_bits: int
    members: tuple[str, ...]

    def __post_init__(self):
        if self.universe_bits < 0:
            raise ValueError("universe_bits must be nonnegative")
        seen = set()
        for s in self.members:
            if len(s) != self.universe_bits or any(ch not in "01" for ch in s):
                raise ValueError(f"member {s!r} is not an {self.universe_bits}-bit string")
            if s in seen:
                raise ValueError(f"duplicate member {s!r}")
            seen.add(s)
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def size(self) -> int:
        return len(self.members)

    def member_ints(self) -> tuple[int, ...]:
        return tuple(int(s, 2) for s in self.members)


# ---------------------------------------------------------------------------
# parsers


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            out.append((i, line))
    return out


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; clauses may span lines and end with 0."""
    num_vars = None
    num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, line in _content_lines(text):
        if line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"bad header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer literal in {line!r}", lineno) from None
        for lit in lits:
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                try:
                    CnfFormula(num_vars, (tuple(current),))
                except ValueError as exc:
                    raise ParseError(str(exc), lineno) from None
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if current:
        raise ParseError("last clause not terminated by 0", len(text.splitlines()))
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if num_clauses != len(clauses):
        raise ParseError(f"header announced {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def serialize_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {phi.m}"]
    lines += [" ".join(str(l) for l in clause) + " 0" for clause in phi.clauses]
    return "\n".join(lines) + "\n"


def _parse_header(lines, expect: int) -> tuple[int, ...]:
    if not lines:
        raise ParseError("empty input")
    lineno, first = lines[0]
    parts = first.split()
    if len(parts) != expect:
        raise ParseError(f"expected {expect} header fields, got {first!r}", lineno)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"non-integer header {first!r}", lineno) from None


def parse_edge_list(text: str) -> Graph:
    lines = _content_lines(text)
    n, m = _parse_header(lines, 2)
    edges = []
    weights = []
    any_weight = False
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise ParseError(f"bad edge line {line!r}", lineno) from None
        if len(parts) == 3:
            any_weight = True
        edges.append((u, v))
        weights.append(w)
    if len(edges) != m:
        raise ParseError(f"header announced {m} edges, found {len(edges)}")
    try:
        return Graph(n, tuple(edges), tuple(weights) if any_weight else None)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    if g.weights is None:
        lines += [f"{u} {v}" for u, v in g.edges]
    else:
        lines += [f"{u} {v} {w:g}" for (u, v), w in zip(g.edges, g.weights)]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = _content_lines(text)
    n, m = _parse_header(lines, 2)
    edges = []
    for lineno, line in lines[1:]:
        try:
            parts = [int(p) for p in line.split()]
        except ValueError:
            raise ParseError(f"bad hyperedge line {line!r}", lineno) from None
        if not parts or parts[0] != len(parts) - 1:
            raise ParseError(f"expected 'k v1 ... vk', got {line!r}", lineno)
        edges.append(tuple(parts[1:]))
    if len(edges) != m:
        raise ParseError(f"header announced {m} edges, found {len(edges)}")
    try:
        return Hypergraph(n, tuple(edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_hypergraph(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.m}"]
    lines += [f"{len(e)} " + " ".join(str(v) for v in e) for e in h.edges]
    return "\n".join(lines) + "\n"


def _parse_matrix_rows(text: str) -> np.ndarray:
    lines = _content_lines(text)
    (n,) = _parse_header(lines, 1)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for lineno, line in lines[1:]:
        try:
            row = [int(tok.strip()) for tok in line.split(",")]
        except ValueError:
            raise ParseError(f"bad matrix row {line!r}", lineno) from None
        if len(row) != n:
            raise ParseError(f"expected {n} entries, got {len(row)}", lineno)
        rows.append(row)
    return np.asarray(rows, dtype=np.int64)


def parse_int_matrix(text: str) -> IntMatrix:
    return IntMatrix(_parse_matrix_rows(text))


def parse_binary_matrix(text: str) -> BinaryMatrix:
    try:
        return BinaryMatrix(_parse_matrix_rows(text))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_matrix(mat: IntMatrix | BinaryMatrix) -> str:
    lines = [str(mat.n)]
    lines += [",".join(str(int(x)) for x in row) for row in mat.entries]
    return "\n".join(lines) + "\n"


def parse_set_family(text: str) -> SetFamily:
    lines = _content_lines(text)
    ell, m = _parse_header(lines, 2)
    members = [line for _, line in lines[1:]]
    if len(members) != m:
        raise ParseError(f"header announced {m} members, found {len(members)}")
    try:
        return SetFamily(ell, tuple(members))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_set_family(s: SetFamily) -> str:
    lines = [f"{s.universe_bits} {s.size}"]
    lines += list(s.members)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators (all pure in (params, seed))


def gen_random_kcnf(
    n: int, m: int, k: int, max_intersections: int, seed: int, max_tries: int = 400
) -> CnfFormula:
    """Random k-CNF in which every clause shares variables with at most
    ``max_intersections`` other clauses."""
    if k < 1 or k > n:
        raise GenerationError(f"clause size k={k} infeasible for n={n}")
    if max_intersections == 0 and m * k > n:
        raise GenerationError(f"{m} disjoint clauses of size {k} need {m * k} <= {n} variables")
    rng = RngStream(seed, 0).generator()

    def signed(vars0: Sequence[int]) -> tuple[int, ...]:
        signs = rng.integers(0, 2, size=len(vars0))
        return tuple((v + 1) * (1 if s else -1) for v, s in zip(vars0, signs))

    if max_intersections == 0:
        perm = rng.permutation(n)
        return CnfFormula(
            n, tuple(signed(sorted(int(x) for x in perm[j * k : (j + 1) * k])) for j in range(m))
        )

    for _ in range(max_tries):
        chosen: list[frozenset[int]] = []
        counts: list[int] = []
        feasible = True
        for _ in range(m):
            placed = False
            for _ in range(60):
                cand = frozenset(int(x) for x in rng.choice(n, size=k, replace=False))
                hits = [i for i, prev in enumerate(chosen) if prev & cand]
                if len(hits) <= max_intersections and all(
                    counts[i] < max_intersections for i in hits
                ):
                    for i in hits:
                        counts[i] += 1
                    chosen.append(cand)
                    counts.append(len(hits))
                    placed = True
                    break
            if not placed:
                feasible = False
                break
        if feasible:
            return CnfFormula(n, tuple(signed(sorted(c)) for c in chosen))
    raise GenerationError(
        f"could not place {m} clauses with max_intersections={max_intersections} "
        f"after {max_tries} restarts"
    )


def gen_random_regular(n: int, k: int, seed: int, max_tries: int = 2000) -> Graph:
    """Random simple k-regular graph via the pairing model with rejection."""
    if n * k % 2 != 0:
        raise GenerationError(f"n*k must be even, got n={n}, k={k}")
    if not 0 <= k < n:
        raise GenerationError(f"degree k={k} infeasible for n={n}")
    rng = RngStream(seed, 0).generator()
    stubs = np.repeat(np.arange(n), k)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        edges = set()
        ok = True
        for u, v in pairs:
            u, v = int(u), int(v)
            if u == v:
                ok = False
                break
            e = (u, v) if u < v else (v, u)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, tuple(sorted(edges)))
    raise GenerationError(f"pairing model failed for n={n}, k={k} after {max_tries} tries")


def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform random simple graph with exactly m edges."""
    max_m = n * (n - 1) // 2
    if m > max_m:
        raise GenerationError(f"m={m} exceeds {max_m} possible edges on {n} vertices")
    rng = RngStream(seed, 0).generator()
    idx = rng.choice(max_m, size=m, replace=False)
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph(n, tuple(sorted(all_pairs[int(i)] for i in idx)))


def gen_hypercube(dim: int) -> Graph:
    """Boolean hypercube: nodes 0..2^dim-1, edges between ids differing in one bit."""
    if dim < 0:
        raise GenerationError("dimension must be nonnegative")
    n = 1 << dim
    edges = []
    for u in range(n):
        for b in range(dim):
            v = u ^ (1 << b)
            if u < v:
                edges.append((u, v))
    return Graph(n, tuple(edges))


def gen_latin_matrix(n: int, k: int, seed: int) -> IntMatrix:
    """n x n integer matrix in which each value appears exactly k times;
    when k does not divide n*n, one final value takes the remainder."""
    if k < 1:
        raise GenerationError("multiplicity k must be positive")
    cells = n * n
    q, r = divmod(cells, k)
    flat = np.repeat(np.arange(q), k)
    if r:
        flat = np.concatenate([flat, np.full(r, q)])
    rng = RngStream(seed, 0).generator()
    return IntMatrix(rng.permutation(flat).reshape(n, n))


def gen_random_uniform_hypergraph(n: int, m: int, k: int, seed: int) -> Hypergraph:
    """m distinct random k-subsets of n vertices."""
    if k > n:
        raise GenerationError(f"edge size k={k} exceeds n={n}")
    if m > math.comb(n, k):
        raise GenerationError(f"only {math.comb(n, k)} distinct {k}-sets exist")
    rng = RngStream(seed, 0).generator()
    edges: set[tuple[int, ...]] = set()
    while len(edges) < m:
        edges.add(tuple(sorted(int(x) for x in rng.choice(n, size=k, replace=False))))
    return Hypergraph(n, tuple(sorted(edges)))


def gen_random_binary_matrix(n: int, seed: int) -> BinaryMatrix:
    rng = RngStream(seed, 0).generator()
    return BinaryMatrix(rng.integers(0, 2, size=(n, n)))


def gen_unit_vectors(n: int, seed: int) -> UnitVectors:
    """n random unit vectors in R^n (normalized Gaussian rows)."""
    rng = RngStream(seed, 0).generator()
    arr = rng.standard_normal((n, n))
    arr /= np.linalg.norm(arr, axis=1, keepdims=True)
    return UnitVectors(arr)


def gen_set_family(universe_bits: int, m: int, seed: int) -> SetFamily:
    """m distinct random member strings from {0,1}^universe_bits."""
    if m > 2**universe_bits:
        raise GenerationError(f"cannot pick {m} distinct {universe_bits}-bit strings")
    rng = RngStream(seed, 0).generator()
    chosen: set[int] = set()
    while len(chosen) < m:
        chosen.add(int(rng.integers(0, 2**universe_bits)))
    return SetFamily(universe_bits, tuple(format(x, f"0{universe_bits}b") for x in chosen))


TRANSITIVE_KINDS = ("cycle", "hypercube", "complete")


def gen_vertex_transitive(kind: str, size: int) -> Graph:
    """The three certified vertex-transitive families.

    kind='cycle' gives C_size (size >= 3), 'hypercube' gives Q_size on
    2^size nodes, 'complete' gives K_size.
    """
    if kind == "cycle":
        if size < 3:
            raise GenerationError("cycle needs at least 3 vertices")
        return Graph(size, tuple((i, (i + 1) % size) for i in range(size)))
    if kind == "hypercube":
        return gen_hypercube(size)
    if kind == "complete":
        if size < 2:
            raise GenerationError("complete graph needs at least 2 vertices")
        return Graph(size, tuple((u, v) for u in range(size) for v in range(u + 1, size)))
    raise GenerationError(f"unknown vertex-transitive kind {kind!r}")


def certified_transitive_kind(g: Graph) -> str | None:
    """Recognize the three generated vertex-transitive families by edge set.

    Only these are certified; general transitivity checking is out of scope.
    """
    if g.n >= 2 and g.m == g.n * (g.n - 1) // 2:
        if g == gen_vertex_transitive("complete", g.n):
            return "complete"
    if g.n >= 3 and g.m == g.n:
        if set(g.edges) == set(gen_vertex_transitive("cycle", g.n).edges):
            return "cycle"
    dim = g.n.bit_length() - 1
    if g.n == 1 << dim and dim >= 1:
        if set(g.edges) == set(gen_hypercube(dim).edges):
            return "hypercube"
    return None
