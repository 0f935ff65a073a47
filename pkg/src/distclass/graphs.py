"""Small graphs (at most 16 vertices) as neighbour bitsets.

Diameter graphs of point sets, exact independence numbers, odd-cycle
search, and an isomorph-free generator for triangle-free graphs with
bounded independence number.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import networkx as nx
import numpy as np

from .geometry import Configuration, cluster_values, pairwise_distances

MAX_ORDER = 16


class GraphError(ValueError):
    pass


class TooManyVertices(GraphError):
    pass


class WrongOrder(GraphError):
    pass


class BudgetExceeded(RuntimeError):
    """Generation ran out of time; ``partial`` holds what was produced."""

    def __init__(self, message: str, partial=None, level: int | None = None):
        super().__init__(message)
        self.partial = list(partial or [])
        self.level = level


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class SmallGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if self.n > MAX_ORDER:
            raise TooManyVertices(f"order {self.n} > {MAX_ORDER}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match order")
        full = (1 << self.n) - 1
        for v, a in enumerate(self.adj):
            if a >> v & 1:
                raise GraphError(f"self-loop at {v}")
            if a & ~full:
                raise GraphError(f"neighbour out of range at {v}")
            for w in bits(a):
                if not self.adj[w] >> v & 1:
                    raise GraphError(f"asymmetric edge {v}-{w}")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SmallGraph":
        adj = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def cycle(cls, n: int) -> "SmallGraph":
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> "SmallGraph":
        return cls.from_edges(n, combinations(range(n), 2))

    @classmethod
    def petersen(cls) -> "SmallGraph":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u]) if u < v]

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def degrees(self) -> list[int]:
        return [popcount(a) for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def has_triangle(self) -> bool:
        return any(self.adj[u] & self.adj[v] for u, v in self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "SmallGraph":
        nodes = sorted(g.nodes())
        idx = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(idx[u], idx[v]) for u, v in g.edges()])

    def to_graph6(self) -> str:
        return nx.to_graph6_bytes(self.to_networkx(), header=False).decode().strip()

    @classmethod
    def from_graph6(cls, line: str) -> "SmallGraph":
        return cls.from_networkx(nx.from_graph6_bytes(line.strip().encode()))


def diameter_graph(c: Configuration) -> SmallGraph:
    """Vertices are the points; edges join pairs at the maximum distance."""
    n = len(c)
    if n > MAX_ORDER:
        raise TooManyVertices(f"{n} points > {MAX_ORDER}")
    if n < 2:
        return SmallGraph(n, (0,) * n)
    dm = pairwise_distances(c.array)
    iu = np.triu_indices(n, 1)
    scaled = dm / dm[iu].min()
    top = cluster_values(scaled[iu], c.eps)[-1][0]
    edges = [(i, j) for i, j in zip(*iu) if scaled[i, j] >= top - c.eps]
    return SmallGraph.from_edges(n, edges)


def independence_number(g: SmallGraph) -> int:
    """Exact alpha(G) by branch and bound; branch on a maximum-degree vertex."""
    return len(maximum_independent_set(g))


def maximum_independent_set(g: SmallGraph, within: int | None = None) -> list[int]:
    adj = g.adj
    best = [0]

    def rec(cand: int, chosen: int):
        if popcount(chosen) + popcount(cand) <= popcount(best[0]):
            return
        # pick the vertex with most neighbours inside cand
        pivot, pdeg = -1, -1
        for v in bits(cand):
            d = popcount(adj[v] & cand)
            if d > pdeg:
                pivot, pdeg = v, d
        if pdeg <= 0:
            best[0] = chosen | cand
            return
        rec(cand & ~adj[pivot] & ~(1 << pivot), chosen | 1 << pivot)
        rec(cand & ~(1 << pivot), chosen)

    rec((1 << g.n) - 1 if within is None else within, 0)
    return list(bits(best[0]))


def _alpha_mask(adj, cand: int, limit: int) -> int:
    """alpha of the induced subgraph on ``cand``, stopping once it exceeds ``limit``."""
    best = 0

    def rec(c: int, size: int):
        nonlocal best
        if best > limit or size + popcount(c) <= best:
            return
        pivot, pdeg = -1, -1
        for v in bits(c):
            d = popcount(adj[v] & c)
            if d > pdeg:
                pivot, pdeg = v, d
        if pdeg <= 0:
            best = max(best, size + popcount(c))
            return
        rec(c & ~adj[pivot] & ~(1 << pivot), size + 1)
        rec(c & ~(1 << pivot), size)

    rec(cand, 0)
    return best


# --- odd cycles -----------------------------------------------------------


def induced_odd_cycles(g: SmallGraph) -> list[tuple[int, ...]]:
    """Every chordless odd cycle, once each, as a vertex sequence."""
    adj = g.adj
    found = []

    def extend(path: list[int], inner: int):
        s, last = path[0], path[-1]
        for w in bits(adj[last]):
            if w <= s or inner >> w & 1 or w == last or w in path:
                continue
            if adj[w] & inner & ~(1 << last):
                continue  # chord to the path interior
            if adj[w] >> s & 1 and len(path) >= 2:
                if path[1] < w and (len(path) + 1) % 2 == 1:
                    found.append(tuple(path + [w]))
                continue
            if adj[w] >> s & 1:
                continue
            extend(path + [w], inner | 1 << last)

    for s in range(g.n):
        for v1 in bits(adj[s]):
            if v1 > s:
                extend([s, v1], 0)
    return found


def find_disjoint_odd_cycles(g: SmallGraph):
    """Two vertex-disjoint odd cycles of least total length, or None.

    A shortest pair can always be taken chordless (a chord of an odd cycle
    leaves a shorter odd cycle on a subset of its vertices), so only
    induced odd cycles are searched. Ties go to the lexicographically
    smallest pair of sorted vertex sets.
    """
    cycles = induced_odd_cycles(g)
    masks = [sum(1 << v for v in c) for c in cycles]
    best, best_key = None, None
    for i, j in combinations(range(len(cycles)), 2):
        if masks[i] & masks[j]:
            continue
        a, b = sorted((tuple(sorted(cycles[i])), tuple(sorted(cycles[j]))))
        key = (len(a) + len(b), a, b)
        if best_key is None or key < best_key:
            best_key = key
            ca, cb = cycles[i], cycles[j]
            best = (ca, cb) if tuple(sorted(ca)) == a else (cb, ca)
    return best


# --- lemma checks -------------------------------------------------------------


@dataclass(frozen=True)
class LemmaReport:
    triangle_free: bool
    alpha: int
    degrees_ok: bool
    has_deg4: bool

    @property
    def hypothesis(self) -> bool:
        return self.triangle_free and self.alpha < 5

    @property
    def holds(self) -> bool:
        return not self.hypothesis or (self.degrees_ok and self.has_deg4)


def check_lemma12(g: SmallGraph) -> LemmaReport:
    """Triangle-free order-12 graphs with alpha < 5 have degrees in {3, 4}, some 4."""
    if g.n != 12:
        raise WrongOrder(f"order {g.n}, expected 12")
    deg = g.degrees()
    return LemmaReport(
        triangle_free=not g.has_triangle(),
        alpha=independence_number(g),
        degrees_ok=all(d in (3, 4) for d in deg),
        has_deg4=4 in deg,
    )


# --- canonical form -----------------------------------------------------------


def _refine(adj, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement; cell order depends only on the structure."""
    changed = True
    while changed:
        changed = False
        for i in range(len(cells)):
            target = sum(1 << v for v in cells[i])
            new_cells = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[int, list[int]] = {}
                for v in cell:
                    groups.setdefault(popcount(adj[v] & target), []).append(v)
                if len(groups) > 1:
                    changed = True
                new_cells.extend(groups[k] for k in sorted(groups))
            cells = new_cells
            if changed:
                break
    return cells


def _code(adj, order: list[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    n = len(order)
    code = 0
    for i, v in enumerate(order):
        row = 0
        for w in bits(adj[v]):
            row |= 1 << (n - 1 - pos[w])
        code = code << n | row
    return code


def canonical_form(g: SmallGraph) -> tuple[int, int]:
    """(n, code): the smallest adjacency-matrix code over the leaves of a
    refinement/individualization search tree.

    The degree partition is refined to an equitable one, then the first
    non-singleton cell is split by individualizing each of its vertices in
    turn. Both steps commute with relabelling, so isomorphic graphs reach
    the same set of codes.
    """
    adj = g.adj
    n = g.n
    if n == 0:
        return (0, 0)
    by_deg: dict[int, list[int]] = {}
    for v in range(n):
        by_deg.setdefault(popcount(adj[v]), []).append(v)
    best = [None]

    def search(cells):
        if len(cells) == n:
            code = _code(adj, [c[0] for c in cells])
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        k = next(i for i, c in enumerate(cells) if len(c) > 1)
        for v in cells[k]:
            rest = [w for w in cells[k] if w != v]
            search(_refine(adj, cells[:k] + [[v], rest] + cells[k + 1:]))

    search(_refine(adj, [by_deg[k] for k in sorted(by_deg)]))
    return (n, best[0])


def extend_once(g: SmallGraph, amax: int) -> Iterator[SmallGraph]:
    """All one-vertex extensions keeping triangle-freeness and alpha <= amax."""
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    # neighbourhoods must be independent sets of size <= amax
    stack = [(0, 0, 0)]  # (chosen mask, forbidden mask, next vertex)
    while stack:
        chosen, forbidden, nxt = stack.pop()
        if nxt == n:
            rest = full & ~chosen
            if _alpha_mask(adj, rest, amax - 1) <= amax - 1:
                new_adj = list(adj) + [chosen]
                for v in bits(chosen):
                    new_adj[v] |= 1 << n
                yield SmallGraph(n + 1, tuple(new_adj))
            continue
        stack.append((chosen, forbidden, nxt + 1))
        if not forbidden >> nxt & 1 and popcount(chosen) < amax:
            stack.append((chosen | 1 << nxt, forbidden | adj[nxt], nxt + 1))


def generate_triangle_free_alpha_le(n: int, amax: int, budget: float | None = None,
                                    progress=None) -> Iterator[SmallGraph]:
    """Isomorph-free stream of triangle-free graphs of order ``n`` with alpha <= amax.

    Grows graphs one vertex at a time (the class is closed under deleting
    vertices, so every member arises from a member one smaller), pruning
    triangles and independent sets above ``amax``, and keeps one graph per
    canonical form. Raises BudgetExceeded, carrying the graphs of the last
    complete level, if ``budget`` seconds run out.
    """
    if n > 14:
        raise GraphError("generation is limited to n <= 14")
    if amax < 1:
        raise GraphError("amax must be at least 1")
    t0 = time.perf_counter()
    level = [SmallGraph(0, ())]
    for k in range(n):
        forms: dict[tuple[int, int], SmallGraph] = {}
        for g in level:
            for h in extend_once(g, amax):
                key = canonical_form(h)
                if key not in forms:
                    forms[key] = h
            if budget is not None and time.perf_counter() - t0 > budget:
                raise BudgetExceeded(f"budget of {budget}s exhausted at order {k + 1}",
                                     partial=level, level=k)
        level = [forms[key] for key in sorted(forms)]
        if progress is not None:
            progress(k + 1, len(level), time.perf_counter() - t0)
    yield from level


@dataclass
class SampleReport:
    branches: int
    reached: int  # branches that got to order n
    passed: int
    failures: list[str]
    sampled: bool = True


def sampled_check(n: int, amax: int, check, branches: int = 10**6, seed: int = 0,
                  budget: float | None = None) -> SampleReport:
    """Fallback when exhaustive generation is out of budget.

    Each branch grows a graph by uniformly random admissible one-vertex
    extensions; those reaching order ``n`` are passed to ``check``, which
    returns True on success. The report is flagged as sampled so it is never
    mistaken for the exhaustive result.
    """
    rng = random.Random(seed)
    t0 = time.perf_counter()
    reached = passed = done = 0
    failures: list[str] = []
    for done in range(1, branches + 1):
        g = SmallGraph(0, ())
        while g.n < n:
            kids = list(extend_once(g, amax))
            if not kids:
                break
            g = rng.choice(kids)
        if g.n == n:
            reached += 1
            if check(g):
                passed += 1
            else:
                failures.append(g.to_graph6())
        if budget is not None and time.perf_counter() - t0 > budget:
            break
    return SampleReport(done, reached, passed, failures)
