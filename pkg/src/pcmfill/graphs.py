"""Exact enumeration and canonical classification of small connected graphs.

Vertices of a comparison graph are the compared items, edges are the known
comparisons.  Everything here is exact and deterministic: isomorphism classes
are identified by the lexicographically minimal upper-triangle adjacency
bitstring over all vertex relabelings (column-major bit order, so the packed
bits are exactly the payload of the standard graph6 encoding).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapacityError, DisconnectedGraphError

MAX_VERTICES = 10

Edge = tuple[int, int]


def normalize_edges(edges) -> frozenset[Edge]:
    """Canonicalize an edge iterable to a frozenset of (lo, hi) pairs."""
    out = set()
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        out.add((i, j) if i < j else (j, i))
    return frozenset(out)


@dataclass(frozen=True)
class LabeledGraph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_VERTICES:
            raise CapacityError(f"vertex count {self.n} outside 1..{MAX_VERTICES}")
        object.__setattr__(self, "edges", normalize_edges(self.edges))
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) has endpoint outside 0..{self.n - 1}")

    @property
    def e(self) -> int:
        return len(self.edges)

    def adjacency_masks(self) -> list[int]:
        adj = [0] * self.n
        for i, j in self.edges:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def with_edge(self, edge: Edge) -> "LabeledGraph":
        return LabeledGraph(self.n, self.edges | {edge})

    def without_edge(self, edge: Edge) -> "LabeledGraph":
        i, j = edge
        return LabeledGraph(self.n, self.edges - {(i, j) if i < j else (j, i)})

    def non_edges(self) -> list[Edge]:
        return [
            (i, j)
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if (i, j) not in self.edges
        ]


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Isomorphism-class key: minimal column-major upper-triangle bitstring."""

    n: int
    bits: int

    def graph6(self) -> str:
        nbits = self.n * (self.n - 1) // 2
        chars = [chr(63 + self.n)]
        if nbits:
            s = format(self.bits, f"0{nbits}b")
            s += "0" * (-len(s) % 6)
            chars.extend(chr(63 + int(s[k : k + 6], 2)) for k in range(0, len(s), 6))
        return "".join(chars)

    def graph(self) -> LabeledGraph:
        """The canonical labeled representative of the class."""
        edges = []
        pos = self.n * (self.n - 1) // 2
        for j in range(1, self.n):
            for i in range(j):
                pos -= 1
                if self.bits >> pos & 1:
                    edges.append((i, j))
        return LabeledGraph(self.n, frozenset(edges))


def parse_graph6(text: str) -> LabeledGraph:
    """Decode a graph6 string produced by CanonicalForm.graph6."""
    n = ord(text[0]) - 63
    if not 1 <= n <= MAX_VERTICES:
        raise CapacityError(f"graph6 vertex count {n} outside 1..{MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    bits = 0
    for ch in text[1:]:
        bits = bits << 6 | (ord(ch) - 63)
    bits >>= (-nbits) % 6
    return CanonicalForm(n, bits).graph()


def canonical_form(g: LabeledGraph) -> CanonicalForm:
    """Exact canonical form via pruned search over vertex orderings.

    Branch-and-bound over position assignments; candidates that are twins
    (identical adjacency outside the pair) are explored only once, which keeps
    highly symmetric graphs from exploding factorially.
    """
    if g.n > MAX_VERTICES:
        raise CapacityError(f"canonical_form capped at n={MAX_VERTICES}")
    return CanonicalForm(g.n, _canonical_bits(g.n, tuple(g.adjacency_masks())))


@lru_cache(maxsize=200_000)
def _canonical_bits(n: int, adj: tuple[int, ...]) -> int:
    if n == 1:
        return 0
    best: list[int] | None = None
    order: list[int] = []
    used = [False] * n

    def place(prefix: list[int]):
        nonlocal best
        p = len(order)
        if p == n:
            if best is None or prefix < best:
                best = list(prefix)
            return
        cands = []
        for v in range(n):
            if used[v]:
                continue
            if any(
                adj[u] & ~(1 << u | 1 << v) == adj[v] & ~(1 << u | 1 << v)
                for _, u in cands
            ):
                continue  # twin of a queued candidate: same subtree outcome
            block = 0
            for q in order:
                block = block << 1 | (adj[v] >> q & 1)
            cands.append((block, v))
        cands.sort()
        for block, v in cands:
            prefix.append(block)
            if best is None or prefix <= best[: len(prefix)]:
                used[v] = True
                order.append(v)
                place(prefix)
                order.pop()
                used[v] = False
            prefix.pop()

    place([])
    assert best is not None
    bits = 0
    for p in range(1, n):
        bits = bits << p | best[p]
    return bits


def is_connected(g: LabeledGraph) -> bool:
    if g.n <= 1:
        return True
    adj = g.adjacency_masks()
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        v = frontier
        while v:
            low = v & -v
            nxt |= adj[low.bit_length() - 1]
            v ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << g.n) - 1


def connected_components(g: LabeledGraph) -> list[list[int]]:
    adj = g.adjacency_masks()
    unseen = (1 << g.n) - 1
    comps = []
    while unseen:
        start = unseen & -unseen
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            v = frontier
            while v:
                low = v & -v
                nxt |= adj[low.bit_length() - 1]
                v ^= low
            frontier = nxt & ~seen
            seen |= frontier
        comps.append([v for v in range(g.n) if seen >> v & 1])
        unseen &= ~seen
    return comps


@dataclass(frozen=True)
class GraphClass:
    """One isomorphism class of connected graphs plus its structural flags."""

    canon: CanonicalForm
    n: int
    e: int
    degree_sequence: tuple[int, ...]
    is_tree: bool
    is_star: bool
    is_cycle: bool
    is_bipartite: bool
    k_regular: int | None
    k_quasi_regular: int | None

    @property
    def g6(self) -> str:
        return self.canon.graph6()

    @property
    def representative(self) -> LabeledGraph:
        return self.canon.graph()

    def to_dict(self) -> dict:
        return {
            "g6": self.g6,
            "n": self.n,
            "e": self.e,
            "degree_sequence": list(self.degree_sequence),
            "is_tree": self.is_tree,
            "is_star": self.is_star,
            "is_cycle": self.is_cycle,
            "is_bipartite": self.is_bipartite,
            "k_regular": self.k_regular,
            "k_quasi_regular": self.k_quasi_regular,
        }


def is_bipartite(g: LabeledGraph) -> bool:
    adj = g.adjacency_masks()
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            nbrs = adj[v]
            while nbrs:
                low = nbrs & -nbrs
                u = low.bit_length() - 1
                nbrs ^= low
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def classify(g: LabeledGraph) -> GraphClass:
    """Compute the isomorphism class and structural flags of a connected graph."""
    if not is_connected(g):
        raise DisconnectedGraphError("classify requires a connected graph")
    deg = sorted(g.degrees())
    n, e = g.n, g.e
    tree = e == n - 1
    star = tree and (n <= 2 or deg[-1] == n - 1)
    cycle = e == n and deg[0] == deg[-1] == 2
    k_reg = deg[0] if deg[0] == deg[-1] else None
    k_quasi = None
    if n >= 2 and deg[-1] == deg[0] + 1 and deg.count(deg[-1]) == 1:
        k_quasi = deg[0]
    return GraphClass(
        canon=canonical_form(g),
        n=n,
        e=e,
        degree_sequence=tuple(deg),
        is_tree=tree,
        is_star=star,
        is_cycle=cycle,
        is_bipartite=is_bipartite(g),
        k_regular=k_reg,
        k_quasi_regular=k_quasi,
    )


def class_from_graph6(text: str) -> GraphClass:
    return classify(parse_graph6(text))


def _tree_canons(n: int) -> list[CanonicalForm]:
    """All unlabeled trees on n vertices, grown by leaf attachment."""
    reps = {canonical_form(LabeledGraph(1, frozenset()))}
    for k in range(2, n + 1):
        grown = set()
        for canon in reps:
            g = canon.graph()
            for v in range(k - 1):
                g2 = LabeledGraph(k, set(g.edges) | {(v, k - 1)})
                grown.add(canonical_form(g2))
        reps = grown
    return sorted(reps)


@lru_cache(maxsize=None)
def _level_canons(n: int, e: int) -> tuple[CanonicalForm, ...]:
    if e == n - 1:
        return tuple(_tree_canons(n))
    grown = set()
    for canon in _level_canons(n, e - 1):
        g = canon.graph()
        for edge in g.non_edges():
            grown.add(canonical_form(g.with_edge(edge)))
    return tuple(sorted(grown))


def enumerate_connected_classes(n: int, e: int) -> list[GraphClass]:
    """All isomorphism classes of connected graphs on n vertices with e edges.

    Grown level by level: trees by leaf attachment, then single-edge additions.
    Every connected graph with a cycle has a non-bridge edge, so deleting it
    reaches level e-1; the growth direction is therefore exhaustive.
    """
    if not 2 <= n <= MAX_VERTICES:
        raise ValueError(f"n={n} outside 2..{MAX_VERTICES}")
    if not n - 1 <= e <= n * (n - 1) // 2:
        raise ValueError(f"e={e} outside {n - 1}..{n * (n - 1) // 2} for n={n}")
    return [classify(c.graph()) for c in _level_canons(n, e)]


def labeled_copies(g: LabeledGraph) -> list[frozenset[Edge]]:
    """Distinct edge sets of all relabelings of g on the same vertex set."""
    copies = set()
    for perm in itertools.permutations(range(g.n)):
        copies.add(
            frozenset(
                (perm[i], perm[j]) if perm[i] < perm[j] else (perm[j], perm[i])
                for i, j in g.edges
            )
        )
    return sorted(copies, key=lambda es: tuple(sorted(es)))


def odd_cycle_edge_deletions(g: LabeledGraph) -> int:
    """Minimum number of edge deletions that make g bipartite (n <= 10)."""
    edges = list(g.edges)
    best = len(edges)
    for colors in range(1 << (g.n - 1)):  # vertex 0 fixed to side 0

        def side(v):
            return (colors >> (v - 1)) & 1 if v else 0

        mono = sum(1 for i, j in edges if side(i) == side(j))
        best = min(best, mono)
    return best
