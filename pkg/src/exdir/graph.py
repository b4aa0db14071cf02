"""Directed multigraphs with tombstoned edges, cut statistics and views.

Degree convention: every alive edge adds one to the out-degree of its tail and
one to the in-degree of its head, so a self-loop adds two to the total degree
of its vertex.  Edge ids are never reused; deleting an edge only clears its
alive flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BoundsError, ParseError, PartitionError


class DiGraph:
    def __init__(self, n: int = 0, edges: Iterable[tuple[int, int]] = ()):
        self.n = n
        self.tail: list[int] = []
        self.head: list[int] = []
        self.alive = bytearray()
        self.out_inc: list[list[int]] = [[] for _ in range(n)]
        self.in_inc: list[list[int]] = [[] for _ in range(n)]
        self.deg = [0] * n
        self.m_alive = 0
        for u, v in edges:
            self.add_edge(u, v)

    # construction and mutation

    def add_vertex(self) -> int:
        self.out_inc.append([])
        self.in_inc.append([])
        self.deg.append(0)
        self.n += 1
        return self.n - 1

    def add_edge(self, u: int, v: int) -> int:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise BoundsError(f"edge ({u},{v}) outside 0..{self.n - 1}")
        e = len(self.tail)
        self.tail.append(u)
        self.head.append(v)
        self.alive.append(1)
        self.out_inc[u].append(e)
        self.in_inc[v].append(e)
        self.deg[u] += 1
        self.deg[v] += 1
        self.m_alive += 1
        return e

    def kill_edge(self, e: int) -> None:
        if not self.alive[e]:
            return
        self.alive[e] = 0
        self.deg[self.tail[e]] -= 1
        self.deg[self.head[e]] -= 1
        self.m_alive -= 1

    def copy(self) -> "DiGraph":
        g = DiGraph.__new__(DiGraph)
        g.n = self.n
        g.tail = list(self.tail)
        g.head = list(self.head)
        g.alive = bytearray(self.alive)
        g.out_inc = [list(x) for x in self.out_inc]
        g.in_inc = [list(x) for x in self.in_inc]
        g.deg = list(self.deg)
        g.m_alive = self.m_alive
        return g

    # queries

    @property
    def num_ids(self) -> int:
        return len(self.tail)

    def e_count(self) -> int:
        return self.m_alive

    def is_alive(self, e: int) -> bool:
        return bool(self.alive[e])

    def edges(self):
        alive = self.alive
        return (e for e in range(len(alive)) if alive[e])

    def out_edges(self, v: int):
        alive = self.alive
        return [e for e in self.out_inc[v] if alive[e]]

    def in_edges(self, v: int):
        alive = self.alive
        return [e for e in self.in_inc[v] if alive[e]]

    def degree(self, v: int) -> int:
        return self.deg[v]

    def volume(self, S: Iterable[int]) -> int:
        deg = self.deg
        return sum(deg[v] for v in S)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(self.tail[e], self.head[e]) for e in self.edges()]

    def __repr__(self):
        return f"DiGraph(n={self.n}, m={self.m_alive})"


class GraphView:
    """Read-only view of a DiGraph restricted to a vertex set and/or reversed.

    Edge ids of the base graph are preserved.
    """

    def __init__(self, base, vertices=None, reversed_=False):
        self.base = base
        self.n = base.n
        self.reversed = reversed_
        if vertices is None:
            self.mask = None
        else:
            mask = bytearray(base.n)
            for v in vertices:
                if not 0 <= v < base.n:
                    raise BoundsError(f"vertex {v} outside 0..{base.n - 1}")
                mask[v] = 1
            self.mask = mask
        if reversed_:
            self.tail, self.head = base.head, base.tail
        else:
            self.tail, self.head = base.tail, base.head

    def is_alive(self, e: int) -> bool:
        if not self.base.is_alive(e):
            return False
        if self.mask is None:
            return True
        return bool(self.mask[self.tail[e]] and self.mask[self.head[e]])

    def edges(self):
        return (e for e in self.base.edges() if self.is_alive(e))

    def out_edges(self, v: int):
        src = self.base.in_edges(v) if self.reversed else self.base.out_edges(v)
        return [e for e in src if self.is_alive(e)]

    def in_edges(self, v: int):
        src = self.base.out_edges(v) if self.reversed else self.base.in_edges(v)
        return [e for e in src if self.is_alive(e)]

    def degree(self, v: int) -> int:
        if self.mask is None:
            return self.base.degree(v)
        if not self.mask[v]:
            return 0
        return len(self.out_edges(v)) + len(self.in_edges(v))

    def volume(self, S: Iterable[int]) -> int:
        return sum(self.degree(v) for v in S)

    def e_count(self) -> int:
        return sum(1 for _ in self.edges())

    def edge_list(self) -> list[tuple[int, int]]:
        return [(self.tail[e], self.head[e]) for e in self.edges()]

    def materialize(self) -> DiGraph:
        """Concrete DiGraph with the same vertex ids and edge ids.

        Edges hidden by the view are present but dead.
        """
        g = DiGraph(self.n)
        for e in range(self.base.num_ids):
            g.add_edge(self.tail[e], self.head[e])
            if not self.is_alive(e):
                g.kill_edge(e)
        return g


def induce(G, vertices: Iterable[int]) -> GraphView:
    base, rev = _unwrap(G)
    if isinstance(G, GraphView) and G.mask is not None:
        vertices = [v for v in vertices if G.mask[v]]
    return GraphView(base, vertices, rev)


def reverse(G) -> GraphView:
    base, rev = _unwrap(G)
    verts = None
    if isinstance(G, GraphView) and G.mask is not None:
        verts = [v for v in range(G.n) if G.mask[v]]
    return GraphView(base, verts, not rev)


def _unwrap(G):
    if isinstance(G, GraphView):
        return G.base, G.reversed
    return G, False


def reversed_copy(G: DiGraph) -> DiGraph:
    """Concrete reversal keeping edge ids (dead edges stay dead)."""
    g = DiGraph(G.n)
    for e in range(G.num_ids):
        g.add_edge(G.head[e], G.tail[e])
        if not G.alive[e]:
            g.kill_edge(e)
    return g


def subgraph(G, vertices: Iterable[int]):
    """Compact copy of G[X] with local ids.

    Local vertex ids follow ascending host id; local edges follow ascending host
    edge id.  Returns (H, vmap, emap) with vmap/emap mapping local to host ids.
    """
    vmap = sorted(set(vertices))
    local = {v: i for i, v in enumerate(vmap)}
    H = DiGraph(len(vmap))
    emap = []
    tail, head = G.tail, G.head
    seen = set()
    for v in vmap:
        for e in G.out_edges(v):
            w = head[e]
            if w in local and e not in seen:
                seen.add(e)
    for e in sorted(seen):
        H.add_edge(local[tail[e]], local[head[e]])
        emap.append(e)
    return H, vmap, emap


@dataclass(frozen=True)
class CutStats:
    S: tuple
    e_fwd: int
    e_bwd: int
    vol_S: int
    vol_Sbar: int


def cut_stats(G, S: Iterable[int]) -> CutStats:
    n = G.n
    inside = bytearray(n)
    Ss = sorted(set(S))
    for v in Ss:
        if not 0 <= v < n:
            raise BoundsError(f"vertex {v} outside 0..{n - 1}")
        inside[v] = 1
    e_fwd = e_bwd = 0
    tail, head = G.tail, G.head
    for e in G.edges():
        a, b = inside[tail[e]], inside[head[e]]
        if a and not b:
            e_fwd += 1
        elif b and not a:
            e_bwd += 1
    vol_S = sum(G.degree(v) for v in Ss)
    vol_all = sum(G.degree(v) for v in range(n))
    return CutStats(tuple(Ss), e_fwd, e_bwd, vol_S, vol_all - vol_S)


def edges_between(G, A: Iterable[int], B: Iterable[int]) -> list[int]:
    """Alive edges with tail in A and head in B, ascending id."""
    inB = set(B)
    out = []
    for a in set(A):
        for e in G.out_edges(a):
            if G.head[e] in inB:
                out.append(e)
    out.sort()
    return out


def contract(G, classes: Sequence[Iterable[int]], drop: Iterable[int] = ()):
    """Contract each class to one node, dropping intra-class and dropped edges.

    Returns (H, class_of) where class_of[v] is the super-node of v.  The i-th
    class becomes node i; surviving edges keep their relative id order.
    """
    n = G.n
    class_of = [-1] * n
    for i, cls in enumerate(classes):
        for v in cls:
            if not 0 <= v < n:
                raise BoundsError(f"vertex {v} outside 0..{n - 1}")
            if class_of[v] != -1:
                raise PartitionError(f"vertex {v} appears in two classes")
            class_of[v] = i
    missing = [v for v in range(n) if class_of[v] == -1]
    if missing:
        raise PartitionError(f"classes do not cover vertices {missing[:10]}")
    dropped = set(drop)
    H = DiGraph(len(classes))
    for e in G.edges():
        if e in dropped:
            continue
        a, b = class_of[G.tail[e]], class_of[G.head[e]]
        if a != b:
            H.add_edge(a, b)
    return H, class_of


def topological_order(G):
    """Kahn order of the alive edges, or None if a cycle (or self-loop) exists."""
    n = G.n
    indeg = [0] * n
    for e in G.edges():
        if G.tail[e] == G.head[e]:
            return None
        indeg[G.head[e]] += 1
    stack = [v for v in range(n - 1, -1, -1) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for e in G.out_edges(v):
            w = G.head[e]
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    if len(order) != n:
        return None
    return order


def strong_components(G) -> list[list[int]]:
    """Strongly connected components of the alive edges, each sorted, listed
    in a topological order of the condensation (sources first).
    Iterative Tarjan."""
    n = G.n
    index = [-1] * n
    low = [0] * n
    on = bytearray(n)
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, iter(G.out_edges(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = 1
        while work:
            v, it = work[-1]
            for e in it:
                w = G.head[e]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on[w] = 1
                    work.append((w, iter(G.out_edges(w))))
                    break
                if on[w] and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on[w] = 0
                        comp.append(w)
                        if w == v:
                            break
                    comps.append(sorted(comp))
    comps.reverse()
    return comps


def is_dag(G) -> bool:
    return topological_order(G) is not None


def respects_order(G, order: Sequence[int]) -> bool:
    """True iff every alive edge goes strictly forward in `order`."""
    pos = [0] * G.n
    for i, v in enumerate(order):
        pos[v] = i
    return all(pos[G.tail[e]] < pos[G.head[e]] for e in G.edges())


# text formats


def _lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode()
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        yield no, s


def _pair(no, s):
    parts = s.split()
    if len(parts) != 2:
        raise ParseError(no, f"expected two integers, got {s!r}")
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(no, f"expected two integers, got {s!r}") from None
    if u < 0 or v < 0:
        raise ParseError(no, "vertex ids must be non-negative")
    return u, v


def parse_edge_list(text) -> DiGraph:
    """Parse "u v" lines with an optional leading "n m" header.

    The first line is read as a header when n >= 1 and m equals the number of
    remaining edge lines; otherwise it is an ordinary edge.
    """
    rows = [(no, _pair(no, s)) for no, s in _lines(text)]
    n_hdr = None
    if rows:
        (no0, (a, b)) = rows[0]
        if a >= 1 and b == len(rows) - 1:
            n_hdr = a
            rows = rows[1:]
    if n_hdr is None:
        n = 1 + max((max(u, v) for _, (u, v) in rows), default=-1)
    else:
        n = n_hdr
        for no, (u, v) in rows:
            if u >= n or v >= n:
                raise BoundsError(f"line {no}: vertex id >= header n={n}")
    G = DiGraph(n)
    for _, (u, v) in rows:
        G.add_edge(u, v)
    return G


def parse_deletions(text) -> list[int]:
    out = []
    for no, s in _lines(text):
        try:
            e = int(s)
        except ValueError:
            raise ParseError(no, f"expected an edge id, got {s!r}") from None
        if e < 0:
            raise ParseError(no, "edge ids must be non-negative")
        out.append(e)
    return out


def format_edge_list(G) -> str:
    """Header plus alive edges in id order (ids renumber on re-parse)."""
    edges = G.edge_list()
    lines = [f"{G.n} {len(edges)}"]
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"
