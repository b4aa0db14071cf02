"""Incremental bounded-height push-relabel / pull-relabel flow engine.

A FlowState holds a preflow on a directed multigraph with integer edge
capacities, a source amount and a sink capacity per vertex, and a level per
vertex in [0, h].  Sources can grow, and vertices or edges can be removed.
After every operation the state is valid:

  * 0 <= flow(e) <= cap(e) for every edge,
  * positive excess only on level-h vertices, or vertices whose sink is full
    (excess here means source minus net outflow minus sink),
  * a vertex whose net outflow exceeds its source sits at level 0,
  * every residual arc (v, u) has level(v) <= level(u) + 1.

Each edge carries one nonnegative flow value.  It gives two residual arcs:
forward with cap - flow and backward with flow.
"""

from __future__ import annotations

import math
from array import array

from . import _backend
from .errors import ContractViolation, InputError


def h_default(m: int, phi) -> int:
    """Default height ceil(10 ln(2m) / phi) + 2 (phi may be a Fraction)."""
    m = max(int(m), 1)
    return math.ceil(10 * math.log(2 * m) / float(phi)) + 2


class FlowState:
    """Flow state on the alive edges of `G` (edge ids kept).

    cap: int (uniform) or a per-edge-id sequence.
    source, sink: per-vertex sequences.
    vertices: initial vertex set (default: all).
    relaxed: skip the sink >= degree precondition.
    """

    def __init__(self, G, cap, source, sink, h, vertices=None, relaxed=False,
                 kernels=None):
        if h < 1:
            raise InputError("height must be at least 1")
        n = G.n
        self.G = G
        self.n = max(n, 1)
        self.h = int(h)
        self._k = kernels or _backend.kernels()
        nid = G.num_ids
        if len(source) != n or len(sink) != n:
            raise InputError("source and sink must have one entry per vertex")

        vin = bytearray(self.n)
        if vertices is None:
            for v in range(n):
                vin[v] = 1
        else:
            for v in vertices:
                vin[v] = 1
        self.vin = vin

        self.etail = array("q", G.tail)
        self.ehead = array("q", G.head)
        if isinstance(cap, int):
            if cap < 0:
                raise InputError("capacities must be nonnegative")
            self.cap = array("q", [cap]) * nid
        else:
            if len(cap) < nid:
                raise InputError("capacity vector too short")
            self.cap = array("q", (int(c) for c in cap[:nid]))
            if any(c < 0 for c in self.cap):
                raise InputError("capacities must be nonnegative")
        self.flow = array("q", bytes(8 * nid))
        ealive = bytearray(nid)
        for e in G.edges():
            if vin[G.tail[e]] and vin[G.head[e]]:
                ealive[e] = 1
        self.ealive = ealive

        gdeg = array("q", bytes(8 * self.n))
        buckets = [[] for _ in range(self.n)]
        self.loops = [[] for _ in range(self.n)]
        for e in range(nid):
            if ealive[e]:
                a, b = G.tail[e], G.head[e]
                gdeg[a] += 1
                gdeg[b] += 1
                if a != b:
                    buckets[a].append((e, 1))
                    buckets[b].append((e, 0))
                else:
                    self.loops[a].append(e)
        self.gdeg = gdeg
        adj_start = array("q", [0]) * (self.n + 1)
        adj_edge = array("q")
        adj_out = bytearray()
        for v in range(self.n):
            lst = buckets[v]
            lst.sort()
            for e, o in lst:
                adj_edge.append(e)
                adj_out.append(o)
            adj_start[v + 1] = len(adj_edge)
        self.adj_start = adj_start
        self.adj_edge = adj_edge
        self.adj_out = adj_out

        self.src = array("q", [0]) * self.n
        self.sink = array("q", [0]) * self.n
        for v in range(n):
            s, t = int(source[v]), int(sink[v])
            if s < 0 or t < 0:
                raise InputError("source and sink must be nonnegative")
            if not vin[v]:
                continue
            if not relaxed and t < gdeg[v]:
                raise ContractViolation(
                    f"sink capacity {t} of vertex {v} is below its degree {gdeg[v]}")
            self.src[v] = s
            self.sink[v] = t
        self.relaxed = relaxed
        self.net = array("q", [0]) * self.n
        self.level = array("q", [0]) * self.n
        self.cur = array("q", [0]) * self.n
        self.stamp = array("q", [0]) * self.n
        # pushes, pulls, relabels, relabel work, phase stamp
        self.ctr = array("q", [0, 0, 0, 0, 0])
        self.total_source = sum(self.src)
        self.removal_cost = 0
        self._k.push_relabel(self, [v for v in range(n) if self.src[v] > 0])

    # operations

    def increase_source(self, delta) -> None:
        """Add delta[v] to the source of v; delta is a dict or a sequence."""
        items = delta.items() if isinstance(delta, dict) else enumerate(delta)
        touched = []
        for v, d in items:
            d = int(d)
            if d == 0:
                continue
            if d < 0:
                raise ContractViolation("source increments must be nonnegative")
            if not (0 <= v < self.G.n) or not self.vin[v]:
                raise ContractViolation(f"source added to removed vertex {v}")
            touched.append((v, d))
        for v, d in touched:
            self.src[v] += d
            self.total_source += d
        self._k.push_relabel(self, [v for v, _ in touched])

    def remove_vertices(self, S) -> None:
        """Drop S from the vertex set; flow on edges touching S is discarded."""
        S = sorted({v for v in S if 0 <= v < self.G.n and self.vin[v]})
        if not S:
            return
        inS = set(S)
        c_in = c_out = 0
        touched = set()
        for v in S:
            self.removal_cost += self.sink[v]
        for v in S:
            for k in range(self.adj_start[v], self.adj_start[v + 1]):
                e = self.adj_edge[k]
                if not self.ealive[e]:
                    continue
                u = self.ehead[e] if self.adj_out[k] else self.etail[e]
                if u not in inS:
                    if self.adj_out[k]:
                        c_out += self.cap[e]
                    else:
                        c_in += self.cap[e]
                    touched.add(u)
        self.removal_cost += min(c_in, c_out)
        for v in S:
            for k in range(self.adj_start[v], self.adj_start[v + 1]):
                e = self.adj_edge[k]
                if self.ealive[e]:
                    self._drop_edge(e)
            for e in self.loops[v]:
                if self.ealive[e]:
                    self._drop_edge(e)
            self.vin[v] = 0
        cands = sorted(touched)
        self._k.pull_relabel(self, cands)
        self._k.push_relabel(self, cands)

    def remove_edges(self, D) -> None:
        """Delete edges; the flow they carried is cancelled at both ends."""
        touched = set()
        for e in D:
            if 0 <= e < len(self.ealive) and self.ealive[e]:
                self.removal_cost += self.cap[e]
                touched.add(self.etail[e])
                touched.add(self.ehead[e])
                self._drop_edge(e)
        cands = sorted(touched)
        self._k.pull_relabel(self, cands)
        self._k.push_relabel(self, cands)

    def _drop_edge(self, e):
        a, b = self.etail[e], self.ehead[e]
        f = self.flow[e]
        if f:
            self.net[a] -= f
            self.net[b] += f
            self.flow[e] = 0
        self.ealive[e] = 0
        self.gdeg[a] -= 1
        self.gdeg[b] -= 1

    # queries

    def vertices(self) -> list[int]:
        return [v for v in range(self.G.n) if self.vin[v]]

    def excess(self, v):
        """(positive excess, deficit) of v."""
        s, f, t = self.src[v], self.net[v], self.sink[v]
        return max(s - f - t, 0), max(f - s, 0)

    def absorbed(self, v) -> int:
        """Amount the sink of v currently holds."""
        return max(0, min(self.src[v] - self.net[v], self.sink[v]))

    def edge_flow(self, e) -> int:
        return self.flow[e] if self.ealive[e] else 0

    def positive_flow_edges(self):
        return [e for e in range(len(self.flow)) if self.ealive[e] and self.flow[e] > 0]

    @property
    def counters(self) -> dict:
        c = self.ctr
        return {"pushes": c[0], "pulls": c[1], "relabels": c[2], "relabel_work": c[3]}

    @property
    def work(self) -> int:
        c = self.ctr
        return c[0] + c[1] + c[3]

    def work_bound_terms(self) -> dict:
        """Quantities the total work is measured against."""
        return {"source": self.total_source, "removal": self.removal_cost,
                "h": self.h}

    def dump(self) -> str:
        lines = [f"h {self.h}"]
        for v in self.vertices():
            pos, neg = self.excess(v)
            lines.append(
                f"v {v} level={self.level[v]} src={self.src[v]} sink={self.sink[v]}"
                f" pos={pos} neg={neg}")
        for e in range(len(self.ealive)):
            if self.ealive[e]:
                lines.append(
                    f"e {e} {self.etail[e]}->{self.ehead[e]} flow={self.flow[e]}"
                    f" cap={self.cap[e]}")
        return "\n".join(lines) + "\n"


def check_valid_state(st: FlowState) -> list[str]:
    """List every violated validity condition (empty when valid).

    Recomputes net flow from the edge flows; does not trust stored totals.
    """
    bad = []
    n = st.G.n
    net = [0] * n
    deg = [0] * n
    for e in range(len(st.ealive)):
        if not st.ealive[e]:
            continue
        a, b = st.etail[e], st.ehead[e]
        if not (st.vin[a] and st.vin[b]):
            bad.append(f"edge {e} alive with a removed endpoint")
            continue
        f, c = st.flow[e], st.cap[e]
        if f < 0 or f > c:
            bad.append(f"capacity: edge {e} flow {f} cap {c}")
        if a != b:
            net[a] += f
            net[b] -= f
        deg[a] += 1
        deg[b] += 1
    for v in range(n):
        if not st.vin[v]:
            continue
        if net[v] != st.net[v]:
            bad.append(f"bookkeeping: vertex {v} net {st.net[v]} != {net[v]}")
        if deg[v] != st.gdeg[v]:
            bad.append(f"bookkeeping: vertex {v} degree {st.gdeg[v]} != {deg[v]}")
        lv = st.level[v]
        if not 0 <= lv <= st.h:
            bad.append(f"level: vertex {v} level {lv} outside [0,{st.h}]")
        pos = st.src[v] - net[v] - st.sink[v]
        if pos > 0 and lv != st.h:
            bad.append(f"saturation: vertex {v} excess {pos} at level {lv} < h")
        if net[v] - st.src[v] > 0 and lv != 0:
            bad.append(f"deficit: vertex {v} deficit {net[v] - st.src[v]} at level {lv}")
    for e in range(len(st.ealive)):
        if not st.ealive[e]:
            continue
        a, b = st.etail[e], st.ehead[e]
        if a == b or not (st.vin[a] and st.vin[b]):
            continue
        if st.flow[e] < st.cap[e] and st.level[a] > st.level[b] + 1:
            bad.append(f"steep: residual {a}->{b} levels {st.level[a]},{st.level[b]}")
        if st.flow[e] > 0 and st.level[b] > st.level[a] + 1:
            bad.append(f"steep: residual {b}->{a} levels {st.level[b]},{st.level[a]}")
    return bad


def decompose_paths(st: FlowState):
    """Split the flow into simple paths between vertices.

    Paths start at vertices with positive net outflow (ascending id, lowest
    edge id first) and end where net outflow is negative; flow cycles met
    on the way are cancelled.  Returns a list of
    (start, end, vertex list, edge list, amount).
    """
    G = st.G
    tail, head = st.etail, st.ehead
    rem = {e: st.flow[e] for e in st.positive_flow_edges()}
    out_adj: dict[int, list[int]] = {}
    for e in sorted(rem):
        if tail[e] != head[e]:
            out_adj.setdefault(tail[e], []).append(e)
    ptr = dict.fromkeys(out_adj, 0)

    def next_edge(v):
        lst = out_adj.get(v)
        if not lst:
            return None
        k = ptr[v]
        while k < len(lst) and rem[lst[k]] == 0:
            k += 1
        ptr[v] = k
        return lst[k] if k < len(lst) else None

    out = []
    for v in range(G.n):
        if not st.vin[v]:
            continue
        starts = st.net[v]
        while starts > 0:
            path_v = [v]
            path_e = []
            pos = {v: 0}
            while True:
                e = next_edge(path_v[-1])
                if e is None:
                    break
                u = head[e]
                if u in pos:
                    k = pos[u]
                    cyc = path_e[k:] + [e]
                    amt = min(rem[x] for x in cyc)
                    for x in cyc:
                        rem[x] -= amt
                    for x in path_v[k + 1:]:
                        del pos[x]
                    del path_v[k + 1:]
                    del path_e[k:]
                    continue
                pos[u] = len(path_v)
                path_v.append(u)
                path_e.append(e)
            if not path_e:
                raise ContractViolation(f"flow decomposition stuck at vertex {v}")
            amt = min(starts, min(rem[x] for x in path_e))
            for x in path_e:
                rem[x] -= amt
            starts -= amt
            out.append((v, path_v[-1], path_v, path_e, amt))
    return out
