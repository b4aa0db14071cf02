"""Witness graphs: an expander W on the host's vertex ids, embedded into the
host by one path of host edge ids per W-edge.

Self-loops of W carry empty paths and congest nothing.  Congestion counts
only alive W-edges; the per-host-edge user lists are pruned lazily.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import SizeError, WitnessError
from .expansion import MAX_EXACT_N, out_expansion
from .graph import DiGraph
from .report import Report


class Witness:
    def __init__(self, n: int):
        self.W = DiGraph(n)
        self.paths: list[tuple] = []
        self.cong: dict[int, int] = {}
        self.users: dict[int, list[int]] = {}

    @classmethod
    def identity(cls, G, vertices=None):
        """W = G (restricted to `vertices`), each edge embedded onto itself."""
        w = cls(G.n)
        keep = None if vertices is None else set(vertices)
        for e in G.edges():
            a, b = G.tail[e], G.head[e]
            if keep is not None and (a not in keep or b not in keep):
                continue
            w.add_edge(a, b, () if a == b else (e,))
        return w

    @property
    def n(self):
        return self.W.n

    def add_edge(self, u: int, v: int, path=()) -> int:
        path = tuple(path)
        if u == v and path:
            raise WitnessError("self-loops of a witness carry empty paths")
        wid = self.W.add_edge(u, v)
        self.paths.append(path)
        for e in path:
            self.cong[e] = self.cong.get(e, 0) + 1
            self.users.setdefault(e, []).append(wid)
        return wid

    def kill(self, wid: int) -> bool:
        if not self.W.alive[wid]:
            return False
        self.W.kill_edge(wid)
        for e in self.paths[wid]:
            c = self.cong[e] - 1
            if c:
                self.cong[e] = c
            else:
                del self.cong[e]
        return True

    def alive_edges(self):
        return list(self.W.edges())

    def degree(self, v) -> int:
        return self.W.deg[v]

    def users_of(self, e):
        alive = self.W.alive
        lst = self.users.get(e)
        if not lst:
            return []
        live = [w for w in lst if alive[w]]
        if len(live) != len(lst):
            if live:
                self.users[e] = live
            else:
                del self.users[e]
        return live

    def preimage(self, D) -> list[int]:
        """Alive W-edges whose path uses some host edge of D (ascending)."""
        out = set()
        for e in D:
            out.update(self.users_of(e))
        return sorted(out)

    def preimage_degree(self, D) -> list[int]:
        deg = [0] * self.n
        tail, head = self.W.tail, self.W.head
        for w in self.preimage(D):
            deg[tail[w]] += 1
            deg[head[w]] += 1
        return deg

    def remove_witness_edges(self, D) -> list[int]:
        gone = self.preimage(D)
        for w in gone:
            self.kill(w)
        return gone

    def restrict(self, vertices, G) -> list[int]:
        """Kill W-edges leaving `vertices` or whose path leaves G[vertices]."""
        inside = bytearray(self.n)
        for v in vertices:
            inside[v] = 1
        gone = []
        tail, head = self.W.tail, self.W.head
        for w in self.alive_edges():
            if not (inside[tail[w]] and inside[head[w]]):
                gone.append(w)
                continue
            for e in self.paths[w]:
                if not (inside[G.tail[e]] and inside[G.head[e]]):
                    gone.append(w)
                    break
        for w in gone:
            self.kill(w)
        return gone

    def remove_vertices(self, S, G) -> list[int]:
        """Kill W-edges touching S or whose path touches S."""
        inS = set(S)
        cand = set()
        for v in inS:
            cand.update(self.W.out_edges(v))
            cand.update(self.W.in_edges(v))
            for e in G.out_inc[v] if hasattr(G, "out_inc") else G.out_edges(v):
                cand.update(self.users_of(e))
            for e in G.in_inc[v] if hasattr(G, "in_inc") else G.in_edges(v):
                cand.update(self.users_of(e))
        gone = sorted(w for w in cand if self.W.alive[w])
        for w in gone:
            self.kill(w)
        return gone

    def max_congestion(self) -> int:
        return max(self.cong.values(), default=0)

    def copy(self) -> "Witness":
        w = Witness.__new__(Witness)
        w.W = self.W.copy()
        w.paths = list(self.paths)
        w.cong = dict(self.cong)
        w.users = {e: list(l) for e, l in self.users.items()}
        return w

    def relabel(self, vertex_map, edge_map, n):
        """New witness with vertex ids through vertex_map (dict or list) and
        host edge ids through edge_map; only alive W-edges are kept."""
        out = Witness(n)
        for w in self.alive_edges():
            out.add_edge(vertex_map[self.W.tail[w]], vertex_map[self.W.head[w]],
                         [edge_map[e] for e in self.paths[w]])
        return out

    def reversed_(self) -> "Witness":
        """Same embedding seen in the reversed host: every edge and path flips."""
        out = Witness(self.n)
        for w in self.alive_edges():
            out.add_edge(self.W.head[w], self.W.tail[w], list(reversed(self.paths[w])))
        return out

    def to_dict(self):
        return {"n": self.n,
                "w_edges": [{"tail": self.W.tail[w], "head": self.W.head[w],
                             "path": list(self.paths[w])} for w in self.alive_edges()]}

    @classmethod
    def from_dict(cls, d, n=None):
        n = d.get("n", n)
        if n is None:
            raise WitnessError("witness JSON needs a vertex count")
        w = cls(n)
        for item in d["w_edges"]:
            u, v = int(item["tail"]), int(item["head"])
            if not (0 <= u < n and 0 <= v < n):
                raise WitnessError(f"witness edge ({u},{v}) out of range")
            w.add_edge(u, v, [int(e) for e in item.get("path", [])])
        return w


class BiWitness:
    """Witness for G (fwd) and for the reversal of G (bwd), same vertex ids.

    Paths of the bwd witness are walks in the reversed graph, so they list
    host edge ids traversed against their host orientation.
    """

    def __init__(self, fwd: Witness, bwd: Witness):
        if fwd.n != bwd.n:
            raise WitnessError("the two witnesses disagree on the vertex set")
        self.fwd = fwd
        self.bwd = bwd

    @classmethod
    def identity(cls, G, vertices=None):
        return cls(Witness.identity(G, vertices), Witness.identity(G, vertices).reversed_())

    def relabel(self, vertex_map, edge_map, n):
        return BiWitness(self.fwd.relabel(vertex_map, edge_map, n),
                         self.bwd.relabel(vertex_map, edge_map, n))

    def to_dict(self):
        return {"fwd": self.fwd.to_dict(), "bwd": self.bwd.to_dict()}

    @classmethod
    def from_dict(cls, d, n=None):
        return cls(Witness.from_dict(d["fwd"], n), Witness.from_dict(d["bwd"], n))


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("pass expansion parameters as exact rationals, not floats")
    return Fraction(x)


def verify_witness(G, w: Witness, phi, psi, exact=False, deg_ref=None,
                   vertices=None, limit=MAX_EXACT_N) -> Report:
    """Check that (w.W, w.paths) is a psi-out-witness certifying phi for G.

    G may be a view.  deg_ref, when given, replaces deg_G in the upper degree
    bound deg_W <= deg_ref / psi (pruned witnesses are bounded against the
    degrees of the graph they were built for).  `vertices` restricts the check
    to a vertex subset; W must have no edges outside it.
    """
    phi = as_fraction(phi)
    psi = as_fraction(psi)
    rep = Report()
    n = G.n
    if vertices is None:
        mask = getattr(G, "mask", None)
        verts = [v for v in range(n) if mask is None or mask[v]]
    else:
        verts = sorted(set(vertices))
    inside = bytearray(max(n, w.n))
    for v in verts:
        inside[v] = 1
    if exact and len(verts) > limit:
        raise SizeError(f"exact witness check limited to {limit} vertices, got {len(verts)}")

    # (a) paths
    bad_path = None
    recount: dict[int, int] = {}
    Wt, Wh = w.W.tail, w.W.head
    for wid in w.alive_edges():
        u, v = Wt[wid], Wh[wid]
        path = w.paths[wid]
        if not (inside[u] and inside[v]):
            bad_path = bad_path or (wid, "endpoint outside the vertex set")
            continue
        if u == v:
            if path:
                bad_path = bad_path or (wid, "self-loop with a nonempty path")
            continue
        if not path:
            bad_path = bad_path or (wid, "empty path")
            continue
        cur = u
        seen = {u}
        for e in path:
            if not 0 <= e < len(G.tail) or not G.is_alive(e):
                bad_path = bad_path or (wid, f"host edge {e} not alive")
                break
            if G.tail[e] != cur:
                bad_path = bad_path or (wid, f"host edge {e} does not continue the walk")
                break
            cur = G.head[e]
            if cur in seen:
                bad_path = bad_path or (wid, "path is not simple")
                break
            seen.add(cur)
        else:
            if cur != v:
                bad_path = bad_path or (wid, "path ends at the wrong vertex")
        for e in path:
            recount[e] = recount.get(e, 0) + 1
    rep.add("witness.paths", bad_path is None,
            where=None if bad_path is None else f"w-edge {bad_path[0]}: {bad_path[1]}")

    # (b) congestion
    cmax = max(recount.values(), default=0)
    bound = psi / phi
    rep.add("witness.congestion", cmax <= bound, cmax, bound)
    rep.add("witness.congestion_index", recount == w.cong)

    # (c) degree sandwich
    low_bad = high_bad = None
    for v in verts:
        dG = G.degree(v)
        dW = w.W.deg[v] if v < w.n else 0
        ref = deg_ref[v] if deg_ref is not None else dG
        if dW < dG and low_bad is None:
            low_bad = (v, dW, dG)
        if psi * dW > ref and high_bad is None:
            high_bad = (v, dW, Fraction(ref) / psi)
    rep.add("witness.degree_lower", low_bad is None,
            None if low_bad is None else low_bad[1],
            None if low_bad is None else low_bad[2],
            None if low_bad is None else f"vertex {low_bad[0]}")
    rep.add("witness.degree_upper", high_bad is None,
            None if high_bad is None else high_bad[1],
            None if high_bad is None else high_bad[2],
            None if high_bad is None else f"vertex {high_bad[0]}")

    # (d) expansion of W
    if exact:
        r = out_expansion(w.W, verts, limit)
        rep.add("witness.expansion", r is None or r >= psi,
                "inf" if r is None else r, psi)
    return rep


def verify_biwitness(G, bw: BiWitness, phi, psi, exact=False, deg_ref=None,
                     vertices=None, limit=MAX_EXACT_N) -> Report:
    from .graph import reverse
    rep = Report()
    rep.extend(verify_witness(G, bw.fwd, phi, psi, exact, deg_ref, vertices, limit), "fwd.")
    rep.extend(verify_witness(reverse(G), bw.bwd, phi, psi, exact, deg_ref, vertices, limit),
               "bwd.")
    return rep
