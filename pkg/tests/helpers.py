"""Independent reference implementations used as test oracles."""

from fractions import Fraction
from itertools import combinations

# one PASS/FAIL line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


class RefFlow:
    """Unit-step simulation of the flow engine, written as plainly as possible.

    One relabel step changes a level by one; every iteration rescans all
    vertices and all arcs.  Slow, but shares no code with the package.
    """

    def __init__(self, n, edges, cap, src, sink, h):
        self.n = n
        self.edges = list(edges)
        self.alive = [True] * len(edges)
        self.cap = list(cap) if not isinstance(cap, int) else [cap] * len(edges)
        self.flow = [0] * len(edges)
        self.src = list(src)
        self.sink = list(sink)
        self.h = h
        self.level = [0] * n
        self.inside = [True] * n
        self.pushes = self.pulls = self.relabels = 0
        self.push_relabel()

    def deg(self, v):
        d = 0
        for e, (a, b) in enumerate(self.edges):
            if self.alive[e]:
                d += (a == v) + (b == v)
        return d

    def net(self, v):
        t = 0
        for e, (a, b) in enumerate(self.edges):
            if self.alive[e] and a != b:
                if a == v:
                    t += self.flow[e]
                if b == v:
                    t -= self.flow[e]
        return t

    def pos(self, v):
        return max(self.src[v] - self.net(v) - self.sink[v], 0)

    def neg(self, v):
        return max(self.net(v) - self.src[v], 0)

    def arcs_out(self, v):
        """Residual arcs leaving v as (edge, other end, residual, forward?)."""
        out = []
        for e, (a, b) in enumerate(self.edges):
            if not self.alive[e] or a == b:
                continue
            if a == v:
                out.append((e, b, self.cap[e] - self.flow[e], True))
            elif b == v:
                out.append((e, a, self.flow[e], False))
        return out

    def arcs_in(self, v):
        out = []
        for e, (a, b) in enumerate(self.edges):
            if not self.alive[e] or a == b:
                continue
            if b == v:
                out.append((e, a, self.cap[e] - self.flow[e], True))
            elif a == v:
                out.append((e, b, self.flow[e], False))
        return out

    def push_relabel(self):
        while True:
            act = [v for v in range(self.n)
                   if self.inside[v] and self.level[v] < self.h and self.pos(v) > 0]
            if not act:
                return
            v = min(act, key=lambda x: (self.level[x], x))
            done = False
            for e, u, r, fwd in self.arcs_out(v):
                if r > 0 and self.level[v] == self.level[u] + 1:
                    amt = min(self.pos(v), r, max(self.deg(u) - self.pos(u), 0))
                    if amt <= 0:
                        continue
                    self.flow[e] += amt if fwd else -amt
                    self.pushes += 1
                    done = True
                    break
            if not done:
                self.level[v] += 1
                self.relabels += 1

    def pull_relabel(self):
        while True:
            act = [v for v in range(self.n)
                   if self.inside[v] and self.level[v] > 0 and self.neg(v) > 0]
            if not act:
                return
            v = min(act, key=lambda x: (-self.level[x], x))
            done = False
            for e, u, r, fwd in self.arcs_in(v):
                if r > 0 and self.level[u] == self.level[v] + 1:
                    amt = min(self.neg(v), r, self.deg(u))
                    self.flow[e] += amt if fwd else -amt
                    self.pulls += 1
                    done = True
                    break
            if not done:
                self.level[v] -= 1
                self.relabels += 1

    def increase_source(self, delta):
        for v, d in delta.items():
            self.src[v] += d
        self.push_relabel()

    def remove_vertices(self, S):
        for v in S:
            self.inside[v] = False
        for e, (a, b) in enumerate(self.edges):
            if not (self.inside[a] and self.inside[b]):
                self.alive[e] = False
                self.flow[e] = 0
        self.pull_relabel()
        self.push_relabel()

    def remove_edges(self, D):
        for e in D:
            self.alive[e] = False
            self.flow[e] = 0
        self.pull_relabel()
        self.push_relabel()


def brute_out_expansion(n, edges, weight=None):
    """min over nonempty proper S with w(S) > 0 of e(S, ~S) / w(S), as a Fraction.

    weight defaults to total degree.  None when no subset qualifies.
    """
    if weight is None:
        weight = [0] * n
        for a, b in edges:
            weight[a] += 1
            weight[b] += 1
    best = None
    verts = range(n)
    for k in range(1, n):
        for S in combinations(verts, k):
            s = set(S)
            w = sum(weight[v] for v in S)
            if w <= 0:
                continue
            out = sum(1 for a, b in edges if a in s and b not in s)
            r = Fraction(out, w)
            if best is None or r < best:
                best = r
    return best


def brute_sparsest(n, edges, min_vol=0):
    """min over cuts with min(vol S, vol ~S) >= max(min_vol, 1) of
    min(e(S,~S), e(~S,S)) / min(vol S, vol ~S)."""
    deg = [0] * n
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    total = sum(deg)
    best = None
    for k in range(1, n):
        for S in combinations(range(n), k):
            s = set(S)
            vs = sum(deg[v] for v in S)
            den = min(vs, total - vs)
            if den <= 0 or den < min_vol:
                continue
            f = sum(1 for a, b in edges if a in s and b not in s)
            g = sum(1 for a, b in edges if b in s and a not in s)
            r = Fraction(min(f, g), den)
            if best is None or r < best:
                best = r
    return best
