"""Directed and bidirected expander pruning under edge deletions.

A DirPruningState keeps a large part of an out-expander certified while
edges are deleted.  It runs the flow engine on the current graph restricted
to the surviving vertex set, with uniform edge capacity ceil(16/(phi psi^2))
and sink deg_W.  Deleting an edge injects ceil(4/psi) units of source at both
endpoints of every witness edge whose path used it.  Whenever some vertex
reaches the top level, a level cut is pruned off.

BiPruningState runs one instance on G and one on the reversal of G and keeps
their surviving vertex sets equal.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import BudgetExceeded, ContractViolation, InputError, WitnessError
from .flow import FlowState, decompose_paths, h_default
from .graph import DiGraph, GraphView, reversed_copy
from .witness import BiWitness, Witness, as_fraction, verify_witness

CORE = "core"


def cap_unit(phi, psi) -> int:
    phi, psi = as_fraction(phi), as_fraction(psi)
    return math.ceil(Fraction(16) / (phi * psi * psi))


def src_unit(psi) -> int:
    return math.ceil(Fraction(4) / as_fraction(psi))


class DirPruningState:
    """One-direction pruning on G (a concrete DiGraph; edge ids are shared
    with the caller).  G itself is never mutated; deletions live in `deleted`.

    mode: "growth" stops PruneOrCertify when the next level adds less than a
    factor of vol(S); "literal" compares the volume of all lower levels.
    strict: use factor 1 + phi/4 instead of 1 + phi.
    """

    def __init__(self, G: DiGraph, witness: Witness, phi, psi, h=None,
                 mode="growth", strict=False, check=True, name="fwd",
                 kernels=None):
        self.phi = as_fraction(phi)
        self.psi = as_fraction(psi)
        if not (0 < self.phi and 0 < self.psi):
            raise InputError("phi and psi must be positive")
        if mode not in ("growth", "literal"):
            raise InputError(f"unknown prune mode {mode!r}")
        if check:
            rep = verify_witness(G, witness, self.phi, self.psi)
            if not rep.ok:
                raise WitnessError("witness fails structural checks:\n" + str(rep))
        self.G = G
        self.name = name
        self.mode = mode
        self.factor = 1 + (self.phi / 4 if strict else self.phi)
        self.cap_unit = cap_unit(self.phi, self.psi)
        self.src_unit = src_unit(self.psi)
        self.e0 = G.e_count()
        self.deg0 = list(G.deg)
        self.h = int(h) if h is not None else h_default(max(self.e0, 1), self.phi)
        self.orig = witness
        self.wit = witness.copy()
        self.degW = list(witness.W.deg)
        n = G.n
        self.inside = bytearray(b"\x01" * n)
        self.n_inside = n
        self.deleted: set[int] = set()
        self.pre_deleted: set[int] = set()
        self.external: set[int] = set()
        self.pruned: list[list[int]] = []
        self.cut_edges: list[int] = []
        self.events: list[dict] = []
        self.engine = FlowState(G, self.cap_unit, [0] * n, self.degW, self.h,
                                kernels=kernels)

    # budget

    def guard_terms(self, D=()):
        """(lhs, rhs) of the deletion budget (4/psi)|preimage| < e(G)/14."""
        pre = set(self.pre_deleted)
        for e in D:
            pre.update(self.orig.users.get(e, ()))
        return Fraction(4) / self.psi * len(pre), Fraction(self.e0, 14)

    def guard_ok(self, D=()) -> bool:
        lhs, rhs = self.guard_terms(D)
        return lhs < rhs

    # updates

    def remove_edges(self, D) -> None:
        D = sorted({e for e in D if e not in self.deleted})
        if not D:
            return
        for e in D:
            if not 0 <= e < self.G.num_ids or not self.G.alive[e]:
                raise ContractViolation(f"edge {e} is not an edge of the graph")
        lhs, rhs = self.guard_terms(D)
        if not lhs < rhs:
            raise BudgetExceeded(
                f"{self.name}: deletion budget exceeded ({lhs} >= {rhs})")
        for e in D:
            self.pre_deleted.update(self.orig.users.get(e, ()))
        self.deleted.update(D)
        killed = self.wit.remove_witness_edges(D)
        delta = self._endpoint_sources(killed)
        self.engine.remove_edges(D)
        self.engine.increase_source(delta)
        self.adjust_partition()

    def remove_vertices(self, S) -> None:
        """External removal: S joins the removed set, not the pruned sets."""
        S = sorted(set(S))
        for v in S:
            if not (0 <= v < self.G.n and self.inside[v]):
                raise ContractViolation(f"vertex {v} is not in the surviving set")
        if not S:
            return
        self.external.update(S)
        self._remove(S)
        self.adjust_partition()

    def _endpoint_sources(self, wedges):
        delta = {}
        tail, head = self.wit.W.tail, self.wit.W.head
        inside = self.inside
        for w in wedges:
            for v in (tail[w], head[w]):
                if inside[v]:
                    delta[v] = delta.get(v, 0) + self.src_unit
        return delta

    def _remove(self, S):
        inside = self.inside
        for v in S:
            inside[v] = 0
        self.n_inside -= len(S)
        G = self.G
        boundary = []
        for v in S:
            for e in G.in_inc[v]:
                if G.alive[e] and e not in self.deleted and inside[G.tail[e]]:
                    boundary.append(e)
        hit = self.wit.preimage(boundary)
        delta = self._endpoint_sources(hit)
        self.wit.remove_vertices(S, G)
        self.engine.remove_vertices(S)
        self.engine.increase_source(delta)

    def adjust_partition(self) -> None:
        level, h = self.engine.level, self.h
        while True:
            if not any(level[v] == h for v in self.vertices()):
                return
            S = self.prune_or_certify()
            self._record(S)
            self._remove(S)

    def _record(self, S):
        G = self.G
        inS = set(S)
        new = []
        for v in S:
            for e in G.out_inc[v]:
                if (G.alive[e] and e not in self.deleted and self.inside[G.head[e]]
                        and G.head[e] not in inS):
                    new.append(e)
        new.sort()
        self.pruned.append(list(S))
        self.cut_edges.extend(new)
        self.events.append({
            "direction": self.name, "size": len(S),
            "vol": sum(self.deg0[v] for v in S),
            "vol_cur": sum(self.engine.gdeg[v] for v in S),
            "cut_delta": len(new),
        })

    def prune_or_certify(self) -> list[int]:
        """Level cut from the top: returns a nonempty vertex set."""
        level, gdeg, h = self.engine.level, self.engine.gdeg, self.h
        buckets: dict[int, list[int]] = {}
        vols: dict[int, int] = {}
        for v in self.vertices():
            l = level[v]
            buckets.setdefault(l, []).append(v)
            vols[l] = vols.get(l, 0) + gdeg[v]
        if h not in buckets:
            raise ContractViolation("no vertex at the top level")
        total = sum(vols.values())
        S: list[int] = []
        volS = 0
        below = total
        i = h
        f = self.factor
        while True:
            S.extend(buckets.get(i, ()))
            volS += vols.get(i, 0)
            below -= vols.get(i, 0)
            i -= 1
            if i < 0:
                break
            if self.mode == "growth":
                # non-strict, so zero-volume tops (isolated vertices) stop at once
                if volS + vols.get(i, 0) <= f * volS:
                    break
            elif below < f * volS:
                break
        S.sort()
        return S

    # queries

    def vertices(self) -> list[int]:
        inside = self.inside
        return [v for v in range(self.G.n) if inside[v]]

    def current_graph(self) -> GraphView:
        """(G minus deletions) restricted to the surviving vertices."""
        H = self.G.copy()
        for e in self.deleted:
            H.kill_edge(e)
        return GraphView(H, self.vertices())

    def extract_witness(self) -> Witness:
        """Witness for the current graph built from the surviving witness
        edges plus a path decomposition of the flow."""
        eng = self.engine
        if any(eng.level[v] == self.h for v in self.vertices()):
            raise ContractViolation("a vertex sits at the top level")
        out = self.wit.copy()
        paths = decompose_paths(eng)
        k = 0
        for v in self.vertices():
            src = eng.src[v]
            added = 0
            while k < len(paths) and paths[k][0] == v:
                _, w, _, path_e, amt = paths[k]
                take = min(amt, src - added)
                for _ in range(take):
                    out.add_edge(v, w, path_e)
                added += take
                k += 1
            for _ in range(src - added):
                out.add_edge(v, v, ())
        return out

    def verify_extracted(self, exact=False, limit=20):
        """verify_witness at the pruned-witness quality (phi psi^4/400, psi^2/20)."""
        w = self.extract_witness()
        phi2 = self.phi * self.psi ** 4 / 400
        psi2 = self.psi ** 2 / 20
        return verify_witness(self.current_graph(), w, phi2, psi2, exact=exact,
                              deg_ref=self.deg0, limit=limit)

    @property
    def work(self) -> int:
        return self.engine.work


class BiPruningState:
    """Pruning in both directions on a host graph with a BiWitness.

    The pieces are kept in a topological order of the contracted graph:
    backward-pruned sets before the core, forward-pruned sets after it, with
    later prunes nearer the core.
    """

    def __init__(self, G: DiGraph, bw: BiWitness, phi, psi, h=None,
                 mode="growth", strict=False, check=True, kernels=None):
        self.G = G
        self.fwd = DirPruningState(G, bw.fwd, phi, psi, h, mode, strict, check,
                                   "fwd", kernels)
        self.bwd = DirPruningState(reversed_copy(G), bw.bwd, phi, psi, h, mode,
                                   strict, check, "bwd", kernels)
        self.phi, self.psi, self.h = self.fwd.phi, self.fwd.psi, self.fwd.h
        self.events: list[dict] = []
        self.fwd.events = self.bwd.events = self.events
        self.before: list[list[int]] = []
        self.after: list[list[int]] = []
        self._nf = self._nb = 0

    def guard_ok(self, D=()) -> bool:
        return self.fwd.guard_ok(D) and self.bwd.guard_ok(D)

    def remove_edges(self, D) -> None:
        D = sorted(set(D))
        for inst in (self.fwd, self.bwd):
            lhs, rhs = inst.guard_terms(D)
            if not lhs < rhs:
                raise BudgetExceeded(
                    f"{inst.name}: deletion budget exceeded ({lhs} >= {rhs})")
        self.fwd.remove_edges(D)
        self._collect()
        # the second instance first drops what the first one pruned, so the
        # two never prune the same vertex
        gone = [v for v in self.bwd.vertices() if not self.fwd.inside[v]]
        if gone:
            self.bwd.remove_vertices(gone)
            self._collect()
        self.bwd.remove_edges(D)
        self._collect()
        self._sync()

    def _sync(self):
        a, b = self.fwd, self.bwd
        while True:
            x = [v for v in a.vertices() if not b.inside[v]]
            y = [v for v in b.vertices() if not a.inside[v]]
            if not x and not y:
                return
            if x:
                a.remove_vertices(x)
                self._collect()
            y = [v for v in b.vertices() if not a.inside[v]]
            if y:
                b.remove_vertices(y)
                self._collect()

    def _collect(self):
        for S in self.fwd.pruned[self._nf:]:
            self.after.append(S)
        self._nf = len(self.fwd.pruned)
        for S in self.bwd.pruned[self._nb:]:
            self.before.append(S)
        self._nb = len(self.bwd.pruned)

    # merged outputs

    def vertices(self) -> list[int]:
        return [v for v in self.fwd.vertices() if self.bwd.inside[v]]

    @property
    def deleted(self):
        return self.fwd.deleted

    @property
    def pruned(self) -> list[list[int]]:
        return self.before + self.after

    @property
    def cut_edges(self) -> list[int]:
        return sorted(set(self.fwd.cut_edges) | set(self.bwd.cut_edges))

    def order(self) -> list:
        """Pieces in topological order; the core is the string CORE."""
        return list(self.before) + [CORE] + list(reversed(self.after))

    def ordered_pieces(self) -> list[list[int]]:
        out = []
        for p in self.order():
            out.append(self.vertices() if p is CORE else p)
        return out

    def extract_witness(self) -> BiWitness:
        return BiWitness(self.fwd.extract_witness(), self.bwd.extract_witness())

    def current_graph(self) -> GraphView:
        return self.fwd.current_graph()

    @property
    def work(self) -> int:
        return self.fwd.work + self.bwd.work
