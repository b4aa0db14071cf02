"""Static and dynamic expander decompositions.

A decomposition is an ordered list of clusters plus a set E^r of removed
edges such that every cluster induces an expander (certified by a
BiWitness) and, after dropping E^r, every edge between clusters goes
forward in the order.

Each non-trivial cluster keeps its witness in a local frame: vertex i of
the frame is host vertex frame_v[i], edge j is host edge frame_e[j].  The
frame is fixed when the cluster is created; later deletions only kill
frame edges and shrink the member set.
"""

from __future__ import annotations

import logging
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle as _oracle
from .errors import (BudgetExceeded, ContractViolation, InputError, OracleFailure,
                     RestartRequired, SizeError, WitnessError)
from .expansion import MAX_EXACT_N
from .graph import DiGraph, GraphView, cut_stats, edges_between, strong_components, subgraph
from .pruning import CORE, BiPruningState
from .witness import BiWitness, as_fraction, verify_biwitness

log = logging.getLogger(__name__)


@dataclass
class DecompConfig:
    oracle: object = "auto"       # auto | brute | cutmatching | callable(G, phi, ocfg)
    c1: Fraction = Fraction(1)    # beta = c1 ln^6 m
    c_restart: Fraction = Fraction(1, 4)
    strong_components: bool = True
    oracle_cfg: _oracle.OracleConfig = field(default_factory=_oracle.OracleConfig)
    kernels: object = None

    def __post_init__(self):
        if not callable(self.oracle) and self.oracle not in ("auto", "brute", "cutmatching"):
            raise InputError(f"unknown oracle {self.oracle!r}")
        self.c1 = as_fraction(self.c1)
        self.c_restart = as_fraction(self.c_restart)


@dataclass
class Cluster:
    frame_v: list                  # host vertex per frame vertex
    frame_e: list                  # host edge per frame edge
    members: list                  # frame vertices still in the cluster
    bw: BiWitness | None = None    # in frame ids; None for trivial clusters
    phi: Fraction | None = None
    psi: Fraction | None = None
    deg_ref: list | None = None    # reference degrees for the witness upper bound
    uid: int = -1                  # assigned by the owning decomposition
    state: BiPruningState | None = field(default=None, repr=False)
    _eidx: dict | None = field(default=None, repr=False)

    @property
    def trivial(self) -> bool:
        return self.bw is None and self.state is None

    @property
    def vertices(self) -> list[int]:
        fv = self.frame_v
        return sorted(fv[i] for i in self.members)

    def edge_index(self, e):
        if self._eidx is None:
            self._eidx = {h: j for j, h in enumerate(self.frame_e)}
        return self._eidx.get(e)

    def frame_graph(self, G) -> DiGraph:
        """Frame as a DiGraph; frame edges dead in G are killed."""
        loc = {v: i for i, v in enumerate(self.frame_v)}
        F = DiGraph(len(self.frame_v))
        for e in self.frame_e:
            F.add_edge(loc[G.tail[e]], loc[G.head[e]])
        for j, e in enumerate(self.frame_e):
            if not G.is_alive(e):
                F.kill_edge(j)
        return F

    def witness(self) -> BiWitness | None:
        if self.state is not None:
            return self.state.extract_witness()
        return self.bw

    def to_dict(self):
        d = {"id": self.uid, "vertices": self.vertices}
        bw = self.witness()
        if bw is not None:
            d["frame_vertices"] = list(self.frame_v)
            d["frame_edges"] = list(self.frame_e)
            d["phi"] = str(self.phi)
            d["psi"] = str(self.psi)
            if self.deg_ref is not None:
                d["deg_ref"] = list(self.deg_ref)
            d["witness"] = bw.to_dict()
        return d

    @classmethod
    def from_dict(cls, d):
        verts = sorted(d["vertices"])
        if "witness" not in d:
            return cls(verts, [], list(range(len(verts))), uid=d["id"])
        fv = list(d["frame_vertices"])
        loc = {v: i for i, v in enumerate(fv)}
        try:
            members = sorted(loc[v] for v in verts)
        except KeyError as exc:
            raise InputError(f"cluster {d['id']}: vertex {exc} outside its frame") from None
        bw = BiWitness.from_dict(d["witness"], len(fv))
        return cls(fv, list(d["frame_edges"]), members, bw, as_fraction(d["phi"]),
                   as_fraction(d["psi"]), d.get("deg_ref"), uid=d["id"])


def _trivial(v) -> Cluster:
    return Cluster([v], [], [0])


@dataclass
class ExpanderDecomposition:
    host: DiGraph
    clusters: list                 # Cluster, in DAG order
    er: set                        # host edge ids
    beta: Fraction
    phi: Fraction
    psi: Fraction
    phi_input: Fraction
    deleted: set = field(default_factory=set)
    work: int = 0
    oracle_calls: int = 0
    next_uid: int = 0

    def number(self, clusters):
        """Give fresh ids, in order, to clusters that have none."""
        for c in clusters:
            if c.uid < 0:
                c.uid = self.next_uid
                self.next_uid += 1

    def cluster_of(self) -> list[int]:
        out = [-1] * self.host.n
        for i, c in enumerate(self.clusters):
            for v in c.vertices:
                out[v] = i
        return out

    def quality(self):
        return self.beta, self.phi, self.psi

    def refresh_params(self):
        """Decomposition-level (phi, psi): psi is the least cluster psi and
        phi = psi / (largest declared psi_c / phi_c), so every cluster's
        witness satisfies the congestion bound at the global values."""
        cs = [c for c in self.clusters if not c.trivial]
        if not cs:
            self.psi = Fraction(1, 2)
            self.phi = self.phi_input
            return
        self.psi = min(c.psi for c in cs)
        ratio = max(c.psi / c.phi for c in cs)
        self.phi = self.psi / ratio

    def current_graph(self) -> DiGraph:
        G = self.host.copy()
        for e in self.deleted:
            if G.alive[e]:
                G.kill_edge(e)
        return G

    def shape(self):
        """Light copy for refinement checks: (cluster vertex tuples, E^r)."""
        return [tuple(c.vertices) for c in self.clusters], frozenset(self.er)

    def to_dict(self):
        return {
            "params": {"beta": str(self.beta), "phi": str(self.phi),
                       "psi": str(self.psi), "phi_input": str(self.phi_input)},
            "order": [c.uid for c in self.clusters],
            "clusters": [c.to_dict() for c in self.clusters],
            "e_r": sorted(self.er),
            "deleted": sorted(self.deleted),
        }

    @classmethod
    def from_dict(cls, d, host: DiGraph):
        try:
            p = d["params"]
            clusters = {c["id"]: Cluster.from_dict(c) for c in d["clusters"]}
            order = [clusters[i] for i in d["order"]]
            if len(order) != len(clusters):
                raise InputError("order does not list every cluster once")
            out = cls(host, order, set(d["e_r"]), as_fraction(p["beta"]),
                      as_fraction(p["phi"]), as_fraction(p["psi"]),
                      as_fraction(p.get("phi_input", p["phi"])),
                      set(d.get("deleted", ())))
            out.next_uid = 1 + max((c.uid for c in order), default=-1)
            return out
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"malformed decomposition: {exc!r}") from None


def beta_for(m, cfg: DecompConfig) -> Fraction:
    # three decimals, rounded down so the bound is never loosened
    return cfg.c1 * Fraction(math.floor(math.log(max(m, 2)) ** 6 * 1000), 1000)


# static


def _seed(root, vertices):
    data = ",".join(map(str, vertices)).encode()
    return (root * 1_000_003 + zlib.crc32(data)) & 0x7FFFFFFF


class _Builder:
    def __init__(self, G, phi, cfg: DecompConfig):
        self.G = G
        self.phi = phi
        self.cfg = cfg
        self.er: set[int] = set()
        self.work = 0
        self.calls = 0

    def run(self, X) -> list[Cluster]:
        out: list[Cluster] = []
        # explicit stack of pending items; a list entry is a vertex set to
        # decompose, a Cluster is final.  Items are emitted left to right.
        stack = [("set", sorted(X))]
        while stack:
            kind, item = stack.pop()
            if kind == "cluster":
                out.append(item)
                continue
            children = self.split(item)
            for ch in reversed(children):
                stack.append(ch)
        return out

    def split(self, X):
        """One decomposition step on G[X]: returns ordered children."""
        if len(X) == 1:
            return [("cluster", _trivial(X[0]))]
        H, vmap, emap = subgraph(self.G, X)
        if H.e_count() == 0:
            return [("cluster", _trivial(v)) for v in vmap]
        if self.cfg.strong_components:
            comps = strong_components(H)
            if len(comps) > 1:
                return [("set", [vmap[i] for i in c]) for c in comps]
        return self.oracle_step(H, vmap, emap)

    def _call(self, H, seed, which):
        ocfg = self.cfg.oracle_cfg
        cfg = _oracle.OracleConfig(**{**ocfg.__dict__, "seed": seed})
        self.calls += 1
        if callable(which):
            res = which(H, self.phi, cfg)
            self.work += res.work
            return res
        if which == "brute":
            if H.n > cfg.n_bf:
                cfg.n_bf = min(max(H.n, cfg.n_bf), MAX_EXACT_N)
            self.work += 1 << H.n
            return _oracle.brute_force_oracle(H, self.phi, cfg)
        res = _oracle.cut_matching_oracle(H, self.phi, cfg, kernels=self.cfg.kernels)
        self.work += res.work
        return res

    def oracle_step(self, H, vmap, emap):
        cfg = self.cfg
        ocfg = cfg.oracle_cfg
        if callable(cfg.oracle):
            which = cfg.oracle
        elif cfg.oracle == "brute" or (cfg.oracle == "auto" and H.n <= ocfg.n_bf):
            which = "brute"
        else:
            which = "cutmatching"
        seed = _seed(ocfg.seed, vmap)
        last = None
        for attempt in range(ocfg.retries + 1):
            try:
                res = self._call(H, seed + attempt, which)
                if isinstance(res, _oracle.BalancedCut):
                    return self.on_cut(H, vmap, emap, res.A)
                return self.on_certified(H, vmap, emap, res)
            except (OracleFailure, BudgetExceeded) as exc:
                self.work += getattr(exc, "work", 0)
                log.debug("oracle failure on %d vertices: %s", H.n, exc)
                last = exc
                if getattr(exc, "cut", None) is not None and exc.cut[0]:
                    A, r = exc.cut
                    if r is not None and r <= _oracle.sparsity_bound(H.e_count(), self.phi,
                                                                      ocfg):
                        return self.on_cut(H, vmap, emap, A)
        if H.n <= MAX_EXACT_N and which != "brute":
            try:
                res = self._call(H, seed, "brute")
                if isinstance(res, _oracle.BalancedCut):
                    return self.on_cut(H, vmap, emap, res.A)
                return self.on_certified(H, vmap, emap, res)
            except (OracleFailure, BudgetExceeded) as exc:
                last = exc
        # last resort: the sparsest cut the oracle saw, whatever its balance
        cut = getattr(last, "cut", None)
        if cut is not None and cut[0] and len(cut[0]) < H.n:
            return self.on_cut(H, vmap, emap, cut[0])
        raise last

    def on_cut(self, H, vmap, emap, A):
        st = cut_stats(H, A)
        inA = set(A)
        B = [v for v in range(H.n) if v not in inA]
        # the sparse direction goes to E^r; the other direction fixes the order
        if st.e_fwd <= st.e_bwd:
            first, second = B, list(A)
        else:
            first, second = list(A), B
        for e in edges_between(H, second, first):
            self.er.add(emap[e])
        return [("set", [vmap[i] for i in first]), ("set", [vmap[i] for i in second])]

    def on_certified(self, H, vmap, emap, res):
        host = res.host
        if not res.fake:
            c = Cluster(list(vmap), list(emap), list(range(H.n)), res.bw, res.phi, res.psi)
            return [("cluster", c)]
        st = BiPruningState(host, res.bw, res.phi, res.psi, check=False,
                            kernels=self.cfg.kernels)
        st.remove_edges(res.fake_ids)
        self.work += st.work
        nreal = len(emap)
        for e in st.cut_edges:
            if e < nreal:
                self.er.add(emap[e])
        out = []
        for piece in st.order():
            if piece is CORE:
                core = st.vertices()
                if core:
                    out.append(("cluster", _core_cluster(H, vmap, emap, core, st)))
            else:
                out.append(("set", [vmap[i] for i in piece]))
        return out


def _core_cluster(H, vmap, emap, core, st: BiPruningState) -> Cluster:
    """Cluster for the surviving core of a pruned certified graph, with the
    extracted witness moved into the core's own frame.  The declared psi is
    the pruned-witness value, lowered if needed so the degree upper bound
    holds against the core's own degrees."""
    bw = st.extract_witness()
    Hc, cmap, cemap = subgraph(GraphView(H, core), core)
    vloc = {v: i for i, v in enumerate(cmap)}
    eloc = {e: j for j, e in enumerate(cemap)}
    bw = bw.relabel(vloc, eloc, len(cmap))
    psi = st.psi ** 2 / 20
    for w in (bw.fwd, bw.bwd):
        for v in range(Hc.n):
            dW = w.W.deg[v]
            if dW and psi * dW > Hc.deg[v]:
                psi = Fraction(Hc.deg[v], dW)
    cong = max(bw.fwd.max_congestion(), bw.bwd.max_congestion(), 1)
    return Cluster([vmap[v] for v in cmap], [emap[e] for e in cemap],
                   list(range(len(cmap))), bw, psi / cong, psi)


def expander_decomposition(G, phi, cfg: DecompConfig | None = None) -> ExpanderDecomposition:
    """Static decomposition of G (alive edges only)."""
    cfg = cfg or DecompConfig()
    phi = as_fraction(phi)
    if not 0 < phi <= 1:
        raise InputError("phi must be in (0, 1]")
    b = _Builder(G, phi, cfg)
    clusters = b.run(range(G.n)) if G.n else []
    m = G.e_count()
    d = ExpanderDecomposition(G, clusters, b.er, beta_for(m, cfg), phi, Fraction(1, 2), phi,
                              work=b.work, oracle_calls=b.calls)
    d.number(clusters)
    d.refresh_params()
    return d


# dynamic


class DynamicDecomposition:
    """Maintains a decomposition of G under edge deletions.

    Deletions inside a cluster go to that cluster's bidirected pruning
    state; pruned pieces are decomposed from scratch and spliced in next to
    the cluster's core.  The pruning states are built on first use.
    """

    def __init__(self, decomp: ExpanderDecomposition, cfg: DecompConfig | None = None,
                 check=True):
        self.cfg = cfg or DecompConfig()
        self.d = decomp
        self.G = decomp.current_graph()
        self.count = 0
        self.beta0, self.phi0, self.psi0 = decomp.beta, decomp.phi, decomp.psi
        self.threshold = max(1, math.ceil(self.cfg.c_restart * self.phi0 * self.psi0
                                          * self.G.e_count()))
        self.prunes = 0
        if check:
            for c in decomp.clusters:
                if c.trivial:
                    continue
                F = c.frame_graph(self.G)
                rep = verify_biwitness(F, c.bw, c.phi, c.psi, deg_ref=c.deg_ref)
                if not rep.ok:
                    raise WitnessError(f"cluster {c.uid}: invalid witness\n{rep}")
        self._owner = decomp.cluster_of()

    @property
    def work(self):
        return self.d.work

    def remove_edge(self, e) -> str:
        """Delete host edge e.  Returns what happened: "er", "between",
        "loop" or "cluster".  Raises RestartRequired when the epoch's budget
        is used up or a pruning guard would be breached (nothing changes)."""
        G, d = self.G, self.d
        if not (0 <= e < G.num_ids) or not G.alive[e]:
            raise InputError(f"edge {e} is not alive")
        if self.count >= self.threshold:
            raise RestartRequired(f"restart threshold {self.threshold} reached")
        a, b = G.tail[e], G.head[e]
        ca, cb = self._owner[a], self._owner[b]
        if e in d.er or ca != cb or d.clusters[ca].trivial:
            kind = "er" if e in d.er else ("between" if ca != cb else "loop")
            self._tombstone(e)
            return kind
        c = d.clusters[ca]
        j = c.edge_index(e)
        if c.state is None:
            F = c.frame_graph(G)
            c.state = BiPruningState(F, c.bw, c.phi, c.psi, check=False,
                                     kernels=self.cfg.kernels)
            c._nb = c._na = 0
        if not c.state.guard_ok([j]):
            raise RestartRequired(f"cluster {c.uid}: pruning budget exceeded")
        before = c.state.work
        c.state.remove_edges([j])
        d.work += c.state.work - before
        self._tombstone(e)
        self._after_prune(c)
        return "cluster"

    def _tombstone(self, e):
        self.G.kill_edge(e)
        self.d.deleted.add(e)
        self.d.er.discard(e)
        self.count += 1

    def _after_prune(self, c: Cluster):
        d, st = self.d, c.state
        fv, fe = c.frame_v, c.frame_e
        for j in st.cut_edges:
            e = fe[j]
            if self.G.alive[e]:
                d.er.add(e)
        new_before = st.before[c._nb:]
        new_after = st.after[c._na:]
        c._nb, c._na = len(st.before), len(st.after)
        if not new_before and not new_after:
            return
        self.prunes += len(new_before) + len(new_after)
        c.members = st.vertices()
        c.phi = st.phi * st.psi ** 4 / 400
        c.psi = st.psi ** 2 / 20
        c.deg_ref = st.fwd.deg0
        b = _Builder(self.G, d.phi_input, self.cfg)
        pre = [x for P in new_before for x in b.run([fv[i] for i in P])]
        post = [x for P in reversed(new_after) for x in b.run([fv[i] for i in P])]
        d.work += b.work
        d.oracle_calls += b.calls
        d.er |= b.er
        i = d.clusters.index(c)
        core = [c] if c.members else []
        d.clusters[i:i + 1] = pre + core + post
        d.number(pre + post)
        self._owner = d.cluster_of()


@dataclass
class Snapshot:
    index: int            # deletions processed so far
    epoch: int
    event: str            # init | restart | er | between | loop | cluster
    edge: int | None
    decomp: ExpanderDecomposition     # live object; valid until the next step
    shape: tuple                      # (cluster vertex tuples, E^r) copy
    deleted: frozenset
    work: int


def maintain(G: DiGraph, phi, deletions, cfg: DecompConfig | None = None):
    """Yield a Snapshot for the initial decomposition and after every
    deletion.  A restart recomputes the decomposition of the current graph
    from scratch and starts a new epoch; refinement holds within an epoch."""
    cfg = cfg or DecompConfig()
    cur = G.copy()
    deleted: set[int] = set()
    total_work = 0

    def fresh():
        d = expander_decomposition(cur.copy(), phi, cfg)
        d.deleted = set(deleted)
        return d

    d = fresh()
    total_work += d.work
    dyn = DynamicDecomposition(d, cfg, check=False)
    epoch = 0
    yield Snapshot(0, epoch, "init", None, d, d.shape(), frozenset(deleted), total_work)
    for k, e in enumerate(deletions, 1):
        if not (0 <= e < cur.num_ids) or not cur.alive[e]:
            raise InputError(f"deletion {k}: edge {e} is not alive")
        w0 = d.work
        try:
            kind = dyn.remove_edge(e)
            total_work += d.work - w0
        except RestartRequired as exc:
            log.info("restart after %d deletions: %s", k - 1, exc)
            cur.kill_edge(e)
            deleted.add(e)
            d = fresh()
            total_work += d.work
            dyn = DynamicDecomposition(d, cfg, check=False)
            epoch += 1
            kind = "restart"
        else:
            cur.kill_edge(e)
            deleted.add(e)
        yield Snapshot(k, epoch, kind, e, d, d.shape(), frozenset(deleted), total_work)


# snapshot deltas


def shape_delta(old, new) -> dict:
    """Difference between two shapes (see ExpanderDecomposition.shape):
    the run of clusters that changed, as (start, stop, replacement), and the
    E^r edges added and removed."""
    oc, oer = old
    nc, ner = new
    i = 0
    while i < min(len(oc), len(nc)) and oc[i] == nc[i]:
        i += 1
    j = 0
    while j < min(len(oc), len(nc)) - i and oc[-1 - j] == nc[-1 - j]:
        j += 1
    d = {"er_added": sorted(ner - oer), "er_removed": sorted(oer - ner)}
    if i < len(oc) or i < len(nc):
        d["clusters"] = [i, len(oc) - j, [list(x) for x in nc[i:len(nc) - j]]]
    return d


def apply_delta(shape, delta):
    clusters, er = shape
    clusters = list(clusters)
    if "clusters" in delta:
        a, b, repl = delta["clusters"]
        clusters[a:b] = [tuple(x) for x in repl]
    er = (set(er) | set(delta["er_added"])) - set(delta["er_removed"])
    return clusters, frozenset(er)
