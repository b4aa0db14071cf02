"""Cut-or-witness oracles.

Given a graph G and a target expansion phi, an oracle either certifies G
(possibly after adding a few fake edges F) with a BiWitness embedded into
G + F, or returns a balanced sparse cut.  Two implementations:

- brute_force_oracle: exact, enumerates all cuts (small graphs only).
- cut_matching_oracle: randomized cut-matching game on the endpoint split of
  G.  Each round the cut player bisects the 2m edge endpoints by a random
  projection of an averaging walk along the earlier matchings, keeping the
  endpoints of a vertex together except at the median; the matching
  player routes one unit per endpoint across the bisection, once in G and
  once in reverse(G), using the flow engine.  The forward witness is the
  union of the routed matchings; the backward witness is its reversal.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InputError, OracleFailure, SizeError
from .expansion import MAX_EXACT_N, expansion, sparsest_cut
from .flow import FlowState, decompose_paths, h_default
from .graph import CutStats, DiGraph, cut_stats, reversed_copy
from .witness import BiWitness, Witness, as_fraction, verify_biwitness

log = logging.getLogger(__name__)


@dataclass
class OracleConfig:
    seed: int = 0
    rounds: Fraction = Fraction(1, 4)    # T = max(min_rounds, ceil(rounds * ln^2 m))
    min_rounds: int = 6
    c_w: int = 4                         # psi_out = 1 / (c_w T)
    h: int | None = None                 # flow height, default h_default(m, phi)
    c_fake: Fraction = Fraction(1, 56)   # fake budget c_fake * m / ln^2 m
    c_bal: Fraction = Fraction(1)        # balance c_bal * m / ln^4 m
    c_cut: Fraction = Fraction(1, 8)     # sparsity c_cut * phi * ln^2 m
    n_bf: int = 12
    retries: int = 2
    check: bool = True

    def __post_init__(self):
        for name in ("rounds", "c_fake", "c_bal", "c_cut"):
            val = as_fraction(getattr(self, name))
            if val <= 0:
                raise InputError(f"{name} must be positive")
            setattr(self, name, val)
        if self.min_rounds < 1 or self.c_w < 2:
            raise InputError("min_rounds must be >= 1 and c_w >= 2")
        if not 1 <= self.n_bf <= MAX_EXACT_N:
            raise InputError(f"n_bf must be in 1..{MAX_EXACT_N}")


@dataclass
class Certified:
    host: DiGraph            # G plus fake edges; G's edge ids are kept
    bw: BiWitness            # embedded into host
    fake: list               # (u, v, edge id in host)
    phi: Fraction            # psi / max congestion
    psi: Fraction
    rounds: int = 0
    work: int = 0

    @property
    def fake_ids(self):
        return [e for _, _, e in self.fake]


@dataclass
class BalancedCut:
    A: list
    stats: CutStats
    ratio: Fraction = field(default=Fraction(0))
    work: int = 0


def _ln(m):
    return math.log(max(m, 2))


def balance_bound(m, cfg) -> int:
    # capped at m: the smaller side never has more volume than that, and
    # ln^4 m < 1 for m <= 4 would otherwise rule out every cut
    return max(1, min(m, math.ceil(cfg.c_bal * Fraction(m) / Fraction(_ln(m) ** 4))))


def sparsity_bound(m, phi, cfg) -> Fraction:
    return cfg.c_cut * as_fraction(phi) * Fraction(_ln(m) ** 2)


def fake_budget(m, psi, cfg) -> int:
    """Largest k with k <= c_fake m / ln^2 m and (4/psi) k < (m + k) / 14."""
    k = math.floor(cfg.c_fake * Fraction(m) / Fraction(_ln(m) ** 2))
    psi = as_fraction(psi)
    while k > 0 and not 4 / psi * k < Fraction(m + k, 14):
        k -= 1
    return max(k, 0)


def cut_ratio(st: CutStats) -> Fraction | None:
    den = min(st.vol_S, st.vol_Sbar)
    if den == 0:
        return None
    return Fraction(min(st.e_fwd, st.e_bwd), den)


def _check_cut(G, A, m, phi, cfg):
    st = cut_stats(G, A)
    r = cut_ratio(st)
    B = balance_bound(m, cfg)
    ok = (r is not None and min(st.vol_S, st.vol_Sbar) >= B
          and r <= sparsity_bound(m, phi, cfg))
    return ok, st, r


# brute force

def brute_force_oracle(G, phi, cfg: OracleConfig | None = None):
    """Exact oracle for graphs with at most cfg.n_bf vertices.

    G must be a compact DiGraph (all vertices belong to the instance).
    Returns BalancedCut for the sparsest cut meeting the balance and
    sparsity bounds, else Certified with the identity witness when the
    expansion is at least phi.  Otherwise fake edges are added greedily
    across the sparsest cut while the budget allows; if that does not reach
    phi, OracleFailure carries the sparsest cut.
    """
    cfg = cfg or OracleConfig()
    phi = as_fraction(phi)
    n, m = G.n, G.e_count()
    if n > cfg.n_bf:
        raise SizeError(f"brute-force oracle limited to {cfg.n_bf} vertices, got {n}")
    if m > 0 and n > 1:
        B = balance_bound(m, cfg)
        r, A = sparsest_cut(G, min_vol=B, limit=cfg.n_bf)
        if r is not None and r <= sparsity_bound(m, phi, cfg):
            ok, st, r2 = _check_cut(G, A, m, phi, cfg)
            assert ok and r2 == r
            return BalancedCut(list(A), st, r)
    host = G.copy()
    fake = []
    while True:
        ex = expansion(host, limit=cfg.n_bf)
        psi = Fraction(1, 2) if ex is None else min(ex, Fraction(1, 2))
        if ex is None or ex >= phi:
            bw = BiWitness.identity(host)
            res = Certified(host, bw, fake, psi, psi)
            _check_certified(G, res, cfg)
            return res
        if len(fake) + 1 > fake_budget(m, min(psi, phi), cfg):
            r, A = sparsest_cut(host, limit=cfg.n_bf)
            raise OracleFailure("no balanced sparse cut and the fake-edge budget "
                                "cannot repair the sparse cuts", cut=(list(A), r))
        r, A = sparsest_cut(host, limit=cfg.n_bf)
        st = cut_stats(host, A)
        inA = set(A)
        rest = [v for v in range(n) if v not in inA]
        if st.e_fwd <= st.e_bwd:
            u, v = min(A), min(rest)
        else:
            u, v = min(rest), min(A)
        fake.append((u, v, host.add_edge(u, v)))


def _check_certified(G, res: Certified, cfg):
    m = G.e_count()
    pre = set()
    for e in res.fake_ids:
        pre.update(res.bw.fwd.users_of(e))
    if res.fake and len(pre) > fake_budget(m, res.psi, cfg):
        raise OracleFailure(f"fake-edge preimage {len(pre)} over budget")
    if cfg.check:
        rep = verify_biwitness(res.host, res.bw, res.phi, res.psi)
        if not rep.ok:
            raise OracleFailure("certified witness fails structural checks:\n" + str(rep))


# cut-matching

def _route(G, L_at, R_at, cap, h, kernels):
    """Route one unit from every left endpoint node to a right one in G.

    L_at / R_at: per vertex, sorted node ids.  Returns (pairs, stuck, st):
    pairs are (a, b, path edges) for routed units, stuck are
    (a, vertex, path vertices, path edges) for units left at a vertex whose
    right nodes are used up.  The node lists are consumed.
    """
    n = G.n
    src = [len(x) for x in L_at]
    sink = [len(x) for x in R_at]
    st = FlowState(G, cap, src, sink, h, relaxed=True, kernels=kernels)
    Lp = [0] * n
    Rp = [0] * n
    arrivals: list[list] = [[] for _ in range(n)]
    for x, y, pv, pe, amt in decompose_paths(st):
        for _ in range(amt):
            a = L_at[x][Lp[x]]
            Lp[x] += 1
            arrivals[y].append((a, pv, pe))
    pairs = []
    stuck = []
    for y in range(n):
        units = arrivals[y] + [(a, [y], []) for a in L_at[y][Lp[y]:]]
        for a, pv, pe in units:
            if Rp[y] < len(R_at[y]):
                pairs.append((a, R_at[y][Rp[y]], pe))
                Rp[y] += 1
            else:
                stuck.append((a, y, pv, pe))
    left_R = [b for y in range(n) for b in R_at[y][Rp[y]:]]
    return pairs, stuck, left_R, st


def _level_cut(G, st, m, phi, cfg):
    """Sweep the level cuts of a flow state; returns (best cut meeting the
    balance bound or None, ratio) and the sparsest cut of any balance."""
    n = G.n
    order = sorted(range(n), key=lambda v: (-st.level[v], v))
    total = sum(G.deg)
    inside = bytearray(n)
    fwd = bwd = vol = 0
    B = balance_bound(m, cfg)
    best = best_any = None
    for i, v in enumerate(order[:-1]):
        inside[v] = 1
        vol += G.deg[v]
        for e in G.out_edges(v):
            w = G.head[e]
            if w == v:
                continue
            if inside[w]:
                bwd -= 1
            else:
                fwd += 1
        for e in G.in_edges(v):
            w = G.tail[e]
            if w == v:
                continue
            if inside[w]:
                fwd -= 1
            else:
                bwd += 1
        if st.level[v] == st.level[order[i + 1]]:
            continue
        den = min(vol, total - vol)
        if den == 0:
            continue
        r = Fraction(min(fwd, bwd), den)
        if best_any is None or r < best_any[1]:
            best_any = (order[:i + 1], r)
        if den >= B and (best is None or r < best[1]):
            best = (order[:i + 1], r)
    return best, best_any


def cut_matching_oracle(G, phi, cfg: OracleConfig | None = None, kernels=None):
    """Randomized oracle; G must be a compact DiGraph with at least 2 edges."""
    cfg = cfg or OracleConfig()
    phi = as_fraction(phi)
    n, m = G.n, G.e_count()
    if m < 2:
        raise InputError("cut-matching oracle needs at least two edges")
    T = max(cfg.min_rounds, math.ceil(cfg.rounds * Fraction(_ln(m) ** 2)))
    psi = Fraction(1, cfg.c_w * T)
    h = cfg.h or h_default(m, phi)
    cap = math.ceil(1 / phi)
    budget = fake_budget(m, psi, cfg)
    rev = reversed_copy(G)
    host = G.copy()

    # endpoint nodes: 2i is the tail end of the i-th alive edge, 2i+1 its head end
    owner = []
    for e in G.edges():
        owner.append(G.tail[e])
        owner.append(G.head[e])
    owner = np.array(owner, dtype=np.int64)
    N = len(owner)
    deg = np.bincount(owner, minlength=n)
    nodes_at = [[] for _ in range(n)]
    for x in range(N):
        nodes_at[owner[x]].append(x)
    W = Witness(n)
    fake = []
    fake_users = 0
    work = 0
    matchings: list[tuple[np.ndarray, np.ndarray]] = []
    seeds = np.random.SeedSequence(cfg.seed).spawn(T)

    for t in range(T):
        rng = np.random.default_rng(seeds[t])
        u = rng.standard_normal(N)
        for a, b in matchings:
            mean = (u[a] + u[b]) / 2
            u[a] = mean
            u[b] = mean
        # bisect by whole vertices (mean projection of their endpoints) so
        # endpoints of one vertex are not paired with each other; only the
        # vertex straddling the median is split
        val = np.bincount(owner, weights=u, minlength=n) / np.maximum(deg, 1)
        vorder = np.lexsort((np.arange(n), val))
        left = np.zeros(N, dtype=bool)
        room = N // 2
        for v in vorder:
            if room <= 0:
                break
            nodes = nodes_at[v]
            take = min(room, len(nodes))
            left[nodes[:take]] = True
            room -= take
        L_at = [[] for _ in range(n)]
        R_at = [[] for _ in range(n)]
        for x in range(N):
            (L_at if left[x] else R_at)[owner[x]].append(x)
        for direction, graph in (("fwd", G), ("bwd", rev)):
            La = [list(x) for x in L_at]
            Ra = [list(x) for x in R_at]
            pairs, stuck, left_R, st = _route(graph, La, Ra, cap, h, kernels)
            work += st.work
            if stuck:
                best, best_any = _level_cut(graph, st, m, phi, cfg)
                if best is not None:
                    A = best[0]
                    ok, cst, r = _check_cut(G, A, m, phi, cfg)
                    if ok:
                        log.debug("round %d %s: %d stuck, balanced cut ratio %s",
                                  t, direction, len(stuck), r)
                        return BalancedCut(sorted(A), cst, r, work)
                if fake_users + len(stuck) > budget:
                    cut = None
                    if best_any is not None:
                        cut = (sorted(best_any[0]), best_any[1])
                    exc = OracleFailure(
                        f"round {t} {direction}: {len(stuck)} stuck units, fake "
                        f"budget {budget} (used {fake_users})", cut=cut)
                    exc.work = work
                    raise exc
                for (a, z, pv, pe), b in zip(stuck, left_R):
                    y = int(owner[b])
                    if y in pv:
                        k = pv.index(y)
                        pairs.append((a, b, pe[:k]))
                        continue
                    # fake edge z -> y in the routed graph
                    hu, hv = (z, y) if direction == "fwd" else (y, z)
                    f = host.add_edge(hu, hv)
                    fake.append((hu, hv, f))
                    fake_users += 1
                    pairs.append((a, b, list(pe) + [f]))
            log.debug("round %d %s: %d routed, %d stuck", t, direction,
                      len(pairs), len(stuck))
            A_ = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
            B_ = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
            matchings.append((A_, B_))
            for a, b, pe in pairs:
                x, y = int(owner[a]), int(owner[b])
                if direction == "fwd":
                    W.add_edge(x, y, pe if x != y else ())
                else:
                    W.add_edge(y, x, pe[::-1] if x != y else ())
    maxc = W.max_congestion()
    phi_w = psi / max(maxc, 1)
    res = Certified(host, BiWitness(W, W.reversed_()), fake, phi_w, psi, T, work)
    try:
        _check_certified(G, res, cfg)
    except OracleFailure as exc:
        exc.work = work
        raise
    return res
