"""Checkable predicates for decompositions and their building blocks.

Exact checks enumerate cuts and are limited to MAX_EXACT_N vertices.
Everything else is structural and runs at any size.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import ContractViolation, SizeError
from .expansion import MAX_EXACT_N, min_out_cut, sparsest_cut
from .graph import GraphView, contract, respects_order
from .report import Report
from .witness import as_fraction, verify_biwitness

INF = math.inf


def _size(G, limit=MAX_EXACT_N):
    n = G.n if getattr(G, "mask", None) is None else sum(G.mask)
    if n > limit:
        raise SizeError(f"exact check limited to {limit} vertices, got {n}")
    return n


def brute_force_expansion(G, vertices=None, limit=MAX_EXACT_N):
    """min over cuts of min(e(S,~S), e(~S,S)) / min(vol S, vol ~S).

    Cuts with a zero-volume side are skipped.  Returns (value, S); value is
    math.inf (and S None) when no cut qualifies, e.g. on a single vertex.
    """
    if vertices is None:
        _size(G, limit)
    r, S = sparsest_cut(G, 1, vertices, limit)
    return (INF, None) if r is None else (r, S)


def brute_force_out_expansion(G, vertices=None, limit=MAX_EXACT_N):
    """min of e(S,~S) / vol(S) over S with 0 < vol(S) <= e(G)."""
    if vertices is None:
        _size(G, limit)
    r, S = min_out_cut(G, vertices, limit)
    return (INF, None) if r is None else (r, S)


def _out_count(G, inS, dead):
    return sum(1 for e in G.edges()
               if e not in dead and inS[G.tail[e]] and not inS[G.head[e]])


def check_lemma_helper(G, S, D, phi, check_precondition=True) -> bool:
    """Deletions only hurt large sets by a bounded amount.

    For every S with vol_G(S) <= e(G) (the side condition under which G's
    expansion speaks about S) and vol_G(S) >= 4|D| / (3 phi), checks
    e_{G-D}(S, ~S) >= (phi / 4) vol_G(S).  S=None enumerates every such S.
    With check_precondition, G must be a phi-expander by exact enumeration.
    """
    phi = as_fraction(phi)
    n = _size(G)
    if check_precondition:
        ex, _ = brute_force_expansion(G)
        if ex < phi:
            raise ContractViolation(f"graph expansion {ex} is below the claimed {phi}")
    dead = set(D)
    verts = [v for v in range(n) if getattr(G, "mask", None) is None or G.mask[v]]
    m = G.e_count()
    need = Fraction(4 * len(dead)) / (3 * phi)
    if S is None:
        sets = (c for k in range(1, len(verts)) for c in combinations(verts, k))
    else:
        sets = [tuple(S)]
    for T in sets:
        vol = G.volume(T)
        if vol == 0 or vol > m or vol < need:
            continue
        inS = bytearray(G.n)
        for v in T:
            inS[v] = 1
        if _out_count(G, inS, dead) < phi / 4 * vol:
            return False
    return True


def _as_shape(x):
    if hasattr(x, "shape") and callable(x.shape):
        return x.shape()
    clusters, er = x
    return [tuple(sorted(c)) for c in clusters], frozenset(er)


def verify_decomposition(G, decomp, quality=None, exact_limit=12, er_phi=None) -> Report:
    """Check decomp against G (the current graph, deletions removed).

    quality=(beta, phi, psi) checks every cluster at those values; otherwise
    each cluster is checked at its own declared (phi, psi) and beta is the
    decomposition's.  The |E^r| budget uses er_phi, defaulting to the
    decomposition's input phi.
    """
    rep = Report()
    if G is None:
        G = decomp.current_graph()
    n = G.n
    clusters = decomp.clusters
    sets = [c.vertices for c in clusters]

    seen = [0] * n
    for X in sets:
        for v in X:
            if 0 <= v < n:
                seen[v] += 1
    bad = [v for v in range(n) if seen[v] != 1]
    rep.add("partition", not bad and all(0 <= v < n for X in sets for v in X),
            where=f"vertex {bad[0]}" if bad else None)
    if bad:
        return rep

    q_beta = q_phi = q_psi = None
    if quality is not None:
        q_beta, q_phi, q_psi = (as_fraction(x) for x in quality)

    worst = None
    for i, c in enumerate(clusters):
        X = sets[i]
        if len(X) < 2 or len(X) > exact_limit:
            continue
        target = q_phi if q_phi is not None else c.phi
        ex, _ = brute_force_expansion(G, X)
        if target is None:
            # trivial cluster with edges inside: only loops are allowed
            ok = ex == INF
        else:
            ok = ex >= target
        if not ok and worst is None:
            worst = (i, ex, target)
    rep.add("clusters.expansion", worst is None,
            None if worst is None else worst[1], None if worst is None else worst[2],
            None if worst is None else f"cluster {worst[0]}")

    wbad = None
    missing = None
    for i, c in enumerate(clusters):
        X = sets[i]
        bw = c.witness()
        if bw is None:
            if len(X) > 1 and missing is None:
                missing = i
            continue
        F = GraphView(c.frame_graph(G), c.members)
        phi = q_phi if q_phi is not None else c.phi
        psi = q_psi if q_psi is not None else c.psi
        r = verify_biwitness(F, bw, phi, psi, deg_ref=c.deg_ref, vertices=c.members)
        if not r.ok and wbad is None:
            wbad = (i, r.failures()[0])
    rep.add("clusters.witness_present", missing is None,
            where=None if missing is None else f"cluster {missing}")
    rep.add("clusters.witness", wbad is None,
            where=None if wbad is None else f"cluster {wbad[0]}: {wbad[1].line()}")

    beta = q_beta if q_beta is not None else decomp.beta
    phi_er = as_fraction(er_phi) if er_phi is not None else decomp.phi_input
    m0 = decomp.host.e_count()
    bad_er = [e for e in decomp.er if not 0 <= e < G.num_ids]
    live_er = [e for e in decomp.er if e not in bad_er and G.is_alive(e)]
    owner = [0] * n
    for i, X in enumerate(sets):
        for v in X:
            owner[v] = i
    inner = [e for e in live_er if owner[G.tail[e]] == owner[G.head[e]]]
    rep.add("er.edges", not bad_er and not inner,
            where=f"edge {(bad_er + inner)[0]}" if bad_er or inner else None)
    bound = beta * phi_er * m0
    rep.add("er.size", len(live_er) <= bound, len(live_er), bound)

    H, _ = contract(G, sets, drop=live_er)
    rep.add("dag.order", respects_order(H, range(len(sets))))
    return rep


def verify_refinement(old, new, D=()) -> bool:
    """new refines old: every new cluster lies inside one old cluster and
    old E^r is contained in new E^r plus the deleted edges D."""
    oc, oer = _as_shape(old)
    nc, ner = _as_shape(new)
    owner = {}
    for i, X in enumerate(oc):
        for v in X:
            owner[v] = i
    for X in nc:
        if len({owner.get(v, -1) for v in X}) != 1 or owner.get(X[0], -1) < 0:
            return False
    dead = set(D)
    return all(e in ner or e in dead for e in oer)


def refinement_report(old, new, D=()) -> Report:
    rep = Report()
    rep.add("refinement", verify_refinement(old, new, D))
    return rep
