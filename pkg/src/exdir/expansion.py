"""Exact expansion by exhaustive cut enumeration (small graphs only).

A cut S is out-sparse at level phi when vol(S) <= e(G) and
e(S, ~S) < phi * vol(S).  Sets of zero volume are never sparse.
"""

from __future__ import annotations

from fractions import Fraction

from . import _backend
from .errors import SizeError
from .graph import reverse

MAX_EXACT_N = 20


def _compact(G, vertices=None):
    if vertices is None:
        verts = [v for v in range(G.n)]
        if getattr(G, "mask", None) is not None:
            verts = [v for v in verts if G.mask[v]]
    else:
        verts = sorted(set(vertices))
    local = {v: i for i, v in enumerate(verts)}
    tails, heads = [], []
    for e in G.edges():
        a, b = G.tail[e], G.head[e]
        if a in local and b in local:
            tails.append(local[a])
            heads.append(local[b])
    deg = [0] * len(verts)
    for a, b in zip(tails, heads):
        deg[a] += 1
        deg[b] += 1
    return verts, tails, heads, deg


def _check_size(n, limit):
    if n > limit:
        raise SizeError(f"exact cut enumeration limited to {limit} vertices, got {n}")


def min_out_cut(G, vertices=None, limit=MAX_EXACT_N, kernels=None):
    """Minimum e(S,~S)/vol(S) over S with 0 < vol(S) <= e(G[X]).

    Returns (ratio, S) with ratio a Fraction, or (None, None) when no set
    qualifies (treated as infinite expansion).
    """
    k = kernels or _backend.kernels()
    verts, tails, heads, deg = _compact(G, vertices)
    n = len(verts)
    _check_size(n, limit)
    if n < 2:
        return None, None
    num, den, mask = k.cut_scan(n, tails, heads, deg, 1, 1, len(tails))
    if den == 0:
        return None, None
    S = [verts[i] for i in range(n) if mask >> i & 1]
    return Fraction(num, den), S


def out_expansion(G, vertices=None, limit=MAX_EXACT_N, kernels=None):
    return min_out_cut(G, vertices, limit, kernels)[0]


def expansion(G, vertices=None, limit=MAX_EXACT_N, kernels=None):
    """min of the out-expansion of G and of its reversal (None = infinite)."""
    a = out_expansion(G, vertices, limit, kernels)
    b = out_expansion(reverse(G), vertices, limit, kernels)
    vals = [x for x in (a, b) if x is not None]
    return min(vals) if vals else None


def is_out_expander(G, phi, vertices=None, limit=MAX_EXACT_N) -> bool:
    r = out_expansion(G, vertices, limit)
    return r is None or r >= phi


def is_expander(G, phi, vertices=None, limit=MAX_EXACT_N) -> bool:
    r = expansion(G, vertices, limit)
    return r is None or r >= phi


def sparsest_cut(G, min_vol=1, vertices=None, limit=MAX_EXACT_N, kernels=None):
    """Minimum min(e(S,~S), e(~S,S)) / min(vol S, vol ~S) over cuts whose
    smaller side has volume >= min_vol.  Returns (ratio, S) or (None, None)."""
    k = kernels or _backend.kernels()
    verts, tails, heads, deg = _compact(G, vertices)
    n = len(verts)
    _check_size(n, limit)
    if n < 2:
        return None, None
    num, den, mask = k.cut_scan(n, tails, heads, deg, 0, max(min_vol, 1), sum(deg))
    if den == 0:
        return None, None
    S = [verts[i] for i in range(n) if mask >> i & 1]
    return Fraction(num, den), S
