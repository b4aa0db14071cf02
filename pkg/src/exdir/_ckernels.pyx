# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Line-for-line port of `_pykernels`."""

from libc.stdlib cimport malloc, realloc, free

ctypedef long long i64


cdef struct Heap:
    i64 *a
    Py_ssize_t size
    Py_ssize_t cap


cdef int heap_init(Heap *hp, Py_ssize_t cap) except -1:
    if cap < 16:
        cap = 16
    hp.a = <i64 *> malloc(cap * sizeof(i64))
    if hp.a == NULL:
        raise MemoryError()
    hp.size = 0
    hp.cap = cap
    return 0


cdef int heap_push(Heap *hp, i64 x) except -1:
    cdef Py_ssize_t i, p
    cdef i64 *na
    if hp.size == hp.cap:
        na = <i64 *> realloc(hp.a, 2 * hp.cap * sizeof(i64))
        if na == NULL:
            raise MemoryError()
        hp.a = na
        hp.cap *= 2
    i = hp.size
    hp.size += 1
    while i > 0:
        p = (i - 1) >> 1
        if hp.a[p] <= x:
            break
        hp.a[i] = hp.a[p]
        i = p
    hp.a[i] = x
    return 0


cdef inline void heap_pop(Heap *hp) nogil:
    cdef Py_ssize_t i = 0, c, n
    cdef i64 x
    hp.size -= 1
    n = hp.size
    if n == 0:
        return
    x = hp.a[n]
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and hp.a[c + 1] < hp.a[c]:
            c += 1
        if hp.a[c] >= x:
            break
        hp.a[i] = hp.a[c]
        i = c
    hp.a[i] = x


def push_relabel(st, cands):
    cdef i64 n = st.n, h = st.h
    cdef i64[:] level = st.level
    cdef i64[:] src = st.src
    cdef i64[:] sink = st.sink
    cdef i64[:] net = st.net
    cdef i64[:] gdeg = st.gdeg
    cdef unsigned char[:] vin = st.vin
    cdef i64[:] cur = st.cur
    cdef i64[:] stamp = st.stamp
    cdef i64[:] adj_start = st.adj_start
    cdef i64[:] adj_edge = st.adj_edge
    cdef unsigned char[:] adj_out = st.adj_out
    cdef i64[:] etail = st.etail
    cdef i64[:] ehead = st.ehead
    cdef i64[:] cap = st.cap
    cdef i64[:] flow = st.flow
    cdef unsigned char[:] ealive = st.ealive
    cdef i64[:] ctr = st.ctr
    cdef i64 phase, v, lv, exv, k, end, want, e, u, r, exu, room, amt
    cdef i64 target, kk, c, lw, w, lim, d, pushes = 0, relabels = 0, work = 0
    cdef bint found
    cdef Heap hp

    ctr[4] += 1
    phase = ctr[4]
    heap_init(&hp, 64)
    try:
        for x in cands:
            v = x
            if vin[v] and level[v] < h and src[v] - net[v] - sink[v] > 0:
                heap_push(&hp, level[v] * n + v)
        while hp.size > 0:
            lv = hp.a[0] // n
            v = hp.a[0] % n
            if not vin[v] or level[v] != lv or lv >= h:
                heap_pop(&hp)
                continue
            exv = src[v] - net[v] - sink[v]
            if exv <= 0:
                heap_pop(&hp)
                continue
            if stamp[v] != phase:
                stamp[v] = phase
                cur[v] = adj_start[v]
            k = cur[v]
            end = adj_start[v + 1]
            want = lv - 1
            found = False
            while k < end:
                e = adj_edge[k]
                if ealive[e]:
                    if adj_out[k]:
                        u = ehead[e]
                        r = cap[e] - flow[e]
                    else:
                        u = etail[e]
                        r = flow[e]
                    if r > 0 and level[u] == want:
                        exu = src[u] - net[u] - sink[u]
                        room = gdeg[u] - (exu if exu > 0 else 0)
                        if room > 0:
                            found = True
                            break
                k += 1
            cur[v] = k
            if found:
                amt = exv if exv < r else r
                if room < amt:
                    amt = room
                if adj_out[k]:
                    flow[e] += amt
                else:
                    flow[e] -= amt
                net[v] += amt
                net[u] -= amt
                pushes += 1
                if src[u] - net[u] - sink[u] > 0:
                    heap_push(&hp, want * n + u)
                continue

            heap_pop(&hp)
            target = h
            for kk in range(adj_start[v], end):
                e = adj_edge[kk]
                if ealive[e]:
                    if adj_out[kk]:
                        if cap[e] > flow[e]:
                            c = level[ehead[e]] + 1
                            if c < target:
                                target = c
                    elif flow[e] > 0:
                        c = level[etail[e]] + 1
                        if c < target:
                            target = c
            while hp.size > 0:
                lw = hp.a[0] // n
                w = hp.a[0] % n
                if (w == v or not vin[w] or level[w] != lw or lw >= h
                        or src[w] - net[w] - sink[w] <= 0):
                    heap_pop(&hp)
                    continue
                lim = lw + 1 if v < w else lw
                if lim < target:
                    target = lim
                break
            if target <= lv:
                target = lv + 1
            d = target - lv
            relabels += d
            work += d * gdeg[v]
            level[v] = target
            cur[v] = adj_start[v]
            if target < h:
                heap_push(&hp, target * n + v)
    finally:
        free(hp.a)
    ctr[0] += pushes
    ctr[2] += relabels
    ctr[3] += work


def pull_relabel(st, cands):
    cdef i64 n = st.n, h = st.h
    cdef i64[:] level = st.level
    cdef i64[:] src = st.src
    cdef i64[:] net = st.net
    cdef i64[:] gdeg = st.gdeg
    cdef unsigned char[:] vin = st.vin
    cdef i64[:] cur = st.cur
    cdef i64[:] stamp = st.stamp
    cdef i64[:] adj_start = st.adj_start
    cdef i64[:] adj_edge = st.adj_edge
    cdef unsigned char[:] adj_out = st.adj_out
    cdef i64[:] etail = st.etail
    cdef i64[:] ehead = st.ehead
    cdef i64[:] cap = st.cap
    cdef i64[:] flow = st.flow
    cdef unsigned char[:] ealive = st.ealive
    cdef i64[:] ctr = st.ctr
    cdef i64 phase, v, lv, q, dfv, k, end, want, e, u, r, amt
    cdef i64 target, kk, c, lw, w, lim, d, pulls = 0, relabels = 0, work = 0
    cdef bint found
    cdef Heap hp

    ctr[4] += 1
    phase = ctr[4]
    heap_init(&hp, 64)
    try:
        for x in cands:
            v = x
            if vin[v] and level[v] > 0 and net[v] - src[v] > 0:
                heap_push(&hp, (h - level[v]) * n + v)
        while hp.size > 0:
            q = hp.a[0] // n
            v = hp.a[0] % n
            lv = h - q
            if not vin[v] or level[v] != lv or lv <= 0:
                heap_pop(&hp)
                continue
            dfv = net[v] - src[v]
            if dfv <= 0:
                heap_pop(&hp)
                continue
            if stamp[v] != phase:
                stamp[v] = phase
                cur[v] = adj_start[v]
            k = cur[v]
            end = adj_start[v + 1]
            want = lv + 1
            found = False
            while k < end:
                e = adj_edge[k]
                if ealive[e]:
                    if adj_out[k]:
                        u = ehead[e]
                        r = flow[e]
                    else:
                        u = etail[e]
                        r = cap[e] - flow[e]
                    if r > 0 and level[u] == want:
                        found = True
                        break
                k += 1
            cur[v] = k
            if found:
                amt = dfv if dfv < r else r
                if gdeg[u] < amt:
                    amt = gdeg[u]
                if adj_out[k]:
                    flow[e] -= amt
                else:
                    flow[e] += amt
                net[v] -= amt
                net[u] += amt
                pulls += 1
                if net[u] - src[u] > 0:
                    heap_push(&hp, (h - want) * n + u)
                continue

            heap_pop(&hp)
            target = 0
            for kk in range(adj_start[v], end):
                e = adj_edge[kk]
                if ealive[e]:
                    if adj_out[kk]:
                        if flow[e] > 0:
                            c = level[ehead[e]] - 1
                            if c > target:
                                target = c
                    elif cap[e] > flow[e]:
                        c = level[etail[e]] - 1
                        if c > target:
                            target = c
            while hp.size > 0:
                lw = h - hp.a[0] // n
                w = hp.a[0] % n
                if (w == v or not vin[w] or level[w] != lw or lw <= 0
                        or net[w] - src[w] <= 0):
                    heap_pop(&hp)
                    continue
                lim = lw - 1 if v < w else lw
                if lim > target:
                    target = lim
                break
            if target >= lv:
                target = lv - 1
            d = lv - target
            relabels += d
            work += d * gdeg[v]
            level[v] = target
            cur[v] = adj_start[v]
            if target > 0:
                heap_push(&hp, (h - target) * n + v)
    finally:
        free(hp.a)
    ctr[1] += pulls
    ctr[2] += relabels
    ctr[3] += work


def cut_scan(Py_ssize_t n, tails, heads, weight, int mode, i64 lo, i64 hi):
    """Compiled twin of `_pykernels.cut_scan`."""
    if n <= 0 or n > 62:
        if n <= 0:
            return 0, 0, 0
        raise ValueError("cut_scan supports at most 62 vertices")
    cdef Py_ssize_t m = len(tails), i, j
    cdef i64 *ostart = <i64 *> malloc((n + 1) * sizeof(i64))
    cdef i64 *istart = <i64 *> malloc((n + 1) * sizeof(i64))
    cdef i64 *oadj = <i64 *> malloc((m + 1) * sizeof(i64))
    cdef i64 *iadj = <i64 *> malloc((m + 1) * sizeof(i64))
    cdef i64 *wt = <i64 *> malloc(n * sizeof(i64))
    cdef unsigned char *inside = <unsigned char *> malloc(n)
    cdef i64 *fill = <i64 *> malloc((n + 1) * sizeof(i64))
    cdef i64 a, b, total = 0, fwd = 0, bwd = 0, wS = 0, num, den, cc, rest
    cdef i64 best_num = 0, best_den = 0
    cdef unsigned long long mask = 0, best_mask = 0, full, kk, lim
    cdef int v, better
    try:
        if (ostart == NULL or istart == NULL or oadj == NULL or iadj == NULL
                or wt == NULL or inside == NULL or fill == NULL):
            raise MemoryError()
        for i in range(n + 1):
            ostart[i] = 0
            istart[i] = 0
        for i in range(n):
            wt[i] = weight[i]
            total += wt[i]
            inside[i] = 0
        tl = list(tails)
        hl = list(heads)
        for j in range(m):
            a = tl[j]
            b = hl[j]
            if a != b:
                ostart[a + 1] += 1
                istart[b + 1] += 1
        for i in range(n):
            ostart[i + 1] += ostart[i]
            istart[i + 1] += istart[i]
        for i in range(n):
            fill[i] = ostart[i]
        for j in range(m):
            a = tl[j]
            b = hl[j]
            if a != b:
                oadj[fill[a]] = b
                fill[a] += 1
        for i in range(n):
            fill[i] = istart[i]
        for j in range(m):
            a = tl[j]
            b = hl[j]
            if a != b:
                iadj[fill[b]] = a
                fill[b] += 1

        full = (1ULL << n) - 1
        lim = 1ULL << n
        kk = 1
        while kk < lim:
            v = 0
            while not ((kk >> v) & 1ULL):
                v += 1
            kk += 1
            mask ^= 1ULL << v
            if inside[v]:
                inside[v] = 0
                wS -= wt[v]
                for j in range(ostart[v], ostart[v + 1]):
                    if inside[oadj[j]]:
                        bwd += 1
                    else:
                        fwd -= 1
                for j in range(istart[v], istart[v + 1]):
                    if inside[iadj[j]]:
                        fwd += 1
                    else:
                        bwd -= 1
            else:
                inside[v] = 1
                wS += wt[v]
                for j in range(ostart[v], ostart[v + 1]):
                    if inside[oadj[j]]:
                        bwd -= 1
                    else:
                        fwd += 1
                for j in range(istart[v], istart[v + 1]):
                    if inside[iadj[j]]:
                        fwd -= 1
                    else:
                        bwd += 1
            if mask == full:
                continue
            if mode == 0:
                rest = total - wS
                den = wS if wS < rest else rest
                num = fwd if fwd < bwd else bwd
                cc = den
            else:
                den = wS
                num = fwd
                cc = wS
            if den <= 0 or cc < lo or cc > hi:
                continue
            if best_den == 0:
                better = 1
            else:
                a = num * best_den
                b = best_num * den
                better = a < b or (a == b and mask < best_mask)
            if better:
                best_num = num
                best_den = den
                best_mask = mask
    finally:
        free(ostart)
        free(istart)
        free(oadj)
        free(iadj)
        free(wt)
        free(inside)
        free(fill)
    return best_num, best_den, best_mask
