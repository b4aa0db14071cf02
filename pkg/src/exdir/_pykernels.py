"""Pure-Python kernels.  Same semantics as the compiled `_ckernels` module.

The push and pull loops follow the selection rule of the flow engine: the
active vertex with the lowest (push) or highest (pull) level goes first, ties
to the lowest vertex id, admissible arcs scanned in edge-id order.  A run of
consecutive relabels of the selected vertex is applied in one step; the level
it reaches and the counters are exactly those of the unit-step loop.
"""

from heapq import heapify, heappop, heappush


def push_relabel(st, cands):
    n = st.n
    h = st.h
    level = st.level
    src = st.src
    sink = st.sink
    net = st.net
    gdeg = st.gdeg
    vin = st.vin
    cur = st.cur
    stamp = st.stamp
    adj_start = st.adj_start
    adj_edge = st.adj_edge
    adj_out = st.adj_out
    etail = st.etail
    ehead = st.ehead
    cap = st.cap
    flow = st.flow
    ealive = st.ealive
    ctr = st.ctr
    ctr[4] += 1
    phase = ctr[4]

    heap = []
    for v in cands:
        if vin[v] and level[v] < h and src[v] - net[v] - sink[v] > 0:
            heap.append(level[v] * n + v)
    heapify(heap)
    pushes = relabels = work = 0
    while heap:
        lv, v = divmod(heap[0], n)
        if not vin[v] or level[v] != lv or lv >= h:
            heappop(heap)
            continue
        exv = src[v] - net[v] - sink[v]
        if exv <= 0:
            heappop(heap)
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
                heappush(heap, want * n + u)
            continue

        heappop(heap)
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
        while heap:
            lw, w = divmod(heap[0], n)
            if (w == v or not vin[w] or level[w] != lw or lw >= h
                    or src[w] - net[w] - sink[w] <= 0):
                heappop(heap)
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
            heappush(heap, target * n + v)
    ctr[0] += pushes
    ctr[2] += relabels
    ctr[3] += work


def pull_relabel(st, cands):
    n = st.n
    h = st.h
    level = st.level
    src = st.src
    net = st.net
    gdeg = st.gdeg
    vin = st.vin
    cur = st.cur
    stamp = st.stamp
    adj_start = st.adj_start
    adj_edge = st.adj_edge
    adj_out = st.adj_out
    etail = st.etail
    ehead = st.ehead
    cap = st.cap
    flow = st.flow
    ealive = st.ealive
    ctr = st.ctr
    ctr[4] += 1
    phase = ctr[4]

    heap = []
    for v in cands:
        if vin[v] and level[v] > 0 and net[v] - src[v] > 0:
            heap.append((h - level[v]) * n + v)
    heapify(heap)
    pulls = relabels = work = 0
    while heap:
        q, v = divmod(heap[0], n)
        lv = h - q
        if not vin[v] or level[v] != lv or lv <= 0:
            heappop(heap)
            continue
        dfv = net[v] - src[v]
        if dfv <= 0:
            heappop(heap)
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
                heappush(heap, (h - want) * n + u)
            continue

        heappop(heap)
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
        while heap:
            q2, w = divmod(heap[0], n)
            lw = h - q2
            if (w == v or not vin[w] or level[w] != lw or lw <= 0
                    or net[w] - src[w] <= 0):
                heappop(heap)
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
            heappush(heap, (h - target) * n + v)
    ctr[1] += pulls
    ctr[2] += relabels
    ctr[3] += work


def cut_scan(n, tails, heads, weight, mode, lo, hi):
    """Enumerate every nonempty proper subset S of range(n) in Gray-code order.

    mode 0: ratio min(e(S,~S), e(~S,S)) / min(w(S), w(~S)), constraint on the
            smaller side's weight.
    mode 1: ratio e(S,~S) / w(S), constraint on w(S).
    Only cuts with lo <= constrained weight <= hi and positive denominator are
    considered.  Returns (num, den, mask) of the minimum ratio, smallest mask on
    ties, or (0, 0, 0) when no cut qualifies.
    """
    out_adj = [[] for _ in range(n)]
    in_adj = [[] for _ in range(n)]
    for a, b in zip(tails, heads):
        if a != b:
            out_adj[a].append(b)
            in_adj[b].append(a)
    total = sum(weight)
    inside = [0] * n
    fwd = bwd = wS = 0
    best_num, best_den, best_mask = 0, 0, 0
    mask = 0
    for k in range(1, 1 << n):
        v = (k & -k).bit_length() - 1
        mask ^= 1 << v
        if inside[v]:
            inside[v] = 0
            wS -= weight[v]
            for w in out_adj[v]:
                if inside[w]:
                    bwd += 1
                else:
                    fwd -= 1
            for w in in_adj[v]:
                if inside[w]:
                    fwd += 1
                else:
                    bwd -= 1
        else:
            inside[v] = 1
            wS += weight[v]
            for w in out_adj[v]:
                if inside[w]:
                    bwd -= 1
                else:
                    fwd += 1
            for w in in_adj[v]:
                if inside[w]:
                    fwd -= 1
                else:
                    bwd += 1
        if mask == (1 << n) - 1:
            continue
        if mode == 0:
            rest = total - wS
            den = wS if wS < rest else rest
            num = fwd if fwd < bwd else bwd
            c = den
        else:
            den = wS
            num = fwd
            c = wS
        if den <= 0 or c < lo or c > hi:
            continue
        if best_den == 0:
            better = True
        else:
            lhs = num * best_den
            rhs = best_num * den
            better = lhs < rhs or (lhs == rhs and mask < best_mask)
        if better:
            best_num, best_den, best_mask = num, den, mask
    return best_num, best_den, best_mask
