"""Compiled inner loops for the undirected sequential degree-sequence sampler."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def graphical(d):
    """Erdos-Gallai test in O(n + max degree) via a counting sort."""
    n = d.shape[0]
    total = 0
    top = 0
    npos = 0
    for i in range(n):
        x = d[i]
        if x < 0:
            return False
        total += x
        if x > top:
            top = x
        if x > 0:
            npos += 1
    if total % 2 == 1:
        return False
    if total == 0:
        return True
    if top >= npos:
        return False
    cnt = np.zeros(top + 1, dtype=np.int64)
    for i in range(n):
        cnt[d[i]] += 1
    s = np.empty(npos, dtype=np.int64)
    p = 0
    for v in range(top, 0, -1):
        for _ in range(cnt[v]):
            s[p] = v
            p += 1
    suffix = np.zeros(npos + 1, dtype=np.int64)
    for i in range(npos - 1, -1, -1):
        suffix[i] = suffix[i + 1] + s[i]
    # ge[k] = number of entries >= k
    ge = np.zeros(top + 2, dtype=np.int64)
    for v in range(top, 0, -1):
        ge[v] = ge[v + 1] + cnt[v]
    lhs = 0
    for k in range(1, npos + 1):
        lhs += s[k - 1]
        if k <= top:
            q = ge[k]
        else:
            q = 0
        if q <= k:
            rhs_tail = suffix[k]
        else:
            rhs_tail = (q - k) * k + suffix[q]
        if lhs > k * (k - 1) + rhs_tail:
            return False
    return True


@njit(cache=True)
def _valid(d, i, j):
    d[i] -= 1
    d[j] -= 1
    ok = graphical(d)
    d[i] += 1
    d[j] += 1
    return ok


@njit(cache=True)
def sample_undirected_simple(deg, uniforms, edges):
    """Reference version of :func:`sample_undirected`: O(n) scans per link.

    The hub is the lowest-index node of minimal positive residual degree; it
    is wired to candidates drawn with probability proportional to their
    residual degree among those that keep the residual sequence graphical.
    Returns (log q, number of edges written). q is the product of the choice
    probabilities times prod(hub degree!), so E[1/q] = |G_D|. A negative
    edge count signals a stuck state (never expected for graphical input).
    """
    n = deg.shape[0]
    d = deg.copy()
    mark = np.full(n, -1, dtype=np.int64)
    cand = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.int64)
    logq = 0.0
    e = 0
    u = 0
    hub_round = 0
    while True:
        i = -1
        best = 1 << 62
        for v in range(n):
            if 0 < d[v] < best:
                best = d[v]
                i = v
        if i < 0:
            break
        hub_round += 1
        mark[i] = hub_round
        logq += math.lgamma(d[i] + 1.0)
        while d[i] > 0:
            nc = 0
            for v in range(n):
                if d[v] > 0 and mark[v] != hub_round:
                    cand[nc] = v
                    vals[nc] = d[v]
                    nc += 1
            if nc == 0:
                return logq, -1
            sv = np.unique(vals[:nc])
            # validity is monotone in the candidate's degree (majorisation)
            lo = 0
            hi = sv.shape[0]
            while lo < hi:
                mid = (lo + hi) // 2
                rep = -1
                for t in range(nc):
                    if vals[t] == sv[mid]:
                        rep = cand[t]
                        break
                if _valid(d, i, rep):
                    hi = mid
                else:
                    lo = mid + 1
            if lo == sv.shape[0]:
                return logq, -1
            thr = sv[lo]
            total = 0.0
            for t in range(nc):
                if vals[t] >= thr:
                    total += vals[t]
            r = uniforms[u] * total
            u += 1
            j = -1
            acc = 0.0
            for t in range(nc):
                if vals[t] >= thr:
                    acc += vals[t]
                    j = cand[t]
                    if acc > r:
                        break
            logq += math.log(d[j] / total)
            edges[e, 0] = i
            edges[e, 1] = j
            e += 1
            d[i] -= 1
            d[j] -= 1
            mark[j] = hub_round
    return logq, e


@njit(cache=True)
def sample_many_undirected(deg, uniforms):
    """Run ``uniforms.shape[0]`` independent draws; returns the log q values."""
    ns = uniforms.shape[0]
    m = uniforms.shape[1]
    out = np.empty(ns, dtype=np.float64)
    edges = np.empty((max(m, 1), 2), dtype=np.int64)
    for s in range(ns):
        lq, e = sample_undirected(deg, uniforms[s], edges)
        if e != m:
            out[s] = np.nan
        else:
            out[s] = lq
    return out


@njit(cache=True)
def graphical_hist(cnt, top, cle, sle):
    """Erdos-Gallai on a degree histogram cnt[0..top], checked only at block ends."""
    total = 0
    for v in range(1, top + 1):
        total += v * cnt[v]
    if total % 2 == 1:
        return False
    cle[0] = cnt[0]
    sle[0] = 0
    for v in range(1, top + 1):
        cle[v] = cle[v - 1] + cnt[v]
        sle[v] = sle[v - 1] + v * cnt[v]
    k = 0
    lhs = 0
    for v in range(top, 0, -1):
        c = cnt[v]
        if c == 0:
            continue
        k += c
        lhs += v * c
        t = min(k, v)
        tail = sle[t - 1]
        if v - 1 >= t:
            tail += k * (cle[v - 1] - cle[t - 1])
        if lhs > k * (k - 1) + tail:
            return False
    return True


@njit(cache=True)
def _hpush(heap, size, key):
    i = size
    heap[i] = key
    while i > 0:
        p = (i - 1) // 2
        if heap[p] <= heap[i]:
            break
        heap[p], heap[i] = heap[i], heap[p]
        i = p
    return size + 1


@njit(cache=True)
def _hpop(heap, size):
    top = heap[0]
    size -= 1
    heap[0] = heap[size]
    i = 0
    while True:
        l = 2 * i + 1
        if l >= size:
            break
        c = l
        if l + 1 < size and heap[l + 1] < heap[l]:
            c = l + 1
        if heap[i] <= heap[c]:
            break
        heap[i], heap[c] = heap[c], heap[i]
        i = c
    return top, size


@njit(cache=True)
def sample_undirected(deg, uniforms, edges):
    """One draw of the sequential importance sampler.

    The hub is the lowest-index node of minimal positive residual degree; it
    is wired to candidates drawn with probability proportional to their
    residual degree among those that keep the residual sequence graphical.
    Returns (log q, number of edges written). q is the product of the choice
    probabilities times prod(hub degree!), so E[1/q] = |G_D|. A negative
    edge count signals a stuck state (never expected for graphical input).

    Candidates are kept in per-degree buckets. Whether a candidate keeps the
    sequence graphical depends only on its degree and is monotone in it, so
    a binary search over the distinct available degrees finds the threshold.
    """
    n = deg.shape[0]
    d = deg.copy()
    top = 0
    for v in range(n):
        if d[v] > top:
            top = d[v]
    if top == 0:
        return 0.0, 0
    cnt = np.zeros(top + 2, dtype=np.int64)
    for v in range(n):
        cnt[d[v]] += 1
    # bucket v can never hold more nodes than start with degree >= v
    cap = np.zeros(top + 2, dtype=np.int64)
    for v in range(n):
        for x in range(1, d[v] + 1):
            cap[x] += 1
    off = np.zeros(top + 2, dtype=np.int64)
    for x in range(1, top + 1):
        off[x + 1] = off[x] + cap[x]
    store = np.empty(off[top + 1] + 1, dtype=np.int64)
    sz = np.zeros(top + 2, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    heap = np.empty(n + edges.shape[0] + 1, dtype=np.int64)
    hs = 0
    for v in range(n):
        if d[v] > 0:
            x = d[v]
            store[off[x] + sz[x]] = v
            pos[v] = sz[x]
            sz[x] += 1
            hs = _hpush(heap, hs, x * n + v)
    parked = np.empty(top + 1, dtype=np.int64)
    vals = np.empty(top + 1, dtype=np.int64)
    cle = np.empty(top + 2, dtype=np.int64)
    sle = np.empty(top + 2, dtype=np.int64)
    logq = 0.0
    e = 0
    u = 0
    cur = top
    while hs > 0:
        key, hs = _hpop(heap, hs)
        dv = key // n
        i = key - dv * n
        if dv == 0 or d[i] != dv:
            continue
        logq += math.lgamma(dv + 1.0)
        # take the hub out of its bucket
        p = pos[i]
        last = store[off[dv] + sz[dv] - 1]
        store[off[dv] + p] = last
        pos[last] = p
        sz[dv] -= 1
        pos[i] = -1
        npk = 0
        while d[i] > 0:
            dh = d[i]
            cnt[dh] -= 1
            cnt[dh - 1] += 1
            nv = 0
            for x in range(1, cur + 1):
                if sz[x] > 0:
                    vals[nv] = x
                    nv += 1
            if nv == 0:
                return logq, -1
            lo = 0
            hi = nv
            while lo < hi:
                mid = (lo + hi) // 2
                t = vals[mid]
                cnt[t] -= 1
                cnt[t - 1] += 1
                ok = graphical_hist(cnt, cur, cle, sle)
                cnt[t] += 1
                cnt[t - 1] -= 1
                if ok:
                    hi = mid
                else:
                    lo = mid + 1
            if lo == nv:
                return logq, -1
            total = 0.0
            for t_ in range(lo, nv):
                total += vals[t_] * sz[vals[t_]]
            r = uniforms[u] * total
            u += 1
            acc = 0.0
            x = vals[nv - 1]
            for t_ in range(lo, nv):
                w = vals[t_] * sz[vals[t_]]
                if r < acc + w or t_ == nv - 1:
                    x = vals[t_]
                    break
                acc += w
            pick = int((r - acc) / x)
            if pick >= sz[x]:
                pick = sz[x] - 1
            if pick < 0:
                pick = 0
            j = store[off[x] + pick]
            logq += math.log(x / total)
            edges[e, 0] = i
            edges[e, 1] = j
            e += 1
            d[i] -= 1
            # j leaves its bucket and is parked until the hub is done
            last = store[off[x] + sz[x] - 1]
            store[off[x] + pick] = last
            pos[last] = pick
            sz[x] -= 1
            pos[j] = -1
            d[j] -= 1
            cnt[x] -= 1
            cnt[x - 1] += 1
            parked[npk] = j
            npk += 1
            if d[j] > 0:
                hs = _hpush(heap, hs, d[j] * n + j)
            while cur > 0 and cnt[cur] == 0:
                cur -= 1
        for q in range(npk):
            j = parked[q]
            x = d[j]
            if x > 0:
                store[off[x] + sz[x]] = j
                pos[j] = sz[x]
                sz[x] += 1
    return logq, e
