"""Kernel bodies shared by the numba and python backends.

Every function here must be valid under @njit AND as plain Python over numpy
arrays, with identical results. Avoid numpy scalar uint64 multiplies (they
warn on overflow outside numba); signed int64 bit tricks behave the same in
both worlds. ``fnv1a_batch`` is numba-only; ``fnv1a_batch_py`` is its masked
big-int twin.
"""

import numpy as np

# Probe-start mix and the stand-in for a hash that lands on the empty
# sentinel 0 (golden-ratio constant as signed int64).
_ZERO_SUB = -7046029254386353131


def fnv1a_batch(buf, out):
    """FNV-1a 64 over NUL-terminated rows of a (n, width) uint8 matrix."""
    n, w = buf.shape
    for i in range(n):
        h = np.uint64(0xCBF29CE484222325)
        for j in range(w):
            b = buf[i, j]
            if b == 0:
                break
            h = (h ^ np.uint64(b)) * np.uint64(0x100000001B3)
        out[i] = np.int64(h)
    return 0


def fnv1a_batch_py(buf, out):
    n, w = buf.shape
    for i in range(n):
        h = 0xCBF29CE484222325
        for j in range(w):
            b = int(buf[i, j])
            if b == 0:
                break
            h = ((h ^ b) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
        if h >= 1 << 63:
            h -= 1 << 64
        out[i] = h
    return 0


def table_upsert(tkeys, tslots, budget, next_slot, keys, out_slots, start):
    """Open-addressing hash table: key -> dense slot id.

    Assigns fresh ids in arrival order. Returns the index where it stopped:
    == len(keys) when done, else the caller must grow/rehash and resume
    (budget[0] counts remaining insertions before the load factor cap).
    """
    mask = np.int64(len(tkeys) - 1)
    ns = next_slot[0]
    left = budget[0]
    for i in range(start, len(keys)):
        k = keys[i]
        if k == 0:
            k = _ZERO_SUB
        j = (k ^ (k >> 33)) & mask
        while True:
            t = tkeys[j]
            if t == k:
                out_slots[i] = tslots[j]
                break
            if t == 0:
                if left == 0:
                    budget[0] = 0
                    next_slot[0] = ns
                    return i
                tkeys[j] = k
                tslots[j] = ns
                out_slots[i] = ns
                ns += 1
                left -= 1
                break
            j = (j + 1) & mask
    budget[0] = left
    next_slot[0] = ns
    return len(keys)


def table_lookup(tkeys, tslots, keys, out_slots):
    """Like table_upsert but read-only; missing keys get slot -1."""
    mask = np.int64(len(tkeys) - 1)
    for i in range(len(keys)):
        k = keys[i]
        if k == 0:
            k = _ZERO_SUB
        j = (k ^ (k >> 33)) & mask
        while True:
            t = tkeys[j]
            if t == k:
                out_slots[i] = tslots[j]
                break
            if t == 0:
                out_slots[i] = -1
                break
            j = (j + 1) & mask
    return 0


def table_rehash(old_keys, old_slots, tkeys, tslots):
    """Move all entries into a larger table, preserving slot ids."""
    mask = np.int64(len(tkeys) - 1)
    for i in range(len(old_keys)):
        k = old_keys[i]
        if k == 0:
            continue
        j = (k ^ (k >> 33)) & mask
        while tkeys[j] != 0:
            j = (j + 1) & mask
        tkeys[j] = k
        tslots[j] = old_slots[i]
    return 0


def eh_insert(
    bcls,
    bidx,
    pay,
    base,
    cap,
    grade,
    head,
    nb,
    nitems,
    cnt,
    tot,
    free,
    fcnt,
    gcaps,
    slots,
    vals,
    start,
    window,
    kk,
    need,
):
    """Insert a batch into pooled exponential histograms.

    Bucket regions live in flat arenas (bcls/bidx/pay) addressed by per-slot
    (base, cap); buckets sit oldest->newest at [base+head, base+head+nb).
    Per size class at most kk+1 buckets; two oldest of a class merge on
    overflow. A bucket expires when its newest arrival index leaves the
    window. Returns the batch index where it stopped; when < len(slots),
    need[0] holds the grade whose free list is exhausted.
    """
    B, P = vals.shape
    ncls = cnt.shape[1]
    for t in range(start, B):
        s = slots[t]
        g = grade[s]
        if g < 0:
            if fcnt[0] == 0:
                need[0] = 0
                return t
            fcnt[0] -= 1
            base[s] = free[0, fcnt[0]]
            cap[s] = gcaps[0]
            grade[s] = 0
            g = 0
        bs = base[s]
        c0 = cap[s]
        h = head[s]
        m = nb[s]
        if h + m >= c0:
            if m >= c0:
                # region full: migrate to the next strictly larger grade
                g2 = g + 1
                while g2 < 4 and gcaps[g2] <= c0:
                    g2 += 1
                if g2 >= 4:
                    need[0] = -9
                    return t
                if fcnt[g2] == 0:
                    need[0] = g2
                    return t
                fcnt[g2] -= 1
                nbs = free[g2, fcnt[g2]]
                for j in range(m):
                    bcls[nbs + j] = bcls[bs + h + j]
                    bidx[nbs + j] = bidx[bs + h + j]
                    for q in range(P):
                        pay[nbs + j, q] = pay[bs + h + j, q]
                free[g, fcnt[g]] = bs
                fcnt[g] += 1
                base[s] = nbs
                cap[s] = np.int32(gcaps[g2])
                grade[s] = g2
                bs = nbs
                c0 = cap[s]
            else:
                # slide the live buckets back to the region start
                for j in range(m):
                    bcls[bs + j] = bcls[bs + h + j]
                    bidx[bs + j] = bidx[bs + h + j]
                    for q in range(P):
                        pay[bs + j, q] = pay[bs + h + j, q]
            h = 0
            head[s] = 0
        n1 = nitems[s] + 1
        nitems[s] = n1
        pos = bs + h + m
        bcls[pos] = 0
        bidx[pos] = n1
        for q in range(P):
            v = vals[t, q]
            pay[pos, q] = v
            tot[s, q] += v
        m += 1
        cnt[s, 0] += 1
        c = 0
        while cnt[s, c] > kk + 1:
            off = 0
            for c2 in range(ncls - 1, c, -1):
                off += cnt[s, c2]
            p0 = bs + h + off
            bcls[p0] = c + 1
            bidx[p0] = bidx[p0 + 1]
            for q in range(P):
                pay[p0, q] += pay[p0 + 1, q]
            for j in range(p0 + 1, bs + h + m - 1):
                bcls[j] = bcls[j + 1]
                bidx[j] = bidx[j + 1]
                for q in range(P):
                    pay[j, q] = pay[j + 1, q]
            m -= 1
            cnt[s, c] -= 2
            cnt[s, c + 1] += 1
            c += 1
        w = n1 - window + 1
        while m > 0 and bidx[bs + h] < w:
            cc = bcls[bs + h]
            cnt[s, cc] -= 1
            for q in range(P):
                tot[s, q] -= pay[bs + h, q]
            h += 1
            m -= 1
        head[s] = h
        nb[s] = m
    need[0] = -1
    return B


def eh_query(bcls, bidx, pay, base, head, nb, nitems, tot, slots, window, out):
    """Window count (exact) and payload sum estimates per queried slot.

    out[t] = [count, est_0 .. est_{P-1}]. The oldest bucket may straddle the
    window edge; its in-window item count c is exact because arrival indices
    are consecutive, and its payload contributes proportionally (c/size).
    Slots that never saw an item report count 0.
    """
    P = tot.shape[1]
    for t in range(len(slots)):
        s = slots[t]
        n = nitems[s]
        if n <= 0 or nb[s] <= 0:
            for q in range(P + 1):
                out[t, q] = 0.0
            continue
        wcount = n if n < window else window
        out[t, 0] = wcount
        p0 = base[s] + head[s]
        size = np.int64(1) << np.int64(bcls[p0])
        c = bidx[p0] - (n - window) if n >= window else bidx[p0]
        if c >= size:
            for q in range(P):
                out[t, 1 + q] = tot[s, q]
        else:
            frac = c / size
            for q in range(P):
                out[t, 1 + q] = tot[s, q] - pay[p0, q] * (1.0 - frac)
    return 0


def counts_upsert(tkeys, tvals, hashes):
    """Exact counting table for one basic window (never grows: sized 4*b)."""
    mask = np.int64(len(tkeys) - 1)
    for i in range(len(hashes)):
        k = hashes[i]
        if k == 0:
            k = _ZERO_SUB
        j = (k ^ (k >> 33)) & mask
        while True:
            t = tkeys[j]
            if t == k:
                tvals[j] += 1
                break
            if t == 0:
                tkeys[j] = k
                tvals[j] = 1
                break
            j = (j + 1) & mask
    return 0


def hll_update(regs, hashes, p):
    """Log-log registers: top p hash bits pick the register, the leading-zero
    run of the remaining bits (plus one) is the candidate rank."""
    nbits = 64 - p
    mask = np.int64(len(regs) - 1)
    for i in range(len(hashes)):
        h = hashes[i]
        idx = (h >> nbits) & mask
        rank = 1
        j = nbits - 1
        while j >= 0 and ((h >> j) & 1) == 0:
            rank += 1
            j -= 1
        if regs[idx] < rank:
            regs[idx] = rank
    return 0
