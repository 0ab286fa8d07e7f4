# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled table folding and the rank-by-rank subset sweep.

Refs in folded tables are assigned exactly as in the numpy fallback: fresh
nodes are numbered ``base + 2, base + 3, ...`` in order of first appearance.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


cdef inline uint64_t _mix(int64_t a, int64_t b) noexcept nogil:
    cdef uint64_t h = <uint64_t>a * 0x9E3779B97F4A7C15ULL
    h ^= <uint64_t>b + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)
    h ^= h >> 31
    h *= 0xBF58476D1CE4E5B9ULL
    h ^= h >> 29
    return h


cdef struct Scratch:
    int64_t *stamp
    int64_t *slot
    int64_t gen
    Py_ssize_t cap


cdef Py_ssize_t _fold(int64_t *table, Py_ssize_t size, Py_ssize_t low, bint zdd,
                      int64_t base, int64_t *out, int64_t *los, int64_t *his,
                      Scratch *sc) noexcept nogil:
    """Fold into ``out`` (size/2 cells); returns the number of fresh nodes."""
    cdef Py_ssize_t half = size // 2
    cdef Py_ssize_t high = half // low
    cdef Py_ssize_t cap = 16
    while cap < 2 * half:
        cap <<= 1
    cdef uint64_t mask = cap - 1
    cdef Py_ssize_t h, j, b = 0, count = 0
    cdef int64_t u0, u1, s
    cdef uint64_t pos
    cdef int64_t *blk
    sc.gen += 1
    for h in range(high):
        blk = table + 2 * h * low
        for j in range(low):
            u0 = blk[j]
            u1 = blk[low + j]
            if (u1 == 0) if zdd else (u0 == u1):
                out[b] = u0
            else:
                pos = _mix(u0, u1) & mask
                while True:
                    if sc.stamp[pos] != sc.gen:
                        sc.stamp[pos] = sc.gen
                        sc.slot[pos] = count
                        los[count] = u0
                        his[count] = u1
                        out[b] = base + 2 + count
                        count += 1
                        break
                    s = sc.slot[pos]
                    if los[s] == u0 and his[s] == u1:
                        out[b] = base + 2 + s
                        break
                    pos = (pos + 1) & mask
            b += 1
    return count


cdef int _scratch_init(Scratch *sc, Py_ssize_t half) noexcept nogil:
    cdef Py_ssize_t cap = 16, i
    while cap < 2 * half:
        cap <<= 1
    sc.cap = cap
    sc.gen = 0
    sc.stamp = <int64_t *>malloc(cap * sizeof(int64_t))
    sc.slot = <int64_t *>malloc(cap * sizeof(int64_t))
    if sc.stamp == NULL or sc.slot == NULL:
        return -1
    for i in range(cap):
        sc.stamp[i] = 0
    return 0


cdef void _scratch_free(Scratch *sc) noexcept nogil:
    free(sc.stamp)
    free(sc.slot)


def fold_table(cnp.int64_t[::1] table, Py_ssize_t low, bint zdd, int64_t base):
    cdef Py_ssize_t size = table.shape[0]
    cdef Py_ssize_t half = size // 2
    out_arr = np.empty(half, dtype=np.int64)
    lo_arr = np.empty(half, dtype=np.int64)
    hi_arr = np.empty(half, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef cnp.int64_t[::1] los = lo_arr
    cdef cnp.int64_t[::1] his = hi_arr
    cdef Scratch sc
    cdef Py_ssize_t count
    if _scratch_init(&sc, half) != 0:
        _scratch_free(&sc)
        raise MemoryError()
    with nogil:
        count = _fold(&table[0], size, low, zdd, base, &out[0], &los[0], &his[0], &sc)
    _scratch_free(&sc)
    return out_arr, lo_arr[:count].copy(), hi_arr[:count].copy()


cdef inline int _popcount(uint64_t x) noexcept nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def sweep(cnp.int64_t[::1] table, int64_t base_cost, cnp.int64_t[::1] jpos, int rank, bint zdd):
    """All optimal states for the ``rank``-subsets of J, folded above ``table``.

    ``jpos`` holds the (ascending) table-index bit positions of J's variables.
    Subsets are local bitmasks over ``jpos`` in colex order.  Returns
    ``(masks, tables, costs, orders, incs, node_lo, node_hi, node_counts)``
    where ``orders[i]`` lists J-local indices bottom-up.
    """
    cdef Py_ssize_t s = jpos.shape[0]
    cdef Py_ssize_t m_size = table.shape[0]
    if rank < 1 or rank > s or s > 62:
        raise ValueError("rank out of range")
    cdef int64_t C[64][64]
    cdef Py_ssize_t a, bb
    for a in range(s + 1):
        C[a][0] = 1
        for bb in range(1, rank + 2):
            C[a][bb] = (C[a - 1][bb - 1] + C[a - 1][bb]) if a > 0 else 0

    cdef Py_ssize_t count = C[s][rank], tsize = m_size >> rank
    masks_arr = np.empty(count, dtype=np.int64)
    tab_arr = np.empty((count, tsize), dtype=np.int64)
    cost_arr = np.empty(count, dtype=np.int64)
    ord_arr = np.empty((count, rank), dtype=np.int64)
    inc_arr = np.empty((count, rank), dtype=np.int64)
    lo_arr = np.empty((count, tsize), dtype=np.int64)
    hi_arr = np.empty((count, tsize), dtype=np.int64)
    cnt_arr = np.empty(count, dtype=np.int64)
    cdef cnp.int64_t[::1] o_mask = masks_arr, o_cost = cost_arr, o_cnt = cnt_arr
    cdef cnp.int64_t[:, ::1] o_tab = tab_arr, o_ord = ord_arr, o_inc = inc_arr
    cdef cnp.int64_t[:, ::1] o_lo = lo_arr, o_hi = hi_arr

    # ping-pong buffers for the intermediate ranks
    cdef Py_ssize_t ell, cap_tab = m_size, cap_row = 1
    for ell in range(1, rank):
        cap_tab = max(cap_tab, C[s][ell] * (m_size >> ell))
        cap_row = max(cap_row, C[s][ell] * ell)
    cdef Py_ssize_t cap_cnt = max(<Py_ssize_t>1, C[s][rank // 2] if rank > 1 else 1)
    for ell in range(rank):
        cap_cnt = max(cap_cnt, C[s][ell])
    cdef Py_ssize_t half_max = m_size // 2 + 1
    cdef Scratch sc
    if _scratch_init(&sc, m_size // 2) != 0:
        _scratch_free(&sc)
        raise MemoryError()
    cdef int64_t *buf = <int64_t *>malloc(
        (2 * cap_tab + 2 * cap_cnt + 4 * cap_row + 6 * half_max) * sizeof(int64_t))
    if buf == NULL:
        _scratch_free(&sc)
        raise MemoryError()
    cdef int64_t *ptab = buf
    cdef int64_t *ctab = ptab + cap_tab
    cdef int64_t *pcost = ctab + cap_tab
    cdef int64_t *ccost = pcost + cap_cnt
    cdef int64_t *pord = ccost + cap_cnt
    cdef int64_t *cord = pord + cap_row
    cdef int64_t *pinc = cord + cap_row
    cdef int64_t *cinc = pinc + cap_row
    cdef int64_t *s_out = cinc + cap_row
    cdef int64_t *s_lo = s_out + half_max
    cdef int64_t *s_hi = s_lo + half_max
    cdef int64_t *b_out = s_hi + half_max
    cdef int64_t *b_lo = b_out + half_max
    cdef int64_t *b_hi = b_lo + half_max
    cdef int64_t *tmp
    cdef Py_ssize_t cnt_l, idx, pidx, best_p, t, cnt, best_cnt, ts
    cdef uint64_t K, parent, top, v, lowbit
    cdef int k, best_k
    cdef int64_t best_cost, cost
    cdef bint last

    with nogil:
        memcpy(ptab, &table[0], m_size * sizeof(int64_t))
        pcost[0] = base_cost
        for ell in range(1, rank + 1):
            cnt_l = C[s][ell]
            ts = m_size >> ell
            last = ell == rank
            K = (<uint64_t>1 << ell) - 1
            for idx in range(cnt_l):
                best_cost = -1
                best_k = -1
                best_cnt = 0
                best_p = 0
                for k in range(s):
                    if not (K >> k) & 1:
                        continue
                    parent = K ^ (<uint64_t>1 << k)
                    pidx = 0
                    v = parent
                    t = 0
                    while v:
                        lowbit = v & (~v + 1)
                        t += 1
                        pidx += C[_popcount(lowbit - 1)][t]
                        v ^= lowbit
                    cnt = _fold(ptab + pidx * 2 * ts, 2 * ts,
                                <Py_ssize_t>1 << (jpos[k] - _popcount(parent & ((<uint64_t>1 << k) - 1))),
                                zdd, pcost[pidx], s_out, s_lo, s_hi, &sc)
                    cost = pcost[pidx] + cnt
                    if best_k < 0 or cost < best_cost:
                        best_cost = cost
                        best_k = k
                        best_cnt = cnt
                        best_p = pidx
                        tmp = b_out; b_out = s_out; s_out = tmp
                        tmp = b_lo; b_lo = s_lo; s_lo = tmp
                        tmp = b_hi; b_hi = s_hi; s_hi = tmp
                if last:
                    memcpy(&o_tab[idx, 0], b_out, ts * sizeof(int64_t))
                    memcpy(&o_lo[idx, 0], b_lo, best_cnt * sizeof(int64_t))
                    memcpy(&o_hi[idx, 0], b_hi, best_cnt * sizeof(int64_t))
                    o_cost[idx] = best_cost
                    o_cnt[idx] = best_cnt
                    o_mask[idx] = <int64_t>K
                    for t in range(ell - 1):
                        o_ord[idx, t] = pord[best_p * (ell - 1) + t]
                        o_inc[idx, t] = pinc[best_p * (ell - 1) + t]
                    o_ord[idx, ell - 1] = best_k
                    o_inc[idx, ell - 1] = best_cnt
                else:
                    memcpy(ctab + idx * ts, b_out, ts * sizeof(int64_t))
                    ccost[idx] = best_cost
                    for t in range(ell - 1):
                        cord[idx * ell + t] = pord[best_p * (ell - 1) + t]
                        cinc[idx * ell + t] = pinc[best_p * (ell - 1) + t]
                    cord[idx * ell + ell - 1] = best_k
                    cinc[idx * ell + ell - 1] = best_cnt
                # Gosper: next mask with the same popcount
                top = K & (~K + 1)
                v = K + top
                K = (((v ^ K) >> 2) // top) | v
            tmp = ptab; ptab = ctab; ctab = tmp
            tmp = pcost; pcost = ccost; ccost = tmp
            tmp = pord; pord = cord; cord = tmp
            tmp = pinc; pinc = cinc; cinc = tmp
    free(buf)
    _scratch_free(&sc)
    return masks_arr, tab_arr, cost_arr, ord_arr, inc_arr, lo_arr, hi_arr, cnt_arr
