# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled full-enumeration sweep over all pairings.

Same contract as ``_sweep_py.sweep`` (see its docstring), but fast enough for
the nd = 16 and nd = 18 sweeps.  Census classes are keyed by a 128-bit hash of
the canonical descriptor set; a detected hash collision raises instead of
silently merging classes.
"""

from cython.operator cimport dereference as deref, preincrement as inc
from libcpp.unordered_map cimport unordered_map
from libc.stdint cimport uint64_t, int64_t, uint32_t, int32_t
from libc.string cimport memset

import numpy as np

from ._sweep_py import SweepResult, ham_cycle_edge_lists


cdef struct Payload:
    uint64_t h2
    int64_t count
    int64_t hsum
    uint64_t cvec
    int disjoint


cdef struct CvecPayload:
    int64_t count
    int64_t hsum


cdef inline uint64_t _mix(uint64_t x) noexcept nogil:
    x += <uint64_t>0x9E3779B97F4A7C15
    x = (x ^ (x >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    x = (x ^ (x >> 27)) * <uint64_t>0x94D049BB133111EB
    return x ^ (x >> 31)


cdef class _Sweeper:
    cdef int n, d, nd, m, r
    cdef bint want_census
    cdef int mate[18]
    cdef int pu[9]
    cdef int pv[9]
    cdef int pbu[9]
    cdef int pbv[9]
    cdef int64_t adj[324]
    cdef int bb_idx[18][18]
    cdef int bb_other[18][18]
    cdef int bb_cnt[18]
    cdef int64_t total, h_sum, h2_sum, zero_h, simple
    cdef int32_t[:, ::1] ham
    cdef int ncyc_ham
    cdef unordered_map[uint64_t, Payload] census_map
    cdef unordered_map[uint64_t, CvecPayload] cvec_map
    cdef uint64_t cyc_code[160]
    cdef int cyc_len[160]
    cdef uint32_t cyc_mask[160]
    cdef int ncyc
    cdef int dfs_used[8]
    cdef bint collision

    def __init__(self, int n, int d, int r, bint want_census, ham_edges):
        self.n, self.d, self.r = n, d, r
        self.nd = n * d
        self.m = self.nd // 2
        self.want_census = want_census
        self.ham = ham_edges
        self.ncyc_ham = ham_edges.shape[0]
        self.total = self.h_sum = self.h2_sum = self.zero_h = self.simple = 0
        self.collision = False

    cdef void leaf(self) noexcept nogil:
        cdef int u, v, j, k, i, bu, bv
        cdef int64_t h, prod
        cdef bint simple_flag = True
        j = 0
        for u in range(self.nd):
            v = self.mate[u]
            if u < v:
                self.pu[j] = u
                self.pv[j] = v
                self.pbu[j] = u // self.d
                self.pbv[j] = v // self.d
                j += 1
        memset(self.adj, 0, self.n * self.n * sizeof(int64_t))
        for j in range(self.m):
            bu, bv = self.pbu[j], self.pbv[j]
            if bu == bv:
                simple_flag = False
            else:
                self.adj[bu * self.n + bv] += 1
                self.adj[bv * self.n + bu] += 1
                if self.adj[bu * self.n + bv] > 1:
                    simple_flag = False
        h = 0
        for k in range(self.ncyc_ham):
            prod = 1
            for i in range(self.n):
                prod *= self.adj[self.ham[k, 2 * i] * self.n + self.ham[k, 2 * i + 1]]
                if prod == 0:
                    break
            h += prod
        self.total += 1
        self.h_sum += h
        self.h2_sum += h * h
        if h == 0:
            self.zero_h += 1
        if simple_flag:
            self.simple += 1
        if self.want_census:
            self.census(h)

    cdef void record_cycle(self, int s, int depth) noexcept nogil:
        """Store the cycle made of pairs dfs_used[0..depth-1] plus s."""
        cdef uint64_t codes[8]
        cdef uint64_t tmp, packed
        cdef uint32_t mask = 0
        cdef int k = depth + 1
        cdef int i, j, idx
        for i in range(k):
            idx = self.dfs_used[i] if i < depth else s
            codes[i] = <uint64_t>(self.pu[idx] * self.nd + self.pv[idx])
            mask |= (<uint32_t>1 << self.pbu[idx]) | (<uint32_t>1 << self.pbv[idx])
        # insertion sort of at most 8 codes
        for i in range(1, k):
            tmp = codes[i]
            j = i - 1
            while j >= 0 and codes[j] > tmp:
                codes[j + 1] = codes[j]
                j -= 1
            codes[j + 1] = tmp
        packed = <uint64_t>k
        for i in range(k):
            packed = (packed << 9) | codes[i]
        if self.ncyc < 160:
            self.cyc_code[self.ncyc] = packed
            self.cyc_len[self.ncyc] = k
            self.cyc_mask[self.ncyc] = mask
        self.ncyc += 1

    cdef void dfs(self, int s, int bu, int cur_bin, int depth, uint32_t bins_mask) noexcept nogil:
        cdef int t, idx, bx
        for t in range(self.bb_cnt[cur_bin]):
            idx = self.bb_idx[cur_bin][t]
            if idx <= s:
                continue
            bx = self.bb_other[cur_bin][t]
            if self.in_used(idx, depth):
                continue
            if bx == bu:
                self.dfs_used[depth] = idx
                self.record_cycle(s, depth + 1)
            elif not (bins_mask >> bx) & 1 and depth + 3 <= self.r:
                self.dfs_used[depth] = idx
                self.dfs(s, bu, bx, depth + 1, bins_mask | (<uint32_t>1 << bx))

    cdef bint in_used(self, int idx, int depth) noexcept nogil:
        cdef int i
        for i in range(depth):
            if self.dfs_used[i] == idx:
                return True
        return False

    cdef void census(self, int64_t h) noexcept nogil:
        cdef int b, j, i, k
        cdef uint64_t tmp, h1, h2, cvec_packed
        cdef uint32_t seen
        cdef int disjoint
        cdef Payload* pay
        cdef CvecPayload* cpay
        for b in range(self.n):
            self.bb_cnt[b] = 0
        for j in range(self.m):
            b = self.pbu[j]
            self.bb_idx[b][self.bb_cnt[b]] = j
            self.bb_other[b][self.bb_cnt[b]] = self.pbv[j]
            self.bb_cnt[b] += 1
            if self.pbv[j] != b:
                b = self.pbv[j]
                self.bb_idx[b][self.bb_cnt[b]] = j
                self.bb_other[b][self.bb_cnt[b]] = self.pbu[j]
                self.bb_cnt[b] += 1
        self.ncyc = 0
        for j in range(self.m):
            if self.pbu[j] == self.pbv[j]:
                if self.ncyc < 160:
                    self.cyc_code[self.ncyc] = (<uint64_t>1 << 9) | <uint64_t>(
                        self.pu[j] * self.nd + self.pv[j]
                    )
                    self.cyc_len[self.ncyc] = 1
                    self.cyc_mask[self.ncyc] = <uint32_t>1 << self.pbu[j]
                self.ncyc += 1
            elif self.r >= 2:
                self.dfs(
                    j,
                    self.pbu[j],
                    self.pbv[j],
                    0,
                    (<uint32_t>1 << self.pbu[j]) | (<uint32_t>1 << self.pbv[j]),
                )
        if self.ncyc > 160:
            self.collision = True  # buffer overflow; surfaced as an error
            return
        # sort cycle codes for a canonical class encoding
        cdef int a
        cdef int len_i
        cdef uint32_t mask_i
        for i in range(1, self.ncyc):
            tmp = self.cyc_code[i]
            len_i = self.cyc_len[i]
            mask_i = self.cyc_mask[i]
            a = i - 1
            while a >= 0 and self.cyc_code[a] > tmp:
                self.cyc_code[a + 1] = self.cyc_code[a]
                self.cyc_len[a + 1] = self.cyc_len[a]
                self.cyc_mask[a + 1] = self.cyc_mask[a]
                a -= 1
            self.cyc_code[a + 1] = tmp
            self.cyc_len[a + 1] = len_i
            self.cyc_mask[a + 1] = mask_i
        cvec_packed = 0
        disjoint = 1
        seen = 0
        h1 = <uint64_t>0x0123456789ABCDEF
        h2 = <uint64_t>0xFEDCBA9876543210
        for i in range(self.ncyc):
            cvec_packed += <uint64_t>1 << (8 * (self.cyc_len[i] - 1))
            if seen & self.cyc_mask[i]:
                disjoint = 0
            seen |= self.cyc_mask[i]
            h1 = _mix(h1 ^ self.cyc_code[i])
            h2 = _mix(h2 ^ (self.cyc_code[i] * <uint64_t>0x100000001B3))
        pay = &self.census_map[h1]
        if pay.count == 0:
            pay.h2 = h2
            pay.cvec = cvec_packed
            pay.disjoint = disjoint
        elif pay.h2 != h2:
            self.collision = True
        pay.count += 1
        pay.hsum += h
        cpay = &self.cvec_map[cvec_packed]
        cpay.count += 1
        cpay.hsum += h

    cdef void rec(self, uint32_t free_mask) noexcept nogil:
        cdef int u = 0, v
        if free_mask == 0:
            self.leaf()
            return
        while not (free_mask >> u) & 1:
            u += 1
        cdef uint32_t rest = free_mask & ~(<uint32_t>1 << u)
        for v in range(u + 1, self.nd):
            if (rest >> v) & 1:
                self.mate[u] = v
                self.mate[v] = u
                self.rec(rest & ~(<uint32_t>1 << v))

    def run(self):
        with nogil:
            self.rec((<uint32_t>1 << self.nd) - 1)
        if self.collision:
            raise RuntimeError(
                "census hashing failed (collision or cycle-buffer overflow)"
            )
        rows = self.census_map.size()
        count = np.empty(rows, dtype=np.int64)
        hsum = np.empty(rows, dtype=np.int64)
        cvec = np.empty(rows, dtype=np.uint64)
        disjoint = np.empty(rows, dtype=np.uint8)
        cdef int64_t[::1] count_v = count
        cdef int64_t[::1] hsum_v = hsum
        cdef uint64_t[::1] cvec_v = cvec
        cdef unsigned char[::1] disj_v = disjoint
        cdef size_t i = 0
        cdef unordered_map[uint64_t, Payload].iterator it = self.census_map.begin()
        while it != self.census_map.end():
            count_v[i] = deref(it).second.count
            hsum_v[i] = deref(it).second.hsum
            cvec_v[i] = deref(it).second.cvec
            disj_v[i] = <unsigned char>deref(it).second.disjoint
            i += 1
            inc(it)
        order = np.lexsort((disjoint, hsum, count, cvec))
        crows = self.cvec_map.size()
        ckey = np.empty(crows, dtype=np.uint64)
        ccount = np.empty(crows, dtype=np.int64)
        chsum = np.empty(crows, dtype=np.int64)
        cdef uint64_t[::1] ckey_v = ckey
        cdef int64_t[::1] ccount_v = ccount
        cdef int64_t[::1] chsum_v = chsum
        i = 0
        cdef unordered_map[uint64_t, CvecPayload].iterator cit = self.cvec_map.begin()
        while cit != self.cvec_map.end():
            ckey_v[i] = deref(cit).first
            ccount_v[i] = deref(cit).second.count
            chsum_v[i] = deref(cit).second.hsum
            i += 1
            inc(cit)
        corder = np.argsort(ckey)
        return SweepResult(
            self.n,
            self.d,
            self.r,
            int(self.total),
            int(self.h_sum),
            int(self.h2_sum),
            int(self.zero_h),
            int(self.simple),
            count[order],
            hsum[order],
            cvec[order],
            disjoint[order],
            ckey[corder],
            ccount[corder],
            chsum[corder],
        )


def sweep(int n, int d, int r=0, bint want_census=False):
    nd = n * d
    if nd > 18:
        raise ValueError("sweep guard: n*d must be <= 18")
    if nd % 2:
        raise ValueError("n*d must be even")
    if want_census and not 1 <= r <= 6:
        raise ValueError("compiled sweep supports census depth 1..6")
    if n >= 3:
        cycles = ham_cycle_edge_lists(n)
        ham = np.array(
            [[x for e in c for x in e] for c in cycles], dtype=np.int32
        ).reshape(len(cycles), 2 * n)
    else:
        ham = np.zeros((0, 2 * max(n, 1)), dtype=np.int32)
    return _Sweeper(n, d, r, want_census, ham).run()
