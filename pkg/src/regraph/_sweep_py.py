"""Pure-Python full-enumeration sweep over all pairings.

Reference implementation of the hot kernel: enumerate every perfect matching
on n bins of degree d, and accumulate exact integer statistics (Hamiltonian
counts, simplicity, and optionally the full cycle-census class table).  The
compiled extension in ``_sweep`` implements the same contract; results are
aggregate-identical.  Use this one only at desk scale (nd <= 14 or so).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def pack_cvec(cvec) -> int:
    """Pack a counts vector (c_1..c_r, each < 256, r <= 8) into one integer."""
    out = 0
    for i, c in enumerate(cvec):
        if not 0 <= c < 256:
            raise ValueError("census count out of packing range")
        out |= c << (8 * i)
    return out


def unpack_cvec(packed: int, r: int) -> tuple:
    return tuple((int(packed) >> (8 * i)) & 0xFF for i in range(r))


def ham_cycle_edge_lists(n: int) -> list:
    """Edge lists of all (n-1)!/2 undirected Hamiltonian vertex cycles on
    [n], canonically oriented (start at 0, second < last)."""
    from itertools import permutations

    out = []
    for perm in permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        order = (0,) + perm
        out.append([
            tuple(sorted((order[i], order[(i + 1) % n]))) for i in range(n)
        ])
    return out


@dataclass
class SweepResult:
    """Aggregate statistics of a full pairing enumeration.

    The census-class table has one row per distinct census x, described by
    four parallel arrays (the class identity itself is not exported):
    ``census_count`` pairings in the class, ``census_hsum`` their total
    Hamiltonian count, ``census_cvec`` the packed counts vector (pack_cvec),
    and ``census_disjoint`` whether the class's cycles are pairwise
    vertex-disjoint.  ``cvec_*`` aggregates the same data per counts vector.
    Rows are sorted by (cvec, count, h_sum, disjoint) so that the two kernel
    backends produce identical arrays.
    """

    n: int
    d: int
    r: int
    total: int
    h_sum: int
    h2_sum: int
    zero_h: int
    simple: int
    census_count: np.ndarray
    census_hsum: np.ndarray
    census_cvec: np.ndarray
    census_disjoint: np.ndarray
    cvec_key: np.ndarray
    cvec_count: np.ndarray
    cvec_hsum: np.ndarray


def _find_cycles(pairs, bins, r, by_bin):
    """All cycles of length <= r as (sorted pair-index tuple, bin mask)."""
    found = []
    for s, (bu, bv) in enumerate(bins):
        if bu == bv:
            found.append(((s,), 1 << bu))
            continue
        if r < 2:
            continue
        start_mask = (1 << bu) | (1 << bv)

        def extend(cur_bin, used, used_mask):
            for idx, bx in by_bin[cur_bin]:
                if idx <= s or idx in used:
                    continue
                if bx == bu:
                    found.append((tuple(sorted(used + (idx, s))), used_mask))
                elif not (used_mask >> bx) & 1 and len(used) + 2 < r:
                    extend(bx, used + (idx,), used_mask | (1 << bx))

        extend(bv, (), start_mask)
    return found


def sweep(n: int, d: int, r: int = 0, want_census: bool = False) -> SweepResult:
    nd = n * d
    if nd > 18:
        raise ValueError("sweep guard: n*d must be <= 18")
    if nd % 2:
        raise ValueError("n*d must be even")
    ham_lists = ham_cycle_edge_lists(n) if n >= 3 else []
    mate = [-1] * nd
    total = h_sum = h2_sum = zero_h = simple_count = 0
    census_table: dict = {}
    cvec_table: dict = {}

    def leaf():
        nonlocal total, h_sum, h2_sum, zero_h, simple_count
        pairs = [(u, mate[u]) for u in range(nd) if u < mate[u]]
        bins = [(u // d, v // d) for u, v in pairs]
        adj = [[0] * n for _ in range(n)]
        loops = 0
        is_simple = True
        for bu, bv in bins:
            if bu == bv:
                loops += 1
                is_simple = False
            else:
                adj[bu][bv] += 1
                adj[bv][bu] += 1
                if adj[bu][bv] > 1:
                    is_simple = False
        h = 0
        for edges in ham_lists:
            prod = 1
            for u, v in edges:
                prod *= adj[u][v]
                if not prod:
                    break
            h += prod
        total += 1
        h_sum += h
        h2_sum += h * h
        if h == 0:
            zero_h += 1
        if is_simple:
            simple_count += 1
        if want_census:
            by_bin: dict = {b: [] for b in range(n)}
            for idx, ((u, v), (bu, bv)) in enumerate(zip(pairs, bins)):
                by_bin[bu].append((idx, bv))
                if bu != bv:
                    by_bin[bv].append((idx, bu))
            cycles = _find_cycles(pairs, bins, r, by_bin)
            # Class identity is the descriptor set itself: cycles encoded by
            # their prevertex pairs, not by pairing-relative pair indices.
            key = tuple(
                sorted(
                    tuple(sorted(pairs[j][0] * nd + pairs[j][1] for j in c))
                    for c, _ in cycles
                )
            )
            cvec = [0] * r
            disjoint = True
            seen_mask = 0
            for c, mask in cycles:
                cvec[len(c) - 1] += 1
                if seen_mask & mask:
                    disjoint = False
                seen_mask |= mask
            cvec = tuple(cvec)
            row = census_table.get(key)
            if row is None:
                census_table[key] = [1, h, cvec, disjoint]
            else:
                row[0] += 1
                row[1] += h
            crow = cvec_table.get(cvec)
            if crow is None:
                cvec_table[cvec] = [1, h]
            else:
                crow[0] += 1
                crow[1] += h

    def rec(free):
        if not free:
            leaf()
            return
        u = free[0]
        for j in range(1, len(free)):
            v = free[j]
            mate[u], mate[v] = v, u
            rec(free[1:j] + free[j + 1:])
        # mate entries are overwritten on the next assignment; no cleanup needed

    rec(list(range(nd)))
    census_rows = sorted(
        (pack_cvec(row[2]), row[0], row[1], int(row[3]))
        for row in census_table.values()
    )
    cvec_rows = sorted(
        (pack_cvec(cv), row[0], row[1]) for cv, row in cvec_table.items()
    )
    return SweepResult(
        n,
        d,
        r,
        total,
        h_sum,
        h2_sum,
        zero_h,
        simple_count,
        np.array([r[1] for r in census_rows], dtype=np.int64),
        np.array([r[2] for r in census_rows], dtype=np.int64),
        np.array([r[0] for r in census_rows], dtype=np.uint64),
        np.array([r[3] for r in census_rows], dtype=np.uint8),
        np.array([r[0] for r in cvec_rows], dtype=np.uint64),
        np.array([r[1] for r in cvec_rows], dtype=np.int64),
        np.array([r[2] for r in cvec_rows], dtype=np.int64),
    )
