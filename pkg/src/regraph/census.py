"""Cycle censuses: exhaustive detection of short cycles in a pairing or a
mixed state, neatness classification, and closed non-backtracking walk
counts.

A cycle of length k in a pairing is a set of k matching pairs that chain
through k distinct bins; its descriptor is exactly that pair set, so
canonicalization is just sorting.  A length-1 cycle is a within-bin pair
(projecting to a loop) and a length-2 cycle is an unordered pair of distinct
parallel pairs between two bins (projecting to a double edge).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .params import ModelParams
from .pairing import Pairing, MultiGraph


@dataclass(frozen=True)
class CycleDescriptor:
    """A length-k cycle as its sorted tuple of prevertex pairs."""

    pairs: tuple

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "CycleDescriptor":
        return cls(tuple(sorted(tuple(sorted(pr)) for pr in pairs)))

    @property
    def length(self) -> int:
        return len(self.pairs)

    def bins(self, deg: int) -> frozenset:
        return frozenset(v // deg for pr in self.pairs for v in pr)


@dataclass(frozen=True)
class CycleCensus:
    """The 0/1 process I_r of a pairing: all cycles of length <= r present."""

    params: ModelParams
    cycles: frozenset

    @property
    def counts(self) -> tuple:
        c = [0] * self.params.r
        for desc in self.cycles:
            c[desc.length - 1] += 1
        return tuple(c)

    def to_json(self) -> str:
        cycles = sorted(desc.pairs for desc in self.cycles)
        return json.dumps(
            {"counts": list(self.counts), "cycles": [[list(p) for p in c] for c in cycles]}
        )


def enumerate_short_cycles(p: Pairing, r: int) -> CycleCensus:
    """Exhaustive depth-bounded search for all cycles of length <= r.

    From each starting pair (taken as the minimal pair index of the cycle),
    walk pair-to-pair through shared bins, keeping bins distinct; a walk
    closing into the start bin records a descriptor.  Each cycle is generated
    exactly once because the walk always leaves the start pair through its
    second endpoint's bin.
    """
    if r < 1:
        raise ValueError("census depth must be at least 1")
    pairs = p.pairs()
    found = []
    # Bin incidence: for each bin, the (pair index, exit prevertex) choices.
    by_bin: dict = {}
    for idx, (u, v) in enumerate(pairs):
        for w, x in ((u, v), (v, u)):
            by_bin.setdefault(p.bin_of(w), []).append((idx, w, x))

    for s, (u, v) in enumerate(pairs):
        bu, bv = p.bin_of(u), p.bin_of(v)
        if bu == bv:
            found.append(CycleDescriptor.from_pairs([pairs[s]]))
            continue
        if r < 2:
            continue

        def extend(cur_bin: int, used: tuple, used_bins: frozenset):
            for idx, w, x in by_bin.get(cur_bin, ()):  # enter via w, exit via x
                if idx <= s or idx in used:
                    continue
                bx = p.bin_of(x)
                if bx == bu:
                    found.append(
                        CycleDescriptor.from_pairs([pairs[j] for j in used + (idx,)] + [pairs[s]])
                    )
                elif bx not in used_bins and len(used) + 2 < r:
                    extend(bx, used + (idx,), used_bins | {bx})

        extend(bv, (), frozenset({bu, bv}))
    rr = min(r, p.n) if p.n >= 1 else r
    return CycleCensus(ModelParams(p.n, p.deg, rr), frozenset(found))


@dataclass(frozen=True)
class ColoredCycleDescriptor:
    """A cycle in the superimposed graph (Hamiltonian cycle + pairing).

    Edge instances are ("B", u, v) for a Hamiltonian edge on vertices u < v,
    and ("R", a, b) for a pairing edge on q-prevertices a < b.  The instance
    set determines the cycle.
    """

    edges: frozenset
    q_deg: int

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def s_red(self) -> int:
        return sum(1 for e in self.edges if e[0] == "R")

    @property
    def t_blue(self) -> int:
        return sum(1 for e in self.edges if e[0] == "B")

    def prevertices(self) -> frozenset:
        return frozenset(v for tag, a, b in self.edges if tag == "R" for v in (a, b))

    def red_labels(self) -> tuple:
        """Slot labels (1..d-2) of the red edge ends, sorted."""
        return tuple(sorted(v % self.q_deg + 1 for v in self.prevertices()))

    def ham_vertices(self) -> frozenset:
        return frozenset(v for tag, a, b in self.edges if tag == "B" for v in (a, b))


def mixed_census(m, r: int) -> frozenset:
    """All cycles of length <= r in the superimposition of m.h and m.q,
    with colors and prevertex labels.  The full Hamiltonian cycle itself is
    excluded by the length bound (requires r < n)."""
    n = m.h.n
    if r >= n:
        raise ValueError("census depth must be below n for the mixed model")
    qd = m.q.deg
    # Edge instances incident to each vertex: (instance, other endpoint).
    instances = []
    o = m.h.order
    for i in range(n):
        u, v = o[i], o[(i + 1) % n]
        instances.append((("B",) + tuple(sorted((u, v))), u, v))
    for a, b in m.q.pairs():
        instances.append((("R", a, b), a // qd, b // qd))
    by_vertex: dict = {}
    for inst, u, v in instances:
        by_vertex.setdefault(u, []).append((inst, v))
        if u != v:
            by_vertex.setdefault(v, []).append((inst, u))

    order_key = {inst: i for i, (inst, _, _) in enumerate(instances)}
    found = []
    for inst, u, v in instances:
        s = order_key[inst]
        if u == v:  # red loop
            found.append(ColoredCycleDescriptor(frozenset([inst]), qd))
            continue
        if r < 2:
            continue

        def extend(cur: int, used: tuple, used_verts: frozenset):
            for nxt, x in by_vertex.get(cur, ()):  # walk edge nxt to vertex x
                if order_key[nxt] <= s or nxt in used:
                    continue
                if x == u:
                    found.append(ColoredCycleDescriptor(frozenset(used + (nxt, inst)), qd))
                elif x not in used_verts and len(used) + 2 < r:
                    extend(x, used + (nxt,), used_verts | {x})

        extend(v, (), frozenset({u, v}))
    return frozenset(found)


def is_strictly_neat(c: CycleCensus, lam: float) -> bool:
    """Strict neatness: present cycles pairwise vertex-disjoint in the
    projection, and total prevertex usage Σ 2k c_k <= lam (d-1)^r."""
    if lam < 1:
        raise ValueError("lam must be at least 1")
    d, r = c.params.d, c.params.r
    seen: set = set()
    total = 0
    for desc in c.cycles:
        bins = desc.bins(d)
        if seen & bins:
            return False
        seen |= bins
        total += 2 * desc.length
    return total <= lam * (d - 1) ** r


def is_neat_mixed(s: frozenset, lam: float, params: ModelParams) -> bool:
    """Mixed neatness: no shared q-prevertices or Hamiltonian vertices among
    the cycles, with Φ (total prevertices) <= lam (d-1)^r and Ψ (total
    Hamiltonian vertices) <= lam (d-1)^{r-1}."""
    if lam < 1:
        raise ValueError("lam must be at least 1")
    d, r = params.d, params.r
    seen_pv: set = set()
    seen_hv: set = set()
    phi = psi = 0
    for desc in s:
        pv, hv = desc.prevertices(), desc.ham_vertices()
        if (seen_pv & pv) or (seen_hv & hv):
            return False
        seen_pv |= pv
        seen_hv |= hv
        phi += len(pv)
        psi += len(hv)
    return phi <= lam * (d - 1) ** r and psi <= lam * (d - 1) ** (r - 1)


def cnbw_count(g: MultiGraph, k: int) -> int:
    """Number of closed cyclically non-backtracking walks of length k: the
    trace of the k-th power of the directed-edge (Hashimoto) operator.

    Every unit of multiplicity yields two directed instances that are each
    other's reversal; a loop's two instances are its two traversal
    directions, giving 2 closed walks of length 1 per loop.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    ends = []
    for (u, v), mult in g.edges:
        ends.extend([(u, v)] * mult)
    m2 = 2 * len(ends)
    heads = np.empty(m2, dtype=np.int64)
    tails = np.empty(m2, dtype=np.int64)
    for i, (u, v) in enumerate(ends):
        tails[2 * i], heads[2 * i] = u, v
        tails[2 * i + 1], heads[2 * i + 1] = v, u
    b = np.zeros((m2, m2), dtype=np.int64)
    for e in range(m2):
        for f in range(m2):
            if heads[e] == tails[f] and f != e ^ 1:
                b[e, f] = 1
    power = np.linalg.matrix_power(b, k)
    return int(np.trace(power))
