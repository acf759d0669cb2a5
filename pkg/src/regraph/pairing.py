"""The configuration model: uniform pairings of prevertices, projection to a
regular pseudograph, switchings, and the forward/backward conditioning
couplings.

Prevertex convention: with n bins of size ``deg``, prevertex ids are
0..n*deg-1 and id = bin*deg + slot, so bin(v) = v // deg.  This makes the
scrambling step of the mixed model a per-bin slot permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Pairing:
    """A perfect matching on n bins of ``deg`` prevertices each.

    ``mate`` is a fixed-point-free involution on 0..n*deg-1.
    """

    n: int
    deg: int
    mate: tuple

    def __post_init__(self):
        m = self.mate
        if len(m) != self.n * self.deg:
            raise ValueError("mate array has wrong length")

    def check(self) -> None:
        for v, w in enumerate(self.mate):
            if w == v or self.mate[w] != v:
                raise ValueError("mate is not a fixed-point-free involution")

    def bin_of(self, v: int) -> int:
        return v // self.deg

    def pairs(self) -> list:
        """All pairs (u, v) with u < v, ascending by u."""
        return [(u, v) for u, v in enumerate(self.mate) if u < v]

    def to_text(self) -> str:
        lines = [f"pairing {self.n} {self.deg}"]
        lines += [f"{u} {v}" for u, v in self.pairs()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Pairing":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        tag, n, deg = lines[0].split()
        if tag != "pairing":
            raise ValueError("not a pairing serialization")
        n, deg = int(n), int(deg)
        mate = [-1] * (n * deg)
        for ln in lines[1:]:
            u, v = map(int, ln.split())
            mate[u], mate[v] = v, u
        p = cls(n, deg, tuple(mate))
        p.check()
        return p


@dataclass(frozen=True)
class MultiGraph:
    """Pseudograph on n vertices: edge multiset with loops and multiplicities.

    ``edges`` maps (u, v) with u <= v to a positive multiplicity.
    """

    n: int
    edges: tuple  # sorted tuple of ((u, v), mult)

    @classmethod
    def from_dict(cls, n: int, mult: dict) -> "MultiGraph":
        items = tuple(sorted((e, m) for e, m in mult.items() if m > 0))
        return cls(n, items)

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u <= v else (v, u)
        return dict(self.edges).get(key, 0)

    def degree(self, v: int) -> int:
        out = 0
        for (u, w), m in self.edges:
            if u == v:
                out += m
            if w == v:
                out += m  # loops count twice via both endpoints
        return out

    def num_loops(self) -> int:
        return sum(m for (u, w), m in self.edges if u == w)

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric adjacency with loops contributing 2 on the diagonal."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for (u, w), m in self.edges:
            if u == w:
                a[u, u] += 2 * m
            else:
                a[u, w] += m
                a[w, u] += m
        return a

    def to_text(self) -> str:
        lines = [f"multigraph {self.n}"]
        lines += [f"{u} {v} {m}" for (u, v), m in self.edges]
        return "\n".join(lines) + "\n"


def project(p: Pairing) -> MultiGraph:
    """Collapse each bin to a vertex, keeping loops and multiplicities."""
    mult: dict = {}
    for u, v in p.pairs():
        e = tuple(sorted((p.bin_of(u), p.bin_of(v))))
        mult[e] = mult.get(e, 0) + 1
    return MultiGraph.from_dict(p.n, mult)


def is_simple(g: MultiGraph) -> bool:
    return all(u != w and m == 1 for (u, w), m in g.edges)


def sample_pairing(n: int, deg: int, rng: np.random.Generator) -> Pairing:
    """Uniform perfect matching: repeatedly pair the lowest unmatched
    prevertex with a uniform unmatched partner."""
    size = n * deg
    if size % 2 != 0:
        raise ValueError("n * deg must be even")
    mate = [-1] * size
    unmatched = list(range(size))
    while unmatched:
        u = unmatched[0]
        j = int(rng.integers(1, len(unmatched)))
        v = unmatched[j]
        mate[u], mate[v] = v, u
        del unmatched[j]
        del unmatched[0]
    return Pairing(n, deg, tuple(mate))


def switch_pairs(p: Pairing, a: int, b: int) -> Pairing:
    """Replace pairs a~A, b~B by a~b, A~B (identity when already a~b)."""
    if a == b:
        raise ValueError("switch requires distinct prevertices")
    big_a, big_b = p.mate[a], p.mate[b]
    if big_a == b:
        return p
    mate = list(p.mate)
    mate[a], mate[b] = b, a
    mate[big_a], mate[big_b] = big_b, big_a
    return Pairing(p.n, p.deg, tuple(mate))


def _check_forced(forced: Sequence) -> None:
    flat = [v for pair in forced for v in pair]
    if len(set(flat)) != len(flat):
        raise ValueError("forced prevertices must be distinct")


def condition_forward(p: Pairing, forced: Sequence) -> Pairing:
    """Sequentially switch each forced pair (a_i, b_i) into the pairing.

    Maps the uniform measure to the uniform measure conditioned to contain
    every forced pair.
    """
    _check_forced(forced)
    for a, b in forced:
        p = switch_pairs(p, a, b)
    return p


def backward_candidates(p: Pairing, forced: Sequence, i: int) -> list:
    """Candidate partners A_i when undoing forced pair i (1-based): all
    prevertices except a_1..a_i and b_1..b_{i-1}."""
    excluded = set()
    for j, (a, b) in enumerate(forced, start=1):
        if j <= i:
            excluded.add(a)
        if j <= i - 1:
            excluded.add(b)
    return [v for v in range(p.n * p.deg) if v not in excluded]


def condition_backward(
    p_cond: Pairing,
    forced: Sequence,
    rng: np.random.Generator,
    _decisions: Sequence | None = None,
) -> Pairing:
    """Randomized inverse of condition_forward.

    For i = k down to 1, sample A_i uniformly from backward_candidates and
    switch a_i~b_i with A_i~mate(A_i).  Applied to the uniform conditioned
    measure this recovers the unconditioned uniform measure.

    ``_decisions`` (candidate-list indices, one per step, ordered i = k..1)
    replaces the random draws for exhaustive fiber tests.
    """
    _check_forced(forced)
    p = p_cond
    for a, b in forced:
        if p.mate[a] != b:
            raise ValueError("forced pair absent from conditioned pairing")
    k = len(forced)
    for step, i in enumerate(range(k, 0, -1)):
        cands = backward_candidates(p, forced, i)
        if _decisions is None:
            big_a = cands[int(rng.integers(len(cands)))]
        else:
            big_a = cands[_decisions[step]]
        a_i, _ = forced[i - 1]
        p = switch_pairs(p, a_i, big_a)
    return p


def enumerate_pairings(n: int, deg: int) -> Iterator[Pairing]:
    """Yield every perfect matching on n*deg prevertices exactly once.

    Guarded at n*deg <= 18 (17!! = 34 459 425 matchings).
    """
    size = n * deg
    if size % 2 != 0:
        raise ValueError("n * deg must be even")
    if size > 18:
        raise ValueError("enumerate_pairings guard: n * deg must be <= 18")
    mate = [-1] * size

    def rec(free: list):
        if not free:
            yield Pairing(n, deg, tuple(mate))
            return
        u = free[0]
        for j in range(1, len(free)):
            v = free[j]
            mate[u], mate[v] = v, u
            yield from rec(free[1:j] + free[j + 1:])
            mate[u] = mate[v] = -1

    yield from rec(list(range(size)))
