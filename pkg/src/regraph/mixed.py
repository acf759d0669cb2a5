"""Hamiltonian-superimposed models: uniform Hamiltonian cycles with their
conditioning couplings, the unscrambled mixed model (H, Q), the scrambled
model obtained by per-bin slot randomization, and its simple-conditioned
variant via rejection.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .params import ModelParams
from .pairing import Pairing, project, is_simple, sample_pairing


def _canonical(order: Sequence[int]) -> tuple:
    """Rotate to start at vertex 0 and reflect so second < last."""
    order = list(order)
    i = order.index(0)
    order = order[i:] + order[:i]
    if len(order) >= 3 and order[1] > order[-1]:
        order = [order[0]] + order[:0:-1]
    return tuple(order)


@dataclass(frozen=True)
class HamCycle:
    """Undirected Hamiltonian cycle on [n], stored canonically (starts at 0,
    second element < last element)."""

    order: tuple

    def __post_init__(self):
        if len(self.order) < 3:
            raise ValueError("a Hamiltonian cycle needs at least 3 vertices")
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("order must be a permutation of 0..n-1")
        if self.order != _canonical(self.order):
            raise ValueError("order is not in canonical form")

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "HamCycle":
        return cls(_canonical(order))

    @property
    def n(self) -> int:
        return len(self.order)

    def edges(self) -> list:
        """Unordered edge list following the canonical orientation."""
        o = self.order
        return [tuple(sorted((o[i], o[(i + 1) % len(o)]))) for i in range(len(o))]

    def contains_path(self, path: Sequence[int]) -> bool:
        own = set(self.edges())
        return all(
            tuple(sorted((path[i], path[i + 1]))) in own for i in range(len(path) - 1)
        )

    def to_text(self) -> str:
        return f"hamcycle {self.n}\n" + " ".join(map(str, self.order)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "HamCycle":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        tag, n = lines[0].split()
        if tag != "hamcycle":
            raise ValueError("not a hamcycle serialization")
        order = tuple(map(int, lines[1].split()))
        if len(order) != int(n):
            raise ValueError("vertex count mismatch")
        return cls(order)


@dataclass(frozen=True)
class MixedState:
    """A Hamiltonian cycle plus an independent degree-(d-2) pairing."""

    h: HamCycle
    q: Pairing

    def __post_init__(self):
        if self.h.n != self.q.n:
            raise ValueError("h and q must share the vertex count")

    @property
    def d(self) -> int:
        return self.q.deg + 2


def sample_ham(n: int, rng: np.random.Generator) -> HamCycle:
    """Uniform over the (n-1)!/2 undirected Hamiltonian cycles."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rest = rng.permutation(n - 1) + 1
    return HamCycle.from_order([0] + [int(v) for v in rest])


def _switch_positions(cycle: list, t1: int, t2: int) -> list:
    """Switch the oriented edges at positions t1 and t2 of the cycle list
    (edge at position t joins cycle[t] to cycle[t+1], cyclically): the segment
    between them is reversed, preserving the list orientation elsewhere."""
    n = len(cycle)
    if t1 == t2:
        raise ValueError("cannot switch an edge with itself")
    # Rotate so that neither chosen edge is the wrap-around edge.
    start = t2 if (t2 + 1) % n == t1 else t1
    cycle = cycle[start:] + cycle[:start]
    i, j = sorted(((t1 - start) % n, (t2 - start) % n))
    assert j < n - 1
    return cycle[: i + 1] + cycle[i + 1 : j + 1][::-1] + cycle[j + 1 :]


def ham_switch(h: HamCycle, edge1: tuple, edge2: tuple) -> HamCycle:
    """Switch two edges of h, each given as (u, v) oriented along the
    canonical orientation; deletes them and inserts the crossing pair,
    reversing the enclosed segment."""
    o = list(h.order)
    n = len(o)
    pos = {}
    for t in range(n):
        pos[(o[t], o[(t + 1) % n])] = t
    if edge1 not in pos or edge2 not in pos:
        raise ValueError("edges must be oriented edges of the cycle")
    return HamCycle.from_order(_switch_positions(o, pos[edge1], pos[edge2]))


def _create_edge(oriented: list, u: int, w: int) -> list:
    """One conditioning step: transform the oriented cycle so that it contains
    the oriented edge u -> w, by switching u's and w's outgoing edges
    (v₁x₁...x_k v₂ y₁...y_j  ↦  v₁v₂x_k...x₁y₁...y_j)."""
    i = oriented.index(u)
    oriented = oriented[i:] + oriented[:i]
    m = oriented.index(w)
    if m == 1:
        return oriented  # edge already present in this orientation
    return [u, w] + oriented[1:m][::-1] + oriented[m + 1 :]


def _check_paths(paths: Sequence[Sequence[int]]) -> None:
    flat = [v for p in paths for v in p]
    if len(set(flat)) != len(flat):
        raise ValueError("paths must be vertex-disjoint")
    for p in paths:
        if len(p) < 2:
            raise ValueError("each path needs at least one edge")


def condition_ham_forward(
    h: HamCycle,
    paths: Sequence[Sequence[int]],
    rng: np.random.Generator,
    _orientations: Sequence[int] | None = None,
) -> HamCycle:
    """Condition a uniform Hamiltonian cycle to contain the given disjoint
    vertex paths, one path at a time: pick a uniform orientation, then force
    each path edge in turn by a switching.

    ``_orientations`` (one bit per path) replaces the coin flips for
    exhaustive fiber tests.
    """
    _check_paths(paths)
    oriented = list(h.order)
    for idx, path in enumerate(paths):
        bit = (
            int(rng.integers(2)) if _orientations is None else _orientations[idx]
        )
        if bit:
            oriented = [oriented[0]] + oriented[:0:-1]
        for i in range(len(path) - 1):
            oriented = _create_edge(oriented, path[i], path[i + 1])
    return HamCycle.from_order(oriented)


def backward_decision_space(n: int, paths: Sequence[Sequence[int]]) -> list:
    """Sizes of the successive uniform choices made by the backward coupling
    (an orientation flip, then one valid-edge choice per path edge, for each
    path processed last-to-first)."""
    sizes = []
    edge_counts = [len(p) - 1 for p in paths]
    for p in range(len(paths) - 1, -1, -1):
        prior = sum(edge_counts[:p])
        sizes.append(2)
        for i in range(edge_counts[p], 0, -1):
            sizes.append(n - prior - i)
    return sizes


def condition_ham_backward(
    h_cond: HamCycle,
    paths: Sequence[Sequence[int]],
    rng: np.random.Generator,
    _decisions: Sequence[int] | None = None,
) -> HamCycle:
    """Randomized inverse of condition_ham_forward.

    For each path (last forced first): flip the path direction with
    probability 1/2, orient the cycle so the path reads forward, then undo its
    edges from the far end, switching each with a uniformly chosen edge not
    contained in any still-forced structure.
    """
    _check_paths(paths)
    for p in paths:
        if not h_cond.contains_path(p):
            raise ValueError("conditioned cycle is missing a forced path")
    n = h_cond.n
    oriented = list(h_cond.order)
    cursor = 0

    def draw(size: int) -> int:
        nonlocal cursor
        if _decisions is None:
            return int(rng.integers(size))
        val = _decisions[cursor]
        cursor += 1
        return val

    for p in range(len(paths) - 1, -1, -1):
        path = list(paths[p])
        if draw(2):
            path.reverse()
        # Orient the cycle so the path is traversed in path order.
        i = oriented.index(path[0])
        oriented = oriented[i:] + oriented[:i]
        if len(path) >= 2 and oriented[1] != path[1]:
            oriented = [oriented[0]] + oriented[:0:-1]
            assert oriented[1] == path[1]
        prior_edges = {
            tuple(sorted(e))
            for q in paths[:p]
            for e in zip(q, q[1:])
        }
        for i in range(len(path) - 1, 0, -1):
            forbidden = prior_edges | {
                tuple(sorted((path[j], path[j + 1]))) for j in range(i)
            }
            valid = [
                t
                for t in range(n)
                if tuple(sorted((oriented[t], oriented[(t + 1) % n])))
                not in forbidden
            ]
            assert len(valid) == n - len(prior_edges) - i
            t = valid[draw(len(valid))]
            # Locate the forced edge regardless of its current reading
            # direction: earlier segment reversals may have flipped it.
            target = {path[i - 1], path[i]}
            u_pos = next(
                s
                for s in range(n)
                if {oriented[s], oriented[(s + 1) % n]} == target
            )
            oriented = _switch_positions(oriented, t, u_pos)
    return HamCycle.from_order(oriented)


def sample_mixed(params: ModelParams, rng: np.random.Generator) -> MixedState:
    """Independent uniform Hamiltonian cycle and degree-(d-2) pairing."""
    n, d = params.n, params.d
    if n * (d - 2) % 2 != 0:
        raise ValueError("n(d-2) must be even")
    h = sample_ham(n, rng)
    q = sample_pairing(n, d - 2, rng)
    return MixedState(h, q)


def scramble_to_tnd(m: MixedState, rng: np.random.Generator) -> Pairing:
    """Embed (h, q) into a degree-d pairing and randomize each bin's slot
    order.

    Slots 0..d-3 of each bin carry q's prevertices; slot d-2 receives the
    incoming and slot d-1 the outgoing Hamiltonian edge (canonical
    orientation); a uniform independent permutation of the d slots in every
    bin then erases the assignment.
    """
    n, d = m.h.n, m.d
    qd = d - 2
    mate = [-1] * (n * d)

    def link(u: int, v: int):
        mate[u], mate[v] = v, u

    for u, v in m.q.pairs():
        link((u // qd) * d + u % qd, (v // qd) * d + v % qd)
    o = m.h.order
    for i in range(n):
        u, w = o[i], o[(i + 1) % n]
        link(u * d + (d - 1), w * d + (d - 2))
    relabel = list(range(n * d))
    for b in range(n):
        perm = rng.permutation(d)
        for s in range(d):
            relabel[b * d + s] = b * d + int(perm[s])
    scrambled = [-1] * (n * d)
    for v, w in enumerate(mate):
        scrambled[relabel[v]] = relabel[w]
    return Pairing(n, d, tuple(scrambled))


def sample_tstar(
    params: ModelParams, rng: np.random.Generator, max_attempts: int = 100000
) -> Pairing:
    """Rejection-sample the scrambled model until the projection is simple."""
    for _ in range(max_attempts):
        p = scramble_to_tnd(sample_mixed(params, rng), rng)
        if is_simple(project(p)):
            return p
    raise RuntimeError(
        f"no simple projection in {max_attempts} attempts at n={params.n}, d={params.d}"
    )
