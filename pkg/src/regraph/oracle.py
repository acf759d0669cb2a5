"""Ground-truth engines: exact Hamiltonian-cycle counting, full-enumeration
moments over all pairings, the exact conditional Radon-Nikodym derivative at a
census class, and exact total-variation distances at tiny scale.

Everything here is exact rational arithmetic; the heavy sweeps run through
the kernel layer (compiled when available).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .params import ModelParams
from .pairing import MultiGraph, Pairing, enumerate_pairings
from .mixed import HamCycle, MixedState, scramble_to_tnd
from .census import enumerate_short_cycles
from .combinatorics import poisson_spec
from . import kernels


class EmptyCensusClassError(ValueError):
    """Raised when a conditional is requested at a zero-probability class."""


def count_ham(g: MultiGraph) -> int:
    """Exact number of Hamiltonian cycles, parallel edges distinct.

    Subset DP over directed paths rooted at vertex 0 with multiplicity
    weights, closing the cycle and halving.  Loops are never part of a
    Hamiltonian cycle.  For n = 2 a cycle is an unordered pair of distinct
    parallel edges, and n = 1 has none.
    """
    n = g.n
    if n > 24:
        raise ValueError("count_ham guard: n must be <= 24")
    if n <= 1:
        return 0
    if n == 2:
        m = g.multiplicity(0, 1)
        return m * (m - 1) // 2
    adj = g.adjacency_matrix().astype(np.int64)
    np.fill_diagonal(adj, 0)
    full = 1 << n
    dp = np.zeros((full, n), dtype=np.int64)
    dp[1, 0] = 1
    for mask in range(1, full, 2):  # root 0 always on the path
        row = dp[mask]
        if not row.any():
            continue
        reach = row @ adj  # weighted path extensions to each vertex
        for u in range(1, n):
            bit = 1 << u
            if not mask & bit and reach[u]:
                dp[mask | bit, u] += reach[u]
    closing = dp[full - 1] @ adj[:, 0]
    return int(closing) // 2


def count_ham_bruteforce(g: MultiGraph) -> int:
    """Independent oracle: sum multiplicity products over all (n-1)!/2 vertex
    orders.  Guarded small; used to pin count_ham in tests."""
    n = g.n
    if n > 8:
        raise ValueError("brute-force guard: n must be <= 8")
    if n <= 1:
        return 0
    if n == 2:
        m = g.multiplicity(0, 1)
        return m * (m - 1) // 2
    total = 0
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        order = (0,) + perm
        prod = 1
        for i in range(n):
            prod *= g.multiplicity(order[i], order[(i + 1) % n])
            if not prod:
                break
        total += prod
    return total


@lru_cache(maxsize=8)
def _census_sweep(n: int, d: int, r: int) -> "kernels.SweepResult":
    return kernels.sweep(n, d, r=r, want_census=True)


def _check_guard(params: ModelParams, allow_long: bool) -> None:
    nd = params.n * params.d
    if nd > 18 or nd % 2:
        raise ValueError("full enumeration requires even n*d <= 18")
    if nd == 18 and not allow_long:
        raise ValueError(
            "n*d = 18 sweeps take minutes; pass allow_long=True to proceed"
        )


@dataclass(frozen=True)
class ExactMoments:
    """Exact aggregates of H_n over the uniform pairing model, with the
    per-census-counts conditional table."""

    params: ModelParams
    e_h: Fraction
    e_h2: Fraction
    p_zero: Fraction
    p_simple: Fraction
    census_table: tuple  # ((counts vector, probability, mean H), ...)

    def to_json(self) -> str:
        def frac(x: Fraction) -> str:
            return f"{x.numerator}/{x.denominator}"

        return json.dumps(
            {
                "n": self.params.n,
                "d": self.params.d,
                "r": self.params.r,
                "e_h": frac(self.e_h),
                "e_h2": frac(self.e_h2),
                "p_zero": frac(self.p_zero),
                "p_simple": frac(self.p_simple),
                "census_table": [
                    {"counts": list(c), "probability": frac(p), "mean_h": frac(m)}
                    for c, p, m in self.census_table
                ],
            }
        )


def exact_moments(params: ModelParams, allow_long: bool = False) -> ExactMoments:
    _check_guard(params, allow_long)
    res = _census_sweep(params.n, params.d, params.r)
    total = res.total
    table = []
    for key, cnt, hs in zip(res.cvec_key, res.cvec_count, res.cvec_hsum):
        counts = kernels.unpack_cvec(int(key), params.r)
        table.append((counts, Fraction(int(cnt), total), Fraction(int(hs), int(cnt))))
    return ExactMoments(
        params,
        Fraction(res.h_sum, total),
        Fraction(res.h2_sum, total),
        Fraction(res.zero_h, total),
        Fraction(res.simple, total),
        tuple(table),
    )


def exact_conditional_rnd(params: ModelParams, census_counts, allow_long: bool = False) -> Fraction:
    """f_{r,n} at the census class: E[H_n | counts] / E[H_n]."""
    moments = exact_moments(params, allow_long)
    counts = tuple(census_counts)
    for c, _, mean_h in moments.census_table:
        if c == counts:
            return mean_h / moments.e_h
    raise EmptyCensusClassError(f"census counts {counts} occur with probability 0")


def _poisson_class_weights(params: ModelParams, means):
    """P[Z = x] as a function of the counts vector only: exp(-Λ) ∏ mean^{c_k}
    for the independent Poisson 0/1 field over all |J_k| descriptors."""
    spec = poisson_spec(params)
    r = params.r
    lam_total = sum(spec.counts[k] * means[k] for k in range(1, r + 1))
    z_const = math.exp(-float(lam_total))

    def weight(cvec) -> float:
        pz = z_const
        for k in range(1, r + 1):
            pz *= float(means[k]) ** cvec[k - 1]
        return pz

    return weight


def _class_pz(params: ModelParams, res, means) -> np.ndarray:
    """P[Z = x] per census-class row, via the per-cvec weight table."""
    weight = _poisson_class_weights(params, means)
    pz_by_cvec = np.array(
        [weight(kernels.unpack_cvec(int(k), params.r)) for k in res.cvec_key]
    )
    idx = np.searchsorted(res.cvec_key, res.census_cvec)
    return pz_by_cvec[idx]


def _tv_from_rows(p_rows: np.ndarray, pz_rows: np.ndarray) -> float:
    """d_TV(I_r, Z) = Σ_x (P[I_r = x] - P[Z = x])_+ over the support."""
    return float(np.maximum(p_rows - pz_rows, 0.0).sum())


def _tv_from_classes(params: ModelParams, class_probs, means) -> float:
    """Scalar-path TV for class lists built outside the kernel sweep."""
    weight = _poisson_class_weights(params, means)
    tv = 0.0
    for cvec, p in class_probs:
        diff = float(p) - weight(cvec)
        if diff > 0:
            tv += diff
    return tv


def enumerate_tnd_states(params: ModelParams):
    """Every (h, q, per-bin slot assignment) of the scrambled model with its
    resulting degree-d pairing, each triple equally likely.

    Guarded: the triple count (n-1)!/2 · ⟦n(d-2)⟧_{n(d-2)/2} · (d!)^n must be
    modest (it is 11664 at n=4, d=3).
    """
    n, d = params.n, params.d
    qd = d - 2
    num_h = math.factorial(n - 1) // 2
    num_q = 1
    for i in range(0, n * qd, 2):
        num_q *= n * qd - i - 1
    triples = num_h * num_q * math.factorial(d) ** n
    if triples > 200000:
        raise ValueError(f"scrambled-model enumeration too large ({triples} triples)")
    perms = list(itertools.permutations(range(d)))
    for rest in itertools.permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue
        h = HamCycle((0,) + rest)
        for q in enumerate_pairings(n, qd):
            base = _embed(MixedState(h, q))
            for assignment in itertools.product(perms, repeat=n):
                relabel = [
                    b * d + assignment[b][s] for b in range(n) for s in range(d)
                ]
                mate = [-1] * (n * d)
                for v, w in enumerate(base):
                    mate[relabel[v]] = relabel[w]
                yield Pairing(n, d, tuple(mate))


def _embed(m: MixedState) -> list:
    """The unscrambled slot assignment of scramble_to_tnd as a mate list."""
    n, d = m.h.n, m.d
    qd = d - 2
    mate = [-1] * (n * d)
    for u, v in m.q.pairs():
        a = (u // qd) * d + u % qd
        b = (v // qd) * d + v % qd
        mate[a], mate[b] = b, a
    o = m.h.order
    for i in range(n):
        u, w = o[i], o[(i + 1) % n]
        a, b = u * d + (d - 1), w * d + (d - 2)
        mate[a], mate[b] = b, a
    return mate


def _tnd_class_probs_enumerated(params: ModelParams) -> list:
    """Class probabilities of the scrambled model by direct enumeration of
    (h, q, slot assignment) triples."""
    counts: dict = {}
    total = 0
    for p in enumerate_tnd_states(params):
        census = enumerate_short_cycles(p, params.r)
        key = tuple(sorted(desc.pairs for desc in census.cycles))
        entry = counts.get(key)
        if entry is None:
            counts[key] = [1, census.counts]
        else:
            entry[0] += 1
        total += 1
    return [
        (cvec, Fraction(c, total)) for c, cvec in counts.values()
    ]


def exact_tv_census(
    params: ModelParams, model: str = "pmd", allow_long: bool = False
) -> float:
    """Exact d_TV between the census process I_r and the independent Poisson
    field Z with per-length means λ (pmd) or μ (tnd)."""
    if model not in ("pmd", "tnd"):
        raise ValueError("model must be pmd or tnd")
    spec = poisson_spec(params)
    if model == "pmd":
        _check_guard(params, allow_long)
        res = _census_sweep(params.n, params.d, params.r)
        p_rows = res.census_count / res.total
        return _tv_from_rows(p_rows, _class_pz(params, res, spec.lam))
    return _tv_from_classes(
        params, _tnd_class_probs_enumerated(params), spec.mu
    )


def tnd_tv_reweighted(params: ModelParams, allow_long: bool = False) -> float:
    """The scrambled-model TV by the H-reweighting route instead of state
    enumeration: P_T[{P}] = H(P)/E H · P_P[{P}], so a class has probability
    (class Σ H)/(total Σ H).  Must agree with exact_tv_census(tnd) where both
    apply."""
    _check_guard(params, allow_long)
    spec = poisson_spec(params)
    res = _census_sweep(params.n, params.d, params.r)
    p_rows = res.census_hsum / res.h_sum
    return _tv_from_rows(p_rows, _class_pz(params, res, spec.mu))


def ratio_spread(params: ModelParams, lam: float, allow_long: bool = False) -> float:
    """max over strictly lam-neat classes x of |P[I_r = x]/P[Z = x] - 1|."""
    _check_guard(params, allow_long)
    spec = poisson_spec(params)
    res = _census_sweep(params.n, params.d, params.r)
    d, r = params.d, params.r
    budget = lam * (d - 1) ** r
    usage_by_cvec = np.array(
        [
            sum(
                2 * k * c
                for k, c in enumerate(kernels.unpack_cvec(int(key), r), start=1)
            )
            for key in res.cvec_key
        ]
    )
    idx = np.searchsorted(res.cvec_key, res.census_cvec)
    neat = (res.census_disjoint.astype(bool)) & (usage_by_cvec[idx] <= budget)
    if not neat.any():
        return 0.0
    pz = _class_pz(params, res, spec.lam)[neat]
    p_rows = res.census_count[neat] / res.total
    return float(np.abs(p_rows / pz - 1.0).max())


def p_h_zero(params: ModelParams, allow_long: bool = False) -> Fraction:
    """Exact P[H_n = 0] under the uniform pairing model."""
    _check_guard(params, allow_long)
    res = _census_sweep(params.n, params.d, params.r)
    return Fraction(res.zero_h, res.total)
