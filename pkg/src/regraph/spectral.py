"""Eigenvalue machinery: the Chebyshev-based polynomials Γ_k and Ξ_k, the
closed non-backtracking walk trace identity, and the spectral estimator of
the Hamiltonian-count ratio H_n / E H_n.

All polynomials live on the rescaled spectrum x = λ/√(d-1) and are stored in
the monomial basis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from sympy import mobius

from .pairing import MultiGraph, Pairing, project
from .census import enumerate_short_cycles


@dataclass(frozen=True)
class SpectralPolynomial:
    """Monomial-basis polynomial with (k, d, family) metadata."""

    coeffs: tuple  # coeffs[i] multiplies x^i
    k: int
    d: int
    family: str  # "Gamma", "Xi", or "HamPoly"

    @property
    def degree(self) -> int:
        deg = len(self.coeffs) - 1
        while deg > 0 and self.coeffs[deg] == 0:
            deg -= 1
        return deg

    def __call__(self, x: float) -> float:
        # Horner with a compensated final sum of the partial products
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_many(self, xs: np.ndarray) -> np.ndarray:
        acc = np.zeros_like(xs, dtype=np.float64)
        for c in reversed(self.coeffs):
            acc = acc * xs + c
        return acc


def _poly_add(a, b):
    size = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        for i in range(size)
    ]


def _poly_scale(a, s):
    return [c * s for c in a]


def _cheb2_doubled(k: int) -> list:
    """Coefficients of 2 T_k(x/2): A_0 = 2, A_1 = x, A_k = x A_{k-1} - A_{k-2}."""
    prev, cur = [2], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        shifted = [0] + cur
        prev, cur = cur, _poly_add(shifted, _poly_scale(prev, -1))
    return cur


def gamma_poly(k: int, d: int) -> SpectralPolynomial:
    """Γ₀ = 1; Γ_{2i} = 2T_{2i}(x/2) + (d-2)/(d-1)^i; Γ_{2i+1} = 2T_{2i+1}(x/2)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if d < 3:
        raise ValueError("d must be at least 3")
    if k == 0:
        return SpectralPolynomial((1.0,), 0, d, "Gamma")
    coeffs = [float(c) for c in _cheb2_doubled(k)]
    if k % 2 == 0:
        coeffs[0] += (d - 2) / (d - 1) ** (k // 2)
    return SpectralPolynomial(tuple(coeffs), k, d, "Gamma")


def xi_poly(k: int, d: int) -> SpectralPolynomial:
    """Ξ_k = (1/2k) Σ_{j|k} μ(k/j) (d-1)^{j/2} Γ_j."""
    if k < 1:
        raise ValueError("k must be at least 1")
    acc = [0.0]
    for j in range(1, k + 1):
        if k % j:
            continue
        mu = int(mobius(k // j))
        if mu == 0:
            continue
        acc = _poly_add(
            acc, _poly_scale(gamma_poly(j, d).coeffs, mu * (d - 1) ** (j / 2.0))
        )
    coeffs = tuple(c / (2 * k) for c in acc)
    return SpectralPolynomial(coeffs, k, d, "Xi")


def xi_recovery_eligible(p: Pairing, r: int) -> bool:
    """True when the length-≤r cycles are pairwise vertex-disjoint and any two
    of them sit at graph distance greater than (r - len_i - len_j)/2, so no
    closed non-backtracking walk of length ≤ r can visit two distinct short
    cycles.  Under this predicate tr Ξ_k equals the census count c_k."""
    census = enumerate_short_cycles(p, r)
    cycles = list(census.cycles)
    if len(cycles) < 2:
        return True
    g = project(p)
    nbrs = [[] for _ in range(g.n)]
    for (u, v), m in g.edges:
        if u != v and m > 0:
            nbrs[u].append(v)
            nbrs[v].append(u)
    vert_sets = [desc.bins(p.deg) for desc in cycles]
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            if vert_sets[i] & vert_sets[j]:
                return False
            gap = (r - cycles[i].length - cycles[j].length) / 2
            if gap < 1:
                continue
            # BFS from cycle i, capped at depth ⌊gap⌋
            dist = {v: 0 for v in vert_sets[i]}
            frontier = list(vert_sets[i])
            depth = 0
            while frontier and depth < gap:
                depth += 1
                nxt = []
                for u in frontier:
                    for w in nbrs[u]:
                        if w not in dist:
                            dist[w] = depth
                            nxt.append(w)
                frontier = nxt
            if any(v in dist for v in vert_sets[j]):
                return False
    return True


def census_depth(n: int, d: int) -> int:
    """The estimator's census depth r = ⌊log n / (3 log(d-1))⌋."""
    return int(math.floor(math.log(n) / (3 * math.log(d - 1))))


@dataclass(frozen=True)
class HamPolynomial:
    """Π_{d,n} = Σ_{odd k ≤ r} [1/(kn) + w_k Ξ_k] with w_k = log(1 - 2/(d-1)^k).

    For d = 3 the k = 1 weight is -∞; that term is kept as an explicit
    sentinel (``sentinel_xi``) rather than a float, with the reading: the
    estimator is -∞ (count ratio 0) unless tr Ξ₁ vanishes.
    """

    n: int
    d: int
    r: int
    terms: tuple  # (k, constant 1/(kn), weight, Ξ_k) for finite-weight odd k
    sentinel_xi: SpectralPolynomial | None

    @property
    def degree(self) -> int:
        return max(
            [t[3].degree for t in self.terms]
            + ([self.sentinel_xi.degree] if self.sentinel_xi else [0])
        )


def ham_poly(n: int, d: int) -> HamPolynomial:
    if d < 3:
        raise ValueError("d must be at least 3")
    if n < (d - 1) ** 3:
        raise ValueError(
            f"estimator needs n >= (d-1)^3 = {(d - 1) ** 3} so that r >= 1"
        )
    r = census_depth(n, d)
    terms = []
    sentinel = None
    for k in range(1, r + 1, 2):
        const = 1.0 / (k * n)
        base = 1 - 2 / (d - 1) ** k
        xi = xi_poly(k, d)
        if base <= 0:
            # only d = 3, k = 1 can land here
            sentinel = xi
            terms.append((k, const, None, xi))
        else:
            terms.append((k, const, math.log(base), xi))
    return HamPolynomial(n, d, r, tuple(terms), sentinel)


def spectrum(g: MultiGraph) -> np.ndarray:
    """Ascending adjacency eigenvalues (loops contribute 2 on the diagonal)."""
    a = g.adjacency_matrix().astype(np.float64)
    vals = np.linalg.eigvalsh(a)
    return np.sort(vals)


def trace_poly(g: MultiGraph, poly: SpectralPolynomial) -> float:
    """Σᵢ poly(λᵢ/√(d-1)) over the adjacency spectrum of g."""
    d = poly.d
    xs = spectrum(g) / math.sqrt(d - 1)
    return float(math.fsum(poly.evaluate_many(xs)))


@dataclass(frozen=True)
class HamEstimate:
    """exp(tr Π) with its per-term traces; ``sentinel`` is True when the d = 3
    branch fires (tr Ξ₁ ≠ 0), in which case the estimate is exactly 0."""

    n: int
    d: int
    r: int
    trace_terms: tuple  # (k, tr Ξ_k)
    estimate: float
    sentinel: bool

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "d": self.d,
                "r": self.r,
                "trace_terms": [[k, t] for k, t in self.trace_terms],
                "estimate": self.estimate,
                "sentinel": self.sentinel,
            }
        )


def _regular_degree(g: MultiGraph) -> int:
    degs = {g.degree(v) for v in range(g.n)}
    if len(degs) != 1:
        raise ValueError("graph is not regular")
    return degs.pop()


def estimate_ham_ratio(g: MultiGraph, sentinel_tol: float = 1e-9) -> HamEstimate:
    """The spectral estimate exp(tr Π_{d,n}) of H_n / E H_n."""
    d = _regular_degree(g)
    pi = ham_poly(g.n, d)
    xs = spectrum(g) / math.sqrt(d - 1)
    traces = []
    log_total = 0.0
    sentinel = False
    for k, const, weight, xi in pi.terms:
        t = float(math.fsum(xi.evaluate_many(xs)))
        traces.append((k, t))
        log_total += g.n * const
        if weight is None:
            if abs(t) > sentinel_tol:
                sentinel = True
        else:
            log_total += weight * t
    estimate = 0.0 if sentinel else math.exp(log_total)
    return HamEstimate(g.n, d, pi.r, tuple(traces), estimate, sentinel)
