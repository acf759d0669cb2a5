"""Second-moment engine: the edge-coloring measure φ on {R,B}-colorings of an
n-cycle, the exact distribution of the red-edge count V_n, the closed-form
second moment E H² / (E H)², the associated two-state Markov chain, and the
tail bound on V_n.

A coloring f of the n-cycle's edges gets unnormalized weight
(2(d-2))^{r₁(f)} (d-3)^{r₂(f)}, where r₂ counts RR adjacencies and r₁ counts
RB adjacencies (one direction); the normalizer is Z_φ = (d-1)^n + (-1)^n.
V_n = r₁ + r₂ is the number of red edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import c_d, double_falling_factorial
from .sizebias import TwoStateChain, build_chain

_EXACT_LIMIT = 2000


def _junction_weights(d: int) -> dict:
    # weight of the adjacency (current edge color -> next edge color)
    return {
        ("R", "R"): d - 3,
        ("R", "B"): 2 * (d - 2),
        ("B", "R"): 1,
        ("B", "B"): 1,
    }


@dataclass(frozen=True)
class VnDistribution:
    """Exact masses P_φ[V_n = v], v = 0..n."""

    n: int
    d: int
    masses: tuple

    def mean(self) -> Fraction:
        return sum(v * m for v, m in enumerate(self.masses))

    def variance(self) -> Fraction:
        mu = self.mean()
        return sum((v - mu) ** 2 * m for v, m in enumerate(self.masses))


def phi_vn_distribution(n: int, d: int) -> VnDistribution:
    """Exact V_n law by a transfer sweep around the cycle carrying the
    red-edge count; O(n²) big-integer arithmetic."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if d < 3:
        raise ValueError("d must be at least 3")
    if n > _EXACT_LIMIT:
        raise ValueError(f"exact distribution guarded at n <= {_EXACT_LIMIT}")
    w = _junction_weights(d)
    coeffs = [0] * (n + 1)
    for c0 in ("R", "B"):
        # dp[color][v]: weighted colorings of edges 1..t with edge t colored
        # `color` and v red edges so far (edge 1 fixed to c0).
        dp = {"R": [0] * (n + 1), "B": [0] * (n + 1)}
        dp[c0][1 if c0 == "R" else 0] = 1
        for _ in range(n - 1):
            new = {"R": [0] * (n + 1), "B": [0] * (n + 1)}
            for v in range(n):
                new["R"][v + 1] = (
                    w[("R", "R")] * dp["R"][v] + w[("B", "R")] * dp["B"][v]
                )
            for v in range(n + 1):
                new["B"][v] = (
                    w[("R", "B")] * dp["R"][v] + w[("B", "B")] * dp["B"][v]
                )
            dp = new
        for c_last in ("R", "B"):
            for v in range(n + 1):
                coeffs[v] += w[(c_last, c0)] * dp[c_last][v]
    z = (d - 1) ** n + (-1) ** n
    assert sum(coeffs) == z
    return VnDistribution(n, d, tuple(Fraction(c, z) for c in coeffs))


def _vn_log_masses(n: int, d: int) -> np.ndarray:
    """log P_φ[V_n = v] as a float array (-inf where the mass vanishes); the
    same sweep as phi_vn_distribution with per-step rescaling."""
    w = {k: float(v) for k, v in _junction_weights(d).items()}
    acc = np.full(n + 1, -np.inf)
    for c0 in ("R", "B"):
        dpR = np.zeros(n + 1)
        dpB = np.zeros(n + 1)
        if c0 == "R":
            dpR[1] = 1.0
        else:
            dpB[0] = 1.0
        shift = 0.0
        for _ in range(n - 1):
            newR = np.empty(n + 1)
            newR[0] = 0.0
            newR[1:] = w[("R", "R")] * dpR[:-1] + w[("B", "R")] * dpB[:-1]
            newB = w[("R", "B")] * dpR + w[("B", "B")] * dpB
            scale = max(newR.max(), newB.max())
            dpR, dpB = newR / scale, newB / scale
            # flush near-underflow weight to exact zero: those masses are
            # astronomically small and a denormal floor would otherwise
            # masquerade as mass ~exp(-700) in the far tail
            dpR[dpR < 1e-250] = 0.0
            dpB[dpB < 1e-250] = 0.0
            shift += math.log(scale)
        closed = w[("R", c0)] * dpR + w[("B", c0)] * dpB
        with np.errstate(divide="ignore"):
            branch = np.where(closed > 0, np.log(closed), -np.inf)
        acc = np.logaddexp(acc, branch + shift)
    log_z = n * math.log(d - 1) + math.log1p((-1) ** n / (d - 1) ** n)
    return acc - log_z


def second_moment_exact(n: int, d: int, exact: bool | None = None):
    """E H_n² / (E H_n)² in closed form:
    E_φ[ ⟦nd⟧_n/dⁿ · (d-2)^V/⟦(d-2)n⟧_V · 2^{n-V}/⟦2n-1⟧_{n-V} ]
    · (1 + (-1/(d-1))ⁿ), with the ⟦2b-1⟧_b caveat applying at V = 0.

    Returns an exact Fraction when requested (or by default for n within the
    exact-distribution range); otherwise evaluates in log space.
    """
    if n < 3 or d < 3:
        raise ValueError("need n >= 3 and d >= 3")
    if exact is None:
        exact = n <= _EXACT_LIMIT
    if exact:
        dist = phi_vn_distribution(n, d)
        total = Fraction(0)
        for v, mass in enumerate(dist.masses):
            if mass == 0:
                continue
            term = Fraction(double_falling_factorial(n * d, n), d ** n)
            term *= Fraction((d - 2) ** v, double_falling_factorial((d - 2) * n, v))
            term *= Fraction(2 ** (n - v), double_falling_factorial(2 * n - 1, n - v))
            total += mass * term
        return total * (1 + Fraction(-1, d - 1) ** n)
    log_masses = _vn_log_masses(n, d)
    v = np.arange(n + 1)
    log_dff_nd = np.log(float(n * d) - 1 - 2 * np.arange(n)).sum()
    # log ⟦(d-2)n⟧_v, cumulative in v; factors can go nonpositive past the
    # support of V_n (d = 3), where the mass is zero and the entry unused
    qfac = (d - 2) * n - 1 - 2.0 * np.arange(n)
    with np.errstate(invalid="ignore", divide="ignore"):
        ln_qn = np.concatenate(([0.0], np.cumsum(np.log(qfac))))
    # log ⟦2n-1⟧_{n-v}: the factor sequence is 2n-2, 2n-4, ...; its (n)-th
    # factor would be 0, but the b = n case (v = 0) drops it by convention.
    fac = 2.0 * n - 2 - 2.0 * np.arange(n)
    ln_2n = np.concatenate(([0.0], np.cumsum(np.log(np.maximum(fac[:-1], 1e-300)))))
    ln_2n = np.append(ln_2n, ln_2n[-1])  # ⟦2n-1⟧_n := ⟦2n-1⟧_{n-1}
    log_term = (
        log_dff_nd
        - n * math.log(d)
        + v * math.log(d - 2)
        - ln_qn[v]
        + (n - v) * math.log(2)
        - ln_2n[n - v]
    )
    finite = np.isfinite(log_masses)
    log_e = float(
        np.logaddexp.reduce(log_masses[finite] + log_term[finite])
    )
    return math.exp(log_e) * (1 + (-1 / (d - 1)) ** n)


def markov_chain(d: int) -> TwoStateChain:
    """The two-state chain associated with φ (state 1 = R, state 0 = B):
    stationary mass p = (d-2)/d on R, second eigenvalue λ = -1/(d-1)."""
    if d < 3:
        raise ValueError("d must be at least 3")
    return build_chain(p=Fraction(d - 2, d), lam=Fraction(-1, d - 1))


_RHO = {
    ("R", "R"): lambda d: 2 * (d - 3),
    ("R", "B"): lambda d: 2 * (d - 2),
    ("B", "R"): lambda d: 2 * (d - 2),
    ("B", "B"): lambda d: d - 2,
}


def rho_rn(f_first: str, f_last: str, d: int):
    """Unscaled Radon-Nikodym derivative of φ against the chain law π, as a
    function of the first and last edge colors."""
    if d < 3:
        raise ValueError("d must be at least 3")
    key = (f_first, f_last)
    if key not in _RHO:
        raise ValueError("colors must be 'R' or 'B'")
    return _RHO[key](d)


def chain_path_probability(chain: TwoStateChain, colors) -> Fraction:
    """π of a color sequence: stationary start, then chain transitions."""
    state = {"R": 1, "B": 0}
    seq = [state[c] for c in colors]
    prob = chain.stationary[seq[0]]
    for a, b in zip(seq, seq[1:]):
        prob *= chain.transition[a][b]
    return prob


def expected_rho(chain: TwoStateChain, n: int, d: int) -> Fraction:
    """E_π ρ(f₁, f_n) from the stationary two-step law: Σ_{a,b} π(a) Pⁿ⁻¹(a,b)
    ρ(a,b)."""
    power = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    p = chain.transition
    for _ in range(n - 1):
        power = [
            [
                power[i][0] * p[0][j] + power[i][1] * p[1][j]
                for j in range(2)
            ]
            for i in range(2)
        ]
    names = {1: "R", 0: "B"}
    return sum(
        chain.stationary[a] * power[a][b] * rho_rn(names[a], names[b], d)
        for a in (0, 1)
        for b in (0, 1)
    )


def phi_coloring_probability(n: int, d: int, colors) -> Fraction:
    """φ({f}) for a single cyclic coloring."""
    w = _junction_weights(d)
    weight = 1
    for i in range(n):
        weight *= w[(colors[i], colors[(i + 1) % n])]
    return Fraction(weight, (d - 1) ** n + (-1) ** n)


def zn(v: int, n: int, d: int) -> float:
    """Standardized red-edge count √(d³/(2n(d-2)²)) · (v - n(d-2)/d)."""
    if not 0 <= v <= n:
        raise ValueError("v must lie in 0..n")
    return math.sqrt(d ** 3 / (2 * n * (d - 2) ** 2)) * (v - n * (d - 2) / d)


@dataclass(frozen=True)
class TailReport:
    n: int
    d: int
    points: tuple  # (t, exact tail, bound)
    passed: bool


def phi_tail_check(n: int, d: int, t_grid) -> TailReport:
    """Pointwise check of P_φ[|V_n - (d-2)n/d| >= t] <= 8 exp(-t²/(2n c_d))
    against the exact distribution."""
    dist = phi_vn_distribution(n, d)
    center = Fraction(n * (d - 2), d)
    points = []
    ok = True
    for t in t_grid:
        if t < 0:
            raise ValueError("t must be nonnegative")
        tail = sum(
            m for v, m in enumerate(dist.masses) if abs(Fraction(v) - center) >= t
        )
        bound = 8 * math.exp(-float(t) ** 2 / (2 * n * c_d(d)))
        holds = float(tail) <= bound
        ok = ok and holds
        points.append((float(t), float(tail), bound))
    return TailReport(n, d, tuple(points), ok)
