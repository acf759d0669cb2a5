"""Exact counting primitives: falling factorials, transfer-matrix polynomials,
Poisson reference means, and closed-form cycle/Hamiltonian-count expectations.

Everything that admits a closed form is computed in exact integer or rational
arithmetic so that enumeration oracles can compare bit-for-bit; floating point
appears only where an exp/log is intrinsic to the quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .params import ModelParams


def falling_factorial(a: int, b: int) -> int:
    """[a]_b = a(a-1)...(a-b+1), with [a]_0 = 1."""
    if b < 0:
        raise ValueError("b must be nonnegative")
    out = 1
    for i in range(b):
        out *= a - i
    return out


def double_falling_factorial(a: int, b: int) -> int:
    """⟦a⟧_b = (a-1)(a-3)...(a-2b+1).

    When a = 2b-1 the last factor would vanish; by convention that factor is
    dropped, i.e. ⟦2b-1⟧_b = ⟦2b-1⟧_{b-1}.  ⟦2m⟧_m counts perfect matchings
    on 2m points.
    """
    if b < 0:
        raise ValueError("b must be nonnegative")
    if a == 2 * b - 1:
        b = b - 1
    out = 1
    for i in range(b):
        out *= a - 2 * i - 1
    return out


def rho_poly(a, b, c, k: int):
    """ϱ_k(a,b,c) = τ_+^k + τ_-^k for τ_± the roots of t² - (a+c)t + (ac-b).

    Equals the sum of a^{r₂} b^{r₁} c^{b₂} over all 2^k edge 2-colorings of a
    k-cycle (r₂/b₂ counting same-colored adjacencies, r₁ color changes in one
    direction).  Evaluated by the real linear recurrence
    x_k = (a+c) x_{k-1} + (b-ac) x_{k-2}, which stays exact on rational input
    and avoids complex arithmetic when the discriminant is negative.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    x_prev, x_cur = 2, a + c
    for _ in range(k - 1):
        x_prev, x_cur = x_cur, (a + c) * x_cur + (b - a * c) * x_prev
    return x_cur


_PATH_ENDS = ("RR", "RB", "BR", "BB")


def path_poly(a, b, k: int, ends: str):
    """Entry of A^k for the transfer matrix A = [[a, b], [1, 1]].

    ``ends`` selects the entry: RR ↦ (A^k)[0][0], RB ↦ [0][1], BR ↦ [1][0],
    BB ↦ [1][1].  p_k = RR + BB entries recovers ϱ_k(a, b, 1).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if ends not in _PATH_ENDS:
        raise ValueError(f"ends must be one of {_PATH_ENDS}")
    m = ((1, 0), (0, 1))
    base = ((a, b), (1, 1))
    for _ in range(k):
        m = (
            (m[0][0] * base[0][0] + m[0][1] * base[1][0],
             m[0][0] * base[0][1] + m[0][1] * base[1][1]),
            (m[1][0] * base[0][0] + m[1][1] * base[1][0],
             m[1][0] * base[0][1] + m[1][1] * base[1][1]),
        )
    i = _PATH_ENDS.index(ends)
    return m[i // 2][i % 2]


@dataclass(frozen=True)
class PoissonSpec:
    """Per-length Poisson reference means and descriptor counts.

    ``lam[k]`` = (nd)^{-k} is the mean under the plain pairing model,
    ``mu[k]`` adds the ((-1)^k - 1)(nd(d-1))^{-k} correction of the
    Hamiltonian-conditioned model, and ``counts[k]`` = |J_k| =
    [n]_k (d(d-1))^k / (2k) is the number of length-k cycle descriptors.
    Indices run 1..r; index 0 is a placeholder.
    """

    params: ModelParams
    lam: tuple
    mu: tuple
    counts: tuple


def poisson_spec(params: ModelParams) -> PoissonSpec:
    n, d, r = params.n, params.d, params.r
    lam = [None]
    mu = [None]
    counts = [None]
    for k in range(1, r + 1):
        lam_k = Fraction(1, (n * d) ** k)
        corr = Fraction((-1) ** k - 1, (n * d * (d - 1)) ** k)
        num = falling_factorial(n, k) * (d * (d - 1)) ** k
        assert num % (2 * k) == 0
        lam.append(lam_k)
        mu.append(lam_k + corr)
        counts.append(num // (2 * k))
    return PoissonSpec(params, tuple(lam), tuple(mu), tuple(counts))


def expected_cycles_pmd(k: int, params: ModelParams) -> Fraction:
    """Exact mean number of length-k cycles in the projection of a uniform
    pairing: |J_k| / ⟦nd⟧_k."""
    if k > params.r:
        raise ValueError("k exceeds census depth r")
    n, d = params.n, params.d
    num = falling_factorial(n, k) * (d * (d - 1)) ** k
    return Fraction(num, 2 * k * double_falling_factorial(n * d, k))


def _cyclic_stats(pattern: tuple) -> tuple:
    """(r1, r2, b2) for a cyclic color pattern (True = red edge)."""
    k = len(pattern)
    r1 = r2 = b2 = 0
    for i in range(k):
        cur, nxt = pattern[i], pattern[(i + 1) % k]
        if cur and nxt:
            r2 += 1
        elif not cur and not nxt:
            b2 += 1
        elif cur and not nxt:
            r1 += 1
    return r1, r2, b2


def expected_cycles_mixed(k: int, params: ModelParams, which: str = "count") -> Fraction:
    """Exact mean over the mixed model (Hamiltonian cycle + independent
    degree-(d-2) pairing) of the number of length-k cycles, or of the total
    red/blue edge counts carried by those cycles.

    Sums over the 2^k - 1 non-all-blue cyclic color patterns: a pattern with
    r₁ red runs and r₂ red-red adjacencies has
    [n]_k (d-2)^{2r₁+r₂} (d-3)^{r₂} rooted oriented labeled cycles, each
    present with probability 2^{r₁} / ([n-1]_{k-r₂-r₁} ⟦n(d-2)⟧_{r₂+r₁}).
    """
    if which not in ("count", "red_edges", "blue_edges"):
        raise ValueError("which must be count, red_edges, or blue_edges")
    n, d = params.n, params.d
    if k > n // 2:
        raise ValueError("k must be at most n/2")
    total = Fraction(0)
    for bits in range(1, 2 ** k):  # skip the all-blue pattern (bits = 0)
        pattern = tuple(bool((bits >> i) & 1) for i in range(k))
        r1, r2, _ = _cyclic_stats(pattern)
        s = r2 + r1  # red edges
        t = k - s    # blue edges
        labeled = falling_factorial(n, k) * (d - 2) ** (2 * r1 + r2) * (d - 3) ** r2
        prob = Fraction(
            2 ** r1,
            falling_factorial(n - 1, t) * double_falling_factorial(n * (d - 2), s),
        )
        sel = {"count": 1, "red_edges": s, "blue_edges": t}[which]
        total += sel * labeled * prob
    return total / (2 * k)


def expected_ham_pmd(params: ModelParams) -> Fraction:
    """Exact E[H_n] under the uniform pairing model:
    n! (d(d-1))^n / (2n ⟦nd⟧_n)."""
    n, d = params.n, params.d
    if n < 3:
        raise ValueError("n must be at least 3")
    return Fraction(
        math.factorial(n) * (d * (d - 1)) ** n,
        2 * n * double_falling_factorial(n * d, n),
    )


def limvar(r: int, d: int) -> float:
    """Limiting second moment V^(r): exp of Σ_{k≤r} ((-1)^k-1)²/(2k(d-1)^k)."""
    if d < 3:
        raise ValueError("d must be at least 3")
    log_v = sum(
        Fraction(((-1) ** k - 1) ** 2, 2 * k * (d - 1) ** k) for k in range(1, r + 1)
    )
    return math.exp(log_v)


def limvar_inf(d: int) -> float:
    """Limit of V^(r) as r → ∞: d/(d-2)."""
    if d < 3:
        raise ValueError("d must be at least 3")
    return d / (d - 2)


def rnd_poisson(census_counts: Sequence[int], params: ModelParams) -> float:
    """Poisson-limit Radon-Nikodym factor Y at a census class.

    ``census_counts`` gives (c_1, ..., c_r).  The value is
    ∏_{odd k ≤ r} exp([n]_k/(k n^k)) (1 - 2/(d-1)^k)^{c_k};
    for d = 3 this vanishes exactly when c₁ > 0 (the loop obstruction).
    """
    n, d = params.n, params.d
    if any(c < 0 for c in census_counts):
        raise ValueError("census counts must be nonnegative")
    out = 1.0
    for k in range(1, len(census_counts) + 1):
        if k % 2 == 0:
            continue
        c_k = census_counts[k - 1]
        base = 1 - 2 / (d - 1) ** k
        if base == 0.0 and c_k > 0:
            return 0.0
        out *= math.exp(falling_factorial(n, k) / (k * n ** k)) * base ** c_k
    return out


def poisson_tail_bound(m1: float, m2: float, t: float) -> float:
    """Upper tail bound exp(-(t/2M₂) log(1 + M₂t/M₁)) for a linear statistic
    of a product of Poisson laws with mean Σλ·w = M₁ and Σλ·w² = M₂."""
    if m1 <= 0 or m2 <= 0:
        raise ValueError("M1, M2 must be positive")
    if t < 0:
        raise ValueError("t must be nonnegative")
    return math.exp(-(t / (2 * m2)) * math.log1p(m2 * t / m1))


def c_d(d: int) -> float:
    """Variance-scale constant in the coloring-measure tail bound."""
    if d < 3:
        raise ValueError("d must be at least 3")
    if d == 3:
        return math.sqrt(3) / 18
    if d == 4:
        return 2 * math.sqrt(3) / 27
    return math.sqrt(2 * (d - 3)) / (8 * math.sqrt(d - 2))
