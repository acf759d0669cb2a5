"""Size-bias coupling of a stationary reversible two-state Markov chain.

States are {0, 1}; V_n = Σ X_i counts visits to state 1.  The size-bias
variable V_n^s is realized by picking a uniform index I, splicing in an
independent chain Z started at 1, and rejoining the base path at the first
agreement time on each side.  Exact rational computations back the gap
expectation, its conditional version F(x), and the Lipschitz/tail bounds;
Monte Carlo drives the Wasserstein trend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from scipy.stats import norm


@dataclass(frozen=True)
class TwoStateChain:
    """transition[a][b] = P(a -> b) as exact Fractions.

    p is the stationary mass of state 1; lam the second eigenvalue
    (P(1,1) + P(0,0) - 1); theta = |lam| the contraction coefficient;
    beta = P[two independent copies in different states stay different];
    delta = 1 if all entries of P are < 1 else 2, and gamma is the maximum
    entry of P^delta.
    """

    transition: tuple
    p: Fraction
    lam: Fraction
    theta: Fraction
    beta: Fraction
    gamma: Fraction
    delta: int

    @property
    def stationary(self) -> tuple:
        return (1 - self.p, self.p)

    def step_probs_from(self, state: int) -> tuple:
        return self.transition[state]


def build_chain(transition=None, p=None, lam=None) -> TwoStateChain:
    """Construct the chain from a 2x2 transition matrix or from (p, lam):
    P(1,1) = p + lam(1-p), P(0,1) = p(1-lam)."""
    if transition is None:
        if p is None or lam is None:
            raise ValueError("supply either a transition matrix or (p, lam)")
        p, lam = Fraction(p), Fraction(lam)
        p11 = p + lam * (1 - p)
        p01 = p * (1 - lam)
        transition = ((1 - p01, p01), (1 - p11, p11))
    rows = tuple(tuple(Fraction(x) for x in row) for row in transition)
    for row in rows:
        if sum(row) != 1 or any(x < 0 for x in row):
            raise ValueError("rows must be nonnegative and sum to 1")
    p01, p11 = rows[0][1], rows[1][1]
    denom = 1 - p11 + p01
    if denom == 0:
        raise ValueError("chain has no unique stationary law")
    p_stat = p01 / denom
    if not 0 < p_stat < 1:
        raise ValueError("stationary mass must be strictly between 0 and 1")
    lam_val = p11 - p01
    beta = p11 * rows[0][0] + rows[1][0] * p01
    if beta >= 1:
        raise ValueError("beta must be below 1")
    if all(x < 1 for row in rows for x in row):
        delta = 1
        gamma = max(x for row in rows for x in row)
    else:
        delta = 2
        sq = [
            [sum(rows[a][c] * rows[c][b] for c in (0, 1)) for b in (0, 1)]
            for a in (0, 1)
        ]
        gamma = max(x for row in sq for x in row)
        if gamma >= 1:
            raise ValueError("beta < 1 requires all entries of P² below 1")
    return TwoStateChain(rows, p_stat, lam_val, abs(lam_val), beta, gamma, delta)


@dataclass(frozen=True)
class CouplingRealization:
    """One draw of the size-bias coupling.

    ``z`` maps shift j ∈ [-n, n] to the auxiliary chain value Z_j (Z_0 = 1);
    ``i`` is 1-based.  Y agrees with Z on the window [i - tau_minus,
    i + tau_plus] and with X outside it.
    """

    x: tuple
    i: int
    z: dict
    tau_plus: int
    tau_minus: int
    y: tuple

    @property
    def v_n(self) -> int:
        return sum(self.x)

    @property
    def v_n_s(self) -> int:
        return sum(self.y)


def _chain_path(chain: TwoStateChain, start: int, length: int, rng) -> list:
    path = [start]
    for _ in range(length):
        probs = chain.step_probs_from(path[-1])
        path.append(int(rng.random() < float(probs[1])))
    return path


def realize_coupling(chain: TwoStateChain, n: int, rng: np.random.Generator) -> CouplingRealization:
    if n < 1:
        raise ValueError("n must be at least 1")
    start = int(rng.random() < float(chain.p))
    x = tuple(_chain_path(chain, start, n - 1, rng))
    i = int(rng.integers(1, n + 1))
    forward = _chain_path(chain, 1, n, rng)   # Z_0 .. Z_n
    backward = _chain_path(chain, 1, n, rng)  # Z_0, Z_-1, .., Z_-n (reversible)
    z = {j: forward[j] for j in range(n + 1)}
    z.update({-j: backward[j] for j in range(1, n + 1)})
    tau_plus = n - i + 1
    for k in range(n - i + 1):
        if x[i - 1 + k] == z[k]:
            tau_plus = k
            break
    tau_minus = i
    for k in range(i):
        if x[i - 1 - k] == z[-k]:
            tau_minus = k
            break
    y = tuple(
        z[k - i] if -tau_minus <= k - i <= tau_plus else x[k - 1]
        for k in range(1, n + 1)
    )
    return CouplingRealization(x, i, z, tau_plus, tau_minus, y)


def expected_gap(chain: TwoStateChain, n: int) -> Fraction:
    """E[V_n^s - V_n] in closed form."""
    if n < 1:
        raise ValueError("n must be at least 1")
    p, lam = chain.p, chain.lam
    return Fraction(1 - p) * (1 + lam) / (1 - lam) - 2 * (1 - p) * lam * (
        1 - lam ** n
    ) / ((1 - lam) ** 2 * n)


def gap_tail(chain: TwoStateChain, k: int) -> Fraction:
    """Upper bound (1-p) k β^{k-1} on P[|V_n^s - V_n| >= k]."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return (1 - chain.p) * k * chain.beta ** (k - 1)


def conditional_gap_exact(chain: TwoStateChain, x) -> Fraction:
    """F(x) = E[V_n^s - V_n | X = x], exactly.

    For each index I with x_I = 0, the spliced chain disagrees with x until
    it meets it; on a two-state space the not-yet-met trajectory is forced
    (Z_j = 1 - x_{I±j}), so the expected window sum is a survival-weighted
    sum of ±1 contributions on each side.
    """
    x = tuple(int(v) for v in x)
    n = len(x)
    if n > 14:
        raise ValueError("exact conditional gap guarded at n <= 14")
    if any(v not in (0, 1) for v in x):
        raise ValueError("path entries must be 0/1")
    p = chain.transition
    total = Fraction(0)
    for i in range(1, n + 1):
        if x[i - 1] == 1:
            continue
        for sgn in (1, -1):
            survival = Fraction(1)
            j = 0
            while True:
                pos = i + sgn * j
                if pos < 1 or pos > n:
                    break
                total += survival * (1 - 2 * x[pos - 1])
                nxt = i + sgn * (j + 1)
                if nxt < 1 or nxt > n:
                    break
                survival *= p[1 - x[pos - 1]][1 - x[nxt - 1]]
                j += 1
        # the two sides both counted the splice origin Z_0 - x_I = 1
        total -= 1
    return total / n


def lipschitz_bound(chain: TwoStateChain, n: int) -> Fraction:
    """(1 - γ + 2δ)δ / ((1 - γ)² n), the Lipschitz constant of F."""
    g, dl = chain.gamma, chain.delta
    return (1 - g + 2 * dl) * dl / ((1 - g) ** 2 * n)


def sample_vn(chain: TwoStateChain, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized stationary sampling of V_n across trials."""
    p1 = np.array([float(chain.transition[0][1]), float(chain.transition[1][1])])
    state = (rng.random(trials) < float(chain.p)).astype(np.int8)
    v = state.astype(np.int64).copy()
    for _ in range(n - 1):
        state = (rng.random(trials) < p1[state]).astype(np.int8)
        v += state
    return v


def simulate_gaps(chain: TwoStateChain, n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized draws of V_n^s - V_n (one per trial)."""
    p1 = np.array([float(chain.transition[0][1]), float(chain.transition[1][1])])

    def paths(start, length):
        out = np.empty((trials, length + 1), dtype=np.int8)
        out[:, 0] = start
        for t in range(length):
            out[:, t + 1] = rng.random(trials) < p1[out[:, t]]
        return out

    x = paths((rng.random(trials) < float(chain.p)).astype(np.int8), n - 1)
    i = rng.integers(1, n + 1, size=trials)
    gap = np.zeros(trials, dtype=np.int64)
    ones = np.ones(trials, dtype=np.int8)
    for sgn in (1, -1):
        z = paths(ones, n)
        alive = np.ones(trials, dtype=bool)
        for j in range(n + 1):
            pos = i - 1 + sgn * j
            inside = (pos >= 0) & (pos < n)
            active = alive & inside
            if not active.any():
                break
            xv = x[np.arange(trials), np.clip(pos, 0, n - 1)]
            differ = z[:, j] != xv
            contrib = active & differ
            gap[contrib] += 2 * z[contrib, j] - 1
            alive = alive & differ
        # both signs counted j = 0; remove the duplicate where X_I = 0
    x_at_i = x[np.arange(trials), i - 1]
    gap[x_at_i == 0] -= 1
    return gap


def wasserstein_normal(chain: TwoStateChain, n: int, trials: int, rng: np.random.Generator) -> float:
    """Empirical 1-Wasserstein distance between standardized V_n and the
    standard normal, via the sorted-sample quantile coupling."""
    if trials < 1000:
        raise ValueError("trials must be at least 1000")
    v = sample_vn(chain, n, trials, rng).astype(np.float64)
    std = v.std()
    if std == 0:
        raise ValueError("degenerate V_n sample")
    w = np.sort((v - v.mean()) / std)
    q = norm.ppf((np.arange(trials) + 0.5) / trials)
    return float(np.abs(w - q).mean())
