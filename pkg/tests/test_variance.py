import math
from fractions import Fraction
from itertools import product

import pytest

from regraph import variance, oracle
from regraph.params import ModelParams
from regraph.combinatorics import limvar_inf


def test_vn_distribution_normalized():
    for n, d in ((4, 3), (7, 4), (10, 5)):
        dist = variance.phi_vn_distribution(n, d)
        assert sum(dist.masses) == 1
        assert len(dist.masses) == n + 1
        assert all(m >= 0 for m in dist.masses)


def test_vn_distribution_bruteforce():
    # recompute by listing all 2^n colorings with their junction weights
    for n, d in ((4, 3), (5, 4), (6, 5)):
        w = variance._junction_weights(d)
        coeffs = [0] * (n + 1)
        z = 0
        for colors in product("RB", repeat=n):
            weight = 1
            for i in range(n):
                weight *= w[(colors[i], colors[(i + 1) % n])]
            coeffs[colors.count("R")] += weight
            z += weight
        assert z == (d - 1) ** n + (-1) ** n
        dist = variance.phi_vn_distribution(n, d)
        assert dist.masses == tuple(Fraction(c, z) for c in coeffs)


def test_vn_mean_near_stationary():
    # E V_n / n approaches the stationary red mass (d-2)/d
    for d in (3, 4, 5):
        dist = variance.phi_vn_distribution(200, d)
        assert abs(float(dist.mean()) / 200 - (d - 2) / d) < 0.01


def test_second_moment_exact_matches_oracle():
    for n, d in ((4, 3), (3, 4)):
        m = oracle.exact_moments(ModelParams(n, d, min(4, n)))
        assert variance.second_moment_exact(n, d, exact=True) == m.e_h2 / m.e_h ** 2


def test_second_moment_float_path_agrees():
    for n, d in ((20, 3), (50, 4), (101, 5), (200, 6)):
        a = float(variance.second_moment_exact(n, d, exact=True))
        b = variance.second_moment_exact(n, d, exact=False)
        assert abs(a - b) < 1e-9 * a


def test_second_moment_monotone_to_limit():
    for d in (3, 4, 6):
        values = [
            variance.second_moment_exact(n, d, exact=False)
            for n in (10 ** 2, 10 ** 3, 10 ** 4)
        ]
        lim = limvar_inf(d)
        assert values[0] > values[1] > values[2] > lim
        assert values[2] - lim < 1e-3


def test_markov_chain_parameters():
    for d in (3, 4, 5):
        chain = variance.markov_chain(d)
        assert chain.p == Fraction(d - 2, d)
        assert chain.lam == Fraction(-1, d - 1)
        # stationarity: pi P = pi
        pi = chain.stationary
        for b in (0, 1):
            assert pi[0] * chain.transition[0][b] + pi[1] * chain.transition[1][b] == pi[b]


def test_rho_radon_nikodym_lemma():
    # phi({f}) == pi({f}) rho(f_1, f_n) / E_pi[rho] for every coloring
    for n, d in ((5, 3), (8, 4), (12, 5)):
        chain = variance.markov_chain(d)
        er = variance.expected_rho(chain, n, d)
        for colors in product("RB", repeat=n):
            lhs = variance.phi_coloring_probability(n, d, colors)
            rhs = (
                variance.chain_path_probability(chain, colors)
                * variance.rho_rn(colors[0], colors[-1], d)
                / er
            )
            assert lhs == rhs


def test_rho_values():
    assert variance.rho_rn("R", "R", 3) == 0
    assert variance.rho_rn("R", "B", 5) == 6
    assert variance.rho_rn("B", "B", 4) == 2
    with pytest.raises(ValueError):
        variance.rho_rn("R", "X", 4)


def test_tail_bound_holds():
    for d in (3, 5):
        rep = variance.phi_tail_check(200, d, [0.0, 2.0, 5.0, 10.0, 20.0, 40.0])
        assert rep.passed
        # the bound is trivial at t = 0 and strictly below 8 afterwards
        assert rep.points[0][2] == 8.0
        assert rep.points[-1][2] < rep.points[1][2]


def test_zn_standardization():
    # at the stationary center the standardized value vanishes
    assert variance.zn(10, 20, 4) == 0.0
    assert variance.zn(0, 20, 4) < 0
    with pytest.raises(ValueError):
        variance.zn(21, 20, 4)
