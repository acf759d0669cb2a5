import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from regraph.combinatorics import (
    falling_factorial,
    double_falling_factorial,
    poisson_spec,
    expected_cycles_pmd,
    expected_cycles_mixed,
    expected_ham_pmd,
    limvar,
    limvar_inf,
    rnd_poisson,
    poisson_tail_bound,
    c_d,
)
from regraph.params import ModelParams


def test_falling_factorial_small():
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(4, 4) == 24
    assert falling_factorial(3, 5) == 0


@given(st.integers(0, 30), st.integers(0, 12))
def test_falling_factorial_recurrence(a, b):
    if b > 0:
        assert falling_factorial(a, b) == a * falling_factorial(a - 1, b - 1)


def test_double_falling_factorial_matchings():
    # ⟦2m⟧_m = (2m-1)!! counts perfect matchings on 2m points
    assert double_falling_factorial(2, 1) == 1
    assert double_falling_factorial(4, 2) == 3
    assert double_falling_factorial(6, 3) == 15
    assert double_falling_factorial(12, 6) == 10395


def test_double_falling_factorial_caveat():
    # ⟦2b-1⟧_b drops the vanishing last factor
    assert double_falling_factorial(5, 3) == double_falling_factorial(5, 2)
    assert double_falling_factorial(7, 4) == double_falling_factorial(7, 3)


def test_poisson_spec_values():
    spec = poisson_spec(ModelParams(4, 3, 4))
    nd = 12
    for k in range(1, 5):
        assert spec.lam[k] == Fraction(1, nd ** k)
        corr = Fraction((-1) ** k - 1, (nd * 2) ** k)
        assert spec.mu[k] == spec.lam[k] + corr
        assert spec.counts[k] == falling_factorial(4, k) * 6 ** k // (2 * k)
    # odd k: mu < lam; even k: mu == lam
    assert spec.mu[1] < spec.lam[1]
    assert spec.mu[2] == spec.lam[2]


def test_expected_cycles_matches_descriptor_count():
    # E c_k = |J_k| / ⟦nd⟧_k
    p = ModelParams(6, 3, 4)
    spec = poisson_spec(p)
    for k in range(1, 5):
        assert expected_cycles_pmd(k, p) == Fraction(
            spec.counts[k], double_falling_factorial(18, k)
        )


def test_expected_ham_known_value():
    assert expected_ham_pmd(ModelParams(4, 3, 4)) == Fraction(432, 385)


def test_expected_cycles_mixed_runs():
    p = ModelParams(8, 4, 4)
    for k in range(1, 5):
        v = expected_cycles_mixed(k, p)
        assert v > 0
        red = expected_cycles_mixed(k, p, "red_edges")
        blue = expected_cycles_mixed(k, p, "blue_edges")
        assert red + blue > 0


def test_limvar_converges():
    for d in (3, 4, 5):
        assert abs(limvar(200, d) - limvar_inf(d)) < 1e-10
    assert limvar_inf(3) == 3.0


def test_rnd_poisson_loop_obstruction():
    p = ModelParams(16, 3, 1)
    assert rnd_poisson((1,), p) == 0.0
    assert rnd_poisson((0,), p) > 0


def test_rnd_poisson_acyclic_value():
    # no cycles: pure exp(Σ [n]_k/(k n^k)) over odd k
    p = ModelParams(100, 4, 3)
    n = 100
    want = math.exp(
        sum(falling_factorial(n, k) / (k * n ** k) for k in (1, 3))
    )
    got = rnd_poisson((0, 0, 0), p)
    assert abs(got - want) < 1e-12 * want


def test_poisson_tail_bound_shape():
    assert poisson_tail_bound(1.0, 1.0, 0.0) == 1.0
    assert poisson_tail_bound(1.0, 1.0, 10.0) < poisson_tail_bound(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        poisson_tail_bound(0.0, 1.0, 1.0)


def test_c_d_positive():
    for d in (3, 4, 5, 6):
        assert c_d(d) > 0
