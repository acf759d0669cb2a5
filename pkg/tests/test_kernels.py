import numpy as np
import pytest

from regraph import kernels
from regraph.combinatorics import double_falling_factorial, expected_ham_pmd
from regraph.params import ModelParams
from regraph.pairing import enumerate_pairings, project
from regraph.oracle import count_ham
from regraph.census import enumerate_short_cycles
from fractions import Fraction


def test_pack_unpack_roundtrip():
    for cvec in ((0, 0, 0, 0), (1, 2, 3, 4), (255, 0, 17, 1)):
        assert kernels.unpack_cvec(kernels.pack_cvec(cvec), 4) == cvec
    with pytest.raises(ValueError):
        kernels.pack_cvec((256,))


def test_python_sweep_against_direct_enumeration():
    # totals and H-aggregates recomputed with the plain enumeration tools
    res = kernels.sweep_python(4, 3, r=4, want_census=True)
    assert res.total == double_falling_factorial(12, 6) == 10395
    h_sum = h2_sum = zero = 0
    for p in enumerate_pairings(4, 3):
        h = count_ham(project(p))
        h_sum += h
        h2_sum += h * h
        zero += h == 0
    assert res.h_sum == h_sum
    assert res.h2_sum == h2_sum
    assert res.zero_h == zero
    assert Fraction(res.h_sum, res.total) == expected_ham_pmd(ModelParams(4, 3))
    # census classes partition the pairing set
    assert res.census_count.sum() == res.total
    assert res.census_hsum.sum() == res.h_sum
    # per-cvec rows aggregate the class rows
    assert res.cvec_count.sum() == res.total
    assert sorted(res.cvec_key) == list(res.cvec_key)


def test_census_class_row_spotcheck():
    # per-cvec pairing counts must agree with a direct recount
    res = kernels.sweep_python(4, 3, r=4, want_census=True)
    direct = {}
    for p in enumerate_pairings(4, 3):
        key = kernels.pack_cvec(enumerate_short_cycles(p, 4).counts)
        direct[key] = direct.get(key, 0) + 1
    got = {int(k): int(c) for k, c in zip(res.cvec_key, res.cvec_count)}
    assert got == direct


@pytest.mark.skipif(kernels.sweep_compiled is None, reason="extension not built")
def test_backends_identical():
    for n, d, r in ((4, 3, 4), (3, 4, 3), (2, 4, 2), (5, 2, 4), (2, 5, 2)):
        a = kernels.sweep_python(n, d, r=r, want_census=True)
        b = kernels.sweep_compiled(n, d, r=r, want_census=True)
        assert (a.n, a.d, a.r, a.total, a.h_sum, a.h2_sum, a.zero_h, a.simple) == (
            b.n, b.d, b.r, b.total, b.h_sum, b.h2_sum, b.zero_h, b.simple
        )
        for field in (
            "census_count",
            "census_hsum",
            "census_cvec",
            "census_disjoint",
            "cvec_key",
            "cvec_count",
            "cvec_hsum",
        ):
            assert np.array_equal(getattr(a, field), getattr(b, field)), (n, d, field)


def test_sweep_guards():
    with pytest.raises(ValueError):
        kernels.sweep_python(3, 3)  # odd n*d
    with pytest.raises(ValueError):
        kernels.sweep_python(10, 2)  # too large to enumerate
