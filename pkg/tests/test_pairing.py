import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from regraph.combinatorics import double_falling_factorial
from regraph.pairing import (
    Pairing,
    MultiGraph,
    project,
    is_simple,
    sample_pairing,
    switch_pairs,
    condition_forward,
    condition_backward,
    backward_candidates,
    enumerate_pairings,
)
from regraph.rng import stream


def test_enumerate_counts_double_factorial():
    assert sum(1 for _ in enumerate_pairings(2, 2)) == 3
    assert sum(1 for _ in enumerate_pairings(3, 2)) == 15
    assert sum(1 for _ in enumerate_pairings(4, 2)) == 105
    assert sum(1 for _ in enumerate_pairings(2, 4)) == 105
    assert sum(1 for _ in enumerate_pairings(4, 3)) == double_falling_factorial(12, 6)


def test_enumerate_no_duplicates():
    seen = set(p.mate for p in enumerate_pairings(3, 2))
    assert len(seen) == 15


def test_pairing_validation():
    with pytest.raises(ValueError):
        Pairing(2, 2, (1, 0, 2))  # wrong length
    p = Pairing(2, 2, (1, 0, 3, 2))
    p.check()
    with pytest.raises(ValueError):
        Pairing(2, 2, (0, 1, 3, 2)).check()  # fixed point


def test_text_roundtrip():
    p = Pairing(2, 2, (1, 0, 3, 2))
    assert Pairing.from_text(p.to_text()) == p


def test_projection_degrees():
    rng = stream(0, "proj")
    for _ in range(20):
        p = sample_pairing(6, 3, rng)
        g = project(p)
        assert all(g.degree(v) == 3 for v in range(6))
        # handshake: sum of degrees is n*d
        assert sum(g.degree(v) for v in range(6)) == 18


def test_projection_loop_convention():
    # one bin, two prevertices paired: a single loop of degree 2
    p = Pairing(1, 2, (1, 0))
    g = project(p)
    assert g.num_loops() == 1
    assert g.degree(0) == 2
    assert g.adjacency_matrix()[0, 0] == 2


def test_sample_pairing_uniform_exact():
    # all 3 matchings on 4 points occur with equal frequency, chi-square slack
    rng = stream(1, "unif")
    counts = Counter(sample_pairing(2, 2, rng).mate for _ in range(3000))
    assert len(counts) == 3
    for c in counts.values():
        assert abs(c - 1000) < 150


@given(st.integers(0, 7), st.integers(0, 7))
@settings(max_examples=50)
def test_switch_pairs_involution_domain(a, b):
    rng = stream(2, "switch", a, b)
    p = sample_pairing(2, 4, rng)
    if a == b:
        with pytest.raises(ValueError):
            switch_pairs(p, a, b)
        return
    q = switch_pairs(p, a, b)
    q.check()
    assert q.mate[a] == b


def test_condition_forward_contains_forced():
    rng = stream(3, "fwd")
    forced = ((0, 5), (1, 7))
    for _ in range(50):
        p = sample_pairing(4, 2, rng)
        q = condition_forward(p, forced)
        q.check()
        assert q.mate[0] == 5 and q.mate[1] == 7


def test_condition_forward_uniform_on_fiber():
    # pushing the uniform measure through the forward coupling lands exactly
    # uniformly on the conditioned set
    forced = ((0, 3), (1, 6))
    hits = Counter()
    for p in enumerate_pairings(4, 2):
        hits[condition_forward(p, forced).mate] += 1
    targets = [
        p.mate
        for p in enumerate_pairings(4, 2)
        if p.mate[0] == 3 and p.mate[1] == 6
    ]
    assert set(hits) == set(targets)
    assert len(set(hits.values())) == 1


def test_condition_backward_uniform_inverse():
    # applying every backward decision vector to every conditioned pairing
    # reproduces each unconditioned pairing equally often
    forced = ((0, 3), (1, 6))
    conditioned = [
        p for p in enumerate_pairings(4, 2)
        if p.mate[0] == 3 and p.mate[1] == 6
    ]
    sizes = [len(backward_candidates(conditioned[0], forced, i)) for i in (2, 1)]
    hits = Counter()
    for p in conditioned:
        for decisions in itertools.product(*(range(s) for s in sizes)):
            q = condition_backward(p, forced, None, _decisions=decisions)
            q.check()
            hits[q.mate] += 1
    assert len(hits) == 105  # every pairing reached
    assert len(set(hits.values())) == 1


def test_condition_backward_requires_forced():
    p = next(enumerate_pairings(4, 2))
    if p.mate[0] != 3:
        with pytest.raises(ValueError):
            condition_backward(p, ((0, 3),), stream(0, "x"))


def test_multigraph_multiplicity():
    g = MultiGraph.from_dict(3, {(0, 1): 2, (1, 2): 1})
    assert g.multiplicity(0, 1) == 2
    assert g.multiplicity(1, 0) == 2
    assert g.multiplicity(0, 2) == 0
    assert not is_simple(g)
    assert is_simple(MultiGraph.from_dict(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1}))
