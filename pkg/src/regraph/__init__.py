"""Exact and Monte Carlo laboratory for random regular graphs conditioned on
small-subgraph statistics: pairing-model enumeration kernels, short-cycle
censuses, Hamiltonian-cycle moments, spectral estimators, and size-bias
coupling diagnostics."""

__version__ = "0.1.0"

from .params import ModelParams
from .rng import stream
from .pairing import (
    Pairing,
    MultiGraph,
    project,
    is_simple,
    sample_pairing,
    enumerate_pairings,
    condition_forward,
    condition_backward,
)
from .mixed import HamCycle, MixedState, sample_mixed, scramble_to_tnd, sample_tstar
from .census import CycleCensus, enumerate_short_cycles, mixed_census, cnbw_count
from .combinatorics import (
    expected_ham_pmd,
    expected_cycles_pmd,
    poisson_spec,
    rnd_poisson,
)
from .kernels import BACKEND, sweep
from .oracle import count_ham, exact_moments, exact_tv_census
from .variance import second_moment_exact, phi_vn_distribution, markov_chain
from .sizebias import build_chain, expected_gap, conditional_gap_exact
from .spectral import gamma_poly, xi_poly, ham_poly, estimate_ham_ratio

__all__ = [
    "__version__",
    "ModelParams",
    "stream",
    "Pairing",
    "MultiGraph",
    "project",
    "is_simple",
    "sample_pairing",
    "enumerate_pairings",
    "condition_forward",
    "condition_backward",
    "HamCycle",
    "MixedState",
    "sample_mixed",
    "scramble_to_tnd",
    "sample_tstar",
    "CycleCensus",
    "enumerate_short_cycles",
    "mixed_census",
    "cnbw_count",
    "expected_ham_pmd",
    "expected_cycles_pmd",
    "poisson_spec",
    "rnd_poisson",
    "BACKEND",
    "sweep",
    "count_ham",
    "exact_moments",
    "exact_tv_census",
    "second_moment_exact",
    "phi_vn_distribution",
    "markov_chain",
    "build_chain",
    "expected_gap",
    "conditional_gap_exact",
    "gamma_poly",
    "xi_poly",
    "ham_poly",
    "estimate_ham_ratio",
]
