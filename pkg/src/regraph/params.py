"""Model parameters shared across the package.

A parameter triple (n, d, r) fixes the number of vertices, the degree of the
regular model, and the cycle-census depth used by the Poisson reference laws.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    n: int
    d: int
    r: int = 4

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.d < 3:
            raise ValueError("degree must be at least 3")
        if self.n * self.d % 2 != 0:
            raise ValueError("n * d must be even")
        if not 1 <= self.r <= self.n:
            raise ValueError("census depth r must satisfy 1 <= r <= n")

    @property
    def prevertices(self) -> int:
        """Number of configuration-model points: n bins of size d."""
        return self.n * self.d
