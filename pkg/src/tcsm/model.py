"""Model parameters, interaction geometry, and closed-form counts/energies.

Everything here is exact: parameters are validated once, the pair/triple
lists are enumerated combinatorially, and the counting/energy formulas are
evaluated in rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

TWO_PI = 2.0 * math.pi

TRUNCATED = "truncated"
FULL = "full"


class ParameterDomainError(ValueError):
    """Inputs (N, r, L, beta) outside the admissible domain."""


class RegimeError(ValueError):
    """A formula was evaluated outside its regime of validity."""


def cyclic_distance(a: int, b: int, n: int) -> int:
    """Cyclic index distance min(|a-b|, n-|a-b|) for 0-based site indices."""
    d = abs(a - b) % n
    return min(d, n - d)


@dataclass(frozen=True)
class ModelParams:
    """Validated model parameters plus all derived quantities.

    Sites are indexed 0..n-1.  ``g = beta*(beta-1)`` and ``big_g = beta**2``
    are the two- and three-body couplings.  ``c`` is the half-count
    threshold (N/2 for even N, (N-1)/2 for odd); the model is in the full
    (Sutherland) regime once r >= c.  ``k`` is the boundary-count
    correction entering the triple count and ground energy; it is None in
    the full regime where it is meaningless.
    """

    n: int
    r: int
    length: float
    beta: float
    g: float
    big_g: float
    c: int
    r_eff: int
    k: int | None
    regime: str

    @property
    def truncated(self) -> bool:
        return self.regime == TRUNCATED

    @property
    def drift_weight(self) -> int:
        """Number of interaction pairs each site belongs to.

        2*r_eff in general; N-1 when N is even and r_eff = N/2 because the
        antipodal pair is counted once.
        """
        if self.n % 2 == 0 and self.r_eff == self.n // 2:
            return self.n - 1
        return 2 * self.r_eff


def derive_params(n: int, r: int, length: float = TWO_PI, beta: float = 1.0) -> ModelParams:
    """Validate raw inputs and populate every derived field."""
    if not isinstance(n, int) or n < 3:
        raise ParameterDomainError(f"need integer N >= 3, got {n!r}")
    if not isinstance(r, int) or r < 1:
        raise ParameterDomainError(f"need integer r >= 1, got {r!r}")
    if not length > 0:
        raise ParameterDomainError(f"need L > 0, got {length!r}")
    if not beta > 0:
        raise ParameterDomainError(f"need beta > 0, got {beta!r}")

    c = n // 2 if n % 2 == 0 else (n - 1) // 2
    regime = FULL if r >= c else TRUNCATED
    r_eff = min(r, n // 2)
    if regime == TRUNCATED:
        # provable from r < c, asserted anyway
        assert 2 * r + 2 <= n
        k = (3 * r + 1) - n if (2 * r + 2) <= n < (3 * r + 1) else 0
    else:
        k = None
    return ModelParams(
        n=n,
        r=r,
        length=float(length),
        beta=float(beta),
        g=beta * (beta - 1.0),
        big_g=beta * beta,
        c=c,
        r_eff=r_eff,
        k=k,
        regime=regime,
    )


def interaction_pairs(params: ModelParams) -> list[tuple[int, int]]:
    """All interacting site pairs (a, b), a < b, each unordered pair once.

    A pair interacts iff its cyclic distance is in 1..r_eff.  When N is
    even and r_eff = N/2 the antipodal pairs appear once, not twice.
    """
    n, r_eff = params.n, params.r_eff
    seen = set()
    for d in range(1, r_eff + 1):
        for j in range(n):
            a, b = j, (j + d) % n
            seen.add((min(a, b), max(a, b)))
    return sorted(seen)


def three_body_triples(params: ModelParams) -> list[tuple[int, int, int]]:
    """Center-designated triples (i, j, k): j within range of both i and k,
    while i and k are out of range of each other.

    The center is unique: a second valid center would force the same pair
    to be both within and beyond range.  Empty in the full regime.
    """
    n, r_eff = params.n, params.r_eff
    triples = []
    for a, b, c3 in combinations(range(n), 3):
        center = None
        for j, i, kk in ((a, b, c3), (b, a, c3), (c3, a, b)):
            if (
                cyclic_distance(i, j, n) <= r_eff
                and cyclic_distance(j, kk, n) <= r_eff
                and cyclic_distance(kk, i, n) > r_eff
            ):
                assert center is None, "triple admits two centers"
                center = (min(i, kk), j, max(i, kk))
        if center is not None:
            triples.append(center)
    triples.sort(key=lambda t: (t[1], t[0], t[2]))
    return triples


def triple_count_formula(params: ModelParams) -> int:
    """Closed-form three-body term count (N/2)(r-k)(r+k+1), truncated regime only."""
    if not params.truncated:
        raise RegimeError("triple count formula applies only in the truncated regime")
    k = params.k
    count = Fraction(params.n, 2) * (params.r - k) * (params.r + k + 1)
    assert count.denominator == 1
    return int(count)


def ground_energy_coeff(params: ModelParams) -> Fraction:
    """Ground-state energy in units of beta^2 pi^2 / L^2, exact rational."""
    n = params.n
    if params.truncated:
        r, k = params.r, params.k
        return n * (Fraction(r * (r + 1), 2) + Fraction(k * (k + 1), 6))
    return Fraction(n * (n * n - 1), 6)


def ground_energy_reduced(params: ModelParams) -> float:
    """Ground-state energy in units of pi^2 / L^2 (includes the beta^2 factor)."""
    return float(ground_energy_coeff(params)) * params.beta**2


def ground_energy_physical(params: ModelParams) -> float:
    """Ground-state energy in physical units (hbar = m = 1)."""
    return ground_energy_reduced(params) * (math.pi / params.length) ** 2
