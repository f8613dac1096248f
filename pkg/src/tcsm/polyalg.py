"""Exact sparse multivariate Laurent polynomial arithmetic.

Coefficients are linear forms a + b*B in a formal parameter B (the
wavefunction exponent), held as exact rationals.  This is all the
transformed-operator algebra ever needs: the drift is applied once per
term, so matrix entries stay linear in B and numeric substitution can
happen at solve time.

Exponent vectors are plain int tuples; negative exponents are allowed.
Serialization uses a canonical graded-lexicographic term order so goldens
are stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator


class CoeffDegreeError(ArithmeticError):
    """Multiplying two B-dependent coefficients would produce B^2."""


class DivisionError(ArithmeticError):
    """Exact division failed; carries the offending remainder."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


@dataclass(frozen=True)
class Coeff:
    """Exact coefficient a + b*B."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "Coeff":
        if isinstance(value, Coeff):
            return value
        return Coeff(Fraction(value))

    def __add__(self, other: "Coeff") -> "Coeff":
        return Coeff(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Coeff") -> "Coeff":
        return Coeff(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Coeff":
        return Coeff(-self.a, -self.b)

    def __mul__(self, other: "Coeff") -> "Coeff":
        if self.b and other.b:
            raise CoeffDegreeError("product of two B-linear coefficients")
        return Coeff(
            self.a * other.a,
            self.a * other.b + self.b * other.a,
        )

    def times_b(self) -> "Coeff":
        """Multiply by the formal parameter B."""
        if self.b:
            raise CoeffDegreeError("B * (a + b*B) would need a B^2 term")
        return Coeff(Fraction(0), self.a)

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def subs(self, beta) -> Fraction:
        """Evaluate at a numeric/rational B."""
        return self.a + self.b * beta

    def __str__(self) -> str:
        return f"{self.a}+{self.b}*B"


COEFF_ZERO = Coeff()
COEFF_ONE = Coeff(Fraction(1))


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), tuple(-e for e in exps))


class LaurentPoly:
    """Sparse Laurent polynomial over Coeff, fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], Coeff] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "LaurentPoly":
        return LaurentPoly(nvars)

    @staticmethod
    def constant(nvars: int, value) -> "LaurentPoly":
        c = Coeff.of(value)
        return LaurentPoly(nvars, {(0,) * nvars: c} if c else {})

    @staticmethod
    def monomial(nvars: int, exps: Iterable[int], coeff=1) -> "LaurentPoly":
        e = tuple(exps)
        assert len(e) == nvars
        return LaurentPoly(nvars, {e: Coeff.of(coeff)})

    @staticmethod
    def variable(nvars: int, j: int, power: int = 1) -> "LaurentPoly":
        e = [0] * nvars
        e[j] = power
        return LaurentPoly.monomial(nvars, e)

    # -- ring operations ----------------------------------------------
    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, COEFF_ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.nvars, out)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: dict[tuple[int, ...], Coeff] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e, COEFF_ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LaurentPoly(self.nvars, out)

    def scale(self, value) -> "LaurentPoly":
        c0 = Coeff.of(value)
        if not c0:
            return LaurentPoly.zero(self.nvars)
        return LaurentPoly(self.nvars, {e: c * c0 for e, c in self.terms.items()})

    def times_b(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, {e: c.times_b() for e, c in self.terms.items()})

    def subs_beta(self, beta) -> "LaurentPoly":
        """Collapse B-linear coefficients at a rational beta value."""
        out = {}
        for e, c in self.terms.items():
            v = c.subs(Fraction(beta))
            if v:
                out[e] = Coeff(v)
        return LaurentPoly(self.nvars, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, exps: Iterable[int]) -> Coeff:
        return self.terms.get(tuple(exps), COEFF_ZERO)

    # -- structure queries --------------------------------------------
    def degree(self) -> int | None:
        """Common total degree if homogeneous, else None; 0 for the zero poly."""
        degs = {sum(e) for e in self.terms}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def min_exponent(self) -> int:
        return min((min(e) for e in self.terms), default=0)

    def max_exponent(self) -> int:
        return max((max(e) for e in self.terms), default=0)

    # -- calculus / substitution --------------------------------------
    def apply_D(self, j: int) -> "LaurentPoly":
        """Euler operator D_j = z_j d/dz_j: multiply each term by its j-th exponent."""
        out = {}
        for e, c in self.terms.items():
            if e[j]:
                out[e] = c * Coeff.of(e[j])
        return LaurentPoly(self.nvars, out)

    def invert_vars(self) -> "LaurentPoly":
        """Substitute z_i -> 1/z_i for every variable."""
        return LaurentPoly(self.nvars, {tuple(-x for x in e): c for e, c in self.terms.items()})

    def shift_all(self, q: int) -> "LaurentPoly":
        """Multiply by (prod z_i)^q."""
        if q == 0:
            return self
        return LaurentPoly(self.nvars, {tuple(x + q for x in e): c for e, c in self.terms.items()})

    def eval_at(self, z, beta=None) -> complex:
        """Numeric evaluation at a vector of complex numbers.

        beta is required when any coefficient carries a B part.
        """
        total = 0j
        for e, c in self.terms.items():
            if c.b and beta is None:
                raise ValueError("coefficient depends on B; pass beta")
            m = 1.0 + 0j
            for zi, ei in zip(z, e):
                if ei:
                    m *= zi**ei
            val = c.a if not c.b else c.subs(Fraction(beta))
            total += complex(val) * m
        return total

    # -- serialization ------------------------------------------------
    def canonical(self) -> str:
        """Stable text form: sorted graded-lex, 'a+b*B' coefficients."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key):
            mono = "*".join(
                f"z{i}^{p}" for i, p in enumerate(e) if p
            ) or "1"
            parts.append(f"({self.terms[e]})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({self.canonical()})"


def exact_divide(p: LaurentPoly, a: int, b: int) -> LaurentPoly:
    """Exact quotient p / (z_a - z_b); raises DivisionError if not divisible.

    Terms are grouped by the exponents of every other variable together
    with s = e_a + e_b (the divisor is homogeneous in z_a, z_b), reducing
    each group to a univariate synthetic division in w = z_a/z_b.
    """
    if a == b:
        raise ValueError("need distinct variable indices")
    groups: dict[tuple, dict[int, Coeff]] = {}
    for e, c in p.terms.items():
        rest = tuple(x for i, x in enumerate(e) if i not in (a, b))
        key = (rest, e[a] + e[b])
        groups.setdefault(key, {})[e[a]] = c
    out: dict[tuple[int, ...], Coeff] = {}
    for (rest, s), coeffs in groups.items():
        lo, hi = min(coeffs), max(coeffs)
        total = COEFF_ZERO
        for c in coeffs.values():
            total = total + c
        if total:
            rem = _rebuild(p.nvars, a, b, rest, {k: v for k, v in coeffs.items()})
            raise DivisionError("polynomial not divisible by (z_a - z_b)", remainder=rem)
        # synthetic division of sum c_k w^k by (w - 1), descending Horner
        carry = COEFF_ZERO
        for k in range(hi, lo, -1):
            carry = carry + coeffs.get(k, COEFF_ZERO)
            if carry:
                e = _assemble(p.nvars, a, b, rest, k - 1, s - k)
                out[e] = out.get(e, COEFF_ZERO) + carry
    return LaurentPoly(p.nvars, out)


def _assemble(nvars, a, b, rest, ea, eb):
    e = [0] * nvars
    it = iter(rest)
    for i in range(nvars):
        if i == a:
            e[i] = ea
        elif i == b:
            e[i] = eb
        else:
            e[i] = next(it)
    return tuple(e)


def _rebuild(nvars, a, b, rest, coeffs):
    terms = {}
    for k, c in coeffs.items():
        terms[_assemble(nvars, a, b, rest, k, 0)] = c
    return LaurentPoly(nvars, terms)


def elementary_symmetric(k: int, nvars: int) -> LaurentPoly:
    """e_k in nvars variables: sum over all k-subsets, C(nvars, k) terms."""
    if not 0 <= k <= nvars:
        raise ValueError(f"need 0 <= k <= {nvars}, got {k}")
    terms = {}
    for subset in combinations(range(nvars), k):
        e = [0] * nvars
        for i in subset:
            e[i] = 1
        terms[tuple(e)] = COEFF_ONE
    return LaurentPoly(nvars, terms)


def power_sum(k: int, nvars: int) -> LaurentPoly:
    """p_k = sum z_i^k (k may be negative)."""
    terms = {}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = k
        terms[tuple(e)] = COEFF_ONE
    return LaurentPoly(nvars, terms)


# -- partitions, compositions, orbit bases ---------------------------------

def partitions(d: int, max_parts: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of d into at most max_parts parts, weakly decreasing tuples."""
    if max_part is None:
        max_part = d
    if d == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(d, max_part), 0, -1):
        for tail in partitions(d - first, max_parts - 1, first):
            yield (first,) + tail


def compositions(d: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of d into exactly `parts` non-negative parts."""
    if parts == 1:
        yield (d,)
        return
    for first in range(d + 1):
        for tail in compositions(d - first, parts - 1):
            yield (first,) + tail


def _distinct_permutations(counts: dict[int, int], length: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for v in list(counts):
        if counts[v]:
            counts[v] -= 1
            for tail in _distinct_permutations(counts, length - 1):
                yield (v,) + tail
            counts[v] += 1


def monomial_symmetric(partition: tuple[int, ...], nvars: int) -> LaurentPoly:
    """Orbit sum of z^partition under all variable permutations, coefficient 1."""
    padded = list(partition) + [0] * (nvars - len(partition))
    counts: dict[int, int] = {}
    for v in padded:
        counts[v] = counts.get(v, 0) + 1
    terms = {tuple(e): COEFF_ONE for e in _distinct_permutations(counts, nvars)}
    return LaurentPoly(nvars, terms)


def cyclic_representative(exps: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical representative of the cyclic rotation orbit (lexicographic max)."""
    n = len(exps)
    return max(exps[i:] + exps[:i] for i in range(n))


def cyclic_orbit_sum(rep: tuple[int, ...]) -> LaurentPoly:
    n = len(rep)
    terms = {}
    for i in range(n):
        terms[rep[i:] + rep[:i]] = COEFF_ONE
    return LaurentPoly(n, terms)


SYMMETRIC = "symmetric"
CYCLIC = "cyclic"


@dataclass(frozen=True)
class BasisSet:
    """Orbit-sum basis of homogeneous degree-d polynomials.

    Elements have pairwise disjoint monomial support (each monomial lies in
    exactly one orbit), so exact projection is coefficient lookup.
    """

    kind: str
    nvars: int
    degree: int
    labels: tuple[tuple[int, ...], ...]
    elements: tuple[LaurentPoly, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index_of_monomial(self) -> dict[tuple[int, ...], int]:
        lookup = {}
        for i, el in enumerate(self.elements):
            for e in el.terms:
                lookup[e] = i
        return lookup


def basis(kind: str, nvars: int, degree: int) -> BasisSet:
    """Enumerate the symmetric (partition-indexed) or cyclic-invariant
    (necklace-indexed) orbit-sum basis at a given degree."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if kind == SYMMETRIC:
        labels = sorted(partitions(degree, nvars), reverse=True)
        elements = tuple(monomial_symmetric(lam, nvars) for lam in labels)
    elif kind == CYCLIC:
        reps = sorted({cyclic_representative(c) for c in compositions(degree, nvars)}, reverse=True)
        labels = tuple(reps)
        elements = tuple(cyclic_orbit_sum(rep) for rep in reps)
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return BasisSet(kind=kind, nvars=nvars, degree=degree,
                    labels=tuple(labels), elements=elements)


def project(p: LaurentPoly, basis_set: BasisSet) -> tuple[list[Coeff], LaurentPoly]:
    """Exact coordinates of p in an orbit-sum basis, plus the exact residual.

    Because supports are disjoint the coordinate of element i is just the
    coefficient of any of its monomials; the residual collects whatever
    part of p is not a flat orbit sum.
    """
    coords = [COEFF_ZERO] * len(basis_set)
    leftover = dict(p.terms)
    for i, el in enumerate(basis_set.elements):
        rep = next(iter(el.terms))
        c = p.coeff(rep)
        if c:
            coords[i] = c
            for e in el.terms:
                s = leftover.get(e, COEFF_ZERO) - c
                if s:
                    leftover[e] = s
                else:
                    leftover.pop(e, None)
    return coords, LaurentPoly(p.nvars, leftover)
