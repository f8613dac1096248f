"""Exact application of the transformed operator and degree-block spectra.

The similarity-transformed operator acts on (Laurent) polynomials in
z_j = exp(2 pi i x_j / L) as

    sum_j D_j^2  +  B * sum_{pairs (a,b)} ((z_a + z_b)/(z_a - z_b)) (D_a - D_b)

with D_j = z_j d/dz_j and the pair set equal to the interaction pair list.
The drift numerator is z_a + z_b: the identity is
cot(pi (x_a - x_b)/L) = i (z_a + z_b)/(z_a - z_b), which the d=1 block
confirms by reproducing the 1 + 2 r B level.

The operator preserves homogeneous degree but, for 1 < r < c, maps fully
symmetric polynomials only into cyclic-invariant ones, so each degree
block is a rectangular pencil A v = lambda E v with E the exact embedding
of the symmetric basis into the cyclic-invariant basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .model import ModelParams, interaction_pairs
from .polyalg import (
    CYCLIC,
    SYMMETRIC,
    BasisSet,
    LaurentPoly,
    basis,
    exact_divide,
    project,
)

CERT_TOL = 1e-10
SPURIOUS_FLOOR = 1e-4


class PencilError(RuntimeError):
    """Structural failure while building or solving a degree block."""


@dataclass(frozen=True)
class H1Operator:
    params: ModelParams
    drift_pairs: tuple[tuple[int, int], ...]

    @staticmethod
    def build(params: ModelParams) -> "H1Operator":
        return H1Operator(params=params, drift_pairs=tuple(interaction_pairs(params)))


def apply_H1(op: H1Operator, p: LaurentPoly, beta=None) -> LaurentPoly:
    """Apply the transformed operator exactly.

    With beta=None the drift carries the formal parameter B, which
    requires p to be B-free.  With a rational beta the whole computation
    is in plain rationals.  Divisibility of (D_a - D_b)p by (z_a - z_b)
    is checked, not assumed; it fails exactly when p lacks a<->b exchange
    symmetry.
    """
    n = op.params.n
    if p.nvars != n:
        raise ValueError("variable count mismatch")
    out = LaurentPoly.zero(n)
    for j in range(n):
        out = out + p.apply_D(j).apply_D(j)
    for a, b in op.drift_pairs:
        moved = p.apply_D(a) - p.apply_D(b)
        if not moved:
            continue
        za_plus_zb = LaurentPoly.variable(n, a) + LaurentPoly.variable(n, b)
        quotient = exact_divide(za_plus_zb * moved, a, b)
        if beta is None:
            out = out + quotient.times_b()
        else:
            out = out + quotient.scale(Fraction(beta))
    return out


def exact_eigencheck(op: H1Operator, p: LaurentPoly, beta) -> Fraction:
    """Return lambda with apply_H1(p) == lambda * p exactly, else raise."""
    if not p:
        raise ValueError("zero polynomial")
    image = apply_H1(op, p, beta=beta)
    exps, coeff = next(iter(p.terms.items()))
    lam = image.coeff(exps).a / coeff.a
    if image != p.scale(lam):
        raise PencilError("polynomial is not an exact eigenvector")
    return lam


@dataclass(frozen=True)
class PencilBlock:
    """Exact degree-d block: A = A0 + B*A1 maps symmetric coordinates into
    the cyclic-invariant basis; E is the embedding."""

    degree: int
    sym_basis: BasisSet
    cyc_basis: BasisSet
    a0: tuple[tuple[Fraction, ...], ...]
    a1: tuple[tuple[Fraction, ...], ...]
    embed: tuple[tuple[Fraction, ...], ...]

    @property
    def dim_sym(self) -> int:
        return len(self.sym_basis)

    @property
    def dim_cyc(self) -> int:
        return len(self.cyc_basis)

    def numeric(self, beta_value: float):
        a0 = np.array(self.a0, dtype=float)
        a1 = np.array(self.a1, dtype=float)
        e = np.array(self.embed, dtype=float)
        return a0 + beta_value * a1, e


def build_pencil(op: H1Operator, degree: int) -> PencilBlock:
    """Columns of A are exact cyclic-basis coordinates of the operator
    applied to each symmetric basis element; any projection residual is a
    bug and raises."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    n = op.params.n
    sym = basis(SYMMETRIC, n, degree)
    cyc = basis(CYCLIC, n, degree)
    a0 = [[Fraction(0)] * len(sym) for _ in range(len(cyc))]
    a1 = [[Fraction(0)] * len(sym) for _ in range(len(cyc))]
    emb = [[Fraction(0)] * len(sym) for _ in range(len(cyc))]
    for col, el in enumerate(sym.elements):
        image = apply_H1(op, el)
        coords, residual = project(image, cyc)
        if residual:
            raise PencilError("operator image left the cyclic-invariant space")
        for row, c in enumerate(coords):
            a0[row][col] = c.a
            a1[row][col] = c.b
        ecoords, eres = project(el, cyc)
        assert not eres
        for row, c in enumerate(ecoords):
            emb[row][col] = c.a
    return PencilBlock(
        degree=degree,
        sym_basis=sym,
        cyc_basis=cyc,
        a0=tuple(tuple(r) for r in a0),
        a1=tuple(tuple(r) for r in a1),
        embed=tuple(tuple(r) for r in emb),
    )


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: tuple[complex, ...]  # symmetric-basis coordinates
    residual: float

    def real_value(self) -> float:
        return float(self.value.real)


@dataclass(frozen=True)
class PencilSolution:
    degree: int
    beta_value: float
    certified: tuple[EigenPair, ...]
    spurious: tuple[EigenPair, ...]
    ambiguous: tuple[EigenPair, ...]


def solve_pencil(block: PencilBlock, beta_value: float, tol: float = CERT_TOL) -> PencilSolution:
    """Candidate pairs from the least-squares square operator E^+ A; each is
    certified by its true full-space residual ||Av - lambda Ev|| / ||Ev||."""
    a, e = block.numeric(beta_value)
    svals = np.linalg.svd(e, compute_uv=False)
    if svals[-1] / svals[0] < 1e-10:
        raise PencilError("embedding is numerically rank-deficient")
    m = np.linalg.pinv(e) @ a
    w, vecs = np.linalg.eig(m)
    pairs = []
    for i in range(len(w)):
        v = vecs[:, i]
        ev = e @ v
        res = float(np.linalg.norm(a @ v - w[i] * ev) / np.linalg.norm(ev))
        pairs.append(EigenPair(value=complex(w[i]), vector=tuple(v.tolist()), residual=res))
    pairs.sort(key=lambda pr: (pr.value.real, pr.value.imag))
    certified = tuple(pr for pr in pairs if pr.residual < tol)
    spurious = tuple(pr for pr in pairs if pr.residual > SPURIOUS_FLOOR)
    ambiguous = tuple(pr for pr in pairs if tol <= pr.residual <= SPURIOUS_FLOOR)
    return PencilSolution(
        degree=block.degree,
        beta_value=beta_value,
        certified=certified,
        spurious=spurious,
        ambiguous=ambiguous,
    )


def vector_poly(block: PencilBlock, vector, beta=None) -> LaurentPoly:
    """Assemble a symmetric-coordinate vector into a polynomial.

    The vector is rescaled by its largest coordinate, then coordinates are
    rounded to nearby rationals (max denominator 10^6) so certified
    eigenvectors can feed the exact paths.
    """
    coords = np.asarray(vector, dtype=complex)
    pivot = coords[np.argmax(np.abs(coords))]
    coords = coords / pivot
    out = LaurentPoly.zero(block.sym_basis.nvars)
    for coord, el in zip(coords, block.sym_basis.elements):
        if abs(coord) < 1e-9:
            continue
        frac = Fraction(float(coord.real)).limit_denominator(10**6)
        if frac:
            out = out + el.scale(frac)
    return out


def closed_form_levels(params: ModelParams, beta_value: float) -> dict[str, float]:
    """The five known reduced levels at a numeric beta."""
    n = params.n
    rb = params.drift_weight * beta_value
    return {
        "e1": 1.0 + rb,
        "enm1": (n - 1.0) + rb,
        "en": float(n),
        "combo": n + 2.0 * (1.0 + rb),
        "nondeg_zero": 2.0 + 2.0 * rb,
    }


@dataclass(frozen=True)
class SpectrumReport:
    degree: int
    beta_value: float
    basis_dims: tuple[int, int]  # (symmetric, cyclic)
    eigenvalues: tuple[tuple[float, int, float], ...]  # (lambda, multiplicity, residual)
    matched_levels: dict = field(default_factory=dict)
    momentum: float = 0.0
    n_spurious: int = 0
    n_ambiguous: int = 0

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "beta": self.beta_value,
            "dim_symmetric": self.basis_dims[0],
            "dim_cyclic": self.basis_dims[1],
            "eigenvalues": [
                {"value": v, "multiplicity": m, "residual": r} for v, m, r in self.eigenvalues
            ],
            "matched_levels": self.matched_levels,
            "momentum_reduced": self.momentum,
            "spurious_pairs": self.n_spurious,
            "ambiguous_pairs": self.n_ambiguous,
        }


def spectrum_report(
    op: H1Operator, degree: int, beta_value: float, tol: float = CERT_TOL
) -> SpectrumReport:
    block = build_pencil(op, degree)
    sol = solve_pencil(block, beta_value, tol)
    # group certified values
    grouped: list[list[EigenPair]] = []
    for pr in sol.certified:
        if grouped and abs(pr.value - grouped[-1][0].value) < 1e-7 * (1 + abs(pr.value)):
            grouped[-1].append(pr)
        else:
            grouped.append([pr])
    eigenvalues = tuple(
        (float(g[0].value.real), len(g), max(pr.residual for pr in g)) for g in grouped
    )
    levels = closed_form_levels(op.params, beta_value)
    matched = {}
    for name, val in levels.items():
        hits = [ev for ev, _, _ in eigenvalues if abs(ev - val) < 1e-8 * (1 + abs(val))]
        if hits:
            matched[name] = hits[0]
    return SpectrumReport(
        degree=degree,
        beta_value=beta_value,
        basis_dims=(block.dim_sym, block.dim_cyc),
        eigenvalues=eigenvalues,
        matched_levels=matched,
        momentum=float(degree) * 2.0 * np.pi / op.params.length,
        n_spurious=len(sol.spurious),
        n_ambiguous=len(sol.ambiguous),
    )


@dataclass(frozen=True)
class ParityResult:
    partner: LaurentPoly
    lam: Fraction
    lam_partner: Fraction
    boost_q: int
    self_paired: bool  # partner proportional to the input: non-degenerate


def parity_partner(op: H1Operator, p: LaurentPoly, beta) -> ParityResult:
    """Image of an exact eigenvector under z -> 1/z, certified as an
    eigenvector with the same eigenvalue; also reports the boost exponent
    that returns it to non-negative powers and whether the state maps to
    itself (non-degenerate at momentum 0)."""
    lam = exact_eigencheck(op, p, beta)
    mirrored = p.invert_vars()
    lam_mirror = exact_eigencheck(op, mirrored, beta)
    if lam_mirror != lam:
        raise PencilError("parity image changed the eigenvalue")
    q = max(0, -mirrored.min_exponent())
    partner = mirrored.shift_all(q)
    self_paired = _proportional(mirrored, p)
    return ParityResult(
        partner=partner, lam=lam, lam_partner=lam_mirror, boost_q=q, self_paired=self_paired
    )


def _proportional(p: LaurentPoly, q: LaurentPoly) -> bool:
    if set(p.terms) != set(q.terms):
        return False
    exps = next(iter(p.terms))
    ratio = p.terms[exps].a / q.terms[exps].a
    return p == q.scale(ratio)


@dataclass(frozen=True)
class BoostCheck:
    q: int
    degree: int
    lam_base: Fraction
    lam_boosted: Fraction
    shift: Fraction
    shift_operator_form: Fraction  # 2 q d + N q^2
    shift_quadratic_form: Fraction  # 2 N q d + (N q)^2
    matches: str  # 'operator', 'quadratic', 'both', 'neither'


def boost_shift_check(op: H1Operator, p: LaurentPoly, q: int, beta) -> BoostCheck:
    """Certify (prod z)^q * p as an eigenvector and report the measured
    eigenvalue shift against the two candidate closed forms."""
    n = op.params.n
    d = p.degree()
    if d is None:
        raise ValueError("input must be homogeneous")
    lam = exact_eigencheck(op, p, beta)
    boosted = p.shift_all(q)
    lam_b = exact_eigencheck(op, boosted, beta)
    shift = lam_b - lam
    op_form = Fraction(2 * q * d + n * q * q)
    quad_form = Fraction(2 * n * q * d + (n * q) ** 2)
    if shift == op_form and shift == quad_form:
        matches = "both"
    elif shift == op_form:
        matches = "operator"
    elif shift == quad_form:
        matches = "quadratic"
    else:
        matches = "neither"
    return BoostCheck(
        q=q,
        degree=d,
        lam_base=lam,
        lam_boosted=lam_b,
        shift=shift,
        shift_operator_form=op_form,
        shift_quadratic_form=quad_form,
        matches=matches,
    )
