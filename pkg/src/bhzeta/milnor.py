"""Graded dimensions of the orbifold state space via Milnor rings.

For each twist lambda the potential restricts to its fixed locus; the Milnor
ring C[x]/(dW) of the restricted potential is graded by dual-group classes
with every graded piece at most one dimensional.  A sector label (gamma,
lambda) survives (delta = 1) exactly when gamma = (basis exponent + J) pairs
integrally with the whole symmetry group.  Dual ages are read off the
unreduced representative gamma A^{-1}, whose coordinates may equal 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotIsolatedError
from .matrixcore import (
    SIDE_A,
    BHMatrix,
    GroupElement,
    SymmetryGroup,
    restrict,
)

Expo = tuple[int, ...]


@dataclass(frozen=True)
class MilnorBasis:
    potential: BHMatrix
    basis: tuple[Expo, ...]
    group_grading: tuple[tuple[Fraction, ...], ...]  # class of each basis monomial

    @property
    def milnor_number(self) -> int:
        return len(self.basis)


def milnor_number(A: BHMatrix) -> int:
    """Product formula mu = prod_i (1/q_i - 1); integrality is a sanity gate."""
    mu = Fraction(1)
    for q in A.weights:
        mu *= 1 / q - 1
    if mu.denominator != 1 or mu <= 0:
        raise NotIsolatedError(f"non-integral Milnor number {mu} for {A}")
    return int(mu)


def milnor_basis(A: BHMatrix) -> MilnorBasis:
    """Monomial basis of C[x]/(dW_A), graded-lex reduced, exact arithmetic.

    The 0x0 potential has the single empty monomial.
    """
    if A.n == 0:
        return MilnorBasis(A, ((),), ((),))
    if A.is_diagonal():
        basis = _diagonal_basis(A)
    else:
        basis = _graded_elimination_basis(A)
    mu = milnor_number(A)
    if len(basis) != mu:
        raise NotIsolatedError(f"basis size {len(basis)} != Milnor number {mu} for {A}")
    inv = A.inverse
    n = A.n
    # distinct basis monomials may share a class for loop blocks (mu can
    # exceed |det|); sectors are indexed by the unreduced exponent vectors
    grading = tuple(
        tuple(frac_part(sum(Fraction(b[i]) * inv[i][j] for i in range(n))) for j in range(n))
        for b in basis
    )
    return MilnorBasis(A, basis, grading)


def frac_part(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _diagonal_basis(A: BHMatrix) -> tuple[Expo, ...]:
    ranges = [range(A.entries[i][i] - 1) for i in range(A.n)]
    return tuple(itertools.product(*ranges))


def _graded_elimination_basis(A: BHMatrix) -> tuple[Expo, ...]:
    n = A.n
    q = A.weights
    top = sum((1 - 2 * qi for qi in q), Fraction(0))

    # all monomials of weighted degree <= top, grouped by exact degree
    by_degree: dict[Fraction, list[Expo]] = {}

    def walk(prefix, deg):
        i = len(prefix)
        if i == n:
            by_degree.setdefault(deg, []).append(tuple(prefix))
            return
        b = 0
        while deg + b * q[i] <= top:
            walk(prefix + [b], deg + b * q[i])
            b += 1

    walk([], Fraction(0))

    # partial derivatives: dW/dx_j = sum_i A[i][j] x^(row_i - e_j)
    derivs = []
    for j in range(n):
        terms = []
        for i in range(n):
            if A.entries[i][j] > 0:
                expo = list(A.entries[i])
                expo[j] -= 1
                terms.append((tuple(expo), A.entries[i][j]))
        derivs.append((terms, 1 - q[j]))

    inv = A.inverse

    def outside_box(b) -> int:
        # gamma = b + J must keep gamma A^{-1} inside [0,1]^n for the trace
        # tables; out-of-box monomials are preferred as elimination pivots
        w = [sum(Fraction(b[i] + 1) * inv[i][j] for i in range(n)) for j in range(n)]
        return int(any(x < 0 or x > 1 for x in w))

    basis: list[Expo] = []
    for deg in sorted(by_degree):
        # eliminate out-of-box and extreme-exponent monomials first so the
        # surviving basis stays inside the box the trace tables index by
        monos = sorted(by_degree[deg], key=lambda b: (outside_box(b), max(b), b), reverse=True)
        col = {m: k for k, m in enumerate(monos)}
        rows = []
        for terms, ddeg in derivs:
            shift_deg = deg - ddeg
            if shift_deg < 0:
                continue
            for c in by_degree.get(shift_deg, ()):  # x^c * dW_j
                row = [Fraction(0)] * len(monos)
                for expo, coeff in terms:
                    m = tuple(a + b for a, b in zip(expo, c))
                    row[col[m]] += coeff
                rows.append(row)
        pivots = _row_reduce(rows, len(monos))
        basis.extend(m for k, m in enumerate(monos) if k not in pivots)
    return tuple(sorted(basis))


def _row_reduce(rows, width) -> set[int]:
    pivots: set[int] = set()
    reduced: list[list[Fraction]] = []
    for row in rows:
        row = list(row)
        for r in reduced:
            lead = next(k for k, x in enumerate(r) if x != 0)
            if row[lead] != 0:
                f = row[lead] / r[lead]
                row = [a - f * b for a, b in zip(row, r)]
        lead = next((k for k, x in enumerate(row) if x != 0), None)
        if lead is not None:
            reduced.append(row)
            pivots.add(lead)
    return pivots


@dataclass(frozen=True)
class SectorLabel:
    """A surviving (gamma, lambda) sector with its Hodge bidegree."""

    gamma_rep: Expo                      # unreduced: Milnor exponent + J on the support
    gamma_frac: tuple[Fraction, ...]     # gamma A^{-1}; entries may equal 1
    lam: GroupElement
    s: Fraction
    r: Fraction
    delta: int = 1

    @property
    def age_lambda(self) -> Fraction:
        return self.lam.age

    @property
    def dual_age_gamma(self) -> Fraction:
        return sum(self.gamma_frac, Fraction(0))

    @property
    def total_degree(self) -> Fraction:
        return self.s + self.r

    @property
    def is_integral(self) -> bool:
        return (self.s + self.r).denominator == 1

    def sort_key(self):
        return (self.total_degree, self.s, self.gamma_frac, self.lam.frac)


@dataclass(frozen=True)
class Spectrum:
    matrix: BHMatrix
    group: SymmetryGroup
    labels: tuple[SectorLabel, ...]
    warnings: tuple[str, ...]

    def __iter__(self):
        return iter(self.labels)

    def __len__(self):
        return len(self.labels)

    def hodge_numbers(self) -> dict[tuple[Fraction, Fraction], int]:
        h: dict[tuple[Fraction, Fraction], int] = {}
        for lab in self.labels:
            h[(lab.s, lab.r)] = h.get((lab.s, lab.r), 0) + 1
        return h

    def euler_characteristic(self) -> int:
        chi = 0
        for lab in self.labels:
            if not lab.is_integral:
                raise ValueError("Euler characteristic undefined with fractional bidegrees")
            chi += (-1) ** int(lab.total_degree)
        return chi


def sector_spectrum(A: BHMatrix, G: SymmetryGroup) -> Spectrum:
    """All delta = 1 sector labels for the pair (A, G), with (s, r) attached.

    Proceeds even when J is not in G intersect G^T; a warning is attached and
    fractional bidegrees appear (diagnostic regime).
    """
    assert G.side == SIDE_A
    warnings = []
    n = A.n
    d = abs(A.det)
    j_full = tuple(1 for _ in range(n))
    gen_reps = [g.rep for g in G.generators]

    from .matrixcore import _reduce, g_frac_of, pairs_integrally

    j_elem = _reduce(j_full, A, SIDE_A)
    j_in_G = j_elem.frac in {e.frac for e in G.elements}
    j_in_GT = all(pairs_integrally(g_frac_of(A, j_full), rep) for rep in gen_reps)
    if not (j_in_G and j_in_GT):
        warnings.append("J is not in G intersect G^T: fractional bidegrees ahead")

    inv = A.inverse
    labels = []
    for lam in G.elements:
        sub, support = restrict(A, lam)
        mb = milnor_basis(sub)
        age_l = lam.age
        dim_l = len(support)
        for b in mb.basis:
            gamma = [0] * n
            for k, i in enumerate(support):
                gamma[i] = b[k] + 1
            gamma = tuple(gamma)
            gfrac = tuple(
                sum(Fraction(gamma[i]) * inv[i][j] for i in range(n)) for j in range(n)
            )
            # gamma must pair integrally with every element of G
            ok = all(
                sum(int(f * d) * r for f, r in zip(gfrac, rep)) % d == 0 for rep in gen_reps
            )
            if not ok:
                continue
            dual_age = sum(gfrac, Fraction(0))
            s = age_l + dual_age - 1
            r = dim_l + age_l - dual_age - 1
            labels.append(SectorLabel(gamma, gfrac, lam, s, r))
    labels.sort(key=lambda lab: lab.sort_key())
    return Spectrum(A, G, tuple(labels), tuple(warnings))


def serre_partner(label: SectorLabel, A: BHMatrix, spectrum: Spectrum) -> SectorLabel | None:
    """The residue-pairing partner of (gamma, lambda).

    The literal vector J A^lambda_0 - gamma is looked up first; for chain
    potentials that vector can leave the basis box, in which case the partner
    is the class-equivalent representative with every fractional coordinate
    of gamma A^{-1} reflected (v -> 1 - v) and integral coordinates kept.
    """
    n = A.n
    support_l = label.lam.support
    ja_l = [0] * n
    for j in support_l:
        ja_l[j] = sum(A.entries[i][j] for i in support_l)
    gamma2 = tuple(a - g for a, g in zip(ja_l, label.gamma_rep))

    support_g = tuple(i for i, f in enumerate(label.gamma_frac) if f.denominator == 1)
    jat_g = [0] * n
    for j in support_g:
        jat_g[j] = sum(A.entries[j][i] for i in support_g)
    lam2_raw = tuple(a - l for a, l in zip(jat_g, label.lam.rep))

    from .matrixcore import _reduce

    lam2 = _reduce(lam2_raw, A, SIDE_A)
    for cand in spectrum.labels:
        if cand.lam.frac == lam2.frac and cand.gamma_rep == gamma2:
            return cand
    reflected = tuple(f if f.denominator == 1 else 1 - f for f in label.gamma_frac)
    gamma3 = []
    for j in range(n):
        x = sum(reflected[i] * A.entries[i][j] for i in range(n))
        assert x.denominator == 1
        gamma3.append(int(x))
    gamma3 = tuple(gamma3)
    for cand in spectrum.labels:
        if cand.lam.frac == lam2.frac and cand.gamma_rep == gamma3:
            return cand
    return None
