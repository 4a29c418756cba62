"""Exponent-matrix validation and integer-lattice group combinatorics.

An n x n nonnegative integer matrix A encodes the invertible potential
W_A(x) = sum_i prod_j x_j^{A[i][j]} (one monomial per row).  The diagonal
symmetries of W_A form the finite abelian group Z^n / Z^n A^T; the dual side
Z^n / Z^n A plays the mirror role.  Group elements are carried around as a
pair (integer representative, exact fractional coordinate vector): the
fractional coordinates are lambda A^{-T} (resp. gamma A^{-1}) and determine
the class uniquely when reduced into [0,1)^n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .errors import NegativeEntryError, NonSquareError, ZeroDeterminantError

Vec = tuple[Fraction, ...]

SIDE_A = "A"  # lambda-type classes, modulo Z^n A^T
SIDE_AT = "AT"  # gamma-type classes, modulo Z^n A


@dataclass(frozen=True)
class BHMatrix:
    """Square nonnegative integer exponent matrix with its prime context."""

    entries: tuple[tuple[int, ...], ...]
    prime: int | None = None

    @staticmethod
    def from_rows(rows, prime: int | None = None) -> "BHMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise NonSquareError(f"expected square matrix, got rows {[len(r) for r in entries]}")
        if any(x < 0 for row in entries for x in row):
            raise NegativeEntryError("exponent matrix entries must be nonnegative")
        return BHMatrix(entries, prime)

    @property
    def n(self) -> int:
        return len(self.entries)

    @cached_property
    def det(self) -> int:
        d = _det(self.entries)
        return d

    @cached_property
    def inverse(self) -> tuple[Vec, ...]:
        if self.det == 0:
            raise ZeroDeterminantError("matrix is singular")
        return _inverse(self.entries)

    @cached_property
    def inverse_transpose(self) -> tuple[Vec, ...]:
        inv = self.inverse
        n = self.n
        return tuple(tuple(inv[j][i] for j in range(n)) for i in range(n))

    @cached_property
    def weights(self) -> Vec:
        """Charge vector q = J A^{-T}; row_i(A) . q = 1 for every row."""
        return tuple(sum(row) for row in self.inverse)

    def transpose(self) -> "BHMatrix":
        n = self.n
        return BHMatrix(tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)), self.prime)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def is_diagonal(self) -> bool:
        return all(self.entries[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in row) for row in self.entries) + "]"


@dataclass(frozen=True)
class GroupElement:
    """Class in Z^n / Z^n A^T (side A) or Z^n / Z^n A (side AT).

    ``frac`` is lambda A^{-T} (resp. gamma A^{-1}); canonical representatives
    keep every fractional coordinate in [0,1).
    """

    rep: tuple[int, ...]
    frac: Vec
    side: str

    @property
    def age(self) -> Fraction:
        return sum(self.frac, Fraction(0))

    @property
    def dim(self) -> int:
        return sum(1 for f in self.frac if f.denominator == 1)

    @property
    def support(self) -> tuple[int, ...]:
        """Indices with integral fractional coordinate (the fixed locus)."""
        return tuple(i for i, f in enumerate(self.frac) if f.denominator == 1)

    def is_zero(self) -> bool:
        return all(f == 0 for f in self.frac)

    def sort_key(self):
        return tuple(self.frac)


@dataclass(frozen=True)
class SymmetryGroup:
    matrix: BHMatrix
    side: str
    generators: tuple[GroupElement, ...]
    elements: tuple[GroupElement, ...]
    _index: frozenset = field(repr=False, default=frozenset())

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x) -> bool:
        frac = x.frac if isinstance(x, GroupElement) else tuple(x)
        return frac in self._index


# -- exact linear algebra -----------------------------------------------------


def _det(entries) -> int:
    n = len(entries)
    m = [[Fraction(x) for x in row] for row in entries]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    assert det.denominator == 1
    return int(det)


def _inverse(entries) -> tuple[Vec, ...]:
    n = len(entries)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(entries)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [a * inv for a in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def smith_normal_form(mat) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, S, V) with U*mat*V = S diagonal, d_i | d_{i+1}, U,V unimodular."""
    a = [list(map(int, row)) for row in mat]
    n, m = len(a), len(a[0])
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    for t in range(min(n, m)):
        while True:
            # move a minimal nonzero entry of the trailing block to (t,t)
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best != (t, t):
                if best[0] != t:
                    swap_rows(t, best[0])
                if best[1] != t:
                    swap_cols(t, best[1])
            piv = a[t][t]
            done = True
            for i in range(t + 1, n):
                if a[i][t] % piv != 0:
                    done = False
                addmul_row(i, t, -(a[i][t] // piv))
            for j in range(t + 1, m):
                if a[t][j] % piv != 0:
                    done = False
                addmul_col(j, t, -(a[t][j] // piv))
            if done and all(a[i][t] == 0 for i in range(t + 1, n)) and all(a[t][j] == 0 for j in range(t + 1, m)):
                # enforce divisibility d_t | trailing entries
                bad = None
                for i in range(t + 1, n):
                    for j in range(t + 1, m):
                        if a[i][j] % piv != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                addmul_row(t, bad, 1)
        if t < min(n, m) and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


# -- group enumeration --------------------------------------------------------


def _lattice_matrix(A: BHMatrix, side: str):
    # side A: classes lambda mod Z^n A^T, frac = lambda A^{-T}
    # side AT: classes gamma mod Z^n A, frac = gamma A^{-1}
    if side == SIDE_A:
        return A.transpose().entries
    if side == SIDE_AT:
        return A.entries
    raise ValueError(f"unknown side {side!r}")


def _frac_to_rep(frac: Vec, lattice) -> tuple[int, ...]:
    n = len(frac)
    rep = []
    for j in range(n):
        x = sum(frac[i] * lattice[i][j] for i in range(n))
        assert x.denominator == 1
        rep.append(int(x))
    return tuple(rep)


def _reduce(vec, A: BHMatrix, side: str) -> GroupElement:
    """Canonical representative of an integer vector's class, fracs in [0,1)."""
    lattice = _lattice_matrix(A, side)
    inv = _inverse(lattice)
    n = A.n
    raw = tuple(sum(Fraction(vec[i]) * inv[i][j] for i in range(n)) for j in range(n))
    frac = tuple(x - (x.numerator // x.denominator) for x in raw)
    return GroupElement(_frac_to_rep(frac, lattice), frac, side)


def element_from_frac(frac, A: BHMatrix, side: str) -> GroupElement:
    frac = tuple(Fraction(x) for x in frac)
    frac = tuple(x - (x.numerator // x.denominator) for x in frac)
    return GroupElement(_frac_to_rep(frac, _lattice_matrix(A, side)), frac, side)


_ENUM_CACHE: dict[tuple, SymmetryGroup] = {}


def enumerate_group(A: BHMatrix, side: str = SIDE_A) -> SymmetryGroup:
    """All |det A| classes of the chosen side, via Smith normal form.

    Elements are ordered lexicographically by fractional coordinates, which
    fixes the order of every downstream table.
    """
    key = (A.entries, side)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    if A.det == 0:
        raise ZeroDeterminantError("cannot enumerate symmetry group of a singular matrix")
    lattice = _lattice_matrix(A, side)
    n = A.n
    U, S, _V = smith_normal_form(lattice)
    diag = [S[i][i] for i in range(n)]
    elements = []
    seen = set()
    for mu in itertools.product(*(range(abs(d)) for d in diag)):
        raw = [sum(Fraction(mu[i], diag[i]) * U[i][j] for i in range(n)) for j in range(n)]
        frac = tuple(x - (x.numerator // x.denominator) for x in raw)
        assert frac not in seen
        seen.add(frac)
        elements.append(GroupElement(_frac_to_rep(frac, lattice), frac, side))
    elements.sort(key=lambda e: e.sort_key())
    assert len(elements) == abs(A.det)
    gens = tuple(_reduce(tuple(int(i == j) for j in range(n)), A, side) for i in range(n))
    group = SymmetryGroup(A, side, gens, tuple(elements), frozenset(e.frac for e in elements))
    _ENUM_CACHE[key] = group
    return group


def span(A: BHMatrix, side: str, generators) -> SymmetryGroup:
    """Closure of the given integer-vector generators inside the side group."""
    gens = tuple(_reduce(tuple(int(x) for x in g), A, side) for g in generators)
    zero = tuple(Fraction(0) for _ in range(A.n))
    seen = {zero} | {g.frac for g in gens}
    frontier = list(seen)
    while frontier:
        new = []
        for f in frontier:
            for g in gens:
                s = tuple((a + b) - int(a + b) for a, b in zip(f, g.frac))
                if s not in seen:
                    seen.add(s)
                    new.append(s)
        frontier = new
    elements = sorted(seen)
    lattice = _lattice_matrix(A, side)
    elems = tuple(GroupElement(_frac_to_rep(f, lattice), f, side) for f in elements)
    return SymmetryGroup(A, side, gens, elems, frozenset(elements))


def pairing(gamma: GroupElement, lam: GroupElement) -> Fraction:
    """gamma A^{-1} lambda^T, exact; integral iff the classes pair trivially."""
    assert gamma.side == SIDE_AT and lam.side == SIDE_A
    return sum((f * r for f, r in zip(gamma.frac, lam.rep)), Fraction(0))


def pairs_integrally(gamma_frac, lam_rep) -> bool:
    return sum((f * r for f, r in zip(gamma_frac, lam_rep)), Fraction(0)).denominator == 1


def transpose_group(A: BHMatrix, G: SymmetryGroup) -> SymmetryGroup:
    """Dual subgroup on the mirror side, defined by integral pairing with G."""
    assert G.side == SIDE_A, "transpose_group expects a subgroup of the side-A group"
    full = enumerate_group(A, SIDE_AT)
    d = abs(A.det)
    gens = [g.rep for g in G.generators]
    kept = tuple(
        e for e in full.elements
        if all(sum(int(f * d) * r for f, r in zip(e.frac, rep)) % d == 0 for rep in gens)
    )
    # generators of the dual: the kept elements themselves (small groups)
    return SymmetryGroup(A, SIDE_AT, kept, kept, frozenset(e.frac for e in kept))


def subgroup_from_elements(A: BHMatrix, side: str, fracs) -> SymmetryGroup:
    lattice = _lattice_matrix(A, side)
    elems = tuple(GroupElement(_frac_to_rep(f, lattice), f, side) for f in sorted(fracs))
    return SymmetryGroup(A, side, elems, elems, frozenset(fracs))


def dual_subgroup(A: BHMatrix, G: SymmetryGroup) -> SymmetryGroup:
    """transpose_group for a side-AT subgroup (pairing roles swapped).

    Uses lambda A^{-T} gamma^T = gamma A^{-1} lambda^T, so the side-A fracs
    pair against the side-AT integer representatives directly.
    """
    assert G.side == SIDE_AT
    full = enumerate_group(A, SIDE_A)
    d = abs(A.det)
    gens = [g.rep for g in G.generators]
    kept = tuple(
        e for e in full.elements
        if all(sum(int(f * d) * r for f, r in zip(e.frac, rep)) % d == 0 for rep in gens)
    )
    return SymmetryGroup(A, SIDE_A, kept, kept, frozenset(e.frac for e in kept))


def g_frac_of(A: BHMatrix, gamma_rep) -> Vec:
    inv = A.inverse
    n = A.n
    return tuple(sum(Fraction(gamma_rep[i]) * inv[i][j] for i in range(n)) for j in range(n))


def age(x: GroupElement) -> Fraction:
    return x.age


def dual_age(x: GroupElement) -> Fraction:
    assert x.side == SIDE_AT
    return x.age


def dim(x: GroupElement) -> int:
    return x.dim


def neg(x: GroupElement, A: BHMatrix) -> GroupElement:
    """Inverse class, canonical representative."""
    frac = tuple((-f) - int(-f) if f != 0 else Fraction(0) for f in x.frac)
    frac = tuple(f if f >= 0 else f + 1 for f in frac)
    return GroupElement(_frac_to_rep(frac, _lattice_matrix(A, x.side)), frac, x.side)


def restrict(A: BHMatrix, lam: GroupElement) -> tuple[BHMatrix, tuple[int, ...]]:
    """Submatrix A^lambda on the fixed locus of lambda, with its index set.

    Rows whose monomial touches a non-fixed variable vanish on restriction;
    for the matrices handled here exactly |support| rows survive.
    """
    support = lam.support
    surviving = [
        i for i in range(A.n)
        if all(A.entries[i][j] == 0 or j in support for j in range(A.n))
    ]
    if len(surviving) != len(support):
        raise ValueError(
            f"restriction of {A} to support {support} is not square "
            f"({len(surviving)} rows for {len(support)} variables)"
        )
    sub = tuple(tuple(A.entries[i][j] for j in support) for i in surviving)
    return BHMatrix(sub, A.prime), support


# -- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    kind: str  # fermat | chain | loop
    variables: tuple[int, ...]
    exponents: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    matrix: BHMatrix
    prime: int | None
    invertible: bool
    det: int
    det_divides: bool | None
    weights: Vec | None
    weights_positive: bool
    atom_decomposition: tuple[Atom, ...] | None
    calabi_yau: bool
    j_in_G: bool
    j_in_GT: bool
    warnings: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return (
            self.invertible
            and bool(self.det_divides)
            and self.weights_positive
            and self.atom_decomposition is not None
        )


def atom_decomposition(A: BHMatrix) -> tuple[Atom, ...] | None:
    """Decompose A (up to independent row/column permutation) into
    Fermat / chain / loop atoms; None if no decomposition exists."""
    n = A.n
    rows = []
    for i in range(n):
        nz = [(j, A.entries[i][j]) for j in range(n) if A.entries[i][j] != 0]
        if not (1 <= len(nz) <= 2):
            return None
        rows.append(nz)

    # candidate (head, tail) assignments per row; the tail exponent must be 1
    candidates: list[list[tuple[int, int | None, int]]] = []
    for nz in rows:
        cand = []
        if len(nz) == 1:
            cand.append((nz[0][0], None, nz[0][1]))
        else:
            (j1, a1), (j2, a2) = nz
            if a2 == 1:
                cand.append((j1, j2, a1))
            if a1 == 1:
                cand.append((j2, j1, a2))
        if not cand:
            return None
        candidates.append(cand)

    order = sorted(range(n), key=lambda i: len(candidates[i]))

    def search(idx: int, head_of: dict[int, tuple[int | None, int]], used: set[int]):
        if idx == n:
            return classify(head_of)
        i = order[idx]
        for head, tail, exp in candidates[i]:
            if head in used:
                continue
            used.add(head)
            head_of[head] = (tail, exp)
            result = search(idx + 1, head_of, used)
            if result is not None:
                return result
            used.discard(head)
            del head_of[head]
        return None

    def classify(head_of: dict[int, tuple[int | None, int]]):
        # functional graph var -> tail(var); valid atoms need in-degree <= 1
        indeg: dict[int, int] = {v: 0 for v in range(n)}
        for v, (t, _) in head_of.items():
            if t is not None:
                if t == v:
                    return None
                indeg[t] += 1
        if any(d > 1 for d in indeg.values()):
            return None
        atoms = []
        visited: set[int] = set()
        for start in range(n):
            if start in visited or indeg[start] != 0:
                continue
            chain = [start]
            visited.add(start)
            t = head_of[start][0]
            while t is not None and t not in visited:
                chain.append(t)
                visited.add(t)
                t = head_of[t][0]
            if t is not None:
                return None  # ran into an already-claimed variable: overlap
            exps = tuple(head_of[v][1] for v in chain)
            atoms.append(Atom("fermat" if len(chain) == 1 else "chain", tuple(chain), exps))
        # remaining variables sit on cycles
        for start in range(n):
            if start in visited:
                continue
            cyc = [start]
            visited.add(start)
            t = head_of[start][0]
            while t != start:
                if t is None or t in visited:
                    return None
                cyc.append(t)
                visited.add(t)
                t = head_of[t][0]
            atoms.append(Atom("loop", tuple(cyc), tuple(head_of[v][1] for v in cyc)))
        return tuple(sorted(atoms, key=lambda a: a.variables))

    return search(0, {}, set())


def validate(A: BHMatrix, p: int | None = None, group_generators=None) -> ValidationReport:
    """Full structural validation; J-membership flags use the supplied group
    generators (default <J>)."""
    if p is None:
        p = A.prime
    n = A.n
    if any(len(r) != n for r in A.entries):
        raise NonSquareError("matrix must be square")
    if any(x < 0 for row in A.entries for x in row):
        raise NegativeEntryError("entries must be nonnegative")
    warnings = []
    det = A.det
    if det == 0:
        raise ZeroDeterminantError("det(A) = 0")
    if any(all(x == 0 for x in row) for row in A.entries):
        warnings.append("zero row: some variable is missing from the potential")

    weights = A.weights
    weights_pos = all(w > 0 for w in weights)
    if not weights_pos:
        warnings.append("charge vector has non-positive entries")
    atoms = atom_decomposition(A)
    if atoms is None:
        warnings.append("no Fermat/chain/loop decomposition: potential is not invertible")
    det_divides = None if p is None else ((p - 1) % abs(det) == 0)
    cy = sum(weights, Fraction(0)).denominator == 1

    j = tuple(1 for _ in range(n))
    gens = [j] if group_generators is None else [tuple(int(x) for x in g) for g in group_generators]
    G = span(A, SIDE_A, gens)
    j_in_G = _reduce(j, A, SIDE_A).frac in {e.frac for e in G.elements}
    j_frac_at = g_frac_of(A, j)
    j_in_GT = all(pairs_integrally(j_frac_at, lam.rep) for lam in G.generators)

    return ValidationReport(
        matrix=A,
        prime=p,
        invertible=det != 0,
        det=det,
        det_divides=det_divides,
        weights=weights,
        weights_positive=weights_pos,
        atom_decomposition=atoms,
        calabi_yau=cy,
        j_in_G=j_in_G,
        j_in_GT=j_in_GT,
        warnings=tuple(warnings),
    )
