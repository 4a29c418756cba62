"""Milnor bases and the sector spectrum against the worked examples."""

import itertools
from fractions import Fraction

import pytest

from bhzeta import matrixcore as mc
from bhzeta import milnor
from bhzeta.matrixcore import SIDE_A, BHMatrix


def diag(*a):
    n = len(a)
    return BHMatrix.from_rows([[a[i] if i == j else 0 for j in range(n)] for i in range(n)])


CHAIN_223 = BHMatrix.from_rows([[2, 1, 0], [0, 2, 1], [0, 0, 3]])
CHAIN_2223 = BHMatrix.from_rows([[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1], [0, 0, 0, 3]])
CHAIN_3334 = BHMatrix.from_rows([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]])
L2L2 = BHMatrix.from_rows([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]])


def J_group(A):
    return mc.span(A, SIDE_A, [tuple(1 for _ in range(A.n))])


class TestMilnorBasis:
    def test_fermat_quartic_one_var(self):
        mb = milnor.milnor_basis(diag(4))
        assert mb.basis == ((0,), (1,), (2,))

    def test_empty_potential(self):
        A = BHMatrix.from_rows([])
        mb = milnor.milnor_basis(A)
        assert mb.basis == ((),) and mb.milnor_number == 1

    def test_fermat_quartic_k3(self):
        mb = milnor.milnor_basis(diag(4, 4, 4, 4))
        assert mb.milnor_number == 81
        # untwisted dual-group classes: gamma = b + J with |gamma|/4 integral
        kept = [
            b for b in mb.basis
            if sum(x + 1 for x in b) % 4 == 0
        ]
        oracle = [g for g in itertools.product((1, 2, 3), repeat=4) if sum(g) % 4 == 0]
        assert len(kept) == len(oracle) == 21

    def test_chain_milnor_number_and_untwisted_classes(self):
        mb = milnor.milnor_basis(CHAIN_223)
        assert mb.milnor_number == 8
        gammas = [tuple(x + 1 for x in b) for b in mb.basis]
        inv = CHAIN_223.inverse
        kept = [
            g for g in gammas
            if sum(sum(Fraction(g[i]) * inv[i][j] for i in range(3)) for j in range(3)).denominator == 1
        ]
        assert sorted(kept) == [(1, 1, 1), (1, 2, 3)]

    def test_loop_block(self):
        mb = milnor.milnor_basis(BHMatrix.from_rows([[3, 1], [1, 3]]))
        assert mb.milnor_number == 9

    def test_diagonal_vs_elimination_agree(self):
        A = diag(3, 4)
        fast = milnor._diagonal_basis(A)
        slow = milnor._graded_elimination_basis(A)
        assert sorted(fast) == sorted(slow)


class TestSpectrum:
    def test_chain_223_four_sectors(self):
        spec = milnor.sector_spectrum(CHAIN_223, J_group(CHAIN_223))
        assert len(spec) == 4
        bidegrees = sorted((int(l.s), int(l.r)) for l in spec.labels)
        assert bidegrees == [(0, 0), (0, 1), (1, 0), (1, 1)]
        by_deg = {(int(l.s), int(l.r)): l for l in spec.labels}
        assert by_deg[(0, 1)].gamma_frac == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        assert by_deg[(1, 0)].gamma_frac == (Fraction(1, 2), Fraction(3, 4), Fraction(3, 4))
        assert by_deg[(0, 1)].gamma_rep == (1, 1, 1)
        assert by_deg[(1, 0)].gamma_rep == (1, 2, 3)
        assert not spec.warnings

    def test_m30_k3_hodge_diamond(self):
        A = diag(2, 3, 10, 15)
        spec = milnor.sector_spectrum(A, J_group(A))
        assert len(spec) == 24
        h = spec.hodge_numbers()
        assert h[(Fraction(1), Fraction(1))] == 20
        for sr in [(0, 0), (0, 2), (2, 0), (2, 2)]:
            assert h[(Fraction(sr[0]), Fraction(sr[1]))] == 1

    def test_quintic_spectrum(self):
        A = diag(5, 5, 5, 5, 5)
        spec = milnor.sector_spectrum(A, J_group(A))
        assert len(spec) == 208
        h = spec.hodge_numbers()
        assert h[(Fraction(1), Fraction(2))] == h[(Fraction(2), Fraction(1))] == 101

    def test_non_cy_chain_2223(self):
        spec = milnor.sector_spectrum(CHAIN_2223, J_group(CHAIN_2223))
        assert len(spec) == 8
        assert spec.warnings
        fractional = [l for l in spec.labels if not l.is_integral]
        assert len(fractional) == 2
        assert sorted(l.s for l in fractional) == [Fraction(1, 3), Fraction(5, 3)]
        integral = [l for l in spec.labels if l.is_integral]
        assert all((l.s, l.r) == (1, 1) for l in integral) and len(integral) == 6

    def test_chain_3334_sector_table(self):
        spec = milnor.sector_spectrum(CHAIN_3334, J_group(CHAIN_3334))
        assert len(spec) == 24
        by_deg = {}
        for l in spec.labels:
            by_deg.setdefault((l.s, l.r), []).append(l)
        assert len(by_deg[(Fraction(1), Fraction(1))]) == 20
        h02 = by_deg[(Fraction(0), Fraction(2))][0]
        assert h02.gamma_frac == (Fraction(1, 3), Fraction(2, 9), Fraction(7, 27), Fraction(5, 27))
        h20 = by_deg[(Fraction(2), Fraction(0))][0]
        assert h20.gamma_frac == (Fraction(2, 3), Fraction(7, 9), Fraction(20, 27), Fraction(22, 27))
        assert h20.gamma_rep == (2, 3, 3, 4)

    def test_l2l2_table_rows(self):
        spec = milnor.sector_spectrum(L2L2, J_group(L2L2))
        assert len(spec) == 24
        fracs = {l.gamma_frac for l in spec.labels if l.lam.is_zero()}
        q = Fraction(1, 4)
        assert (q, q, q, q) in fracs and (3 * q, 3 * q, 3 * q, 3 * q) in fracs
        assert (Fraction(1), Fraction(0), Fraction(1), Fraction(0)) in fracs

    def test_greene_plesser_sizes(self):
        A = diag(5, 5, 5, 5, 5)
        G125 = mc.span(A, SIDE_A, [(1, 1, 1, 1, 1), (0, 1, 2, 3, 4), (0, 1, 1, 4, 4)])
        spec = milnor.sector_spectrum(A, G125)
        h = spec.hodge_numbers()
        assert len(spec) == 80
        assert h[(Fraction(1), Fraction(1))] == 17 and h[(Fraction(2), Fraction(1))] == 21
        G25 = mc.span(A, SIDE_A, [(1, 1, 1, 1, 1), (0, 4, 1, 1, 4)])
        spec2 = milnor.sector_spectrum(A, G25)
        h2 = spec2.hodge_numbers()
        assert len(spec2) == 80
        assert h2[(Fraction(1), Fraction(1))] == 21 and h2[(Fraction(2), Fraction(1))] == 17


FIXTURES = [
    (CHAIN_223, None),
    (L2L2, None),
    (diag(2, 3, 10, 15), None),
    (CHAIN_3334, None),
    (diag(4, 4, 4, 4), None),
]


@pytest.mark.parametrize("A,_", FIXTURES)
def test_serre_duality_pairing(A, _):
    spec = milnor.sector_spectrum(A, J_group(A))
    n = A.n
    for lab in spec.labels:
        partner = milnor.serre_partner(lab, A, spec)
        assert partner is not None, f"no partner for {lab}"
        # residue pairing reflects the bidegree through (n-2-s, n-2-r)
        assert (partner.s, partner.r) == (n - 2 - lab.s, n - 2 - lab.r)
        back = milnor.serre_partner(partner, A, spec)
        assert back is not None and back.gamma_rep == lab.gamma_rep and back.lam.frac == lab.lam.frac


@pytest.mark.parametrize("A,_", FIXTURES)
def test_bidegree_symmetries(A, _):
    spec = milnor.sector_spectrum(A, J_group(A))
    h = spec.hodge_numbers()
    n = A.n
    for (s, r), count in h.items():
        assert h.get((r, s)) == count  # mirror bigrading
        assert h.get((n - 2 - s, n - 2 - r)) == count  # Serre symmetry
