"""Brute-force point counting: cone formula, components, orbit oracle."""

import pytest

from bhzeta import counting
from bhzeta.counting import FiniteField
from bhzeta.errors import BudgetExceededError, NotHomogeneousError
from bhzeta.matrixcore import BHMatrix


def diag(*a):
    n = len(a)
    return BHMatrix.from_rows([[a[i] if i == j else 0 for j in range(n)] for i in range(n)])


CHAIN_223 = BHMatrix.from_rows([[2, 1, 0], [0, 2, 1], [0, 0, 3]])
CHAIN_2223 = BHMatrix.from_rows([[2, 1, 0, 0], [0, 2, 1, 0], [0, 0, 2, 1], [0, 0, 0, 3]])
L2L2 = BHMatrix.from_rows([[3, 1, 0, 0], [1, 3, 0, 0], [0, 0, 3, 1], [0, 0, 1, 3]])


class TestFiniteField:
    def test_modulus_deterministic(self):
        f1 = FiniteField(7, 2)
        f2 = FiniteField(7, 2)
        assert f1.modulus == f2.modulus
        assert counting._is_irreducible(f1.modulus, 7)

    def test_extension_arithmetic(self):
        f = FiniteField(5, 2)
        # multiplicative group has order q - 1
        x = 5  # the residue class of the generator polynomial variable
        acc, order = x, 1
        while acc != 1:
            acc = f.mul(acc, x)
            order += 1
            assert order <= f.q
        assert (f.q - 1) % order == 0

    def test_frobenius_is_identity_on_prime_field(self):
        f = FiniteField(7, 3)
        for a in range(7):
            assert f.pow(a, 7**3) == a


class TestCountProjective:
    @pytest.mark.parametrize("p,expected", [(7, 8), (13, 20)])
    def test_cubic_chain(self, p, expected):
        res = counting.count_projective(CHAIN_223, field=FiniteField(p))
        assert res.count == expected

    def test_non_cy_cubic_p73(self):
        assert counting.count_projective(CHAIN_2223, field=FiniteField(73)).count == 5841

    @pytest.mark.parametrize(
        "p,expected",
        [(193, 40920), (257, 70680), (449, 209880), (577, 343320), (641, 424920)],
    )
    def test_l2l2_block_separation(self, p, expected):
        res = counting.count_projective(L2L2, field=FiniteField(p))
        assert res.count == expected

    def test_chain_3334_p109(self):
        A = BHMatrix.from_rows([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]])
        assert counting.count_projective(A, field=FiniteField(109)).count == 12147

    def test_budget_refusal_with_estimate(self):
        # connected chain: the component estimate is the full q^n sweep
        A = BHMatrix.from_rows([[3, 1, 0, 0], [0, 3, 1, 0], [0, 0, 3, 1], [0, 0, 0, 4]])
        with pytest.raises(BudgetExceededError) as err:
            counting.count_projective(A, field=FiniteField(641), max_ops=10**6)
        assert err.value.estimate and err.value.estimate > 10**6

    def test_workers_deterministic(self):
        A = CHAIN_2223
        one = counting.count_projective(A, field=FiniteField(31), workers=1)
        two = counting.count_projective(A, field=FiniteField(31), workers=2)
        assert one.count == two.count

    def test_extension_field_count(self):
        # cubic curve over F_{7^2}: matches the generic pure-python path
        res = counting.count_projective(CHAIN_223, field=FiniteField(7, 2))
        chk = counting.count_projective_smallcheck(CHAIN_223, field=FiniteField(7, 2))
        assert res.count == chk.count
        assert res.q == 49

    def test_inhomogeneous_rejected(self):
        A = BHMatrix.from_rows([[2, 0], [0, 3]])
        with pytest.raises(NotHomogeneousError):
            counting.count_projective(A, weights=(1, 1), field=FiniteField(7))


class TestSmallcheck:
    def test_cubic_p7_matches(self):
        a = counting.count_projective(CHAIN_223, field=FiniteField(7))
        b = counting.count_projective_smallcheck(CHAIN_223, field=FiniteField(7))
        assert a.count == b.count == 8

    def test_weighted_m30_over_f31(self):
        A = diag(2, 3, 10, 15)
        a = counting.count_projective(A, field=FiniteField(31))
        b = counting.count_projective_smallcheck(A, field=FiniteField(31))
        assert a.count == b.count

    def test_weighted_p_15_10_3_2_full_space(self):
        # #P(Q)(F_q) = (q^n - 1)/(q - 1) independent of the weights
        f = FiniteField(31)
        assert counting.projective_space_size(f, 4) == (31**4 - 1) // 30

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            counting.count_projective_smallcheck(L2L2, field=FiniteField(193))


def test_integer_weights():
    w, d = counting.integer_weights(diag(2, 3, 10, 15))
    assert w == (15, 10, 3, 2) and d == 30
    w, d = counting.integer_weights(CHAIN_223)
    assert w == (1, 1, 1) and d == 3
