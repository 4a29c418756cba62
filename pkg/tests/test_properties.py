"""Randomized algebraic-law checks for the arithmetic kernels."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from bhzeta import matrixcore as mc, padic
from bhzeta.charsum import CyclotomicInt
from bhzeta.padic import PadicNumber, PiRingElement

residues = st.integers(min_value=0, max_value=7**6 - 1)


@given(residues, residues, residues)
@settings(max_examples=200, deadline=None)
def test_padic_ring_laws(a, b, c):
    p, N = 7, 6
    x, y, z = (PadicNumber(v, p, N) for v in (a, b, c))
    assert ((x + y) + z).eq_mod(x + (y + z))
    assert (x * (y + z)).eq_mod(x * y + x * z)
    assert (x * y).eq_mod(y * x)


@given(residues, residues)
@settings(max_examples=100, deadline=None)
def test_padic_lift_roundtrip(a, b):
    p, N = 7, 6
    x = PadicNumber(a, p, N)
    lift = x.lift_centered()
    assert abs(lift) <= p**N // 2 + 1
    assert PadicNumber(lift, p, N).eq_mod(x)


@given(st.lists(st.integers(min_value=-50, max_value=50), min_size=4, max_size=4),
       st.lists(st.integers(min_value=-50, max_value=50), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_pi_ring_commutative(a, b):
    p, N = 5, 4
    x = PiRingElement(tuple(a), p, N)
    y = PiRingElement(tuple(b), p, N)
    assert (x * y).coeffs == (y * x).coeffs


@given(st.lists(st.lists(st.integers(min_value=-6, max_value=6), min_size=3, max_size=3),
                min_size=3, max_size=3))
@settings(max_examples=150, deadline=None)
def test_snf_diagonalizes_any_integer_matrix(rows):
    U, S, V = mc.smith_normal_form(rows)
    n = 3
    prod = [[sum(U[i][k] * rows[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    prod = [[sum(prod[i][k] * V[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    assert prod == [list(r) for r in S]
    for i in range(n):
        for j in range(n):
            if i != j:
                assert S[i][j] == 0
    diag = [S[i][i] for i in range(n)]
    for a, b in zip(diag, diag[1:]):
        if a != 0:
            assert b % a == 0
    assert abs(mc._det(U)) == 1 and abs(mc._det(V)) == 1


@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4),
       st.lists(st.integers(min_value=-9, max_value=9), min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_cyclotomic_norm_multiplicative(a, b):
    x = CyclotomicInt(12, tuple(a))
    y = CyclotomicInt(12, tuple(b))
    nx = (x * x.conj()) * (y * y.conj())
    nxy = (x * y) * (x * y).conj()
    assert nx.coeffs == nxy.coeffs


@given(st.integers(min_value=0, max_value=12 * 40))
@settings(max_examples=60, deadline=None)
def test_dwork_valuation_bound_random_indices(k):
    p = 13
    s = padic.get_stream(p, 8, use_cache=False)
    bound = s.z_valuation_bound(k)
    if bound >= s.precision:
        return
    z = s.z(k)
    v = s.precision
    if z:
        v = 0
        while z % p == 0:
            z //= p
            v += 1
    assert Fraction(v) >= bound
