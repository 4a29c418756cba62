"""Exact character-sum backend: Gauss/Jacobi sums in cyclotomic integer rings.

Products of Gauss sums with trivial total character are evaluated exactly in
Z[zeta_m] by convolving character distributions over F_p: the convolution of
two such distributions is J(chi, chi') times a third, plus an explicit mass
at zero when the product character is trivial, so every degenerate partial
product is handled without special-casing conventions.  This is the one
backend where the archimedean statement |alpha| = p^{(s+r)/2} is literally
checkable; the p-adic comparison goes through the Teichmueller embedding
zeta_{p-1} -> omega(g).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
import numpy as np

from . import cache
from .errors import DegenerateTupleError
from .spectrum import poly_divide_exact, poly_mul


# -- cyclotomic integers --------------------------------------------------------


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    poly = tuple([-1] + [0] * (m - 1) + [1])  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            poly = poly_divide_exact(poly, cyclotomic_poly(d))
    return poly


@lru_cache(maxsize=None)
def _zeta_power_rows(m: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_m for k = 0..2m, as phi(m)-vectors."""
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    if deg:
        cur[0] = 1
    for _ in range(2 * m + 1):
        rows.append(tuple(cur))
        nxt = [0] + cur[:-1]
        carry = cur[-1]
        if carry:
            for i in range(deg):
                nxt[i] -= carry * phi[i]
        cur = nxt
    return tuple(rows)


@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[zeta_m] in the power basis modulo Phi_m."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        deg = len(cyclotomic_poly(self.order)) - 1
        assert len(self.coeffs) == deg

    @staticmethod
    def zero(m: int) -> "CyclotomicInt":
        deg = len(cyclotomic_poly(m)) - 1
        return CyclotomicInt(m, (0,) * deg)

    @staticmethod
    def from_int(c: int, m: int) -> "CyclotomicInt":
        deg = len(cyclotomic_poly(m)) - 1
        return CyclotomicInt(m, (c,) + (0,) * (deg - 1))

    @staticmethod
    def zeta_power(k: int, m: int, coeff: int = 1) -> "CyclotomicInt":
        row = _zeta_power_rows(m)[k % m]
        return CyclotomicInt(m, tuple(coeff * x for x in row))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_int(self) -> int | None:
        if any(c != 0 for c in self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        assert self.order == other.order
        return CyclotomicInt(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        return self + (-1) * other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.order, tuple(c * other for c in self.coeffs))
        assert self.order == other.order
        raw = poly_mul(self.coeffs, other.coeffs)
        rows = _zeta_power_rows(self.order)
        out = [0] * self.degree
        for k, c in enumerate(raw):
            if c:
                row = rows[k] if k < len(rows) else None
                if row is None:
                    row = rows[k % self.order]  # unreachable for deg products
                for i, x in enumerate(row):
                    out[i] += c * x
        return CyclotomicInt(self.order, tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CyclotomicInt) and self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def galois(self, c: int) -> "CyclotomicInt":
        """zeta -> zeta^c for gcd(c, m) = 1."""
        assert gcd(c, self.order) == 1
        out = CyclotomicInt.zero(self.order)
        for j, x in enumerate(self.coeffs):
            if x:
                out = out + CyclotomicInt.zeta_power(j * c, self.order, x)
        return out

    def conj(self) -> "CyclotomicInt":
        return self.galois(self.order - 1) if self.order > 1 else self

    def divide_exact_int(self, d: int) -> "CyclotomicInt":
        assert all(c % d == 0 for c in self.coeffs), f"not divisible by {d}"
        return CyclotomicInt(self.order, tuple(c // d for c in self.coeffs))

    def embeddings(self, prec_bits: int = 128):
        """Complex values under every embedding zeta -> exp(2 pi i c / m)."""
        with mpmath.workprec(prec_bits):
            out = []
            for c in range(1, max(self.order, 2)):
                if gcd(c, self.order) != 1:
                    continue
                z = mpmath.exp(2j * mpmath.pi * c / self.order)
                val = mpmath.mpc(0)
                for j in range(self.degree - 1, -1, -1):
                    val = val * z + self.coeffs[j]
                out.append(val)
            if self.order == 1:
                out = [mpmath.mpc(self.coeffs[0])]
        return out

    def to_padic(self, p: int, N: int, table: "CharacterTable"):
        """Evaluate under zeta_m -> Teichmueller(g)^{(p-1)/m} modulo p^N."""
        from .padic import PadicNumber

        assert (p - 1) % self.order == 0
        mod = p**N
        tau = teichmuller(table.generator, p, N)
        z = pow(tau, (p - 1) // self.order, mod)
        val = 0
        for j in range(self.degree - 1, -1, -1):
            val = (val * z + self.coeffs[j]) % mod
        return PadicNumber(val, p, N)


def teichmuller(x: int, p: int, N: int) -> int:
    """The (p-1)-st root of unity congruent to x mod p, by Frobenius iteration."""
    mod = p**N
    t = x % mod
    for _ in range(N):
        t = pow(t, p, mod)
    return t


# -- character tables ------------------------------------------------------------


@dataclass(frozen=True)
class CharacterTable:
    prime: int
    generator: int
    dlog: np.ndarray  # dlog[g^k mod p] = k; dlog[0] = -1 sentinel

    def chi_exponent(self, x: int, m: int, c: int) -> int:
        """exponent e with chi(x) = zeta_m^e for chi = psi^c, psi(g^t) = zeta_m^t."""
        return int(c * self.dlog[x % self.prime]) % m


_TABLES: dict[int, CharacterTable] = {}


def _factorize(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def build_character_table(p: int, use_cache: bool = True) -> CharacterTable:
    """Discrete-log table for the smallest primitive root of F_p."""
    if p in _TABLES:
        return _TABLES[p]
    name = f"dlog_p{p}.bin"
    if use_cache:
        got = cache.load(name, (p, 0, 0))
        if got is not None:
            _, arrays = got
            g = arrays[0][0]
            dlog = np.full(p, -1, dtype=np.int64)
            dlog[1:] = arrays[1]
            table = CharacterTable(p, g, dlog)
            _TABLES[p] = table
            return table
    primes = _factorize(p - 1)
    g = None
    for cand in range(2, p):
        if all(pow(cand, (p - 1) // ell, p) != 1 for ell in primes):
            g = cand
            break
    assert g is not None
    dlog = np.full(p, -1, dtype=np.int64)
    acc = 1
    for k in range(p - 1):
        dlog[acc] = k
        acc = acc * g % p
    table = CharacterTable(p, g, dlog)
    _TABLES[p] = table
    if use_cache:
        cache.save(name, (p, 0, 0), [[g], [int(x) for x in dlog[1:]]])
    return table


# -- Gauss-sum products ------------------------------------------------------------


def jacobi2(e1: int, e2: int, m: int, table: CharacterTable) -> CyclotomicInt:
    """Two-character Jacobi sum J(psi^e1, psi^e2) = sum_{x != 0,1} chi1(x) chi2(1-x)."""
    p = table.prime
    u = np.arange(2, p, dtype=np.int64)
    k1 = table.dlog[u]
    k2 = table.dlog[(1 - u) % p]
    exps = (e1 * k1 + e2 * k2) % m
    counts = np.bincount(exps, minlength=m)
    out = CyclotomicInt.zero(m)
    for r in range(m):
        c = int(counts[r])
        if c:
            out = out + CyclotomicInt.zeta_power(r, m, c)
    return out


def _chain_exponents(a, m: int) -> list[int]:
    """Character exponents c_i with chi_i = omega^{-a_i (p-1)} = psi^{c_i}."""
    out = []
    for x in a:
        x = Fraction(x)
        num = x.numerator * (m // x.denominator)
        out.append((-num) % m)
    return out


def gauss_product(a, p: int, table: CharacterTable | None = None, m: int | None = None) -> CyclotomicInt:
    """prod_i g(omega^{-a_i}) in Z[zeta_m] for fractional a_i with sum(a) integral.

    State machine over character distributions; exact for every degenerate
    intermediate product.
    """
    a = [Fraction(x) for x in a]
    assert all(0 < x < 1 for x in a) and sum(a).denominator == 1
    if table is None:
        table = build_character_table(p)
    if m is None:
        m = 1
        for x in a:
            m = m * x.denominator // gcd(m, x.denominator)
    assert (p - 1) % m == 0
    exps = _chain_exponents(a, m)
    coef = CyclotomicInt.from_int(1, m)
    cur = exps[0]
    delta = CyclotomicInt.zero(m)
    for c in exps[1:]:
        j = jacobi2(cur, c, m, table)
        new_coef = coef * j + delta
        new_cur = (cur + c) % m
        if new_cur == 0:
            chi_minus1 = CyclotomicInt.zeta_power(c * ((p - 1) // 2), m, p - 1)
            delta = coef * chi_minus1
        else:
            delta = CyclotomicInt.zero(m)
        coef, cur = new_coef, new_cur
    assert cur == 0, "total character must be trivial"
    return (-1) * coef + delta


def jacobi_sum(a, p: int, table: CharacterTable | None = None) -> CyclotomicInt:
    """Normalized multi-variable Jacobi sum J(a) = prod_i g(omega^{-a_i}) / p.

    |J(a)| = p^{r/2 - 1}; for the two-character case this is chi(-1) and for
    the weighted-K3 four-tuples the table-normalized middle eigenvalue.
    """
    a = [Fraction(x) for x in a]
    if any(x.denominator == 1 for x in a):
        raise DegenerateTupleError(f"tuple {a} has an integral entry")
    assert sum(a).denominator == 1, "tuple must sum to an integer"
    prod = gauss_product(a, p, table)
    return prod.divide_exact_int(p)


def jacobi_multivariable_direct(a, p: int) -> CyclotomicInt:
    """Defining O(p^{r-1}) sum over x_1 + ... + x_r = 1 (small-p test oracle)."""
    import itertools

    a = [Fraction(x) for x in a]
    m = 1
    for x in a:
        m = m * x.denominator // gcd(m, x.denominator)
    table = build_character_table(p)
    exps = _chain_exponents(a, m)
    total = CyclotomicInt.zero(m)
    r = len(a)
    for xs in itertools.product(range(1, p), repeat=r - 1):
        last = (1 - sum(xs)) % p
        if last == 0:
            continue
        e = sum(c * int(table.dlog[x]) for c, x in zip(exps, xs)) + exps[-1] * int(table.dlog[last])
        total = total + CyclotomicInt.zeta_power(e % m, m)
    return total


def gauss_product_direct(a, p: int) -> CyclotomicInt:
    """prod g(chi_i) from the defining convolution over F_p (small-p oracle),
    computed in Z[zeta_m] by pairing the zeta_p-parts exactly:
    prod_i g(chi_i) = sum_y conv(y) zeta_p^y with conv supported as
    (value at nonzero y) * (-1) + (value at 0), since sum_{y != 0} zeta_p^y = -1
    once the total character is trivial."""
    a = [Fraction(x) for x in a]
    m = 1
    for x in a:
        m = m * x.denominator // gcd(m, x.denominator)
    table = build_character_table(p)
    exps = _chain_exponents(a, m)
    # full convolution of the character distributions over Z/p
    conv = [CyclotomicInt.from_int(1 if y == 1 else 0, m) for y in range(p)]
    first = True
    for e in exps:
        dist = [CyclotomicInt.zero(m) for _ in range(p)]
        for x in range(1, p):
            dist[x] = CyclotomicInt.zeta_power(e * int(table.dlog[x]) % m, m)
        if first:
            conv = dist
            first = False
            continue
        new = [CyclotomicInt.zero(m) for _ in range(p)]
        for x in range(p):
            if conv[x].is_zero():
                continue
            for y in range(1, p):
                new[(x + y) % p] = new[(x + y) % p] + conv[x] * dist[y]
        conv = new
    # all nonzero-y values agree when the total character is trivial
    return (-1) * conv[1] + conv[0]


# -- eigenvalues and norm checks ---------------------------------------------------


def eigenvalue_exact(label, A, p: int, table: CharacterTable | None = None) -> CyclotomicInt:
    """Exact algebraic eigenvalue of the twisted Frobenius on a sector.

    alpha = p^{age(lambda)-1+#[v_i=1]} * (-1)^{#fractional} * prod g(omega^{-v_i})
    over the fractional coordinates of v = gamma A^{-1}; the p-power can be
    -1 only in the untwisted sector, where the Gauss product is divisible by p.
    """
    if table is None:
        table = build_character_table(p)
    fracs = [f for f in label.gamma_frac if f.denominator > 1]
    ones = sum(1 for f in label.gamma_frac if f == 1)
    age_l = label.age_lambda
    assert age_l.denominator == 1
    exponent = int(age_l) - 1 + ones
    m = 1
    for f in fracs:
        m = m * f.denominator // gcd(m, f.denominator)
    if not fracs:
        val = CyclotomicInt.from_int(1, 1)
    else:
        val = gauss_product(fracs, p, table, m)
    val = val * (-1) ** len(fracs)
    if exponent >= 0:
        return val * p**exponent
    return val.divide_exact_int(p ** (-exponent))


@dataclass(frozen=True)
class NormCheckResult:
    ok: bool
    worst_deviation: float
    exact_certified: bool


def norm_check(x: CyclotomicInt, target_exponent: Fraction, p: int, rel_tol: float = 1e-6) -> NormCheckResult:
    """Every complex embedding must satisfy |sigma(x)|^2 = p^{2 * target}."""
    target_exponent = Fraction(target_exponent)
    two_t = target_exponent * 2
    with mpmath.workprec(128):
        expected = mpmath.mpf(p) ** (mpmath.mpf(two_t.numerator) / two_t.denominator)
        worst = 0.0
        for v in x.embeddings():
            dev = abs(float((abs(v) ** 2 - expected) / expected))
            worst = max(worst, dev)
    exact = False
    if two_t.denominator == 1 and two_t >= 0:
        prod = x * x.conj()
        exact = prod.as_int() == p ** int(two_t)
    return NormCheckResult(worst <= rel_tol, worst, exact)
