"""Brute-force point counts over F_{p^nu} in (weighted) projective space.

The projective count is the cone formula (#affine nonzero zeros) / (q - 1):
every Frobenius-stable scaling orbit carries exactly q - 1 rational points,
also in the weighted case (the merged orbit of x under scalars from the
algebraic closure that keep x rational is the ordinary orbit for the weights
divided by their gcd on the support, and that action is free).  The affine
enumeration runs per connected component of the variable-interaction graph,
vectorized over the two busiest variables, and component value histograms
are convolved exactly.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import BudgetExceededError, NonDivisibleError, NotHomogeneousError
from .matrixcore import BHMatrix

DEFAULT_MAX_OPS = 2_000_000_000


# -- finite fields ---------------------------------------------------------------


def _poly_mul_mod(a, b, modulus, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    deg = len(modulus) - 1
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            out[k] = 0
            for j in range(deg):
                out[k - deg + j] = (out[k - deg + j] - c * modulus[j]) % p
    out = out[:deg]
    return out + [0] * (deg - len(out))

def _poly_pow_mod(base, e, modulus, p):
    deg = len(modulus) - 1
    result = [1] + [0] * (deg - 1)
    b = list(base) + [0] * (deg - len(base))
    while e:
        if e & 1:
            result = _poly_mul_mod(result, b, modulus, p)
        b = _poly_mul_mod(b, b, modulus, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = [x % p for x in a], [x % p for x in b]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return a


def _is_irreducible(modulus, p):
    nu = len(modulus) - 1
    x = [0, 1]
    frob = _poly_pow_mod(x, p**nu, modulus, p)
    target = [0, 1] + [0] * (nu - 2)
    if nu == 1:
        target = [0]  # x^p = x means frob - x = 0 handled below
    diff = [(a - b) % p for a, b in zip(frob, [0, 1] + [0] * (nu - 2))] if nu > 1 else [0]
    if any(diff):
        return False
    for ell in {f for f in _prime_factors(nu)}:
        sub = _poly_pow_mod(x, p ** (nu // ell), modulus, p)
        diff = [(a - b) % p for a, b in zip(sub, [0, 1] + [0] * (nu - 2))]
        if not any(diff):
            return False
        g = _poly_gcd(diff, list(modulus), p)
        if len(g) - 1 > 0:
            return False
    return True


def _prime_factors(n):
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


def find_modulus(p: int, nu: int) -> tuple[int, ...]:
    """Deterministic irreducible monic polynomial: lexicographic search from
    x^nu + 1 upward through the constant-first encoding of the low coefficients."""
    if nu == 1:
        return (0, 1)
    code = 1
    while True:
        coeffs = []
        c = code
        for _ in range(nu):
            coeffs.append(c % p)
            c //= p
        if c:
            raise ValueError(f"no irreducible polynomial found for p={p}, nu={nu}")
        modulus = tuple(coeffs) + (1,)
        if _is_irreducible(modulus, p):
            return modulus
        code += 1


@dataclass(frozen=True)
class FiniteField:
    """F_{p^nu}; elements are integer codes in [0, q) with base-p digits as
    coefficients of the residue polynomial."""

    p: int
    nu: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.modulus is None:
            object.__setattr__(self, "modulus", find_modulus(self.p, self.nu))
        assert len(self.modulus) == self.nu + 1 and self.modulus[-1] == 1
        if self.nu > 1:
            assert _is_irreducible(self.modulus, self.p)

    @property
    def q(self) -> int:
        return self.p**self.nu

    @cached_property
    def _tables(self):
        # add/mul lookup tables; worthwhile for the pure-python extension path
        assert self.q <= 4096, "lookup tables only built for small fields"
        q = self.q
        add = [[0] * q for _ in range(q)]
        mul = [[0] * q for _ in range(q)]
        mod = list(self.modulus)
        decoded = [self.decode(c) for c in range(q)]
        for a in range(q):
            for b in range(a, q):
                s = self.encode([(x + y) % self.p for x, y in zip(decoded[a], decoded[b])])
                add[a][b] = add[b][a] = s
                m = self.encode(_poly_mul_mod(decoded[a], decoded[b], mod, self.p))
                mul[a][b] = mul[b][a] = m
        return add, mul

    def decode(self, code: int):
        out = []
        for _ in range(self.nu):
            out.append(code % self.p)
            code //= self.p
        return out

    def encode(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + c % self.p
        return code

    def add(self, a: int, b: int) -> int:
        if self.nu == 1:
            return (a + b) % self.p
        if self.q <= 4096:
            return self._tables[0][a][b]
        return self.encode([(x + y) % self.p for x, y in zip(self.decode(a), self.decode(b))])

    def mul(self, a: int, b: int) -> int:
        if self.nu == 1:
            return a * b % self.p
        if self.q <= 4096:
            return self._tables[1][a][b]
        return self.encode(_poly_mul_mod(self.decode(a), self.decode(b), list(self.modulus), self.p))

    def pow(self, a: int, e: int) -> int:
        if self.nu == 1:
            return pow(a, e, self.p)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out


# -- potential plumbing ------------------------------------------------------------


def monomials_of(A: BHMatrix):
    """[(var index, exponent), ...] per row."""
    return [
        [(j, A.entries[i][j]) for j in range(A.n) if A.entries[i][j] > 0]
        for i in range(A.n)
    ]


def integer_weights(A: BHMatrix) -> tuple[tuple[int, ...], int]:
    """Positive integer weights and the common degree (smallest scaling)."""
    q = A.weights
    denom = 1
    for x in q:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    w = tuple(int(x * denom) for x in q)
    g = 0
    for x in w:
        g = gcd(g, x)
    w = tuple(x // g for x in w)
    degree = denom // g
    return w, degree


def _check_homogeneous(A: BHMatrix, weights) -> int:
    monos = monomials_of(A)
    degs = {sum(weights[j] * e for j, e in mono) for mono in monos}
    if len(degs) != 1:
        raise NotHomogeneousError(f"potential is not quasi-homogeneous for weights {weights}")
    return degs.pop()


def _components(n: int, monos):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for mono in monos:
        for (j, _), (k, _) in zip(mono, mono[1:]):
            parent[find(j)] = find(k)
    comps: dict[int, list[int]] = {}
    used = set()
    for mono in monos:
        for j, _ in mono:
            used.add(j)
    for j in sorted(used):
        comps.setdefault(find(j), []).append(j)
    free = [j for j in range(n) if j not in used]
    return sorted(comps.values()), free


def estimate_ops(A: BHMatrix, field: FiniteField) -> int:
    monos = monomials_of(A)
    comps, _ = _components(A.n, monos)
    return sum(field.q ** len(c) for c in comps) * max(1, len(monos))


def _component_histogram_np(p: int, var_ids, monos):
    """Value histogram of the component potential over F_p^k (numpy)."""
    k = len(var_ids)
    local = {v: i for i, v in enumerate(var_ids)}
    lmonos = [[(local[j], e) for j, e in mono] for mono in monos]
    x = np.arange(p, dtype=np.int64)
    pow_table = {}
    for mono in lmonos:
        for j, e in mono:
            if (j, e) not in pow_table:
                pow_table[(j, e)] = np.array([pow(int(v), e, p) for v in range(p)], dtype=np.int64)

    if k == 1:
        vals = np.zeros(p, dtype=np.int64)
        for mono in lmonos:
            (j, e) = mono[0]
            vals = (vals + pow_table[(j, e)]) % p
        return np.bincount(vals, minlength=p).astype(object)

    if k == 2:
        w = np.zeros((p, p), dtype=np.int64)
        for mono in lmonos:
            factor = np.ones((p, p), dtype=np.int64)
            for j, e in mono:
                factor = factor * (pow_table[(j, e)][:, None] if j == 0 else pow_table[(j, e)][None, :]) % p
            w = (w + factor) % p
        return np.bincount(w.ravel(), minlength=p).astype(object)

    return np.array(_component_histogram_np_range(p, var_ids, monos, range(p)), dtype=object)


def _convolve_mod(h1, h2, p: int):
    """Cyclic convolution over Z/p of exact integer histograms."""
    out = [0] * p
    for a in range(p):
        ca = h1[a]
        if ca:
            for b in range(p):
                cb = h2[b]
                if cb:
                    out[(a + b) % p] += ca * cb
    return np.array(out, dtype=object)


@dataclass(frozen=True)
class CountResult:
    count: int
    affine_nonzero: int
    q: int
    method: str


def count_projective(
    A: BHMatrix,
    weights=None,
    field: FiniteField | None = None,
    *,
    max_ops: int = DEFAULT_MAX_OPS,
    allow_slow: bool = False,
    workers: int = 1,
) -> CountResult:
    """#X_A(F_q) by the cone formula over the affine enumeration."""
    if field is None:
        field = FiniteField(A.prime)
    if weights is None:
        weights, _ = integer_weights(A)
    _check_homogeneous(A, weights)
    estimate = estimate_ops(A, field)
    if estimate > max_ops and not allow_slow:
        raise BudgetExceededError(
            f"estimated {estimate} element-operations exceed budget {max_ops}", estimate=estimate
        )
    monos = monomials_of(A)
    comps, free = _components(A.n, monos)
    q = field.q
    if field.nu == 1:
        hists = []
        for comp in comps:
            cm = [m for m in monos if all(j in comp for j, _ in m)]
            if workers > 1 and len(comp) >= 3:
                hists.append(_component_histogram_parallel(field.p, comp, cm, workers))
            else:
                hists.append(_component_histogram_np(field.p, comp, cm))
        total = hists[0]
        for h in hists[1:]:
            total = _convolve_mod(total, h, field.p)
        zeros = int(total[0]) * q**len(free)
    else:
        zeros = _affine_zeros_generic(A, field)
    affine_nonzero = zeros - 1  # remove the origin
    if affine_nonzero % (q - 1) != 0:
        raise NonDivisibleError(
            f"affine nonzero count {affine_nonzero} not divisible by q-1={q-1}"
        )
    return CountResult(affine_nonzero // (q - 1), affine_nonzero, q, f"cone/components x{workers}")


def _component_histogram_chunk(args):
    p, var_ids, monos, first_range = args
    # same as _component_histogram_np but with the first outer variable pinned
    # to a subrange; used by the process pool
    return _component_histogram_np_range(p, var_ids, monos, first_range)


def _component_histogram_np_range(p, var_ids, monos, first_range):
    k = len(var_ids)
    assert k >= 3
    local = {v: i for i, v in enumerate(var_ids)}
    lmonos = [[(local[j], e) for j, e in mono] for mono in monos]
    pow_table = {}
    for mono in lmonos:
        for j, e in mono:
            if (j, e) not in pow_table:
                pow_table[(j, e)] = np.array([pow(int(v), e, p) for v in range(p)], dtype=np.int64)
    freq = [0] * k
    for mono in lmonos:
        for j, _ in mono:
            freq[j] += 1
    inner = sorted(range(k), key=lambda j: (-freq[j], j))[:2]
    ia, ib = sorted(inner)
    outer = [j for j in range(k) if j not in (ia, ib)]
    grid_parts, mixed = [], []
    for mono in lmonos:
        inner_factor = np.ones((p, p), dtype=np.int64)
        outer_part = []
        for j, e in mono:
            if j == ia:
                inner_factor = inner_factor * pow_table[(j, e)][:, None] % p
            elif j == ib:
                inner_factor = inner_factor * pow_table[(j, e)][None, :] % p
            else:
                outer_part.append((j, e))
        if outer_part:
            mixed.append((outer_part, inner_factor))
        else:
            grid_parts.append(inner_factor)
    base = np.zeros((p, p), dtype=np.int64)
    for g in grid_parts:
        base = (base + g) % p
    hist = np.zeros(p, dtype=object)
    ranges = [list(first_range)] + [range(p)] * (len(outer) - 1)
    for assign in itertools.product(*ranges):
        w = base
        for outer_part, inner_factor in mixed:
            c = 1
            for j, e in outer_part:
                c = c * pow(assign[outer.index(j)], e, p) % p
            if c:
                w = (w + c * inner_factor) % p
        hist += np.bincount(w.ravel(), minlength=p).astype(object)
    return [int(x) for x in hist]


def _component_histogram_parallel(p, var_ids, monos, workers: int):
    chunks = []
    step = (p + workers - 1) // workers
    for start in range(0, p, step):
        chunks.append((p, var_ids, monos, range(start, min(start + step, p))))
    hist = np.zeros(p, dtype=object)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_component_histogram_chunk, chunks):
            hist += np.array(part, dtype=object)
    return hist


def _affine_zeros_generic(A: BHMatrix, field: FiniteField) -> int:
    monos = monomials_of(A)
    zeros = 0
    for point in itertools.product(range(field.q), repeat=A.n):
        total = 0
        for mono in monos:
            term = 1
            for j, e in mono:
                term = field.mul(term, field.pow(point[j], e))
            total = field.add(total, term)
        if total == 0:
            zeros += 1
    return zeros


def count_projective_smallcheck(
    A: BHMatrix,
    weights=None,
    field: FiniteField | None = None,
    *,
    budget: int = 10_000_000,
) -> CountResult:
    """Independent oracle: enumerate weighted-projective points by canonical
    (lex-least) orbit representatives under the weighted scaling action."""
    if field is None:
        field = FiniteField(A.prime)
    if weights is None:
        weights, _ = integer_weights(A)
    _check_homogeneous(A, weights)
    q = field.q
    if q**A.n > budget:
        raise BudgetExceededError(f"q^n = {q**A.n} beyond smallcheck budget {budget}")
    monos = monomials_of(A)
    units = [u for u in range(1, q)]
    count = 0
    solutions = 0
    for point in itertools.product(range(q), repeat=A.n):
        if all(x == 0 for x in point):
            continue
        total = 0
        for mono in monos:
            term = 1
            for j, e in mono:
                if point[j] == 0:
                    term = 0
                    break
                term = field.mul(term, field.pow(point[j], e))
            total = field.add(total, term)
        if total != 0:
            continue
        solutions += 1
        support = [j for j, x in enumerate(point) if x != 0]
        d = 0
        for j in support:
            d = gcd(d, weights[j])
        eff = [weights[j] // d for j in support]
        is_min = True
        for u in units[1:]:
            scaled = list(point)
            for j, w in zip(support, eff):
                scaled[j] = field.mul(point[j], field.pow(u, w))
            if tuple(scaled) < point:
                is_min = False
                break
        if is_min:
            count += 1
    return CountResult(count, solutions, q, "orbit-representatives")


def projective_space_size(field: FiniteField, n: int) -> int:
    """(q^n - 1)/(q - 1), confirmed against the per-support orbit formula."""
    q = field.q
    from math import comb

    by_support = sum(comb(n, k) * (q - 1) ** (k - 1) for k in range(1, n + 1))
    assert by_support == (q**n - 1) // (q - 1)
    return by_support
