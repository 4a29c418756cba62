"""Truncated p-adic arithmetic, the Dwork coefficient stream, and Morita's
p-adic gamma function.

The splitting function exp(pi(x - x^p)), pi^{p-1} = -p, has coefficients
c_k pi^k = sum_{i+pj=k} pi^{i+j} (-1)^j / (i! j!).  Every term of that sum
carries the same power pi^{k mod (p-1)}, so the stream stores one Z_p scalar
z_k per index:

    c_k pi^k = z_k * pi^(k mod (p-1)).

The closed form has unit denominators only (the p-part of the factorials is
cancelled exactly by the pi-powers), so z_k is exact mod p^N.  Gamma values
at arguments m/(p-1) come out of the Gauss-sum identity

    Gamma_p(m/(p-1)) = -(p-1) * sum_{t>=0} z_{(p-1)t+m}   (0 < m < p-1),

with the m = p-1 variant picking up one division by p.  Truncation is
certified by the classical valuation growth ord_p(c_k pi^k) >= k(p-1)/p^2,
which the test-suite re-verifies empirically for small primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import cache
from .errors import DenominatorMismatchError, PrecisionExhaustedError


@dataclass(frozen=True)
class PadicNumber:
    """Integer residue known modulo p^precision (absolute precision)."""

    residue: int
    prime: int
    precision: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.prime**self.precision)

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def valuation(self) -> int:
        """v_p, capped at the known precision."""
        if self.residue == 0:
            return self.precision
        v, r = 0, self.residue
        while r % self.prime == 0:
            r //= self.prime
            v += 1
        return v

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            assert other.prime == self.prime
            return other
        return PadicNumber(int(other), self.prime, self.precision)

    def __add__(self, other):
        o = self._coerce(other)
        n = min(self.precision, o.precision)
        return PadicNumber(self.residue + o.residue, self.prime, n)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(-self.residue, self.prime, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            # exact integer factor: known digits shift up by its valuation
            v = 0
            o = other
            while o != 0 and o % self.prime == 0:
                o //= self.prime
                v += 1
            return PadicNumber(self.residue * other, self.prime, self.precision + v)
        o = self._coerce(other)
        n = min(self.precision + o.valuation(), o.precision + self.valuation())
        return PadicNumber(self.residue * o.residue, self.prime, n)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        assert e >= 0
        out = PadicNumber(1, self.prime, self.precision + (e - 1) * self.valuation() if e else self.precision)
        base = self
        for _ in range(e):
            out = out * base
        return out

    def unit_inverse(self) -> "PadicNumber":
        if self.residue % self.prime == 0:
            raise PrecisionExhaustedError("cannot invert a non-unit")
        return PadicNumber(pow(self.residue, -1, self.modulus), self.prime, self.precision)

    def divide_exact_p_power(self, k: int) -> "PadicNumber":
        """Divide by p^k; the residue must be divisible (raises otherwise)."""
        pk = self.prime**k
        if self.residue % pk != 0:
            raise PrecisionExhaustedError(f"residue not divisible by p^{k}")
        return PadicNumber(self.residue // pk, self.prime, self.precision - k)

    def lift_centered(self) -> int:
        m = self.modulus
        r = self.residue % m
        return r - m if r > m // 2 else r

    def digits(self, count: int | None = None) -> list[int]:
        n = self.precision if count is None else min(count, self.precision)
        out, r = [], self.residue
        for _ in range(n):
            out.append(r % self.prime)
            r //= self.prime
        return out

    def eq_mod(self, other, k: int | None = None) -> bool:
        o = self._coerce(other)
        n = min(self.precision, o.precision) if k is None else k
        assert n <= min(self.precision, o.precision), "comparing beyond known digits"
        return (self.residue - o.residue) % self.prime**n == 0

    def truncate(self, n: int) -> "PadicNumber":
        assert n <= self.precision
        return PadicNumber(self.residue, self.prime, n)

    def __str__(self):
        return f"{self.residue} + O({self.prime}^{self.precision})"


@dataclass(frozen=True)
class PiRingElement:
    """Element of Z_p[pi]/(pi^{p-1} = -p): coefficient vector of length p-1."""

    coeffs: tuple[int, ...]
    prime: int
    precision: int

    def __post_init__(self):
        assert len(self.coeffs) == self.prime - 1
        m = self.prime**self.precision
        object.__setattr__(self, "coeffs", tuple(c % m for c in self.coeffs))

    @staticmethod
    def monomial(z: int, power: int, p: int, N: int) -> "PiRingElement":
        coeffs = [0] * (p - 1)
        q, r = divmod(power, p - 1)
        coeffs[r] = z * (-p) ** q
        return PiRingElement(tuple(coeffs), p, N)

    def __add__(self, other: "PiRingElement") -> "PiRingElement":
        n = min(self.precision, other.precision)
        return PiRingElement(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.prime, n)

    def __mul__(self, other):
        p = self.prime
        if isinstance(other, int):
            return PiRingElement(tuple(c * other for c in self.coeffs), p, self.precision)
        n = min(self.precision, other.precision)
        raw = [0] * (2 * (p - 1) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        raw[i + j] += a * b
        out = list(raw[: p - 1])
        for k in range(p - 1, len(raw)):
            out[k - (p - 1)] += -p * raw[k]
        return PiRingElement(tuple(out), p, n)

    __rmul__ = __mul__

    def pi_valuation(self) -> int:
        """min over terms of (index + (p-1) * v_p(coefficient))."""
        best = (self.prime - 1) * self.precision
        for idx, c in enumerate(self.coeffs):
            if c == 0:
                continue
            v, r = 0, c
            while r % self.prime == 0:
                r //= self.prime
                v += 1
            best = min(best, idx + (self.prime - 1) * v)
        return best


class DworkStream:
    """Coefficients z_k with factorial unit tables extended on demand."""

    def __init__(self, p: int, precision: int, use_cache: bool = True):
        assert p % 2 == 1 and p > 2
        self.p = p
        self.precision = precision
        self.modulus = p**precision
        self._unit = [1]  # unit part of i! mod p^N
        self._val = [0]  # v_p(i!)
        self._inv_unit = [1]
        self._z: dict[int, int] = {0: 1}
        self._use_cache = use_cache
        self._max_cached = 0
        if use_cache:
            self._load_cache()

    # -- factorial tables ------------------------------------------------

    def _cache_name(self) -> str:
        return f"dwork_p{self.p}_n{self.precision}.bin"

    def _load_cache(self):
        got = cache.load(self._cache_name())
        if got is None:
            return
        header, arrays = got
        if header[0] != self.p or header[1] != self.precision or len(arrays) != 3:
            return
        unit, inv_unit, val = arrays
        if len(unit) != header[2] + 1 or len(unit) != len(inv_unit) or len(unit) != len(val):
            return
        self._unit, self._inv_unit, self._val = unit, inv_unit, val
        self._max_cached = header[2]

    def save_cache(self):
        if not self._use_cache:
            return
        k_max = len(self._unit) - 1
        if k_max <= self._max_cached:
            return
        cache.save(self._cache_name(), (self.p, self.precision, k_max), [self._unit, self._inv_unit, self._val])
        self._max_cached = k_max

    def ensure(self, k_max: int):
        start = len(self._unit)
        if start > k_max:
            return
        p, mod = self.p, self.modulus
        unit, val = self._unit, self._val
        fresh = []
        for i in range(start, k_max + 1):
            u, v = i, val[i - 1]
            while u % p == 0:
                u //= p
                v += 1
            unit.append(unit[i - 1] * u % mod)
            val.append(v)
            fresh.append(i)
        # batch inversion of the new units (three multiplications each)
        acc = 1
        accs = []
        for i in fresh:
            accs.append(acc)
            acc = acc * unit[i] % mod
        inv_acc = pow(acc, -1, mod) if fresh else 1
        invs = [0] * len(fresh)
        for idx in range(len(fresh) - 1, -1, -1):
            invs[idx] = inv_acc * accs[idx] % mod
            inv_acc = inv_acc * unit[fresh[idx]] % mod
        self._inv_unit.extend(invs)

    # -- coefficients ------------------------------------------------------

    def z(self, k: int) -> int:
        """z_k mod p^precision (exact at this precision)."""
        got = self._z.get(k)
        if got is not None:
            return got
        p, mod, prec = self.p, self.modulus, self.precision
        self.ensure(k)
        rem = k % (p - 1)
        total = 0
        unit, val, inv = self._unit, self._val, self._inv_unit
        for j in range(k // p + 1):
            i = k - p * j
            q = (i + j - rem) // (p - 1)
            e = q - val[i] - val[j]
            assert e >= 0
            if e >= prec:
                continue
            term = pow(p, e, mod) * inv[i] % mod * inv[j] % mod
            if (j + q) % 2:
                term = -term
            total += term
        total %= mod
        self._z[k] = total
        return total

    def value(self, k: int) -> PiRingElement:
        """c_k pi^k as a ring element (single nonzero coefficient)."""
        coeffs = [0] * (self.p - 1)
        coeffs[k % (self.p - 1)] = self.z(k)
        return PiRingElement(tuple(coeffs), self.p, self.precision)

    def z_valuation_bound(self, k: int) -> Fraction:
        """Certified lower bound for v_p(z_k) from ord_p(c_k pi^k) >= k(p-1)/p^2."""
        rem = k % (self.p - 1)
        return Fraction(k * (self.p - 1), self.p**2) - Fraction(rem, self.p - 1)

    def series_start_for(self, m: int, target: int) -> int:
        """Smallest t such that all terms z_{(p-1)t'+m}, t' >= t vanish mod p^target."""
        t = 0
        while self.z_valuation_bound((self.p - 1) * t + m) < target:
            t += 1
        return t

    def check_recurrence(self, k_max: int):
        """Self-test: k c_k pi^k = pi^2 c_{k-1} pi^{k-1} + pi^{2p} c_{k-p} pi^{k-p},
        i.e. in scalar form k z_k = (-p)^e (z_{k-1} + (-p) z_{k-p}) with
        e = [k = 0 mod (p-1)]; asserted for all k <= k_max with p not dividing k."""
        p, mod = self.p, self.modulus
        for k in range(1, k_max + 1):
            if k % p == 0:
                continue
            e = 1 if k % (p - 1) == 0 else 0
            rhs = self.z(k - 1) + (-p) * (self.z(k - p) if k >= p else 0)
            rhs = rhs * (-p) ** e % mod
            if (k * self.z(k) - rhs) % mod != 0:
                raise PrecisionExhaustedError(f"Dwork recurrence failed at k={k}")


@dataclass(frozen=True)
class DworkCoefficientStream:
    """Verified stream of c_k pi^k values for k = 0..k_max."""

    prime: int
    precision: int
    k_max: int
    stream: DworkStream

    def value(self, k: int) -> PiRingElement:
        assert 0 <= k <= self.k_max
        return self.stream.value(k)


_STREAMS: dict[tuple[int, int], DworkStream] = {}


def get_stream(p: int, precision: int, use_cache: bool = True) -> DworkStream:
    key = (p, precision)
    s = _STREAMS.get(key)
    if s is None:
        s = DworkStream(p, precision, use_cache)
        _STREAMS[key] = s
    return s


def guard_digits(p: int, k_max: int) -> int:
    g = 2
    x = k_max
    while x >= p:
        x //= p
        g += 1
    return g


def dwork_coeffs(p: int, N: int, k_max: int, use_cache: bool = True) -> DworkCoefficientStream:
    """Coefficient stream at working precision N + guard, recurrence-verified."""
    assert k_max >= 0
    stream = get_stream(p, N + guard_digits(p, k_max), use_cache)
    stream.ensure(k_max)
    stream.check_recurrence(k_max)
    stream.save_cache()
    return DworkCoefficientStream(p, stream.precision, k_max, stream)


# -- gamma functions -----------------------------------------------------------


def _gamma_product(t: int, p: int, N: int) -> PadicNumber:
    mod = p**N
    acc = 1
    for j in range(1, t):
        if j % p:
            acc = acc * j % mod
    if t % 2:
        acc = -acc
    return PadicNumber(acc, p, N)


def gamma_p_int(t: int, p: int, N: int) -> PadicNumber:
    """Morita gamma at a nonnegative integer: (-1)^t prod_{0<j<t, p∤j} j."""
    assert t >= 0
    if t > 10**7:
        raise PrecisionExhaustedError(f"integer gamma argument {t} too large")
    return _gamma_product(t, p, N)


def gamma_p_frac(m: int, p: int, N: int, stream: DworkStream | None = None) -> PadicNumber:
    """Gamma_p(m/(p-1)) for 0 <= m <= p-1, through the Dwork series."""
    assert 0 <= m <= p - 1
    if m == 0:
        return PadicNumber(1, p, N)
    if stream is None:
        stream = get_stream(p, N + 2)
    if stream.precision < N + (1 if m == p - 1 else 0):
        raise PrecisionExhaustedError("stream precision too low for requested digits")
    if m < p - 1:
        t_end = stream.series_start_for(m, N)
        total = sum(stream.z((p - 1) * t + m) for t in range(t_end))
        return PadicNumber(-(p - 1) * total, p, stream.precision).truncate(N)
    # m = p-1: p * Gamma_p(1) = (p-1) * sum_{t>=0} z_{(p-1)(t+1)}
    t_end = stream.series_start_for(p - 1, N + 1)
    total = sum(stream.z((p - 1) * (t + 1)) for t in range(t_end))
    val = PadicNumber((p - 1) * total, p, min(stream.precision, N + 1))
    return val.divide_exact_p_power(1)


def gamma_p_vector(v, p: int, N: int, stream: DworkStream | None = None) -> PadicNumber:
    """prod_i Gamma_p(v_i) for v_i in [0,1] with denominators dividing p-1."""
    out = PadicNumber(1, p, N)
    for x in v:
        x = Fraction(x)
        m = x * (p - 1)
        if m.denominator != 1:
            raise DenominatorMismatchError(f"(p-1)*{x} is not an integer at p={p}")
        if not 0 <= m <= p - 1:
            raise DenominatorMismatchError(f"coordinate {x} outside [0,1]")
        out = out * gamma_p_frac(int(m), p, N, stream)
    return out


from functools import lru_cache


@lru_cache(maxsize=4096)
def gamma_p_rational(x: Fraction, p: int, N: int, budget: int = 300_000_000) -> PadicNumber:
    """Gamma_p at any p-adic integer given as a fraction, by Morita continuity:
    Gamma_p(x) = Gamma_p(t) mod p^N for integer t = x mod p^N.  Costs O(p^N);
    reserved for the diagnostic regime where denominators do not divide p-1."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DenominatorMismatchError(f"{x} is not a p-adic integer at p={p}")
    mod = p**N
    if mod > budget:
        raise PrecisionExhaustedError(f"continuity gamma needs {mod} operations > budget {budget}")
    t = x.numerator * pow(x.denominator, -1, mod) % mod
    return _gamma_product(t, p, N)
