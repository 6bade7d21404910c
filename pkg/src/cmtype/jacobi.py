"""Independent check of Newton slopes through Jacobi sums over finite fields.

For q = p^f with q == 1 (mod m), the Frobenius eigenvalue on the eigenspace of
a character ``(b0, b1, b2, b3)`` of the Fermat surface is, up to a root of
unity, the Jacobi sum

    J(b) = sum_{1 + x + y + z = 0} chi^b1(x) chi^b2(y) chi^b3(z)

with chi the character of order m sending a fixed generator g of F_q^x to
zeta_m (Weil's computation; see Katz, "On the intersection matrix of a
hypersurface", Sect. 6).  J is computed exactly as an element of Z[zeta_m],
then mapped into the unramified extension W(F_q) by sending zeta_m to the
Teichmuller lift of g^(-(q-1)/m); with that embedding the p-adic valuation of
J equals f times the tau-average of the orbit of b.  The opposite embedding
would measure the conjugate character instead.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

import numpy as np

from .characters import FermatCharacter, enumerate_characters
from .errors import CapExceeded, IncompatibleField, PrecisionExhausted, ZeroComponent
from .residues import _check_coprime, is_prime, multiplicative_order
from .surface import orbit_table

DEFAULT_Q_CAP = 20_000


# -- finite fields --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FiniteFieldTable:
    """F_q = F_p[x]/(modulus) with x a generator of the multiplicative group.

    Elements are encoded as integers whose base-p digits are the coefficients
    of 1, x, ..., x^(f-1).  ``exp[k]`` encodes x^k and ``log`` is its inverse
    on nonzero elements (``log[0] == -1``).
    """

    p: int
    f: int
    modulus: tuple[int, ...]  # low-to-high coefficients of the monic primitive polynomial
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p ** self.f

    def digits(self, x: int) -> list[int]:
        return [(x // self.p ** i) % self.p for i in range(self.f)]

    def encode(self, digits: Sequence[int]) -> int:
        return sum((d % self.p) * self.p ** i for i, d in enumerate(digits))

    @property
    def digit_table(self) -> np.ndarray:
        q = np.arange(self.q, dtype=np.int64)
        return np.stack([(q // self.p ** i) % self.p for i in range(self.f)], axis=1)

    def minus_one(self) -> int:
        return self.encode([self.p - 1] + [0] * (self.f - 1))


def _powers_of_x(p: int, poly: tuple[int, ...], limit: int) -> list[int] | None:
    """Encoded powers x^0..x^(limit-1) mod poly, or None if x has order < limit."""
    f = len(poly) - 1
    cur = [1] + [0] * (f - 1)
    one = tuple(cur)
    out = []
    for k in range(limit):
        if k and tuple(cur) == one:
            return None
        out.append(sum(d * p ** i for i, d in enumerate(cur)))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [(c - top * poly[i]) % p for i, c in enumerate(cur)]
    return out if tuple(cur) == one else None


@lru_cache(maxsize=32)
def finite_field(p: int, f: int) -> FiniteFieldTable:
    """Build F_{p^f} from the first primitive polynomial in lexicographic order."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    q = p ** f
    for low in itertools.product(range(p), repeat=f):
        if low[0] == 0 and f > 1:
            continue
        poly = tuple(low) + (1,)
        powers = _powers_of_x(p, poly, q - 1)
        if powers is None:
            continue
        exp = np.array(powers, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        exp.setflags(write=False)
        log.setflags(write=False)
        return FiniteFieldTable(p, f, poly, exp, log)
    raise AssertionError(f"no primitive polynomial of degree {f} over F_{p}")


# -- cyclotomic integers -----------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial."""
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_div(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]  # den is monic
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "inexact division"
    return out


@dataclass(frozen=True)
class CyclotomicInteger:
    """sum c_i zeta_m^i with integer coefficients, i = 0..m-1."""

    m: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.m:
            raise ValueError("coefficient vector must have length m")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def constant(cls, m: int, c: int) -> "CyclotomicInteger":
        return cls(m, (c,) + (0,) * (m - 1))

    def reduced(self) -> tuple[int, ...]:
        """Canonical form: remainder modulo the m-th cyclotomic polynomial."""
        phi = cyclotomic_polynomial(self.m)
        d = len(phi) - 1
        r = list(self.coeffs)
        for i in range(len(r) - 1, d - 1, -1):
            c = r[i]
            if c:
                for j, a in enumerate(phi):
                    r[i - d + j] -= c * a
        return tuple(r[:d])

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclotomicInteger) and self.m == other.m and self.reduced() == other.reduced()

    def __hash__(self) -> int:
        return hash((self.m, self.reduced()))

    def __mul__(self, other: "CyclotomicInteger") -> "CyclotomicInteger":
        out = [0] * self.m
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % self.m] += a * b
        return CyclotomicInteger(self.m, tuple(out))

    def galois(self, u: int) -> "CyclotomicInteger":
        """Image under zeta -> zeta^u (u coprime to m)."""
        out = [0] * self.m
        for i, c in enumerate(self.coeffs):
            out[i * u % self.m] += c
        return CyclotomicInteger(self.m, tuple(out))

    def complex_value(self, u: int = 1) -> complex:
        z = cmath.exp(2j * cmath.pi * u / self.m)
        return sum(c * z ** i for i, c in enumerate(self.coeffs))

    def embeddings(self) -> list[complex]:
        return [self.complex_value(u) for u in range(1, self.m + 1) if gcd(u, self.m) == 1]


# -- Jacobi sums --------------------------------------------------------

def _digit_sub_table(p: int, k: int) -> np.ndarray:
    """Digit-wise a - b mod p for encoded a, b < p^k."""
    if k == 0:
        return np.zeros((1, 1), dtype=np.int64)
    codes = np.arange(p ** k, dtype=np.int64)
    digits = np.stack([(codes // p ** i) % p for i in range(k)], axis=1)
    weights = p ** np.arange(k, dtype=np.int64)
    return ((digits[:, None, :] - digits[None, :, :]) % p) @ weights


class _Subtractor:
    """Vectorised subtraction in (Z/p)^f on encoded elements, via two half-width tables."""

    def __init__(self, field_: FiniteFieldTable):
        p, f = field_.p, field_.f
        self.k = f // 2
        self.split = p ** self.k
        self.lo = _digit_sub_table(p, self.k)
        self.hi = _digit_sub_table(p, f - self.k)

    def __call__(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        s = self.split
        return self.hi[a // s, b // s] * s + self.lo[a % s, b % s]


def cyclotomic_numbers(field_: FiniteFieldTable, m: int, block: int = 256) -> np.ndarray:
    """Counts N[i, j, k] of (x, y, z) in (F_q^x)^3 with 1 + x + y + z = 0, by log classes mod m.

    One O(q^2) pass over the pairs (x, y); every Jacobi sum of exponent m is a
    linear image of this table.
    """
    q = field_.q
    logs = field_.log
    sub = _Subtractor(field_)
    counts = np.zeros((m, m * m), dtype=np.int64)
    ys = np.arange(1, q, dtype=np.int64)
    ky = (logs[ys] % m) * m
    xs = np.arange(1, q, dtype=np.int64)
    w = sub(np.full(len(xs), field_.minus_one(), dtype=np.int64), xs)  # -1 - x
    cls = logs[xs] % m
    for i in range(m):
        wi = w[cls == i]
        for start in range(0, len(wi), block):
            z = sub(wi[start:start + block, None], ys[None, :])
            ok = z != 0
            idx = (np.broadcast_to(ky, z.shape)[ok] + logs[z[ok]] % m)
            counts[i] += np.bincount(idx, minlength=m * m)
    return counts.reshape(m, m, m)


def jacobi_from_numbers(numbers: np.ndarray, c: FermatCharacter) -> CyclotomicInteger:
    m = c.m
    if any(x == 0 for x in c.b):
        raise ZeroComponent(f"{c} has a zero component")
    i, j, k = np.indices((m, m, m))
    _, b1, b2, b3 = c.b
    e = (b1 * i + b2 * j + b3 * k) % m
    # float weights are exact: every count is below q^2 < 2^53
    coeffs = np.bincount(e.ravel(), weights=numbers.ravel(), minlength=m)
    return CyclotomicInteger(m, tuple(int(round(c)) for c in coeffs))


def jacobi_eigenvalue(q: int, c: FermatCharacter, field_: FiniteFieldTable | None = None) -> CyclotomicInteger:
    m = c.m
    if (q - 1) % m:
        raise IncompatibleField(f"q={q} is not 1 mod m={m}")
    if any(x == 0 for x in c.b):
        raise ZeroComponent(f"{c} has a zero component")
    if field_ is None:
        p, f = _prime_power(q)
        field_ = finite_field(p, f)
    return jacobi_from_numbers(cyclotomic_numbers(field_, m), c)


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1:
                raise ValueError(f"q={q} is not a prime power")
            return p, f
    raise ValueError(f"q={q} is not a prime power")


# -- p-adic embedding ---------------------------------------------------

class UnramifiedRing:
    """(Z/p^N)[x]/(P(x)) for a monic P irreducible mod p: W(F_q) to precision N."""

    def __init__(self, p: int, modulus: Sequence[int], precision: int):
        self.p = p
        self.P = tuple(modulus)
        self.f = len(self.P) - 1
        self.N = precision
        self.mod = p ** precision

    def mul(self, a: list[int], b: list[int]) -> list[int]:
        f, mod = self.f, self.mod
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(len(prod) - 1, f - 1, -1):
            c = prod[i]
            if c:
                for j in range(f):
                    prod[i - f + j] -= c * self.P[j]
        return [c % mod for c in prod[:f]]

    def power(self, a: list[int], e: int) -> list[int]:
        out = [1] + [0] * (self.f - 1)
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def valuation(self, a: list[int]) -> int | None:
        """min v_p of the coordinates; None if a == 0 to this precision."""
        vals = []
        for c in a:
            c %= self.mod
            if c:
                v = 0
                while c % self.p == 0:
                    c //= self.p
                    v += 1
                vals.append(v)
        return min(vals) if vals else None


def teichmuller_root(ring: UnramifiedRing, m: int, approx: list[int]) -> list[int]:
    """Hensel-lift a root of x^m - 1 from its reduction mod p (m must be prime to p)."""
    inv_m = pow(m, -1, ring.mod)
    z = [c % ring.mod for c in approx]
    one = [1] + [0] * (ring.f - 1)
    for _ in range(ring.N.bit_length() + 2):
        zm = ring.power(z, m)
        err = [(a - b) % ring.mod for a, b in zip(zm, one)]
        if not any(err):
            break
        # Newton step z -= (z^m - 1) / (m z^(m-1)), using z^(m-1) = z^(-1) * z^m ~ z^(-1)
        corr = ring.mul(z, err)
        z = [(a - inv_m * c) % ring.mod for a, c in zip(z, corr)]
    assert not any((a - b) % ring.mod for a, b in zip(ring.power(z, m), one))
    return z


@dataclass(frozen=True)
class PadicWitness:
    f: int
    precision: int
    valuation: int | None  # None: zero to the working precision


def padic_valuation(j: CyclotomicInteger, p: int, m: int, precision: int | None = None,
                    field_: FiniteFieldTable | None = None) -> PadicWitness:
    """Valuation (v(p) = 1) of j under zeta_m -> Teichmuller lift of g^(-(q-1)/m)."""
    _check_coprime(p, m)
    f = multiplicative_order(p, m)
    field_ = field_ or finite_field(p, f)
    if field_.f != f:
        raise IncompatibleField(f"field has degree {field_.f}, expected {f}")
    start = precision or 2 * f + 4
    limit = max(8 * f, start)
    prec = start
    while True:
        w = _valuation_at(j, field_, m, prec)
        if w.valuation is not None:
            return w
        if precision is not None or prec * 2 > limit:
            raise PrecisionExhausted(f"value is 0 modulo p^{prec}")
        prec *= 2


@lru_cache(maxsize=64)
def _zeta_powers(field_: FiniteFieldTable, m: int, prec: int) -> tuple[UnramifiedRing, tuple[tuple[int, ...], ...]]:
    ring = UnramifiedRing(field_.p, field_.modulus, prec)
    q = field_.q
    zeta_bar = int(field_.exp[(-((q - 1) // m)) % (q - 1)])
    zeta = teichmuller_root(ring, m, field_.digits(zeta_bar))
    pw, out = [1] + [0] * (ring.f - 1), []
    for _ in range(m):
        out.append(tuple(pw))
        pw = ring.mul(pw, zeta)
    return ring, tuple(out)


def _valuation_at(j: CyclotomicInteger, field_: FiniteFieldTable, m: int, prec: int) -> PadicWitness:
    ring, powers = _zeta_powers(field_, m, prec)
    acc = [0] * ring.f
    for c, pw in zip(j.coeffs, powers):
        if c:
            acc = [a + c * b for a, b in zip(acc, pw)]
    return PadicWitness(field_.f, prec, ring.valuation(acc))


# -- slope check ----------------------------------------------------------

@dataclass(frozen=True)
class SlopeRow:
    orbit_base: FermatCharacter
    orbit_length: int
    expected_slope: Fraction
    measured_valuation: int
    f: int
    max_purity_error: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "orbit_base": list(self.orbit_base.b),
            "orbit_length": self.orbit_length,
            "expected_slope": str(self.expected_slope),
            "measured_valuation": self.measured_valuation,
            "f": self.f,
            "max_purity_error": self.max_purity_error,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class SlopeReport:
    m: int
    p: int
    q: int
    f: int
    rows: tuple[SlopeRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)


PURITY_TOL = 1e-6


def slope_check(m: int, p: int, q_cap: int = DEFAULT_Q_CAP) -> SlopeReport:
    """Compare the valuation of each orbit's Jacobi sum with f times its tau-average."""
    _check_coprime(p, m)
    f = multiplicative_order(p, m)
    q = p ** f
    if m == 1:
        return SlopeReport(m, p, q, f, ())
    if q > q_cap:
        raise CapExceeded(f"q = {p}^{f} = {q} exceeds the oracle cap {q_cap}")
    field_ = finite_field(p, f)
    numbers = cyclotomic_numbers(field_, m)
    table = orbit_table(enumerate_characters(m, max_m=m), p)
    rows = []
    for o in table.orbits():
        c = o.base
        if c.is_zero:
            continue
        J = jacobi_from_numbers(numbers, c)
        purity = max(abs(abs(z) - q) / q for z in J.embeddings())
        w = padic_valuation(J, p, m, field_=field_)
        expected = o.slope
        rows.append(SlopeRow(c, o.length, expected, w.valuation, f, purity,
                             w.valuation == f * expected and purity < PURITY_TOL))
    return SlopeReport(m, p, q, f, tuple(rows))
