"""Exact arithmetic substrate.

Integers are Python ints, rationals are ``fractions.Fraction`` (always
normalized, positive denominator, structural equality), prime fields are
``Mod``, and real quadratic extensions a + b*sqrt(D) are ``QuadExt`` over
either the rationals or a prime field.  On top of those live the classical
number-theoretic functions (Kronecker symbol, Bernoulli numbers, divisor
sums, Moebius) and Dirichlet convolution inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import InputError, ResourceLimitError
from . import kernel

# Sieves above this bound are refused rather than attempted.
SIEVE_LIMIT = 2_000_000_000


# ---------------------------------------------------------------------------
# primality / factorization (trial division; inputs are desk-scale)

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as a list of (prime, exponent) pairs."""
    if n < 1:
        raise InputError(f"factorize expects n >= 1, got {n}")
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        if e:
            out.append((f, e))
        f += 2 if f % 3 == 2 else 4  # 5, 7, 11, 13, ... skip multiples of 3
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n >= 1."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def moebius(n: int) -> int:
    if n < 1:
        raise InputError(f"moebius expects n >= 1, got {n}")
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def sigma(k: int, n: int) -> int:
    """Divisor power sum: sum of d**k over the divisors d of n."""
    if n < 1:
        raise InputError(f"sigma expects n >= 1, got {n}")
    total = 1
    for p, e in factorize(n):
        if k == 0:
            total *= e + 1
        else:
            total *= (p ** (k * (e + 1)) - 1) // (p**k - 1)
    return total


def sigma_prefix(k: int, n_max: int, modulus: int | None = None) -> list[int]:
    """sigma_k(n) for n = 1..n_max via a divisor sieve; index 0 unused.

    With ``modulus`` the values are reduced, keeping the sieve cheap for
    the large exponents that appear in Eisenstein series mod l.
    """
    acc = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dk = pow(d, k, modulus) if modulus else d**k
        for n in range(d, n_max + 1, d):
            acc[n] += dk
    if modulus:
        acc = [v % modulus for v in acc]
    return acc


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n.

    Conventions: (a/1) = 1, (a/-1) = sign(a) (1 for a >= 0), (a/2) = 0 for
    even a and (-1)**((a^2-1)/8) for odd a, and (a/0) = 1 iff a = +-1.
    Completely multiplicative in both arguments.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -1
    # strip factors of 2 from n
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            k = -k
    # now n odd and positive; standard Jacobi loop with reciprocity
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


@lru_cache(maxsize=None)
def _bernoulli_upto(m: int) -> tuple[Fraction, ...]:
    # B_0..B_m from sum_{j<=m} C(m+1,j) B_j = 0, B_0 = 1 (so B_1 = -1/2).
    bs: list[Fraction] = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(math.comb(n + 1, j) * bs[j] for j in range(n))
        bs.append(Fraction(-s, n + 1))
    return tuple(bs)


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m for even m >= 2 (odd m > 1 rejected)."""
    if m < 2 or m % 2 != 0:
        raise InputError(f"bernoulli is defined here for even m >= 2, got {m}")
    return _bernoulli_upto(m)[m]


def is_fundamental_discriminant(D: int) -> bool:
    """True iff D is a fundamental discriminant (of either sign); D=1 counts."""
    if D == 1:
        return True
    if D == 0 or D % 4 in (2, 3):
        return False
    if D % 4 == 1:
        return _squarefree(abs(D))
    m = D // 4
    return m % 4 in (2, 3) and _squarefree(abs(m))


def _squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


# ---------------------------------------------------------------------------
# prime field

def _check_odd_prime(ell: int) -> None:
    if ell not in _PRIME_OK:
        if ell < 3 or not is_prime(ell):
            raise InputError(f"modulus must be an odd prime, got {ell}")
        _PRIME_OK.add(ell)


_PRIME_OK: set[int] = set()


class Mod:
    """Element of F_l, canonical representative in [0, l)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        _check_odd_prime(modulus)
        self.value = value % modulus
        self.modulus = modulus

    def _lift(self, other) -> "Mod":
        if isinstance(other, Mod):
            if other.modulus != self.modulus:
                raise InputError("mixed moduli")
            return other
        if isinstance(other, int):
            return Mod(other, self.modulus)
        if isinstance(other, Fraction):
            return frac_mod(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(o.value - self.value, self.modulus)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Mod(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Mod(-self.value, self.modulus)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Mod(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> "Mod":
        if self.value == 0:
            raise ZeroDivisionError(f"0 is not invertible mod {self.modulus}")
        return Mod(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.modulus
        return (isinstance(other, Mod) and self.modulus == other.modulus
                and self.value == other.value)

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Mod({self.value}, {self.modulus})"


def frac_mod(x: Fraction | int, ell: int) -> Mod:
    """Reduce a rational with denominator coprime to l into F_l."""
    if isinstance(x, int):
        return Mod(x, ell)
    if x.denominator % ell == 0:
        raise InputError(f"denominator of {x} is divisible by {ell}")
    return Mod(x.numerator * pow(x.denominator, -1, ell), ell)


# ---------------------------------------------------------------------------
# quadratic extension a + b*sqrt(D)

class QuadExt:
    """Element a + b*sqrt(D) of Q(sqrt(D)) or F_l[sqrt(D)], D > 0 fundamental.

    The scalars a, b live in a common base ring (Fraction or Mod); sqrt(D)
    is kept symbolic even when D happens to be a square mod l, so the
    twisted pipeline is uniform.  ``reduce_to_prime_field`` substitutes a
    concrete square root when one is wanted.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D: int):
        if D <= 1 or not is_fundamental_discriminant(D):
            raise InputError(f"D must be a fundamental discriminant > 1, got {D}")
        if isinstance(a, int):
            a = Fraction(a)
        if isinstance(b, int):
            b = Fraction(b)
        self.a = a
        self.b = b
        self.D = D

    @property
    def is_rational(self) -> bool:
        return not self.b

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.D != self.D:
                raise InputError("mixed discriminants")
            return other
        if isinstance(other, (int, Fraction, Mod)):
            zero = self.a - self.a
            return QuadExt(zero + other, zero, self.D)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(o.a - self.a, o.b - self.b, self.D)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.b * o.b * self.D,
                       self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.D)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.D

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.D)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("element of norm 0 is not invertible")
        c = self.conjugate()
        return QuadExt(c.a / n, c.b / n, self.D)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self._lift(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def reduce_to_prime_field(self, sqrtD: Mod) -> Mod:
        """View a + b*sqrt(D) in F_l by substituting a concrete root of D."""
        if sqrtD * sqrtD != self.D % sqrtD.modulus:
            raise InputError(f"{sqrtD!r} is not a square root of {self.D}")
        ell = sqrtD.modulus
        a = self.a if isinstance(self.a, Mod) else frac_mod(self.a, ell)
        b = self.b if isinstance(self.b, Mod) else frac_mod(self.b, ell)
        return a + b * sqrtD

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Mod)):
            return not self.b and self.a == other
        return (isinstance(other, QuadExt) and self.D == other.D
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        if not self.is_rational and not isinstance(self.a, Fraction):
            raise InputError("no real embedding for a mod-l element")
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}; D={self.D})"


# ---------------------------------------------------------------------------
# Dirichlet convolution

def _ring_inverse(x):
    if isinstance(x, int):
        if x in (1, -1):
            return x
        raise InputError("no Dirichlet inverse: f(1) is not invertible")
    try:
        if isinstance(x, (Mod, QuadExt)):
            return x.inverse()
        return 1 / x
    except ZeroDivisionError:
        raise InputError("no Dirichlet inverse: f(1) is not invertible") from None


def dirichlet_convolve(f: Sequence, g: Sequence) -> list:
    """(f*g)(n) = sum over d|n of f(d) g(n/d); inputs are f(1..N), g(1..N)."""
    n_max = min(len(f), len(g))
    out = [None] * n_max
    for n in range(1, n_max + 1):
        acc = None
        for d in divisors(n):
            term = f[d - 1] * g[n // d - 1]
            acc = term if acc is None else acc + term
        out[n - 1] = acc
    return out


def dirichlet_inverse(f: Sequence) -> list:
    """Convolution inverse nu of f(1..N): (f*nu)(1) = 1, (f*nu)(n>1) = 0.

    Works over any ring whose elements support +, -, * and in which f(1)
    is invertible; raises InputError otherwise.
    """
    if not f:
        return []
    inv1 = _ring_inverse(f[0])
    nu = [inv1]
    for n in range(2, len(f) + 1):
        s = None
        for d in divisors(n):
            if d == n:
                continue
            term = nu[d - 1] * f[n // d - 1]
            s = term if s is None else s + term
        nu.append(-inv1 * s if s is not None else -inv1 * 0)
    return nu


# ---------------------------------------------------------------------------
# primes

@dataclass(frozen=True)
class PrimeStream:
    """All primes below a bound, ascending."""

    bound: int
    primes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)


def sieve(x: int) -> PrimeStream:
    """PrimeStream of all primes p < x."""
    if x < 2:
        return PrimeStream(x, ())
    if x > SIEVE_LIMIT:
        raise ResourceLimitError(
            f"sieve bound {x} exceeds the configured limit {SIEVE_LIMIT}")
    return PrimeStream(x, tuple(kernel.primes_below(x)))
