"""Exact integer and modular arithmetic.

Factorization, binomial coefficients mod p, integer polynomials and
cyclotomic polynomials used for exact vanishing-sum tests.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy

MAX_FACTOR_INPUT = 2 ** 40


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition ``n = prod q_i ** n_i`` with increasing primes."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for q, e in self.factors:
            if q <= last or e < 1 or not is_prime(q):
                raise ValueError(f"invalid factor ({q}, {e}) in factorization of {self.n}")
            last = q
            prod *= q ** e
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(q ** e for q, e in self.factors)

    def exponent_of(self, q: int) -> int:
        for prime, e in self.factors:
            if prime == q:
                return e
        return 0


def is_prime(n: int) -> bool:
    return bool(sympy.isprime(n))


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n > MAX_FACTOR_INPUT:
        raise ValueError(f"n={n} exceeds the supported range 2**40")
    fac = sympy.factorint(n)
    return Factorization(n, tuple(sorted((int(q), int(e)) for q, e in fac.items())))


def binomial_mod(m: int, k: int, p: int) -> int:
    """C(m, k) mod p by Lucas's theorem (product over base-p digits)."""
    if m < 0 or k < 0:
        raise ValueError("m and k must be non-negative")
    if k > m:
        raise ValueError(f"k={k} exceeds m={m}")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    result = 1
    while m or k:
        mi, ki = m % p, k % p
        if ki > mi:
            return 0
        result = result * math.comb(mi, ki) % p
        m //= p
        k //= p
    return result


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, ``coeffs[i]`` is the coefficient of ``x**i``.

    Trailing zeros are trimmed; the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> IntPoly:
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: IntPoly) -> IntPoly:
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    def divmod_monic(self, divisor: IntPoly) -> tuple[IntPoly, IntPoly]:
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPoly(()), self
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i]
            if q:
                quot[i - dd] = q
                for j, c in enumerate(divisor.coeffs):
                    rem[i - dd + j] -= q * c
        return IntPoly(tuple(quot)), IntPoly(tuple(rem[:dd]))

    def exact_div(self, divisor: IntPoly) -> IntPoly:
        q, r = self.divmod_monic(divisor)
        if not r.is_zero():
            raise ArithmeticError("polynomial division left a nonzero remainder")
        return q

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


_cyclo_lock = threading.Lock()


@lru_cache(maxsize=None)
def _cyclotomic_cached(s: int) -> IntPoly:
    num = IntPoly.monomial(s) - IntPoly((1,))
    for d in sympy.divisors(s)[:-1]:
        num = num.exact_div(_cyclotomic_cached(int(d)))
    return num


def cyclotomic(s: int) -> IntPoly:
    """Phi_s, built by exact division of ``x**s - 1`` by Phi_d for proper divisors d."""
    if s < 1:
        raise ValueError("cyclotomic index must be >= 1")
    with _cyclo_lock:
        return _cyclotomic_cached(s)


# quotient magnitudes above this switch long division to Python ints
_INT64_SAFE = 2 ** 40


def _radical(m: int) -> int:
    r = 1
    for q in sympy.primefactors(m):
        r *= int(q)
    return r


def divisible_by_cyclotomic(counts: np.ndarray, M: int) -> np.ndarray:
    """Row-wise test ``Phi_M | sum_e counts[row, e] x**e``.

    ``counts`` has shape (rows, M). With r the radical of M and t = M / r,
    Phi_M(x) = Phi_r(x**t) and 1, x, ..., x**(t-1) are independent over the
    r-th cyclotomic field, so each residue class of exponents mod t is tested
    separately against Phi_r. Long division then runs on all classes at once.
    """
    counts = np.atleast_2d(np.asarray(counts))
    rows = counts.shape[0]
    if counts.shape[1] != M:
        raise ValueError("counts must have exactly M columns")
    r = _radical(M)
    t = M // r
    # exponent e = j + t*i  ->  block [row, j, i]
    blocks = counts.reshape(rows, r, t).transpose(0, 2, 1).reshape(rows * t, r)
    phi = np.array(cyclotomic(r).coeffs, dtype=np.int64)
    deg = len(phi) - 1
    work = blocks.astype(np.int64, copy=True)
    for i in range(r - 1, deg - 1, -1):
        q = work[:, i]
        if not q.any():
            continue
        if work.dtype != object and np.abs(q).max() > _INT64_SAFE:
            work = work.astype(object)
            phi = phi.astype(object)
            q = work[:, i]
        work[:, i - deg:i + 1] -= q[:, None] * phi[None, :]
    rem = work[:, :deg] if deg else np.zeros((rows * t, 0), dtype=np.int64)
    ok = ~np.any(rem != 0, axis=1)
    return ok.reshape(rows, t).all(axis=1)


def vanishing_sum_check(exponents, M: int) -> bool:
    """True iff ``sum zeta_M ** e`` over the multiset is exactly zero.

    An empty multiset counts as an exact zero.
    """
    if M < 1:
        raise ValueError("M must be positive")
    exps = np.asarray(list(exponents), dtype=np.int64)
    if exps.size == 0:
        return True
    if exps.min() < 0 or exps.max() >= M:
        raise ValueError(f"exponents must lie in [0, {M})")
    g = math.gcd(M, *(int(x) for x in np.unique(exps)))
    m = M // g
    counts = np.bincount(exps // g, minlength=m)
    return bool(divisible_by_cyclotomic(counts[None, :], m)[0])


def congruence_lemma_check(m: int, n: int, p: int) -> bool:
    """Check ``half[(m+n)^2p + (n%2)(m+n)^p] == half[m^2p + (n%2)m^p] (mod n)``.

    For even n and odd m each side is a half-integer, so the comparison is
    made on the half-difference, whose integrality is asserted.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    par = n % 2
    lhs = (m + n) ** (2 * p) + par * (m + n) ** p
    rhs = m ** (2 * p) + par * m ** p
    diff = lhs - rhs
    if diff % 2:
        raise ArithmeticError(f"half-difference is not an integer for (m={m}, n={n}, p={p})")
    return (diff // 2) % n == 0
