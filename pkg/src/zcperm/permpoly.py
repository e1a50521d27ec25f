"""Polynomials over Z_N viewed as functions, and permutation tests for them."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .ring import factorize, is_prime

MAX_BRUTE_FORCE_N = 2 ** 22


@dataclass(frozen=True)
class PolyModN:
    """``a_0 + a_1 x + ... + a_m x^m`` with coefficients reduced into [0, N)."""

    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        c = [int(a) % self.modulus for a in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else 0

    @classmethod
    def parse(cls, text: str) -> PolyModN:
        """Parse ``N:a0,a1,...,am``."""
        try:
            head, _, body = text.strip().partition(":")
            n = int(head)
            coeffs = tuple(int(x) for x in body.split(",")) if body.strip() else ()
        except ValueError as exc:
            raise ValueError(f"malformed polynomial {text!r}; expected 'N:a0,a1,...'") from exc
        return cls(n, coeffs)

    def format(self) -> str:
        return f"{self.modulus}:" + ",".join(str(c) for c in (self.coeffs or (0,)))

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if (c == 1 and mono) else f"{c}{mono}")
        return (" + ".join(terms) or "0") + f" (mod {self.modulus})"


@dataclass(frozen=True)
class Permutation:
    modulus: int
    map: tuple[int, ...]
    inv: tuple[int, ...]

    def __post_init__(self):
        n = self.modulus
        if len(self.map) != n or len(self.inv) != n:
            raise ValueError("permutation arrays must have length N")
        if any(self.inv[v] != k for k, v in enumerate(self.map)):
            raise ValueError("inv is not the inverse of map")

    @classmethod
    def from_map(cls, values: Sequence[int]) -> Permutation:
        values = tuple(int(v) for v in values)
        n = len(values)
        inv = [-1] * n
        for k, v in enumerate(values):
            if not 0 <= v < n or inv[v] != -1:
                raise ValueError("values do not form a bijection of {0..N-1}")
            inv[v] = k
        return cls(n, values, tuple(inv))

    @classmethod
    def identity(cls, n: int) -> Permutation:
        r = tuple(range(n))
        return cls(n, r, r)

    def to_json(self) -> str:
        return json.dumps(list(self.map))

    @classmethod
    def from_json(cls, text: str) -> Permutation:
        return cls.from_map(json.loads(text))

    def __call__(self, k: int) -> int:
        return self.map[k]


class NotBijective(Exception):
    """Raised when a polynomial collides: ``poly(x1) == poly(x2) == value``."""

    def __init__(self, poly: PolyModN, x1: int, x2: int, value: int):
        super().__init__(f"{poly} is not a permutation: f({x1}) = f({x2}) = {value}")
        self.poly = poly
        self.x1 = x1
        self.x2 = x2
        self.value = value

    @property
    def witness(self) -> tuple[int, int, int]:
        return (self.x1, self.x2, self.value)


def eval(poly: PolyModN, x: int) -> int:  # noqa: A001 - operation name
    acc = 0
    for c in reversed(poly.coeffs):
        acc = (acc * x + c) % poly.modulus
    return acc


def eval_all(poly: PolyModN) -> np.ndarray:
    """Values of ``poly`` on 0..N-1 (vectorized Horner)."""
    n = poly.modulus
    xs = np.arange(n, dtype=np.int64)
    acc = np.zeros(n, dtype=np.int64)
    # int64 is safe while N**2 < 2**63
    for c in reversed(poly.coeffs):
        acc = (acc * xs + c) % n
    return acc


def to_permutation(poly: PolyModN) -> Permutation:
    n = poly.modulus
    if n > MAX_BRUTE_FORCE_N:
        raise ValueError(f"N={n} exceeds the brute-force limit 2**22")
    vals = eval_all(poly)
    first = np.full(n, -1, dtype=np.int64)
    for x, v in enumerate(vals.tolist()):
        if first[v] != -1:
            raise NotBijective(poly, int(first[v]), x, v)
        first[v] = x
    return Permutation(n, tuple(vals.tolist()), tuple(first.tolist()))


def is_bijective(poly: PolyModN) -> bool:
    vals = eval_all(poly)
    return np.unique(vals).size == poly.modulus


def inverse_permutation(perm: Permutation) -> Permutation:
    return Permutation(perm.modulus, perm.inv, perm.map)


def compose(outer: Permutation, inner: Permutation) -> Permutation:
    """``outer(inner(k))``."""
    if outer.modulus != inner.modulus:
        raise ValueError("modulus mismatch")
    return Permutation.from_map([outer.map[v] for v in inner.map])


def _power_of_two_exponent(n: int) -> int | None:
    if n < 1 or n & (n - 1):
        return None
    return n.bit_length() - 1


def is_pp_2n(poly: PolyModN) -> bool:
    """Coefficient test for N = 2^n: a1 odd and both higher-index parity sums even."""
    e = _power_of_two_exponent(poly.modulus)
    if e is None or e < 2:
        raise ValueError(f"N={poly.modulus} is not a power of two >= 4")
    c = poly.coeffs
    a1 = poly.coeff(1)
    even_sum = sum(c[i] for i in range(2, len(c), 2))
    odd_sum = sum(c[i] for i in range(3, len(c), 2))
    return a1 % 2 == 1 and even_sum % 2 == 0 and odd_sum % 2 == 0


def _reduce(poly: PolyModN, m: int) -> PolyModN:
    return PolyModN(m, poly.coeffs)


def _derivative(poly: PolyModN) -> PolyModN:
    return PolyModN(poly.modulus, tuple(i * c for i, c in enumerate(poly.coeffs))[1:])


def is_pp_pn(poly: PolyModN, p: int, n: int) -> bool:
    """Test for N = p^n, n >= 2: PP mod p and derivative nonvanishing mod p."""
    if not is_prime(p) or n < 2 or poly.modulus != p ** n:
        raise ValueError(f"N={poly.modulus} is not {p}^{n} with p prime and n >= 2")
    low = _reduce(poly, p)
    if not is_bijective(low):
        return False
    deriv = eval_all(_reduce(_derivative(poly), p))
    return bool(np.all(deriv != 0))


def _is_pp_prime_power(poly: PolyModN, q: int, e: int) -> bool:
    local = _reduce(poly, q ** e)
    if e == 1:
        return is_bijective(local)
    if q == 2:
        return is_pp_2n(local)
    return is_pp_pn(local, q, e)


def is_pp(poly: PolyModN) -> bool:
    """Lemma-based verdict: PP over Z_N iff PP over every prime-power factor."""
    if poly.modulus == 1:
        return True
    return all(_is_pp_prime_power(poly, q, e) for q, e in factorize(poly.modulus).factors)


class FamilyPreconditionError(ValueError):
    pass


def family_xp_ax_b(N: int, p: int, include_b: bool = False) -> list[PolyModN]:
    """Admissible ``x^p + a x + b`` over Z_N with N = p^n * N1, N1 squarefree.

    When every q_i - 1 divides p - 1 the coefficient condition is exact;
    otherwise the sufficient condition N1 | a is used. Every returned
    polynomial has been checked by brute force.
    """
    if not is_prime(p):
        raise FamilyPreconditionError(f"p={p} is not prime")
    fac = factorize(N)
    n = fac.exponent_of(p)
    if n == 0:
        raise FamilyPreconditionError(f"p={p} does not divide N={N}")
    n1 = N // p ** n
    others = [(q, e) for q, e in fac.factors if q != p]
    for q, e in others:
        if e > 1:
            raise FamilyPreconditionError(f"N1={n1} is not squarefree: q={q} appears with exponent {e}")
        if math.gcd(p, q - 1) != 1:
            raise FamilyPreconditionError(f"gcd(p, q-1) != 1 for q={q} (p={p})")
    exact = all((p - 1) % (q - 1) == 0 for q, _ in others)

    def admissible(a: int) -> bool:
        if a % p == p - 1:
            return False
        if n >= 2 and a % p == 0:
            return False
        if exact:
            return all(a % q != q - 1 for q, _ in others)
        return a % n1 == 0

    out = []
    for a in range(N):
        if not admissible(a):
            continue
        for b in (range(N) if include_b else (0,)):
            coeffs = [0] * (p + 1)
            coeffs[0] = b
            coeffs[1] = (coeffs[1] + a) % N
            coeffs[p] = (coeffs[p] + 1) % N
            poly = PolyModN(N, tuple(coeffs))
            to_permutation(poly)  # raises NotBijective on a family bug
            out.append(poly)
    return out


def family_coefficients(N: int, p: int) -> list[int]:
    """The admissible a values of :func:`family_xp_ax_b` (with b = 0)."""
    return [poly.coeff(1) for poly in family_xp_ax_b(N, p)]


def qpp_family(N: int) -> list[PolyModN]:
    """All QPPs ``f2 x^2 + f1 x`` with f2 != 0, ordered by (f2, f1)."""
    if N < 2:
        raise ValueError("qpp_family needs N >= 2")
    fac = factorize(N)
    if fac.exponent_of(2) == 1:
        half = N // 2
        primes = factorize(half).primes if half > 1 else ()

        def ok(f2, f1):
            return (f2 + f1) % 2 == 1 and math.gcd(f1, half) == 1 and all(f2 % q == 0 for q in primes)
    else:
        primes = fac.primes

        def ok(f2, f1):
            return math.gcd(f1, N) == 1 and all(f2 % q == 0 for q in primes)

    out = []
    for f2 in range(1, N):
        for f1 in range(N):
            if ok(f2, f1):
                poly = PolyModN(N, (0, f1, f2))
                to_permutation(poly)
                out.append(poly)
    return out


def finite_difference(poly: PolyModN, d: int) -> PolyModN:
    """``poly(x + d) - poly(x)`` expanded coefficientwise mod N."""
    N = poly.modulus
    out = [0] * max(len(poly.coeffs), 1)
    for i, c in enumerate(poly.coeffs):
        # (x+d)^i - x^i = sum_{j<i} C(i,j) d^(i-j) x^j
        for j in range(i):
            out[j] += c * math.comb(i, j) * pow(d, i - j, N)
    return PolyModN(N, tuple(out))


def second_difference(poly: PolyModN, d1: int, d2: int) -> PolyModN:
    return finite_difference(finite_difference(poly, d1), d2)


def _h_d_doubled(N: int, p: int, a: int, d: int, k: int) -> int:
    """2 h_d(k) as an exact integer; the half is never taken modulo N."""
    bracket = (k + d) ** (2 * p) - k ** (2 * p) + (N % 2) * ((k + d) ** p - k ** p)
    return bracket + 2 * a * ((k + d) ** (p + 1) - k ** (p + 1)) + 2 * a * a * d * k


def h_d_value(N: int, p: int, a: int, d: int, k: int) -> int:
    """Phase-difference polynomial of ``x^p + a x`` interleaving at shift d, mod N.

    Raises ArithmeticError when h_d(k) is not an integer (even N with odd d).
    """
    twice = _h_d_doubled(N, p, a, d, k)
    if twice % 2:
        raise ArithmeticError(f"h_d({k}) is not an integer (N={N}, p={p}, d={d})")
    return (twice // 2) % N


def h_d_values(N: int, p: int, a: int, d: int) -> tuple[int, ...]:
    if not 1 <= d < N:
        raise ValueError(f"shift d={d} must lie in [1, {N})")
    return tuple(h_d_value(N, p, a, d, k) for k in range(N))


def big_h_d_values(N: int, p: int, a: int, d: int) -> tuple[int, ...]:
    """H_d(k) = h_d(k) - h_d(0) mod N, which is integral for every parity of N."""
    if not 1 <= d < N:
        raise ValueError(f"shift d={d} must lie in [1, {N})")
    base = _h_d_doubled(N, p, a, d, 0)
    out = []
    for k in range(N):
        diff = _h_d_doubled(N, p, a, d, k) - base
        if diff % 2:
            raise ArithmeticError(f"H_d({k}) is not an integer (N={N}, p={p}, d={d})")
        out.append((diff // 2) % N)
    return tuple(out)


def normalized_difference_is_pp(values: Sequence[int], N: int, d: int) -> bool:
    """Whether ``(v(k) - v(0)) / gcd(d, N)`` permutes Z_{N/gcd(d,N)}.

    Divisibility by gcd(d, N) is asserted, not assumed.
    """
    g = math.gcd(d, N)
    m = N // g
    base = values[0]
    reduced = []
    for k in range(m):
        diff = (values[k] - base) % N
        if diff % g:
            raise ArithmeticError(f"h(k) - h(0) not divisible by gcd(d,N)={g} at k={k}")
        reduced.append((diff // g) % m)
    return len(set(reduced)) == m


def power_difference_values(N: int, p: int, m: int, u: int, d: int) -> tuple[int, ...]:
    """``((k+d)^p - k^p - d^p) m + u d k mod N`` for k in Z_N."""
    return tuple((((k + d) ** p - k ** p - d ** p) * m + u * d * k) % N for k in range(N))


def iter_polys(N: int, degree: int, fixed_constant: int | None = 0) -> Iterator[PolyModN]:
    """Every polynomial of degree <= ``degree`` in lexicographic (a_deg..a_0) order."""
    ranges = [range(N)] * degree
    consts = range(N) if fixed_constant is None else (fixed_constant,)
    for top in itertools.product(*ranges):
        for c0 in consts:
            yield PolyModN(N, (c0,) + tuple(reversed(top)))


def search_xp_ax_b(N: int, p: int) -> list[int]:
    """Brute-force every a for which ``x^p + a x`` permutes Z_N."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    found = []
    for a in range(N):
        coeffs = [0] * (p + 1)
        coeffs[1] = a
        coeffs[p] = (coeffs[p] + 1) % N
        if is_bijective(PolyModN(N, tuple(coeffs))):
            found.append(a)
    return found
