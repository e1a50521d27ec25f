"""Zadoff-Chu sequences in exact exponent form, interleaving and the DFT.

An exponent sequence stores residues e(k) mod 2N; entry k stands for
``exp(-pi i e(k) / N)``, i.e. a power of the primitive 2N-th root of unity.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .permpoly import Permutation


@dataclass(frozen=True)
class ExponentSeq:
    n: int
    exps: tuple[int, ...]
    root: int | None = None

    def __post_init__(self):
        m = 2 * self.n
        exps = tuple(int(e) % m for e in self.exps)
        if len(exps) != self.n:
            raise ValueError(f"expected {self.n} exponents, got {len(exps)}")
        object.__setattr__(self, "exps", exps)

    @property
    def modulus(self) -> int:
        return 2 * self.n

    def as_array(self) -> np.ndarray:
        return np.asarray(self.exps, dtype=np.int64)

    def half_exponents(self) -> tuple[int, ...]:
        """Exponents over xi_N (odd N only, where every stored value is even)."""
        if any(e % 2 for e in self.exps):
            raise ValueError("sequence has odd exponents over xi_2N; no xi_N form")
        return tuple(e // 2 for e in self.exps)

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "exps": list(self.exps)})

    @classmethod
    def from_json(cls, text: str) -> ExponentSeq:
        obj = json.loads(text)
        return cls(int(obj["n"]), tuple(obj["exps"]))


@dataclass(frozen=True)
class ComplexSeq:
    n: int
    values: np.ndarray

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im"])
        for v in self.values:
            w.writerow([repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> ComplexSeq:
        rows = list(csv.reader(io.StringIO(text)))
        if rows and rows[0] == ["re", "im"]:
            rows = rows[1:]
        vals = np.array([complex(float(r[0]), float(r[1])) for r in rows if r])
        return cls(len(vals), vals)


def zc_exponents(N: int, u: int, l: int = 0) -> ExponentSeq:
    """e(k) = u (k^2 + (N mod 2) k + 2 l k) mod 2N."""
    if N < 1:
        raise ValueError("N must be positive")
    if math.gcd(u, N) != 1:
        raise ValueError(f"root index u={u} is not coprime to N={N}")
    k = np.arange(N, dtype=np.int64)
    e = (u * ((k * k + (N % 2) * k + 2 * l * k) % (2 * N))) % (2 * N)
    return ExponentSeq(N, tuple(e.tolist()), root=u % N)


def interleave(seq: ExponentSeq, perm: Permutation) -> ExponentSeq:
    """(s o pi)(k) = s(pi(k))."""
    if seq.n != perm.modulus:
        raise ValueError(f"length {seq.n} does not match permutation modulus {perm.modulus}")
    return ExponentSeq(seq.n, tuple(seq.exps[j] for j in perm.map))


def interleave_inverse(seq: ExponentSeq, perm: Permutation) -> ExponentSeq:
    if seq.n != perm.modulus:
        raise ValueError(f"length {seq.n} does not match permutation modulus {perm.modulus}")
    return ExponentSeq(seq.n, tuple(seq.exps[j] for j in perm.inv))


def root_table(m: int) -> np.ndarray:
    """exp(-2 pi i j / m) for j in [0, m), each entry computed from its own index."""
    j = np.arange(m)
    return np.exp(-2j * np.pi * j / m)


def render_complex(seq: ExponentSeq) -> ComplexSeq:
    return ComplexSeq(seq.n, root_table(seq.modulus)[seq.as_array()])


def dft(seq: ComplexSeq, block: int = 256) -> ComplexSeq:
    """Normalized DFT ``(1/sqrt N) sum_k s(k) xi_N^{mk}``, evaluated directly.

    The kernel index ``m k mod N`` is reduced exactly before the table lookup.
    """
    n = seq.n
    if n == 0:
        return ComplexSeq(0, np.zeros(0, dtype=complex))
    table = root_table(n)
    s = np.asarray(seq.values, dtype=complex)
    k = np.arange(n, dtype=np.int64)
    out = np.empty(n, dtype=complex)
    for start in range(0, n, block):
        m = np.arange(start, min(start + block, n), dtype=np.int64)
        idx = (m[:, None] * k[None, :]) % n
        out[start:start + len(m)] = table[idx] @ s
    return ComplexSeq(n, out / math.sqrt(n))
