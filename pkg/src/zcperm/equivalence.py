"""Equivalence of exponent sequences under the five CAZAC-preserving operations.

Every composition of rotation, translation, decimation, linear frequency
modulation and conjugation has the normal form

    e1(k) = s * e2((a k + d) mod N) + 2 v k + r   (mod 2N)

so deciding equivalence is a search over (a, d, s) with v and r read off
from the residual at k = 0 and k = 1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .permpoly import (
    PolyModN,
    family_xp_ax_b,
    is_pp,
    qpp_family,
    to_permutation,
)
from .zc import ExponentSeq, interleave, interleave_inverse, zc_exponents

# cap on a*d*k cells materialized per batch in the witness search
_BATCH_CELLS = 1 << 21


def units(N: int) -> list[int]:
    """Residues coprime to N in increasing order (``[0]`` for N = 1)."""
    return [a for a in range(N) if math.gcd(a, N) == 1]


@dataclass(frozen=True)
class EquivOp:
    kind: str
    param: int = 0

    KINDS = ("rotation", "translation", "decimation", "lfm", "conjugation")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown operation {self.kind!r}")

    @classmethod
    def rotation(cls, r: int) -> EquivOp:
        return cls("rotation", r)

    @classmethod
    def translation(cls, d: int) -> EquivOp:
        return cls("translation", d)

    @classmethod
    def decimation(cls, a: int) -> EquivOp:
        return cls("decimation", a)

    @classmethod
    def lfm(cls, v: int) -> EquivOp:
        return cls("lfm", v)

    @classmethod
    def conjugation(cls) -> EquivOp:
        return cls("conjugation", 0)


def apply_op(seq: ExponentSeq, op: EquivOp) -> ExponentSeq:
    n, m = seq.n, seq.modulus
    e = seq.as_array()
    k = np.arange(n)
    if op.kind == "rotation":
        out = e + op.param
    elif op.kind == "translation":
        out = e[(k + op.param) % n]
    elif op.kind == "decimation":
        if math.gcd(op.param, n) != 1:
            raise ValueError(f"decimation factor {op.param} is not coprime to N={n}")
        out = e[(op.param * k) % n]
    elif op.kind == "lfm":
        out = e + 2 * op.param * k
    else:
        out = -e
    return ExponentSeq(n, tuple((out % m).tolist()))


@dataclass(frozen=True)
class EquivWitness:
    """Parameters with ``e1(k) = s e2(a k + d) + 2 v k + r (mod 2N)``."""

    a: int
    d: int
    v: int
    s: int
    r: int

    def apply(self, seq: ExponentSeq) -> ExponentSeq:
        n, m = seq.n, seq.modulus
        k = np.arange(n)
        e = seq.as_array()
        out = self.s * e[(self.a * k + self.d) % n] + 2 * self.v * k + self.r
        return ExponentSeq(n, tuple((out % m).tolist()))

    def check(self, s1: ExponentSeq, s2: ExponentSeq) -> bool:
        return self.apply(s2).exps == s1.exps

    def to_dict(self) -> dict:
        return {"a": self.a, "d": self.d, "v": self.v, "s": self.s, "r": self.r}


class PreparedSeq:
    """Decimated and translated copies of a sequence, grouped in batches of a.

    ``batches`` holds (a_values, table) with table[i, d, k] = e((a_i k + d) mod N).
    """

    def __init__(self, seq: ExponentSeq):
        self.seq = seq
        n = seq.n
        self.units = units(n)
        e = seq.as_array()
        k = np.arange(n)
        per = max(1, _BATCH_CELLS // max(n * n, 1))
        self.batches = []
        for start in range(0, len(self.units), per):
            a = np.array(self.units[start:start + per], dtype=np.int64)
            idx = (a[:, None, None] * k[None, None, :] + k[None, :, None]) % n
            self.batches.append((a, e[idx]))


def _search(e1: np.ndarray, prepared: PreparedSeq, m: int) -> EquivWitness | None:
    n = len(e1)
    k = np.arange(n)
    for a_vals, table in prepared.batches:
        found = {}
        for s in (1, -1):
            rho = (e1[None, None, :] - s * table) % m
            r = rho[:, :, 0]
            c = (rho[:, :, 1] - r) % m if n > 1 else np.zeros_like(r)
            # odd c admits no v since lfm only adds even multiples of k
            pred = (r[:, :, None] + c[:, :, None] * k[None, None, :]) % m
            ok = (c % 2 == 0) & np.all(rho == pred, axis=2)
            found[s] = (ok, r, c)
        hits = np.argwhere(found[1][0] | found[-1][0])
        if len(hits):
            i, d = hits[0]
            s = 1 if found[1][0][i, d] else -1
            _, r, c = found[s]
            return EquivWitness(int(a_vals[i]), int(d), int(c[i, d]) // 2, s, int(r[i, d]))
    return None


def are_equivalent(s1: ExponentSeq, s2: ExponentSeq | PreparedSeq) -> EquivWitness | None:
    """First witness in (a ascending, d ascending, s = +1 first) order, or None."""
    prepared = s2 if isinstance(s2, PreparedSeq) else PreparedSeq(s2)
    if s1.n != prepared.seq.n:
        raise ValueError(f"length mismatch: {s1.n} vs {prepared.seq.n}")
    return _search(s1.as_array(), prepared, s1.modulus)


def find_shift_rotation(s1: ExponentSeq, s2: ExponentSeq) -> tuple[int, int] | None:
    """(d, r) with ``e1(k) = e2(k + d) + r``, i.e. translation and rotation only."""
    if s1.n != s2.n:
        raise ValueError("length mismatch")
    n, m = s1.n, s1.modulus
    e1, e2 = s1.as_array(), s2.as_array()
    k = np.arange(n)
    shifted = e2[(k[None, :] + k[:, None]) % n]
    rho = (e1[None, :] - shifted) % m
    ok = np.all(rho == rho[:, :1], axis=1)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    d = int(hits[0])
    return d, int(rho[d, 0])


def l_normalize(rows: np.ndarray, m: int) -> np.ndarray:
    """Quotient by rotation and lfm: y(0) = 0, y(1) in {0, 1}."""
    rows = np.atleast_2d(rows)
    n = rows.shape[1]
    k = np.arange(n)
    y = (rows - rows[:, :1]) % m
    if n > 1:
        c = y[:, 1]
        y = (y - (c - c % 2)[:, None] * k[None, :]) % m
    return y


def _lexmin_normalized(rows: np.ndarray, m: int) -> np.ndarray:
    """``min(l_normalize(rows))`` computed one column at a time on surviving rows."""
    n = rows.shape[1]
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    base = rows[:, 0]
    c = (rows[:, 1] - base) % m
    step = c - c % 2
    out = np.empty(n, dtype=np.int64)
    out[0] = 0
    for j in range(1, n):
        col = (rows[:, j] - base - j * step) % m
        lo = col.min()
        out[j] = lo
        keep = col == lo
        if not keep.all():
            rows, base, step = rows[keep], base[keep], step[keep]
    return out


def canonical_form(seq: ExponentSeq | PreparedSeq) -> tuple[int, ...]:
    """Lexicographically least normalized image over all (a, d, s).

    Two sequences are equivalent exactly when their canonical forms agree.
    This route never consults :func:`are_equivalent`.
    """
    prepared = seq if isinstance(seq, PreparedSeq) else PreparedSeq(seq)
    m = prepared.seq.modulus
    n = prepared.seq.n
    best = None
    for _, table in prepared.batches:
        flat = table.reshape(-1, n)
        for s in (1, -1):
            cand = tuple(int(x) for x in _lexmin_normalized((s * flat) % m, m))
            if best is None or cand < best:
                best = cand
    return best


@dataclass(frozen=True)
class LabeledSeq:
    label: str
    seq: ExponentSeq


def parse_mode(mode: str) -> tuple[str, int | None, int | None]:
    """``exhaustive`` or ``sampled:K:SEED``."""
    if mode == "exhaustive":
        return ("exhaustive", None, None)
    parts = mode.split(":")
    if len(parts) == 3 and parts[0] == "sampled":
        try:
            return ("sampled", int(parts[1]), int(parts[2]))
        except ValueError:
            pass
    raise ValueError(f"unsupported mode {mode!r}; use 'exhaustive' or 'sampled:K:SEED'")


def sample_indices(total: int, count: int, seed: int) -> list[int]:
    if count >= total:
        return list(range(total))
    rng = np.random.default_rng(seed)
    return sorted(int(i) for i in rng.choice(total, size=count, replace=False))


def equivalent_to_family(seq: ExponentSeq, family: Sequence[ExponentSeq], mode: str = "exhaustive"):
    """First family member equivalent to ``seq`` as (index, witness), or None."""
    kind, count, seed = parse_mode(mode)
    idx = list(range(len(family))) if kind == "exhaustive" else sample_indices(len(family), count, seed)
    for i in idx:
        w = are_equivalent(family[i], seq)
        if w is not None:
            return i, w
    return None


# generator specs -------------------------------------------------------

MAX_PP_GRID = 1 << 24


def _roots(N: int, half: bool) -> list[int]:
    us = units(N)
    if half:
        us = [u for u in us if 2 * u < N] or us[:1]
    return us


def _pp_label(u: int, poly: PolyModN, direction: str) -> str:
    return f"u={u};pi={poly.format()};{direction}"


def _interleaved(N, us, polys, directions):
    out = []
    for u in us:
        base = zc_exponents(N, u)
        for poly in polys:
            perm = to_permutation(poly)
            if "direct" in directions:
                out.append(LabeledSeq(_pp_label(u, poly, "direct"), interleave(base, perm)))
            if "inverse" in directions:
                out.append(LabeledSeq(_pp_label(u, poly, "inverse"), interleave_inverse(base, perm)))
    return out


def _pp_degree(N: int, degree: int, us: list[int]) -> list[LabeledSeq]:
    """All degree-``degree`` PPs with zero constant, one sequence per distinct result per root.

    Each distinct sequence keeps the lexicographically least (a_deg, ..., a_1).
    """
    if N ** degree > MAX_PP_GRID:
        raise ValueError(f"ppdeg grid N^{degree} = {N ** degree} is too large")
    perms = []
    for top in itertools.product(range(1, N), *([range(N)] * (degree - 1))):
        # top = (a_deg, ..., a_1) enumerated lexicographically
        poly = PolyModN(N, (0,) + tuple(reversed(top)))
        if is_pp(poly):
            perms.append((poly, to_permutation(poly)))
    out = []
    for u in us:
        base = zc_exponents(N, u)
        seen = set()
        for poly, perm in perms:
            s = interleave(base, perm)
            if s.exps in seen:
                continue
            seen.add(s.exps)
            out.append(LabeledSeq(_pp_label(u, poly, "direct"), s))
    return out


def resolve_spec(spec: str, N: int) -> list[LabeledSeq]:
    """Expand a generator spec into labeled sequences.

    Specs: ``zc``, ``qpp`` (direct and inverse), ``qpp-direct``, ``qpp-inverse``,
    ``xp:P``, ``xp-inverse:P``, ``xp-both:P``, ``ppdeg:M``, ``empty``.
    A ``/half`` suffix restricts roots to u < N/2.
    """
    body, _, suffix = spec.partition("/")
    if suffix not in ("", "half"):
        raise ValueError(f"unsupported spec suffix {suffix!r}")
    us = _roots(N, suffix == "half")
    name, _, arg = body.partition(":")
    if name == "empty":
        return []
    if name == "zc":
        return [LabeledSeq(f"u={u};zc", zc_exponents(N, u)) for u in us]
    if name in ("qpp", "qpp-direct", "qpp-inverse"):
        dirs = {"qpp": ("direct", "inverse"), "qpp-direct": ("direct",), "qpp-inverse": ("inverse",)}[name]
        return _interleaved(N, us, qpp_family(N), dirs)
    if name in ("xp", "xp-inverse", "xp-both"):
        if not arg:
            raise ValueError(f"spec {spec!r} needs a prime, e.g. xp:3")
        dirs = {"xp": ("direct",), "xp-inverse": ("inverse",), "xp-both": ("direct", "inverse")}[name]
        return _interleaved(N, us, family_xp_ax_b(N, int(arg)), dirs)
    if name == "ppdeg":
        if not arg:
            raise ValueError("ppdeg needs a degree, e.g. ppdeg:4")
        return _pp_degree(N, int(arg), us)
    raise ValueError(f"unsupported generator spec {spec!r}")


@dataclass
class CensusReport:
    n: int
    candidates: str
    references: str
    mode: str
    seed: int | None
    total: int
    duplicates: int
    reference_count: int
    references_used: int
    inequivalent_count: int
    witnesses: list

    @property
    def proportion(self) -> Fraction | None:
        if self.total == 0:
            return None
        return Fraction(self.inequivalent_count, self.total)

    def to_dict(self) -> dict:
        prop = self.proportion
        return {
            "schema": 1,
            "n": self.n,
            "candidates": self.candidates,
            "references": self.references,
            "mode": self.mode,
            "seed": self.seed,
            "total": self.total,
            "duplicates": self.duplicates,
            "reference_count": self.reference_count,
            "references_used": self.references_used,
            "inequivalent_count": self.inequivalent_count,
            "proportion": None if prop is None else f"{prop.numerator}/{prop.denominator}",
            "witnesses": self.witnesses,
        }


def census(N: int, candidates: str, references: str, mode: str = "exhaustive") -> CensusReport:
    """Count candidates inequivalent to every (used) reference sequence.

    Classification compares canonical forms; each equivalence found that way
    is confirmed by an explicit witness from the pairwise search.
    """
    kind, count, seed = parse_mode(mode)
    cands = resolve_spec(candidates, N)
    refs = resolve_spec(references, N)
    used = list(range(len(refs))) if kind == "exhaustive" else sample_indices(len(refs), count, seed)

    distinct = {c.seq.exps for c in cands}
    duplicates = len(cands) - len(distinct)

    ref_index = {}
    for i in used:
        ref_index.setdefault(canonical_form(refs[i].seq), i)

    witnesses = []
    inequivalent = 0
    canon_cache = {}
    for c in cands:
        if c.seq.exps not in canon_cache:
            canon_cache[c.seq.exps] = canonical_form(c.seq)
        hit = ref_index.get(canon_cache[c.seq.exps])
        if hit is None:
            inequivalent += 1
            continue
        w = are_equivalent(c.seq, refs[hit].seq)
        if w is None:
            raise AssertionError(f"canonical forms agree but no witness for {c.label} vs {refs[hit].label}")
        witnesses.append({"candidate": c.label, "reference": refs[hit].label, "witness": w.to_dict()})
    return CensusReport(N, candidates, references, mode, seed, len(cands), duplicates,
                        len(refs), len(used), inequivalent, witnesses)
