"""Periodic and aperiodic autocorrelation with exact zero verdicts.

Zero tests never look at floating-point magnitudes: the exponent
differences at shift d form a counting polynomial over Z_2N, and
theta(d) vanishes exactly when Phi_2N divides it.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .permpoly import PolyModN, to_permutation
from .ring import divisible_by_cyclotomic
from .zc import ExponentSeq, interleave, root_table, zc_exponents

NUMERIC_ZERO_TOL = 1e-6
MAX_SCAN_EXPONENT = 14


@dataclass
class CorrelationProfile:
    n: int
    periodic: np.ndarray
    aperiodic: np.ndarray | None
    exact_zero_mask: np.ndarray

    @property
    def zero_set(self) -> list[int]:
        return [int(d) for d in np.flatnonzero(self.exact_zero_mask)]

    def to_csv(self, include_exact: bool = True) -> str:
        """Rows ``d,re,im,abs,exact_zero``; aperiodic columns follow when present."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["d", "re", "im", "abs", "exact_zero"]
        if self.aperiodic is not None:
            header += ["ap_re", "ap_im", "ap_abs"]
        w.writerow(header)
        for d, v in enumerate(self.periodic):
            zero = ("true" if self.exact_zero_mask[d] else "false") if include_exact else ""
            row = [d, repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v))), zero]
            if self.aperiodic is not None:
                a = self.aperiodic[d]
                row += [repr(float(a.real)), repr(float(a.imag)), repr(float(abs(a)))]
            w.writerow(row)
        return buf.getvalue()

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "n": self.n,
            "periodic": [[float(v.real), float(v.imag)] for v in self.periodic],
            "exact_zero": [bool(z) for z in self.exact_zero_mask],
            "zero_set": self.zero_set,
        }
        if self.aperiodic is not None:
            out["aperiodic"] = [[float(v.real), float(v.imag)] for v in self.aperiodic]
        return out


@dataclass(frozen=True)
class CazacVerdict:
    is_ca: bool
    is_zac: bool
    zcz_length: int
    failing_shift: int | None

    def to_dict(self) -> dict:
        return {"is_ca": self.is_ca, "is_zac": self.is_zac,
                "zcz_length": self.zcz_length, "failing_shift": self.failing_shift}


def difference_counts(seq: ExponentSeq) -> np.ndarray:
    """counts[d, j] = #{k : e(k) - e(k+d mod N) = j mod 2N}."""
    n, m = seq.n, seq.modulus
    e = seq.as_array()
    k = np.arange(n)
    shifted = e[(k[None, :] + k[:, None]) % n]  # [d, k] -> e(k+d)
    diff = (e[None, :] - shifted) % m
    flat = diff + (np.arange(n)[:, None] * m)
    return np.bincount(flat.ravel(), minlength=n * m).reshape(n, m)


def periodic_autocorr(seq: ExponentSeq) -> CorrelationProfile:
    if seq.n == 0:
        empty = np.zeros(0)
        return CorrelationProfile(0, empty.astype(complex), None, empty.astype(bool))
    counts = difference_counts(seq)
    theta = counts @ root_table(seq.modulus)
    mask = divisible_by_cyclotomic(counts, seq.modulus)
    return CorrelationProfile(seq.n, theta, None, mask)


def aperiodic_autocorr(seq: ExponentSeq) -> np.ndarray:
    """theta~(d) = sum_{k < N-d} s(k) s*(k+d), summed per exponent class."""
    n, m = seq.n, seq.modulus
    e = seq.as_array()
    table = root_table(m)
    out = np.empty(n, dtype=complex)
    for d in range(n):
        diff = (e[: n - d] - e[d:]) % m
        out[d] = np.bincount(diff, minlength=m) @ table
    return out


def profile(seq: ExponentSeq, with_aperiodic: bool = False) -> CorrelationProfile:
    prof = periodic_autocorr(seq)
    if with_aperiodic:
        prof.aperiodic = aperiodic_autocorr(seq)
    return prof


def verdict_from_mask(mask: np.ndarray) -> CazacVerdict:
    n = len(mask)
    nonzero = [d for d in range(1, n) if not mask[d]]
    failing = nonzero[0] if nonzero else None
    zcz = (failing - 1) if failing is not None else max(n - 1, 0)
    return CazacVerdict(True, failing is None, zcz, failing)


def cazac_verdict(seq: ExponentSeq) -> CazacVerdict:
    return verdict_from_mask(periodic_autocorr(seq).exact_zero_mask)


@dataclass(frozen=True)
class ScanRow:
    n_exp: int
    N: int
    max_abs: float
    ratio_34: float
    argmax_d: int


@dataclass
class ScanReport:
    a2: int
    a1: int
    u: int
    rows: list[ScanRow] = field(default_factory=list)

    @property
    def slope(self) -> float | None:
        if len(self.rows) < 2:
            return None
        x = np.log([r.N for r in self.rows])
        y = np.log([r.max_abs for r in self.rows])
        return float(np.polyfit(x, y, 1)[0])

    @property
    def max_ratio(self) -> float | None:
        return max((r.ratio_34 for r in self.rows), default=None)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "permutation": {"a2": self.a2, "a1": self.a1},
            "u": self.u,
            "rows": [{"n": r.n_exp, "N": r.N, "max_abs": r.max_abs,
                      "ratio_to_N_3_4": r.ratio_34, "argmax_d": r.argmax_d} for r in self.rows],
            "slope": self.slope,
            "max_ratio": self.max_ratio,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def aperiodic_scan(n_min: int, n_max: int, a2: int = 2, a1: int = 1, u: int = 1) -> ScanReport:
    """Max off-peak aperiodic autocorrelation of ZC(2^n, u) o (a2 x^2 + a1 x)."""
    if a2 % 2 or a1 % 2 == 0 or u % 2 == 0:
        raise ValueError("scan requires even a2, odd a1 and odd u")
    if n_max > MAX_SCAN_EXPONENT:
        raise ValueError(f"n_max={n_max} exceeds the supported {MAX_SCAN_EXPONENT}")
    report = ScanReport(a2, a1, u)
    if n_max < n_min:
        return report
    if n_min < 2:
        raise ValueError("n_min must be >= 2")
    for n in range(n_min, n_max + 1):
        N = 2 ** n
        perm = to_permutation(PolyModN(N, (0, a1, a2)))
        seq = interleave(zc_exponents(N, u), perm)
        mags = np.abs(aperiodic_autocorr(seq)[1:])
        d = int(np.argmax(mags)) + 1
        peak = float(mags[d - 1])
        report.rows.append(ScanRow(n, N, peak, peak / N ** 0.75, d))
    return report


def max_offpeak_ratio_sqrt(seq: ExponentSeq) -> float:
    mags = np.abs(aperiodic_autocorr(seq)[1:])
    return float(mags.max() / math.sqrt(seq.n))
