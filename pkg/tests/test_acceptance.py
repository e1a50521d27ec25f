"""Acceptance criteria 1-12, one test each; run with ``pytest tests/test_acceptance.py``."""
import itertools
import math
import random
import time

import numpy as np

from zcperm.correlation import aperiodic_scan, cazac_verdict, max_offpeak_ratio_sqrt, periodic_autocorr
from zcperm.equivalence import PreparedSeq, are_equivalent, census, resolve_spec
from zcperm.experiments import load_golden, run_experiment
from zcperm.permpoly import (
    FamilyPreconditionError,
    PolyModN,
    big_h_d_values,
    family_coefficients,
    family_xp_ax_b,
    is_bijective,
    is_pp,
    is_pp_2n,
    normalized_difference_is_pp,
    power_difference_values,
    qpp_family,
    to_permutation,
)
from zcperm.ring import factorize
from zcperm.zc import dft, interleave, render_complex, interleave_inverse, zc_exponents

XP_FAMILY_N = (9, 18, 27, 45, 63)


def units(N):
    return [u for u in range(N) if math.gcd(u, N) == 1] or [0]


def xp(N, p, a):
    coeffs = [0] * (p + 1)
    coeffs[1], coeffs[p] = a, 1
    return PolyModN(N, tuple(coeffs))


def admissible_families(N):
    """(p, [a...]) for each prime p | N whose x^p + a x family preconditions hold."""
    out = []
    for p in factorize(N).primes:
        try:
            out.append((p, family_coefficients(N, p)))
        except FamilyPreconditionError:
            pass
    return out


def sample_2n_pps(N, count, seed):
    rng = random.Random(seed)
    found = set()
    while len(found) < count:
        deg = rng.randint(1, 5)
        poly = PolyModN(N, tuple(rng.randrange(N) for _ in range(deg + 1)))
        if is_pp_2n(poly):
            found.add(poly)
    return sorted(found, key=lambda p: p.coeffs)


def both_directions(N, perm):
    for u in units(N):
        base = zc_exponents(N, u)
        yield u, "direct", interleave(base, perm)
        yield u, "inverse", interleave_inverse(base, perm)


def test_criterion_01_worked_n9(criterion):
    with criterion(1, "N=9 ZC(1) interleaved by x^3+x is the printed ZAC sequence"):
        t0 = time.perf_counter()
        seq = interleave(zc_exponents(9, 1), to_permutation(xp(9, 3, 1)))
        assert seq.half_exponents() == (0, 3, 1, 6, 6, 1, 3, 0, 1)
        assert cazac_verdict(seq).is_zac
        assert run_experiment("worked-n9").match
        assert time.perf_counter() - t0 < 1.0


def test_criterion_02_remark_n35(criterion):
    with criterion(2, "N=35 vectors e, e', h_2, shift constant and zero set"):
        t0 = time.perf_counter()
        res = run_experiment("remark2-n35")
        assert res.match, res.mismatches
        gold = load_golden("remark2-n35")["expected"]
        base = zc_exponents(35, 1)
        e = interleave(base, to_permutation(xp(35, 7, 10))).half_exponents()
        e2 = interleave(base, to_permutation(xp(35, 7, 15))).half_exponents()
        assert list(e) == gold["e"] and list(e2) == gold["e_prime"]
        h2 = gold["h2"]
        assert all((h2[(k + 10) % 35] - h2[k]) % 35 == 5 for k in range(35))
        for seq in (interleave(base, to_permutation(xp(35, 7, 10))),
                    interleave(base, to_permutation(xp(35, 7, 15)))):
            mask = cazac_verdict(seq)
            assert mask.zcz_length == 6
            zeros = set(periodic_autocorr(seq).zero_set)
            assert {d for d in range(1, 35) if d % 7} <= zeros
        assert time.perf_counter() - t0 < 1.0


def test_criterion_03_table_n16(criterion):
    with criterion(3, "N=16 table of 16 exponent rows"):
        t0 = time.perf_counter()
        res = run_experiment("table-tab3-n16")
        assert res.match, res.mismatches
        assert len(load_golden("table-tab3-n16")["expected"]["rows"]) == 16
        assert time.perf_counter() - t0 < 1.0


def test_criterion_04_census_n16(criterion):
    with criterion(4, "N=16 census: 128 generated, 0 duplicates, 64 inequivalent") as notes:
        t0 = time.perf_counter()
        rep = census(16, "ppdeg:4/half", "qpp")
        assert (rep.total, rep.duplicates, rep.inequivalent_count) == (128, 0, 64)
        assert str(rep.proportion) == "1/2"
        assert time.perf_counter() - t0 < 600
        notes.append(f"proportion {rep.proportion}")


def test_criterion_05_census_table(criterion):
    with criterion(5, "census rows N=16 (50%), N=27 (100%), N=150 sampled") as notes:
        t0 = time.perf_counter()
        r16 = census(16, "ppdeg:4/half", "qpp")
        r27 = census(27, "xp-both:3", "qpp")
        assert str(r16.proportion) == "1/2"
        assert r27.total > 0 and r27.proportion == 1
        assert time.perf_counter() - t0 < 900
        t1 = time.perf_counter()
        r150 = census(150, "xp:5", "qpp", "sampled:200:150")
        d = r150.to_dict()
        assert d["references_used"] >= 200 and d["seed"] == 150
        assert r150.witnesses == [] and r150.proportion == 1
        assert time.perf_counter() - t1 < 1800
        notes.append(f"N=150 refs={d['references_used']}/{d['reference_count']} seed=150")


def test_criterion_06_zac_families(criterion):
    with criterion(6, "x^p+ax families (N in 9,18,27,45,63) and sampled 2^n PPs are ZAC") as notes:
        failures = []
        checked = 0
        for N in XP_FAMILY_N:
            for p, coeffs in admissible_families(N):
                for a in coeffs:
                    perm = to_permutation(xp(N, p, a))
                    for u, label, seq in both_directions(N, perm):
                        checked += 1
                        v = cazac_verdict(seq)
                        if not v.is_zac:
                            failures.append((N, p, a, u, label, v.failing_shift))
        for N in (8, 16, 32):
            for poly in sample_2n_pps(N, 100, seed=N):
                for u, label, seq in both_directions(N, to_permutation(poly)):
                    checked += 1
                    if not cazac_verdict(seq).is_zac:
                        failures.append((N, poly.format(), u, label))
        notes.append(f"{checked} sequences")
        by_n = sorted({f[0] for f in failures})
        assert not failures, f"{len(failures)} non-ZAC of {checked}; N={by_n}; first {failures[0]}"


def test_criterion_07_qpp_vs_zc_n25(criterion):
    with criterion(7, "N=25 QPP interleavings (both directions) inequivalent to every ZC(25,u)") as notes:
        t0 = time.perf_counter()
        polys = qpp_family(25)
        assert sorted({p.coeff(2) for p in polys}) == [5, 10, 15, 20]
        assert all(p.coeff(1) % 5 for p in polys)
        zc_refs = [PreparedSeq(zc_exponents(25, u)) for u in units(25)]
        cands = resolve_spec("qpp", 25)
        assert len(cands) == 2 * len(polys) * len(units(25))
        hits = [c.label for c in cands if any(are_equivalent(c.seq, r) is not None for r in zc_refs)]
        assert hits == []
        assert time.perf_counter() - t0 < 300
        notes.append(f"{len(cands)} candidates x {len(zc_refs)} references")


def test_criterion_08_difference_bijectivity(criterion):
    with criterion(8, "normalized H_d and power-difference maps permute, N in 9,18,27"):
        failures = []
        for N in (9, 18, 27):
            for a in family_coefficients(N, 3):
                for d in range(1, N):
                    if not normalized_difference_is_pp(big_h_d_values(N, 3, a, d), N, d):
                        failures.append(("H", N, a, d))
            for u in units(N):
                for m in range(N):
                    for d in range(1, N):
                        if not normalized_difference_is_pp(power_difference_values(N, 3, m, u, d), N, d):
                            failures.append(("D", N, m, u, d))
        assert not failures, failures[:5]


def _grid_values(N, degree):
    xs = np.arange(N, dtype=np.int64)
    powers = np.stack([xs ** i % N for i in range(1, degree + 1)])
    coeffs = np.array(list(itertools.product(range(N), repeat=degree)), dtype=np.int64)
    return coeffs, (coeffs @ powers) % N


def test_criterion_09_lemma_vs_brute(criterion):
    with criterion(9, "lemma PP tests match brute force (Z_16, Z_32 grids; 500 random per N<=30)") as notes:
        disagreements = []
        for N in (16, 32):
            coeffs, vals = _grid_values(N, 4)
            vals.sort(axis=1)
            brute = np.all(vals == np.arange(N), axis=1)
            for row, ok in zip(coeffs.tolist(), brute.tolist()):
                if is_pp_2n(PolyModN(N, (0,) + tuple(row))) != ok:
                    disagreements.append((N, row))
        rng = random.Random(20240607)
        for N in range(2, 31):
            for _ in range(500):
                deg = rng.randint(0, 5)
                poly = PolyModN(N, tuple(rng.randrange(N) for _ in range(deg + 1)))
                if is_pp(poly) != is_bijective(poly):
                    disagreements.append(poly.format())
        notes.append(f"{16 ** 4 + 32 ** 4} grid + {29 * 500} random")
        assert not disagreements, disagreements[:5]


def test_criterion_10_aperiodic_scaling(criterion):
    with criterion(10, "2x^2+x aperiodic peak slope <= 0.85 for N=2^4..2^12") as notes:
        t0 = time.perf_counter()
        rep = aperiodic_scan(4, 12, 2, 1, 1)
        ratios = [row.max_abs / row.N ** 0.75 for row in rep.rows]
        assert rep.slope <= 0.85
        assert max(ratios) == rep.max_ratio
        assert time.perf_counter() - t0 < 600
        notes.append(f"slope {rep.slope:.4f}, max|peak|/N^0.75 <= {rep.max_ratio:.4f}")


def test_criterion_11_zc_aperiodic(criterion):
    with criterion(11, "ZC aperiodic peak / sqrt(N) < 0.55 for N in 64,256,1024") as notes:
        ratios = [max_offpeak_ratio_sqrt(zc_exponents(N, 1)) for N in (64, 256, 1024)]
        assert all(r < 0.55 for r in ratios), ratios
        notes.append("ratios " + ", ".join(f"{r:.4f}" for r in ratios))


def _generated_corpus():
    for N in range(1, 64):
        for u in units(N):
            yield zc_exponents(N, u)
    for N in (9, 18, 27, 35, 45):
        for p, coeffs in admissible_families(N):
            for a in coeffs:
                for _, _, seq in both_directions(N, to_permutation(xp(N, p, a))):
                    yield seq
    for N in (8, 16, 32):
        for poly in sample_2n_pps(N, 100, seed=N):
            for _, _, seq in both_directions(N, to_permutation(poly)):
                yield seq
    for N in (16, 25):
        for ls in resolve_spec("qpp", N):
            yield ls.seq
    for ls in resolve_spec("ppdeg:4/half", 16):
        yield ls.seq


def test_criterion_12_bi_unimodularity(criterion):
    with criterion(12, "every exactly-ZAC sequence with N<=63 has a flat DFT") as notes:
        zac = 0
        worst = 0.0
        for seq in _generated_corpus():
            if not cazac_verdict(seq).is_zac:
                continue
            zac += 1
            dev = float(np.max(np.abs(np.abs(dft(render_complex(seq)).values) - 1.0)))
            worst = max(worst, dev)
            assert dev < 1e-8, (seq.n, seq.exps, dev)
        notes.append(f"{zac} ZAC sequences, worst deviation {worst:.1e}")
