import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zcperm.correlation import cazac_verdict
from zcperm.equivalence import are_equivalent, find_shift_rotation
from zcperm.permpoly import Permutation, PolyModN, to_permutation
from zcperm.zc import (
    ComplexSeq,
    ExponentSeq,
    dft,
    interleave,
    interleave_inverse,
    render_complex,
    zc_exponents,
)


def test_zc_examples():
    assert zc_exponents(9, 1).exps == (0, 2, 6, 12, 2, 12, 6, 2, 0)
    assert zc_exponents(9, 1).half_exponents() == tuple((k * k + k) // 2 % 9 for k in range(9))
    assert zc_exponents(16, 1).exps == tuple(k * k % 32 for k in range(16))
    assert zc_exponents(4, 1, 1).exps == (0, 3, 0, 7)
    with pytest.raises(ValueError):
        zc_exponents(9, 3)


@given(st.integers(1, 60), st.integers(1, 200), st.integers(-5, 5))
def test_zc_matches_formula(N, u, l):
    if math.gcd(u, N) != 1:
        return
    seq = zc_exponents(N, u, l)
    assert all(0 <= e < 2 * N for e in seq.exps)
    for k in range(N):
        assert seq.exps[k] == u * (k * k + (N % 2) * k + 2 * l * k) % (2 * N)


def test_interleave_examples():
    n9 = interleave(zc_exponents(9, 1), to_permutation(PolyModN(9, (0, 1, 0, 1))))
    assert n9.exps == (0, 6, 2, 12, 12, 2, 6, 0, 2)
    n16 = interleave(zc_exponents(16, 1), to_permutation(PolyModN(16, (0, 1, 1, 0, 1))))
    assert n16.exps == (0, 9, 4, 9, 16, 1, 4, 17, 0, 25, 4, 25, 16, 17, 4, 1)
    base = zc_exponents(12, 5)
    assert interleave(base, Permutation.identity(12)) == ExponentSeq(12, base.exps)
    with pytest.raises(ValueError):
        interleave(base, Permutation.identity(11))


def test_interleave_inverse_examples():
    perm = to_permutation(PolyModN(27, (0, 1, 0, 1)))
    seq = interleave_inverse(zc_exponents(27, 1), perm)
    assert seq.half_exponents() == (0, 21, 1, 6, 24, 10, 21, 9, 1, 18, 3, 1, 24, 6, 10, 12,
                                     18, 1, 9, 12, 1, 15, 15, 10, 3, 0, 1)
    assert seq.exps == tuple(2 * e for e in seq.half_exponents())
    base = zc_exponents(27, 1)
    assert interleave_inverse(base, Permutation.identity(27)).exps == base.exps


@given(st.permutations(list(range(12))), st.sampled_from([1, 5, 7, 11]))
def test_interleave_roundtrip(values, u):
    perm = Permutation.from_map(values)
    s = zc_exponents(12, u)
    assert interleave_inverse(interleave(s, perm), perm).exps == s.exps


def test_json_roundtrip():
    s = zc_exponents(10, 3)
    assert ExponentSeq.from_json(s.to_json()).exps == s.exps


def test_render_complex():
    s = ExponentSeq(5, (0, 5, 1, 2, 9))
    c = render_complex(s)
    assert c.values[0] == 1
    assert abs(c.values[1] - (-1)) < 1e-15
    assert np.allclose(np.abs(c.values), 1, atol=1e-12)
    recovered = np.round(-np.angle(c.values) * 5 / np.pi).astype(int) % 10
    assert recovered.tolist() == list(s.exps)
    again = ComplexSeq.from_csv(c.to_csv())
    assert np.allclose(again.values, c.values, atol=0)


def test_dft_examples():
    ones = dft(ComplexSeq(4, np.ones(4, dtype=complex)))
    assert np.allclose(ones.values, [2, 0, 0, 0], atol=1e-12)
    delta = dft(ComplexSeq(4, np.array([1, 0, 0, 0], dtype=complex)))
    assert np.allclose(np.abs(delta.values), 0.5, atol=1e-12)
    zc9 = dft(render_complex(zc_exponents(9, 1)))
    assert np.allclose(np.abs(zc9.values), 1, atol=1e-9)


def test_dft_kernel_sign_matches_numpy():
    rng = np.random.default_rng(0)
    x = rng.normal(size=37) + 1j * rng.normal(size=37)
    ours = dft(ComplexSeq(37, x)).values
    assert np.allclose(ours, np.fft.fft(x) / np.sqrt(37), atol=1e-9)


@given(st.integers(1, 48), st.integers(0, 2 ** 32 - 1))
def test_parseval(N, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=N) + 1j * rng.normal(size=N)
    y = dft(ComplexSeq(N, x)).values
    assert abs(np.sum(np.abs(x) ** 2) - np.sum(np.abs(y) ** 2)) < 1e-9 * max(1, np.sum(np.abs(x) ** 2))


def test_l_parameter_is_rotation_and_translation():
    for N in range(1, 17):
        for u in range(1, max(N, 2)):
            if math.gcd(u, N) != 1:
                continue
            for l in (1, 2, 3):
                s1, s0 = zc_exponents(N, u, l), zc_exponents(N, u, 0)
                assert are_equivalent(s1, s0) is not None
                assert find_shift_rotation(s1, s0) is not None


def _generated_cazac(n_max=32):
    out = []
    for N in range(2, n_max + 1):
        for u in [u for u in range(1, N) if math.gcd(u, N) == 1]:
            out.append(zc_exponents(N, u))
    return out


def test_lemma7_zac_iff_bi_unimodular():
    rng = np.random.default_rng(11)
    corpus = _generated_cazac()
    for _ in range(50):
        N = int(rng.integers(2, 33))
        corpus.append(ExponentSeq(N, tuple(rng.integers(0, 2 * N, size=N).tolist())))
    for seq in corpus:
        flat = np.allclose(np.abs(dft(render_complex(seq)).values), 1, atol=1e-8)
        assert flat == cazac_verdict(seq).is_zac
