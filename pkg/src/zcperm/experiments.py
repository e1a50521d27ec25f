"""Registry of reproducible experiments and their golden data."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

from .correlation import aperiodic_scan, cazac_verdict, max_offpeak_ratio_sqrt, periodic_autocorr
from .equivalence import PreparedSeq, are_equivalent, census, equivalent_to_family, resolve_spec
from .permpoly import PolyModN, family_coefficients, h_d_values, inverse_permutation, qpp_family, to_permutation
from .zc import interleave, interleave_inverse, zc_exponents

N150_SEED = 150
N150_SAMPLE = 200


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    description: str
    runner: Callable[[dict], dict]
    parameters: dict = field(default_factory=dict)
    budget_s: float = 1.0
    long: bool = False

    @property
    def golden_name(self) -> str:
        return f"{self.id}.json"


def load_golden(exp_id: str) -> dict:
    text = resources.files("zcperm").joinpath("golden", f"{exp_id}.json").read_text()
    return json.loads(text)


# runners ---------------------------------------------------------------

def _xp_poly(N: int, p: int, a: int) -> PolyModN:
    coeffs = [0] * (p + 1)
    coeffs[1] = a
    coeffs[p] = 1
    return PolyModN(N, tuple(coeffs))


def _run_worked_n9(params):
    seq = interleave(zc_exponents(9, 1), to_permutation(PolyModN(9, (0, 1, 0, 1))))
    return {"xi_n_exponents": list(seq.half_exponents()), "is_zac": cazac_verdict(seq).is_zac}


def _run_worked_n16(params):
    seq = interleave(zc_exponents(16, 1), to_permutation(PolyModN(16, (0, 1, 1, 0, 1))))
    return {"exps": list(seq.exps), "is_zac": cazac_verdict(seq).is_zac}


def _run_inverse_n27(params):
    perm = to_permutation(PolyModN(27, (0, 1, 0, 1)))
    seq = interleave_inverse(zc_exponents(27, 1), perm)
    return {
        "perm_prefix": list(perm.map[:10]),
        "inverse": list(inverse_permutation(perm).map),
        "xi_n_exponents": list(seq.half_exponents()),
        "is_zac": cazac_verdict(seq).is_zac,
    }


def _zero_off_multiples(seq, q: int) -> bool:
    mask = periodic_autocorr(seq).exact_zero_mask
    return all(bool(mask[d]) for d in range(1, seq.n) if d % q)


def _run_n35_vectors(params):
    base = zc_exponents(35, 1)
    s1 = interleave(base, to_permutation(_xp_poly(35, 7, 10)))
    s2 = interleave(base, to_permutation(_xp_poly(35, 7, 15)))
    h = h_d_values(35, 7, 10, 2)
    shifts = {(h[(k + 10) % 35] - h[k]) % 35 for k in range(35)}
    return {
        "family_a": family_coefficients(35, 7),
        "e": list(s1.half_exponents()),
        "e_prime": list(s2.half_exponents()),
        "h2": list(h),
        "h2_shift10_constant": shifts.pop() if len(shifts) == 1 else sorted(shifts),
        "zero_at_every_d_not_divisible_by_7": _zero_off_multiples(s1, 7),
        "is_zac": cazac_verdict(s1).is_zac,
    }


N16_INEQUIVALENT_ROWS = [(1, 1), (1, 3), (1, 5), (1, 7), (1, 9), (1, 11), (1, 13), (1, 15),
             (3, 1), (3, 3), (3, 9), (3, 11), (7, 1), (7, 3), (7, 5), (7, 7)]


def _run_n16_rows(params):
    base = zc_exponents(16, 1)
    rows = []
    for a2, a1 in N16_INEQUIVALENT_ROWS:
        seq = interleave(base, to_permutation(PolyModN(16, (0, a1, a2, 0, 1))))
        rows.append({"a2": a2, "a1": a1, "exps": list(seq.exps)})
    return {"rows": rows}


def _run_inequivalent_n18(params):
    refs = [ls.seq for ls in resolve_spec("qpp", 18)]
    base = zc_exponents(18, 1)
    fam = family_coefficients(18, 3)
    exps, flags = [], []
    for a in fam:
        seq = interleave(base, to_permutation(_xp_poly(18, 3, a)))
        exps.append(list(seq.exps))
        flags.append(equivalent_to_family(seq, refs) is None)
    return {"family_a": fam, "exps": exps, "qpp_count": len(qpp_family(18)),
            "inequivalent_to_qpp_family": flags}


def _census_summary(rep) -> dict:
    d = rep.to_dict()
    return {k: d[k] for k in ("total", "duplicates", "inequivalent_count", "proportion",
                              "reference_count", "references_used", "mode", "seed")}


def _run_census_n16(params):
    return _census_summary(census(16, "ppdeg:4/half", "qpp"))


def _run_census_n27(params):
    out = _census_summary(census(27, "xp-both:3", "qpp"))
    out["family_a"] = family_coefficients(27, 3)
    return out


def _run_census_n150(params):
    mode = f"sampled:{params['sample']}:{params['seed']}"
    return _census_summary(census(150, "xp:5", "qpp", mode))


def _run_family_n150(params):
    return {"family_a": family_coefficients(150, 5)}


def _run_zcz(N, p, q):
    def run(params):
        fam = family_coefficients(N, p)
        base = zc_exponents(N, 1)
        zeros, zcz = [], []
        for a in fam:
            seq = interleave(base, to_permutation(_xp_poly(N, p, a)))
            zeros.append(_zero_off_multiples(seq, q))
            zcz.append(cazac_verdict(seq).zcz_length)
        return {"family_a": fam, "zero_off_multiples": zeros, "zcz_length": zcz}
    return run


def _run_qpp_vs_zc_n25(params):
    N = 25
    zc_refs = [PreparedSeq(ls.seq) for ls in resolve_spec("zc", N)]
    cands = resolve_spec("qpp", N)
    hits = 0
    for c in cands:
        if any(are_equivalent(c.seq, ref) is not None for ref in zc_refs):
            hits += 1
    return {"total": len(cands), "equivalent_to_zc": hits}


def _run_scan(params):
    rep = aperiodic_scan(params["n_min"], params["n_max"], params["a2"], params["a1"], params["u"])
    return {"max_abs": [r.max_abs for r in rep.rows], "slope": rep.slope,
            "ratio_to_N_3_4": [r.ratio_34 for r in rep.rows], "max_ratio": rep.max_ratio}


def _run_zc_sanity(params):
    ns = params["N"]
    ratios = [max_offpeak_ratio_sqrt(zc_exponents(n, 1)) for n in ns]
    return {"N": ns, "ratio_sqrt": ratios, "ratio": ratios}


REGISTRY: dict[str, ExperimentSpec] = {
    spec.id: spec
    for spec in [
        ExperimentSpec("worked-n9", "ZC(9) interleaved by x^3+x", _run_worked_n9),
        ExperimentSpec("worked-n16", "ZC(16) interleaved by x^4+x^2+x", _run_worked_n16),
        ExperimentSpec("inverse-n27", "x^3+x over Z_27 and the inverse interleaving", _run_inverse_n27),
        ExperimentSpec("remark2-n35", "N=35: e, e', h_2 and its shift constant", _run_n35_vectors),
        ExperimentSpec("table-tab3-n16", "16 inequivalent N=16 exponent rows", _run_n16_rows),
        ExperimentSpec("inequivalent-n18", "N=18 x^3+ax sequences vs the QPP family",
                       _run_inequivalent_n18, budget_s=5),
        ExperimentSpec("census-n16-proportion", "N=16 census, expected 64/128",
                       _run_census_n16, budget_s=30),
        ExperimentSpec("census-n27", "N=27 census, expected 100%", _run_census_n27, budget_s=60),
        ExperimentSpec("census-n150-sampled", "N=150 census against sampled references",
                       _run_census_n150, {"sample": N150_SAMPLE, "seed": N150_SEED},
                       budget_s=600, long=True),
        ExperimentSpec("family-n150", "admissible a for x^5+ax over Z_150", _run_family_n150),
        ExperimentSpec("prop1-n35-zcz", "N=35 zeros at every d with 7 not dividing d",
                       _run_zcz(35, 7, 7)),
        ExperimentSpec("zcz-n18", "N=18 zeros at every d with 9 not dividing d", _run_zcz(18, 3, 9)),
        ExperimentSpec("qpp-vs-zc-n25", "N=25 QPP interleavings vs every ZC(25, u)",
                       _run_qpp_vs_zc_n25, budget_s=300),
        ExperimentSpec("aperiodic-scan-n4-12", "aperiodic scaling of 2x^2+x interleavings, n=4..12",
                       _run_scan, {"n_min": 4, "n_max": 12, "a2": 2, "a1": 1, "u": 1}, budget_s=60),
        ExperimentSpec("zc-aperiodic-sanity", "ZC aperiodic peak over sqrt(N)",
                       _run_zc_sanity, {"N": [64, 256, 1024]}, budget_s=30),
    ]
}


def experiment_registry() -> list[ExperimentSpec]:
    return list(REGISTRY.values())


# comparison ------------------------------------------------------------

def _close(a, b, rel: float | None) -> bool:
    if isinstance(a, bool) or isinstance(b, bool) or rel is None:
        return a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if isinstance(a, int) and isinstance(b, int):
            return a == b
        return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)
    return a == b


def _compare_value(obs, exp, rel, path, out):
    if isinstance(exp, dict):
        if not isinstance(obs, dict):
            out.append(f"{path}: expected mapping")
            return
        for k, v in exp.items():
            _compare_value(obs.get(k), v, rel, f"{path}.{k}", out)
    elif isinstance(exp, list):
        if not isinstance(obs, list) or len(obs) != len(exp):
            out.append(f"{path}: length or type differs")
            return
        for i, (o, e) in enumerate(zip(obs, exp)):
            _compare_value(o, e, rel, f"{path}[{i}]", out)
    elif not _close(obs, exp, rel):
        out.append(f"{path}: observed {obs!r}, expected {exp!r}")


def compare(observed: dict, expected: dict, tolerance: dict | None = None) -> list[str]:
    """Mismatch descriptions; keys ending in ``_at_most``/``_below`` are bounds."""
    rel = (tolerance or {}).get("rel")
    out: list[str] = []
    for key, exp in expected.items():
        if key.endswith("_at_most") or key.endswith("_below"):
            base = key.rsplit("_", 2 if key.endswith("_at_most") else 1)[0]
            vals = observed.get(base)
            vals = vals if isinstance(vals, list) else [vals]
            strict = key.endswith("_below")
            for v in vals:
                if v is None or (v >= exp if strict else v > exp):
                    out.append(f"{base}: {v!r} violates bound {exp!r}")
            continue
        _compare_value(observed.get(key), exp, rel, key, out)
    return out


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    golden: dict
    observed: dict
    mismatches: list[str]

    @property
    def match(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "id": self.spec.id,
            "description": self.spec.description,
            "parameters": self.spec.parameters,
            "provenance": self.golden["provenance"],
            "source": self.golden["source"],
            "observed": self.observed,
            "expected": self.golden["expected"],
            "match": self.match,
            "mismatches": self.mismatches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def run_experiment(exp_id: str) -> ExperimentResult:
    if exp_id not in REGISTRY:
        raise KeyError(exp_id)
    spec = REGISTRY[exp_id]
    golden = load_golden(exp_id)
    observed = spec.runner(dict(spec.parameters))
    mismatches = compare(observed, golden["expected"], golden.get("tolerance"))
    return ExperimentResult(spec, golden, observed, mismatches)


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
