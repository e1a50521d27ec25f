"""Run an equivalence census and write the JSON report.

    python3 scripts/run_census.py --n 16 --candidates ppdeg:4/half --references qpp
"""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from zcperm.equivalence import census
from zcperm.experiments import write_atomic


@dataclass
class CensusConfig:
    n: int = 16
    candidates: str = "ppdeg:4/half"
    references: str = "qpp"
    mode: str = "exhaustive"
    out: str | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in asdict(CensusConfig()).items():
        ap.add_argument(f"--{name}", type=type(default) if default is not None else str, default=default)
    cfg = CensusConfig(**vars(ap.parse_args()))
    t0 = time.perf_counter()
    rep = census(cfg.n, cfg.candidates, cfg.references, cfg.mode)
    report = rep.to_dict()
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        write_atomic(cfg.out, text)
    print(f"N={cfg.n}: {report['inequivalent_count']}/{report['total']} inequivalent "
          f"(proportion {report['proportion']}, {report['duplicates']} duplicates) "
          f"in {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
