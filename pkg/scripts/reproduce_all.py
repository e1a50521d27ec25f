"""Rerun every registered experiment against its golden file.

Exits 2 if any experiment mismatches. Long experiments need --allow-long.
"""
import argparse
import os
import sys
import time
from dataclasses import dataclass

from zcperm.experiments import experiment_registry, run_experiment, write_atomic


@dataclass
class ReproduceConfig:
    allow_long: bool = False
    out_dir: str | None = None


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--allow-long", action="store_true")
    ap.add_argument("--out-dir")
    cfg = ReproduceConfig(**vars(ap.parse_args()))
    failed = 0
    for spec in experiment_registry():
        if spec.long and not cfg.allow_long:
            print(f"skip  {spec.id} (long; pass --allow-long)")
            continue
        t0 = time.perf_counter()
        res = run_experiment(spec.id)
        status = "ok" if res.match else "FAIL"
        print(f"{status:5} {spec.id} ({time.perf_counter() - t0:.1f}s)")
        for m in res.mismatches:
            print(f"      {m}")
        failed += not res.match
        if cfg.out_dir:
            write_atomic(os.path.join(cfg.out_dir, f"{spec.id}.json"), res.to_json())
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
