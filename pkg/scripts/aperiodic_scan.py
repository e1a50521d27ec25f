"""Aperiodic peak scaling of QPP-interleaved ZC sequences over N = 2^n."""
import argparse
import time
from dataclasses import dataclass

from zcperm.correlation import aperiodic_scan
from zcperm.experiments import write_atomic


@dataclass
class ScanConfig:
    n_min: int = 4
    n_max: int = 12
    a2: int = 2
    a1: int = 1
    u: int = 1
    out: str | None = None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=ScanConfig.n_min)
    ap.add_argument("--n-max", type=int, default=ScanConfig.n_max)
    ap.add_argument("--a2", type=int, default=ScanConfig.a2)
    ap.add_argument("--a1", type=int, default=ScanConfig.a1)
    ap.add_argument("--u", type=int, default=ScanConfig.u)
    ap.add_argument("--out")
    cfg = ScanConfig(**vars(ap.parse_args()))
    t0 = time.perf_counter()
    rep = aperiodic_scan(cfg.n_min, cfg.n_max, cfg.a2, cfg.a1, cfg.u)
    print(f"{'N':>6} {'max|ap|':>12} {'/N^0.75':>9} {'/sqrt N':>9}")
    for row in rep.rows:
        print(f"{row.N:>6} {row.max_abs:>12.4f} {row.max_abs / row.N ** 0.75:>9.4f} "
              f"{row.max_abs / row.N ** 0.5:>9.4f}")
    print(f"fitted slope {rep.slope:.4f}; max ratio to N^0.75 {rep.max_ratio:.4f} "
          f"({time.perf_counter() - t0:.1f}s)")
    if cfg.out:
        write_atomic(cfg.out, rep.to_json())


if __name__ == "__main__":
    main()
