"""find_K on the regression polynomials, with a sampled check of |f| >= C."""

import argparse
import time

from grassfold.fixtures import regression_polys
from grassfold.region import find_K, region_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    start = time.perf_counter()
    for k, f in enumerate(regression_polys()):
        spec = find_K(f)
        rep = region_witness(f, spec, samples=a.samples, seed=a.seed + k)
        low = str(rep.min_lower)[:10]
        flag = "ok" if not rep.violations and not rep.undecided else "VIOLATION"
        print(f"{k:2d} n={f.n} K={spec.K} C={spec.C}  min|f|>={low}  {flag}")
    print(f"{time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
