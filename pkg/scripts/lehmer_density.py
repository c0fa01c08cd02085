"""Histogram of {alpha^n} for Lehmer's number, plus the Kronecker witness for
all-ones targets.  Writes the histogram as CSV to stdout.

    python scripts/lehmer_density.py --N 20000 --bins 50 > hist.csv
"""

import argparse
import sys
from dataclasses import dataclass

from powfrac import IntPolynomial, classify
from powfrac.orbit import OrbitConfig, iterate
from powfrac.salem import build_context, density_scan, kronecker_search

LEHMER = "z^10+z^9-z^7-z^6-z^5-z^4-z^3+z+1"


@dataclass
class Config:
    N: int = 20000
    bins: int = 50
    tol: float = 0.15
    n_max: int = 10**6


def main(cfg: Config) -> None:
    a = classify(IntPolynomial.parse(LEHMER))
    ctx = build_context(a, 1)
    samples = iterate(1, a, OrbitConfig(cfg.N))
    for h in (cfg.N // 4, cfg.N // 2, cfg.N):
        rep = density_scan(ctx, samples, bins=cfg.bins, horizon=h)
        print(f"horizon {h}: run {rep.interval[0]}..{rep.interval[1]}, max gap {float(rep.max_gap):.3g}", file=sys.stderr)
    n = kronecker_search(ctx.phis, [1] * ctx.m, cfg.tol, cfg.n_max)
    print(f"kronecker witness (tol {cfg.tol}): {n}", file=sys.stderr)
    sys.stdout.write(density_scan(ctx, samples, bins=cfg.bins).histogram_csv())


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    for f in ("N", "bins", "n_max"):
        ap.add_argument(f"--{f.replace('_', '-')}", dest=f, type=int, default=getattr(Config, f))
    ap.add_argument("--tol", type=float, default=Config.tol)
    main(Config(**vars(ap.parse_args())))
