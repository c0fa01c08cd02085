"""Cluster counts of {(3/2)^n} as the horizon doubles.

    python scripts/vijayaraghavan_counts.py --N 500 --doublings 4
"""

import argparse
from dataclasses import dataclass
from fractions import Fraction

from powfrac import IntPolynomial, classify
from powfrac.analyze import cluster_limit_points
from powfrac.orbit import OrbitConfig, iterate


@dataclass
class Config:
    poly: str = "2z-3"
    N: int = 500
    doublings: int = 4
    epsilon: Fraction = Fraction(1, 100)


def run(cfg: Config):
    a = classify(IntPolynomial.parse(cfg.poly))
    top = cfg.N << cfg.doublings
    samples = iterate(1, a, OrbitConfig(top))
    rows = []
    for k in range(cfg.doublings + 1):
        N = cfg.N << k
        rep = cluster_limit_points([s for s in samples if s.n <= N], cfg.epsilon)
        rows.append((N, rep.count, rep.separated))
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--poly", default=Config.poly)
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--doublings", type=int, default=Config.doublings)
    ap.add_argument("--epsilon", type=Fraction, default=Config.epsilon)
    cfg = Config(**vars(ap.parse_args()))
    print("N,clusters,separated")
    for N, count, sep in run(cfg):
        print(f"{N},{count},{str(sep).lower()}")
