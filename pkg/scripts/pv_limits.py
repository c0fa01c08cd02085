"""Limit points of {xi alpha^n} for PV numbers and seeds with a denominator.

For each (polynomial, seed) pair prints the cluster centers and whether they
all sit in {k/L}.

    python scripts/pv_limits.py
"""

import argparse
from dataclasses import dataclass, field
from fractions import Fraction

from powfrac import IntPolynomial, classify
from powfrac.analyze import cluster_limit_points, pv_verify
from powfrac.field import FieldElement
from powfrac.orbit import OrbitConfig, iterate


@dataclass
class Config:
    N: int = 300
    epsilon: Fraction = Fraction(1, 100)
    warmup: int = 50
    cases: list = field(default_factory=lambda: [
        ("z^2-z-1", "1"), ("z^2-z-1", "(1,1)/3"), ("z^3-z-1", "1"),
        ("z^3-z-1", "(0,1)/5"), ("z^2-3z+1", "1/7"), ("z-2", "5/12"),
    ])


def main(cfg: Config) -> None:
    for poly, seed in cfg.cases:
        a = classify(IntPolynomial.parse(poly))
        xi = FieldElement.parse(a, seed)
        rep = cluster_limit_points(iterate(xi, a, OrbitConfig(cfg.N)), cfg.epsilon, cfg.warmup)
        ok = pv_verify(rep, xi.L, Fraction(1, 10**6))
        centers = ", ".join(f"{float(c):.6f}" for c in rep.centers)
        print(f"{poly:12} xi={seed:10} L={xi.L:<3} pv_verify={ok!s:5} centers: {centers}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--N", type=int, default=Config.N)
    ap.add_argument("--warmup", type=int, default=Config.warmup)
    ap.add_argument("--epsilon", type=Fraction, default=Config.epsilon)
    main(Config(**vars(ap.parse_args())))
